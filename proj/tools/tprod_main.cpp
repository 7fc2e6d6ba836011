#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tpa/errors.hpp"
#include "tpa/experiment.hpp"
#include "tpa/instances.hpp"
#include "tpa/io.hpp"
#include "tpa/ops.hpp"
#include "tpa/smw.hpp"
#include "tpa/solve.hpp"
#include "tpa/tinverse.hpp"

namespace {

// Flag/config-level problems found after CLI11 parsing; mapped to exit 2.
struct UsageError : std::runtime_error {
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

constexpr const char* kFooter = R"(Tensor files: .json {"dims":[n1,n2,n3],"data":[...]} or .t3b (12-byte header
of three little-endian u32 dims, then float64 payload). Both are slice-major:
entry (i,j,k) lives at index k*n1*n2 + j*n1 + i.

TPROD_THREADS caps worker threads for face/trial parallelism (default 1);
results never depend on the thread count.

Exit codes:
  0  success; for `bounds`, every applicable trial's bounds held
  1  runtime failure: singular input, update conditions not satisfied, bound
     violation, hypothesis violation under --strict, unreadable tensor data
  2  usage error: bad flags, malformed config, infeasible dimensions)";

tpa::Tensor3 load(const std::string& path) { return tpa::read_tensor(path); }

void store(const std::string& path, const tpa::Tensor3& t) { tpa::write_tensor(path, t); }

int run_bounds(const tpa::ExperimentConfig& config, bool strict) {
  const tpa::ExperimentResult result = tpa::run_experiment(config);

  const auto write_report = [&](std::ostream& out) {
    if (config.format == tpa::ReportFormat::kCsv) {
      tpa::write_csv(result, out);
    } else {
      tpa::write_json(result, out);
    }
  };
  if (config.output_path.empty()) {
    write_report(std::cout);
  } else {
    std::ofstream out(config.output_path);
    if (!out) throw tpa::IoError("cannot open for writing: " + config.output_path);
    write_report(out);
    if (!out) throw tpa::IoError("write failed: " + config.output_path);
  }

  const tpa::ExperimentSummary& s = result.summary;
  std::cerr << tpa::experiment_kind_token(config.kind) << ": " << s.trials << " trials, "
            << s.applicable << " applicable, " << s.hypothesis_violations
            << " hypothesis violations, " << s.bound_violations
            << " bound violations, max ratio F=" << s.max_ratio_f << " 2=" << s.max_ratio_2
            << "\n";
  if (s.bound_violations > 0) return 1;
  if (strict && s.hypothesis_violations > 0) return 1;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"t-product tensor algebra: products, inverses, pseudoinverse updates,\n"
               "multilinear solvers, and randomized perturbation-bound verification"};
  app.footer(kFooter);
  app.require_subcommand(1);
  int rc = 0;

  // ---- elementary tensor ops: FILES... -o OUT ----------------------------
  struct BinOp {
    const char* name;
    const char* help;
    tpa::Tensor3 (*fn)(const tpa::Tensor3&, const tpa::Tensor3&);
  };
  static const BinOp bin_ops[] = {
      {"tprod", "t-product C = A * B", [](const tpa::Tensor3& a, const tpa::Tensor3& b) {
         return tpa::tprod(a, b);
       }},
      {"lstsq", "minimum-norm least-squares solution of A * X = B",
       [](const tpa::Tensor3& a, const tpa::Tensor3& b) { return tpa::lstsq_min_norm(a, b); }},
  };
  for (const BinOp& op : bin_ops) {
    auto* sub = app.add_subcommand(op.name, op.help);
    auto in1 = std::make_shared<std::string>();
    auto in2 = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    sub->add_option("A", *in1, "left tensor file")->required();
    sub->add_option("B", *in2, "right tensor file")->required();
    sub->add_option("-o,--out", *out, "output tensor file")->required();
    auto fn = op.fn;
    sub->callback([=] { store(*out, fn(load(*in1), load(*in2))); });
  }

  struct UnOp {
    const char* name;
    const char* help;
    tpa::Tensor3 (*fn)(const tpa::Tensor3&);
  };
  static const UnOp un_ops[] = {
      {"transpose", "tensor transpose",
       [](const tpa::Tensor3& a) { return tpa::transpose(a); }},
      {"inv", "t-inverse of a square tensor (refuses near-singular faces)",
       [](const tpa::Tensor3& a) { return tpa::inv(a); }},
      {"pinv", "Moore-Penrose pseudoinverse",
       [](const tpa::Tensor3& a) { return tpa::pinv(a); }},
  };
  for (const UnOp& op : un_ops) {
    auto* sub = app.add_subcommand(op.name, op.help);
    auto in = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    sub->add_option("A", *in, "input tensor file")->required();
    sub->add_option("-o,--out", *out, "output tensor file")->required();
    auto fn = op.fn;
    sub->callback([=] { store(*out, fn(load(*in))); });
  }

  // ---- multirank ----------------------------------------------------------
  {
    auto* sub = app.add_subcommand("multirank", "per-Fourier-face ranks");
    auto in = std::make_shared<std::string>();
    auto tau = std::make_shared<double>(-1.0);
    sub->add_option("A", *in, "input tensor file")->required();
    sub->add_option("--tau", *tau, "explicit singular-value threshold (default: per-face)");
    sub->callback([=] {
      const tpa::Tensor3 a = load(*in);
      const std::optional<double> t =
          *tau >= 0.0 ? std::optional<double>(*tau) : std::nullopt;
      const tpa::MultiRank mr = tpa::multirank(a, t);
      for (std::size_t i = 0; i < mr.ranks.size(); ++i) {
        std::cout << "face " << i << ": rank " << mr.ranks[i] << " (tau " << mr.tau[i] << ")\n";
      }
      std::cout << "sum " << mr.sum() << "\n";
    });
  }

  // ---- solve ---------------------------------------------------------------
  {
    auto* sub = app.add_subcommand("solve", "general solution of A * X = D with consistency check");
    auto in_a = std::make_shared<std::string>();
    auto in_d = std::make_shared<std::string>();
    auto free_path = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    sub->add_option("A", *in_a, "coefficient tensor file")->required();
    sub->add_option("D", *in_d, "right-hand-side tensor file")->required();
    sub->add_option("--free", *free_path, "free-parameter tensor for the homogeneous part");
    sub->add_option("-o,--out", *out, "solution tensor file");
    sub->callback([=] {
      const tpa::Tensor3 a = load(*in_a);
      const tpa::Tensor3 d = load(*in_d);
      std::optional<tpa::Tensor3> free;
      if (!free_path->empty()) free = load(*free_path);
      const tpa::SolveResult r = tpa::solve_exact(a, d, free);
      std::cout << "consistent: " << (r.consistent ? "yes" : "no") << " (residual "
                << r.consistency_residual << ")\n";
      if (!out->empty()) store(*out, r.solution);
    });
  }

  // ---- smw-inv / smw-pinv ---------------------------------------------------
  {
    auto* sub = app.add_subcommand(
        "smw-inv", "inverse of A + U*B*V via the low-rank update identity");
    auto a = std::make_shared<std::string>();
    auto u = std::make_shared<std::string>();
    auto b = std::make_shared<std::string>();
    auto v = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    sub->add_option("A", *a, "base tensor file")->required();
    sub->add_option("U", *u, "left update factor file")->required();
    sub->add_option("B", *b, "core update factor file")->required();
    sub->add_option("V", *v, "right update factor file")->required();
    sub->add_option("-o,--out", *out, "output tensor file")->required();
    sub->callback(
        [=] { store(*out, tpa::smw_inverse(load(*a), load(*u), load(*b), load(*v))); });
  }
  {
    auto* sub = app.add_subcommand(
        "smw-pinv",
        "pseudoinverse of A + U*B*V via the update formula; refuses unless the\n"
        "range-split factor bundle satisfies its algebraic conditions");
    auto a = std::make_shared<std::string>();
    auto u = std::make_shared<std::string>();
    auto b = std::make_shared<std::string>();
    auto v = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    sub->add_option("A", *a, "base tensor file")->required();
    sub->add_option("U", *u, "left update factor file")->required();
    sub->add_option("B", *b, "core update factor file")->required();
    sub->add_option("V", *v, "right update factor file")->required();
    sub->add_option("-o,--out", *out, "output tensor file")->required();
    sub->callback([=] {
      const tpa::Tensor3 ta = load(*a);
      const tpa::SmwFactors f =
          tpa::build_smw_factors(ta, load(*u), load(*b), load(*v));
      const tpa::ConditionReport rep = tpa::check_smw_conditions(f);
      std::cerr << "conditions: worst residual " << rep.worst() << " (threshold "
                << rep.threshold << ")\n";
      store(*out, tpa::smw_pinv(ta, f));
    });
  }

  // ---- bounds ---------------------------------------------------------------
  {
    auto* sub = app.add_subcommand(
        "bounds", "verify a perturbation bound (or update identity) over seeded trials");
    sub->footer(tpa::csv_columns_doc());
    auto config_path = std::make_shared<std::string>();
    auto theorem = std::make_shared<std::string>();
    auto dims = std::make_shared<std::vector<int>>();
    auto trials = std::make_shared<int>(0);
    auto seed = std::make_shared<std::uint64_t>(0);
    auto scale = std::make_shared<double>(0.0);
    auto profile = std::make_shared<std::vector<int>>();
    auto out = std::make_shared<std::string>();
    auto format = std::make_shared<std::string>();
    auto strict = std::make_shared<bool>(false);
    sub->add_option("--config", *config_path, "JSON experiment config; explicit flags override");
    auto* opt_theorem =
        sub->add_option("--theorem", *theorem,
                        "bound to verify: T3_1 T3_2 T3_3 T4_1 T4_2 T4_3 T4_4 T5_2 "
                        "SMW_INV SMW_PINV");
    auto* opt_dims = sub->add_option(
        "--dims", *dims,
        "n1,n2,n3[,n4]; n4 is the right-hand-side width, and for T5_2 / SMW_* "
        "also the update width (needs n4 <= n1-1)")->delimiter(',');
    auto* opt_trials = sub->add_option("--trials", *trials, "number of seeded trials (>= 1)");
    auto* opt_seed = sub->add_option("--seed", *seed, "master seed (u64)");
    auto* opt_scale =
        sub->add_option("--scale", *scale, "relative perturbation scale (> 0)");
    auto* opt_profile = sub->add_option(
        "--rank-profile", *profile,
        "per-face ranks for T4_2 / T4_3 / T4_4 instances (conjugate-symmetric)")->delimiter(',');
    auto* opt_out = sub->add_option("--out", *out, "report path (default: stdout)");
    auto* opt_format =
        sub->add_option("--format", *format, "report format: csv (default) or json")
            ->check(CLI::IsMember({"csv", "json"}));
    sub->add_flag("--strict", *strict, "also fail (exit 1) on hypothesis violations");
    sub->callback([=, &rc] {
      tpa::ExperimentConfig c;
      bool have_kind = false;
      if (!config_path->empty()) {
        try {
          c = tpa::config_from_json_file(*config_path);
        } catch (const tpa::Error& e) {
          throw UsageError(e.what());
        }
        have_kind = true;
      }
      if (opt_theorem->count() > 0) {
        const auto kind = tpa::parse_experiment_kind(*theorem);
        if (!kind) throw UsageError("unknown theorem token '" + *theorem + "'");
        c.kind = *kind;
        have_kind = true;
      }
      if (!have_kind) throw UsageError("bounds needs --theorem or --config");
      if (opt_dims->count() > 0) {
        if (dims->size() != 3 && dims->size() != 4) {
          throw UsageError("--dims needs 3 or 4 comma-separated entries");
        }
        c.n1 = (*dims)[0];
        c.n2 = (*dims)[1];
        c.n3 = (*dims)[2];
        if (dims->size() == 4) c.n4 = (*dims)[3];
      }
      if (opt_trials->count() > 0) c.trials = *trials;
      if (opt_seed->count() > 0) c.seed = *seed;
      if (opt_scale->count() > 0) c.perturbation_scale = *scale;
      if (opt_profile->count() > 0) c.rank_profile = *profile;
      if (opt_out->count() > 0) c.output_path = *out;
      if (opt_format->count() > 0) {
        c.format = *format == "json" ? tpa::ReportFormat::kJson : tpa::ReportFormat::kCsv;
      }
      if (c.trials < 1) throw UsageError("--trials must be >= 1");
      if (!(c.perturbation_scale > 0.0)) throw UsageError("--scale must be positive");
      rc = run_bounds(c, *strict);
    });
  }

  // ---- gen ------------------------------------------------------------------
  {
    auto* sub = app.add_subcommand("gen", "emit a seeded random or structured tensor");
    auto kind = std::make_shared<std::string>();
    auto dims = std::make_shared<std::vector<int>>();
    auto seed = std::make_shared<std::uint64_t>(0);
    auto ranks = std::make_shared<std::vector<int>>();
    auto sigma_min = std::make_shared<double>(1.0);
    auto sigma_max = std::make_shared<double>(2.0);
    auto out = std::make_shared<std::string>();
    sub->add_option("--kind", *kind,
                    "random (iid normal) | well-conditioned (face singular values in\n"
                    "[sigma-min, sigma-max]) | rank-profile (exact per-face ranks) |\n"
                    "singular (square, first Fourier face rank-deficient)")
        ->required()
        ->check(CLI::IsMember({"random", "well-conditioned", "rank-profile", "singular"}));
    sub->add_option("--dims", *dims, "n1,n2,n3")->required()->delimiter(',');
    sub->add_option("--seed", *seed, "generator seed (u64)");
    sub->add_option("--ranks", *ranks, "rank-profile only: per-face ranks, comma-separated")
        ->delimiter(',');
    sub->add_option("--sigma-min", *sigma_min, "smallest face singular value (default 1)");
    sub->add_option("--sigma-max", *sigma_max, "largest face singular value (default 2)");
    sub->add_option("-o,--out", *out, "output tensor file")->required();
    sub->callback([=] {
      if (dims->size() != 3) throw UsageError("--dims needs exactly 3 comma-separated entries");
      const int n1 = (*dims)[0], n2 = (*dims)[1], n3 = (*dims)[2];
      tpa::Tensor3 t;
      if (*kind == "random") {
        t = tpa::random_tensor(n1, n2, n3, *seed);
      } else if (*kind == "well-conditioned") {
        t = tpa::random_well_conditioned(n1, n2, n3, *seed, *sigma_min, *sigma_max);
      } else if (*kind == "rank-profile") {
        if (ranks->empty()) throw UsageError("--kind rank-profile needs --ranks");
        t = tpa::random_rank_profile(n1, n2, n3, *ranks, *seed, *sigma_min, *sigma_max);
      } else {
        if (n1 != n2) throw UsageError("--kind singular needs n1 == n2");
        t = tpa::random_singular(n1, n3, *seed);
      }
      store(*out, t);
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const tpa::InfeasibleDims& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const tpa::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return rc;
}
