#include "tpa/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "tpa/errors.hpp"
#include "tpa/instances.hpp"
#include "tpa/ops.hpp"
#include "tpa/parallel.hpp"
#include "tpa/smw.hpp"
#include "tpa/solve.hpp"
#include "tpa/tinverse.hpp"

namespace tpa {

namespace {

using nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kSmwInvTol = 1e-9;
constexpr double kSmwPinvTol = 1e-8;
constexpr double kMargin = 0.9;  // headroom between generated hypotheses and their limits

struct TokenEntry {
  ExperimentKind kind;
  const char* token;
};
constexpr TokenEntry kTokens[] = {
    {ExperimentKind::kInvPosterior, "T3_1"},  {ExperimentKind::kInvPrior, "T3_2"},
    {ExperimentKind::kEquation, "T3_3"},      {ExperimentKind::kPinvGeneral, "T4_1"},
    {ExperimentKind::kPinvRankPreserving, "T4_2"}, {ExperimentKind::kPinvRelative, "T4_3"},
    {ExperimentKind::kLstsq, "T4_4"},         {ExperimentKind::kSmwSolve, "T5_2"},
    {ExperimentKind::kSmwInv, "SMW_INV"},     {ExperimentKind::kSmwPinv, "SMW_PINV"},
};

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double rel_f(const Tensor3& diff, const Tensor3& base) {
  return safe_ratio(frobenius_norm(diff), frobenius_norm(base));
}

double rel_2(const Tensor3& diff, const Tensor3& base) {
  return safe_ratio(spectral_norm(diff), spectral_norm(base));
}

// Scales t so both norms land at or below their targets (no-op for zero t).
Tensor3 scale_to_both(const Tensor3& t, double target_f, double target_2) {
  const double f = frobenius_norm(t), s2 = spectral_norm(t);
  if (f == 0.0) return t;
  return scale(t, std::min(target_f / f, target_2 / s2));
}

std::vector<int> effective_profile(const ExperimentConfig& c) {
  if (c.rank_profile) return *c.rank_profile;
  return std::vector<int>(c.n3, std::max(1, std::min(c.n1, c.n2) - 1));
}

// Component j of trial t draws from seed splitmix64(trial_seed(master, t) + j).
std::uint64_t sub_seed(std::uint64_t trial, int j) { return splitmix64(trial + j); }

BoundReport hypothesis_row(const std::string& why) {
  BoundReport r;
  r.applicability = Applicability::kHypothesisViolated;
  r.hypothesis = why;
  r.bound_f = r.actual_f = r.bound_2 = r.actual_2 = kNaN;
  r.kappa_f = r.kappa_2 = r.gamma_f = r.gamma_2 = r.mu = r.lambda = kNaN;
  return r;
}

BoundReport tolerance_report(double tol, double actual_f, double actual_2) {
  BoundReport r;
  r.applicability = Applicability::kApplicable;
  r.bound_f = r.bound_2 = tol;
  r.actual_f = actual_f;
  r.actual_2 = actual_2;
  r.holds_f = bound_holds(actual_f, tol);
  r.holds_2 = bound_holds(actual_2, tol);
  r.kappa_f = r.kappa_2 = r.gamma_f = r.gamma_2 = r.mu = r.lambda = kNaN;
  return r;
}

BoundReport trial_inv_family(const ExperimentConfig& c, std::uint64_t s) {
  const Tensor3 a = random_well_conditioned(c.n1, c.n1, c.n3, sub_seed(s, 0));
  const Tensor3 e = with_spectral_norm(random_tensor(c.n1, c.n1, c.n3, sub_seed(s, 1)),
                                       c.perturbation_scale * spectral_norm(a));
  switch (c.kind) {
    case ExperimentKind::kInvPosterior:
      return inv_perturb_posterior(a, e);
    case ExperimentKind::kInvPrior:
      return inv_perturb_prior(a, e);
    default: {
      const Tensor3 b = random_tensor(c.n1, c.n4, c.n3, sub_seed(s, 2));
      const Tensor3 k = with_frobenius_norm(random_tensor(c.n1, c.n4, c.n3, sub_seed(s, 3)),
                                            c.perturbation_scale * frobenius_norm(b));
      return equation_perturb(a, e, b, k);
    }
  }
}

BoundReport trial_pinv_family(const ExperimentConfig& c, std::uint64_t s) {
  if (c.kind == ExperimentKind::kPinvGeneral) {
    const Tensor3 a = random_tensor(c.n1, c.n2, c.n3, sub_seed(s, 0));
    const Tensor3 e = with_frobenius_norm(random_tensor(c.n1, c.n2, c.n3, sub_seed(s, 1)),
                                          c.perturbation_scale * frobenius_norm(a));
    return pinv_perturb_general(a, e);
  }
  const Tensor3 a =
      random_rank_profile(c.n1, c.n2, c.n3, effective_profile(c), sub_seed(s, 0));
  const Tensor3 e = rank_preserving_perturbation(a, c.perturbation_scale, sub_seed(s, 1));
  switch (c.kind) {
    case ExperimentKind::kPinvRankPreserving:
      return pinv_perturb_rank_preserving(a, e);
    case ExperimentKind::kPinvRelative:
      return pinv_perturb_relative(a, e);
    default: {
      const Tensor3 b = random_tensor(c.n1, c.n4, c.n3, sub_seed(s, 2));
      const Tensor3 k = with_frobenius_norm(random_tensor(c.n1, c.n4, c.n3, sub_seed(s, 3)),
                                            c.perturbation_scale * frobenius_norm(b));
      return lstsq_perturb(a, e, b, k);
    }
  }
}

// Structured-update solve drift: rescales a conditioned instance so every
// hypothesis of the bound is met with kMargin headroom, and so the reduced
// (printed) form of the bound dominates the full proof chain, which needs
// ||A|| <= 1 and ||A||^3 * ||A+|| <= 1 in each norm.
BoundReport trial_smw_solve(const ExperimentConfig& c, std::uint64_t s) {
  const int n = c.n1, k = c.n4, n3 = c.n3;
  const double eps_a = c.perturbation_scale, eps_d = c.perturbation_scale;

  const ConditionedInstance raw =
      construct_conditioned_instance(n, k, n3, sub_seed(s, 0), SmwFamily::kOrthonormalComplement);
  const double a0_f = frobenius_norm(raw.a), a0_2 = spectral_norm(raw.a);
  const Tensor3 ap0 = pinv(raw.a);
  const double ap0_f = frobenius_norm(ap0), ap0_2 = spectral_norm(ap0);
  const double cs = 0.99 * std::min({1.0 / std::max(a0_f, a0_2),
                                     1.0 / std::sqrt(a0_f * a0_f * a0_f * ap0_f),
                                     1.0 / std::sqrt(a0_2 * a0_2 * a0_2 * ap0_2)});
  const Tensor3 a = scale(raw.a, cs);
  const double a_f = frobenius_norm(a), a_2 = spectral_norm(a);

  // Y's scaled up so E_i = Y_i * pinv(Y_i^T * Y_i) shrinks to the eps_a box;
  // B scaled up so pinv(B) does the same.
  const double sy = std::max(std::sqrt(static_cast<double>(k)) / (kMargin * eps_a * a_f),
                             1.0 / (kMargin * eps_a * a_2));
  const Tensor3 bp0 = pinv(raw.factors.b);
  const double beta = std::max(frobenius_norm(bp0) / (kMargin * eps_a * a_f),
                               spectral_norm(bp0) / (kMargin * eps_a * a_2));
  const Tensor3 x1 = scale_to_both(raw.factors.x1, kMargin * eps_a * a_f, kMargin * eps_a * a_2);
  const Tensor3 x2 = scale_to_both(raw.factors.x2, kMargin * eps_a * a_f, kMargin * eps_a * a_2);
  const Tensor3 u = add(x1, scale(raw.factors.y1, sy));
  const Tensor3 v = transpose(add(x2, scale(raw.factors.y2, sy)));
  const SmwFactors f = build_smw_factors(a, u, scale(raw.factors.b, beta), v);

  const Tensor3 d = tprod(a, random_tensor(n, c.n4, n3, sub_seed(s, 1)));
  const Tensor3 h =
      scale_to_both(random_tensor(n, c.n4, n3, sub_seed(s, 2)),
                    kMargin * eps_d * frobenius_norm(d), kMargin * eps_d * spectral_norm(d));
  return smw_solve_perturb(a, f, d, h, eps_a, eps_d);
}

BoundReport trial_smw_inv(const ExperimentConfig& c, std::uint64_t s) {
  const Tensor3 a = random_well_conditioned(c.n1, c.n1, c.n3, sub_seed(s, 0));
  const Tensor3 u = random_tensor(c.n1, c.n4, c.n3, sub_seed(s, 1));
  const Tensor3 b = random_well_conditioned(c.n4, c.n4, c.n3, sub_seed(s, 2));
  const Tensor3 v = random_tensor(c.n4, c.n1, c.n3, sub_seed(s, 3));
  try {
    const Tensor3 via_update = smw_inverse(a, u, b, v);
    const Tensor3 direct = inv(add(a, tprod(u, tprod(b, v))));
    const Tensor3 diff = sub(via_update, direct);
    return tolerance_report(kSmwInvTol, rel_f(diff, direct), rel_2(diff, direct));
  } catch (const SingularTensor& e) {
    return hypothesis_row(std::string("update identity needs invertibility: ") + e.what());
  }
}

BoundReport trial_smw_pinv(const ExperimentConfig& c, std::uint64_t s) {
  const SmwFamily family = (s % 2 == 0) ? SmwFamily::kOrthonormalComplement
                                        : SmwFamily::kZeroOrthogonal;
  const ConditionedInstance inst =
      construct_conditioned_instance(c.n1, c.n4, c.n3, sub_seed(s, 0), family);
  const ConditionReport rep = check_smw_conditions(inst.factors);
  if (!rep.satisfied) {
    return hypothesis_row("constructed bundle unexpectedly fails conditions (worst residual " +
                          fmt17(rep.worst()) + ")");
  }
  const Tensor3 via_update = smw_pinv(inst.a, inst.factors);
  const Tensor3 direct = pinv(inst.m);
  const Tensor3 diff = sub(via_update, direct);
  BoundReport r =
      tolerance_report(kSmwPinvTol, rel_f(diff, direct), rel_2(diff, direct));

  const Tensor3& m = inst.m;
  const Tensor3& x = via_update;
  const Tensor3 mx = tprod(m, x), xm = tprod(x, m);
  r.extras.push_back({"penrose: M*X*M == M", kSmwPinvTol, rel_f(sub(tprod(mx, m), m), m), false});
  r.extras.push_back({"penrose: X*M*X == X", kSmwPinvTol, rel_f(sub(tprod(xm, x), x), x), false});
  r.extras.push_back(
      {"penrose: (M*X)^T == M*X", kSmwPinvTol, safe_ratio(frobenius_norm(sub(transpose(mx), mx)),
                                                          std::max(frobenius_norm(mx), 1.0)),
       false});
  r.extras.push_back(
      {"penrose: (X*M)^T == X*M", kSmwPinvTol, safe_ratio(frobenius_norm(sub(transpose(xm), xm)),
                                                          std::max(frobenius_norm(xm), 1.0)),
       false});
  for (ExtraBound& e : r.extras) e.holds = bound_holds(e.actual, e.bound);
  return r;
}

BoundReport run_trial(const ExperimentConfig& c, std::uint64_t s) {
  switch (c.kind) {
    case ExperimentKind::kInvPosterior:
    case ExperimentKind::kInvPrior:
    case ExperimentKind::kEquation:
      return trial_inv_family(c, s);
    case ExperimentKind::kPinvGeneral:
    case ExperimentKind::kPinvRankPreserving:
    case ExperimentKind::kPinvRelative:
    case ExperimentKind::kLstsq:
      return trial_pinv_family(c, s);
    case ExperimentKind::kSmwSolve:
      return trial_smw_solve(c, s);
    case ExperimentKind::kSmwInv:
      return trial_smw_inv(c, s);
    case ExperimentKind::kSmwPinv:
      return trial_smw_pinv(c, s);
  }
  throw Error("run_trial: unreachable");
}

bool kind_needs_square(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::kInvPosterior:
    case ExperimentKind::kInvPrior:
    case ExperimentKind::kEquation:
    case ExperimentKind::kSmwSolve:
    case ExperimentKind::kSmwInv:
    case ExperimentKind::kSmwPinv:
      return true;
    default:
      return false;
  }
}

void validate_config(const ExperimentConfig& c) {
  if (c.trials < 1) throw InfeasibleDims("experiment needs trials >= 1");
  if (!(c.perturbation_scale > 0.0)) throw InfeasibleDims("perturbation_scale must be positive");
  if (c.n1 < 1 || c.n2 < 1 || c.n3 < 1 || c.n4 < 1) {
    throw InfeasibleDims("experiment dims must be positive");
  }
  if (kind_needs_square(c.kind) && c.n1 != c.n2) {
    throw InfeasibleDims(experiment_kind_token(c.kind) +
                         " instances use square tensors; need n1 == n2");
  }
  if ((c.kind == ExperimentKind::kSmwSolve || c.kind == ExperimentKind::kSmwPinv) &&
      c.n4 > c.n1 - 1) {
    throw InfeasibleDims(experiment_kind_token(c.kind) +
                         " needs update width n4 <= n1 - 1 for a nontrivial orthogonal complement");
  }
  const bool uses_profile = c.kind == ExperimentKind::kPinvRankPreserving ||
                            c.kind == ExperimentKind::kPinvRelative ||
                            c.kind == ExperimentKind::kLstsq;
  if (uses_profile) {
    // Surfaces malformed profiles before any trial starts.
    random_rank_profile(c.n1, c.n2, c.n3, effective_profile(c), 0);
  } else if (c.rank_profile) {
    throw InfeasibleDims("rank_profile applies only to T4_2 / T4_3 / T4_4 experiments");
  }
}

}  // namespace

std::optional<ExperimentKind> parse_experiment_kind(const std::string& token) {
  for (const TokenEntry& t : kTokens) {
    if (token == t.token) return t.kind;
  }
  return std::nullopt;
}

std::string experiment_kind_token(ExperimentKind kind) {
  for (const TokenEntry& t : kTokens) {
    if (t.kind == kind) return t.token;
  }
  throw Error("experiment_kind_token: unknown kind");
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  validate_config(config);

  ExperimentResult result;
  result.config = config;
  result.rows.resize(config.trials);
  parallel_for(config.trials, [&](int t) {
    ExperimentRow& row = result.rows[t];
    row.trial = t;
    row.seed = trial_seed(config.seed, static_cast<std::uint64_t>(t));
    row.report = run_trial(config, row.seed);
  });

  ExperimentSummary& s = result.summary;
  s.trials = config.trials;
  for (const ExperimentRow& row : result.rows) {
    if (!row.report.applicable()) {
      ++s.hypothesis_violations;
      continue;
    }
    ++s.applicable;
    if (!row.report.all_hold()) ++s.bound_violations;
    s.max_ratio_f = std::max(s.max_ratio_f, safe_ratio(row.report.actual_f, row.report.bound_f));
    s.max_ratio_2 = std::max(s.max_ratio_2, safe_ratio(row.report.actual_2, row.report.bound_2));
  }
  s.all_hold = s.bound_violations == 0;
  return result;
}

void write_csv(const ExperimentResult& result, std::ostream& out) {
  out << "trial,seed,applicable,bound_F,actual_F,ratio_F,bound_2,actual_2,ratio_2,"
         "holds_F,holds_2,kappa_F,kappa_2,gamma_F,gamma_2,mu,lambda\n";
  for (const ExperimentRow& row : result.rows) {
    const BoundReport& r = row.report;
    const bool app = r.applicable();
    out << row.trial << ',' << row.seed << ',' << (app ? 1 : 0) << ',' << fmt17(r.bound_f) << ','
        << fmt17(r.actual_f) << ',' << fmt17(app ? safe_ratio(r.actual_f, r.bound_f) : kNaN)
        << ',' << fmt17(r.bound_2) << ',' << fmt17(r.actual_2) << ','
        << fmt17(app ? safe_ratio(r.actual_2, r.bound_2) : kNaN) << ',' << (r.holds_f ? 1 : 0)
        << ',' << (r.holds_2 ? 1 : 0) << ',' << fmt17(r.kappa_f) << ',' << fmt17(r.kappa_2) << ','
        << fmt17(r.gamma_f) << ',' << fmt17(r.gamma_2) << ',' << fmt17(r.mu) << ','
        << fmt17(r.lambda) << '\n';
  }
  const ExperimentSummary& s = result.summary;
  out << "# trials=" << s.trials << " applicable=" << s.applicable
      << " hypothesis_violations=" << s.hypothesis_violations
      << " bound_violations=" << s.bound_violations << " max_ratio_F=" << fmt17(s.max_ratio_f)
      << " max_ratio_2=" << fmt17(s.max_ratio_2) << " all_hold=" << (s.all_hold ? 1 : 0) << '\n';
}

namespace {

json config_to_json(const ExperimentConfig& c) {
  json j;
  j["theorem"] = experiment_kind_token(c.kind);
  j["dims"] = {c.n1, c.n2, c.n3, c.n4};
  j["trials"] = c.trials;
  j["seed"] = c.seed;
  j["perturbation_scale"] = c.perturbation_scale;
  if (c.rank_profile) j["rank_profile"] = *c.rank_profile;
  if (!c.output_path.empty()) j["output_path"] = c.output_path;
  j["format"] = c.format == ReportFormat::kCsv ? "csv" : "json";
  return j;
}

// NaN is not representable in JSON; emit null instead.
json num(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

}  // namespace

void write_json(const ExperimentResult& result, std::ostream& out) {
  json j;
  j["config"] = config_to_json(result.config);
  json rows = json::array();
  for (const ExperimentRow& row : result.rows) {
    const BoundReport& r = row.report;
    json jr;
    jr["trial"] = row.trial;
    jr["seed"] = row.seed;
    jr["applicable"] = r.applicable();
    if (!r.applicable()) jr["hypothesis"] = r.hypothesis;
    jr["bound_F"] = num(r.bound_f);
    jr["actual_F"] = num(r.actual_f);
    jr["bound_2"] = num(r.bound_2);
    jr["actual_2"] = num(r.actual_2);
    jr["holds_F"] = r.holds_f;
    jr["holds_2"] = r.holds_2;
    jr["kappa_F"] = num(r.kappa_f);
    jr["kappa_2"] = num(r.kappa_2);
    jr["gamma_F"] = num(r.gamma_f);
    jr["gamma_2"] = num(r.gamma_2);
    jr["mu"] = num(r.mu);
    jr["lambda"] = num(r.lambda);
    if (!r.extras.empty()) {
      json extras = json::array();
      for (const ExtraBound& e : r.extras) {
        extras.push_back({{"name", e.name},
                          {"bound", num(e.bound)},
                          {"actual", num(e.actual)},
                          {"holds", e.holds}});
      }
      jr["extras"] = extras;
    }
    rows.push_back(std::move(jr));
  }
  j["rows"] = std::move(rows);
  j["summary"] = {{"trials", result.summary.trials},
                  {"applicable", result.summary.applicable},
                  {"hypothesis_violations", result.summary.hypothesis_violations},
                  {"bound_violations", result.summary.bound_violations},
                  {"max_ratio_F", num(result.summary.max_ratio_f)},
                  {"max_ratio_2", num(result.summary.max_ratio_2)},
                  {"all_hold", result.summary.all_hold}};
  out << j.dump(2) << '\n';
}

std::string csv_columns_doc() {
  return
      "CSV columns (one row per trial, floats with 17 significant digits):\n"
      "  trial      0-based trial index\n"
      "  seed       per-trial seed: splitmix64(master_seed + (trial+1)*0x9E3779B97F4A7C15);\n"
      "             component j of a trial draws from splitmix64(seed + j)\n"
      "  applicable 1 if every hypothesis of the bound held, else 0 (row values nan)\n"
      "  bound_F/actual_F/ratio_F   Frobenius-norm bound, measured value, actual/bound\n"
      "  bound_2/actual_2/ratio_2   spectral-norm counterparts\n"
      "  holds_F/holds_2            1 if actual <= bound*(1+1e-9) + 1e-12\n"
      "  kappa_F/kappa_2            condition-number-like constants of the bound (nan if unused)\n"
      "  gamma_F/gamma_2            1 - (inverse norm)*(perturbation norm) factors (nan if unused)\n"
      "  mu/lambda                  rank-case constants of the pseudoinverse bounds (nan if unused)\n"
      "Final line: '# trials=... applicable=... hypothesis_violations=... bound_violations=...\n"
      "             max_ratio_F=... max_ratio_2=... all_hold=0|1'\n"
      "For SMW_INV / SMW_PINV the 'bound' columns carry the acceptance tolerance (1e-9 / 1e-8)\n"
      "and 'actual' the relative difference between the update-formula result and the direct\n"
      "computation; SMW_PINV JSON rows also carry the four Penrose residuals as extras.\n";
}

ExperimentConfig config_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError("config " + path + ": " + e.what());
  }
  try {
    ExperimentConfig c;
    const std::string token = j.at("theorem").get<std::string>();
    const auto kind = parse_experiment_kind(token);
    if (!kind) throw ParseError("config " + path + ": unknown theorem token '" + token + "'");
    c.kind = *kind;
    if (j.contains("dims")) {
      const auto dims = j.at("dims").get<std::vector<int>>();
      if (dims.size() != 3 && dims.size() != 4) {
        throw ParseError("config " + path + ": dims must have 3 or 4 entries");
      }
      c.n1 = dims[0];
      c.n2 = dims[1];
      c.n3 = dims[2];
      if (dims.size() == 4) c.n4 = dims[3];
    }
    c.trials = j.value("trials", c.trials);
    c.seed = j.value("seed", c.seed);
    c.perturbation_scale = j.value("perturbation_scale", c.perturbation_scale);
    if (j.contains("rank_profile")) {
      c.rank_profile = j.at("rank_profile").get<std::vector<int>>();
    }
    c.output_path = j.value("output_path", c.output_path);
    if (j.contains("format")) {
      const std::string f = j.at("format").get<std::string>();
      if (f == "csv") {
        c.format = ReportFormat::kCsv;
      } else if (f == "json") {
        c.format = ReportFormat::kJson;
      } else {
        throw ParseError("config " + path + ": format must be 'csv' or 'json'");
      }
    }
    if (c.trials < 1) throw ParseError("config " + path + ": trials must be >= 1");
    if (!(c.perturbation_scale > 0.0)) {
      throw ParseError("config " + path + ": perturbation_scale must be positive");
    }
    return c;
  } catch (const json::exception& e) {
    throw ParseError("config " + path + ": " + e.what());
  }
}

void config_to_json_file(const ExperimentConfig& config, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << config_to_json(config).dump(2) << '\n';
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace tpa
