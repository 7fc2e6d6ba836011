// Acceptance gate: one line per criterion, each an independent randomized
// verification at desk scale. Usage: acceptance <path-to-binary> <config-dir>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <unsupported/Eigen/KroneckerProduct>

#include "tpa/errors.hpp"
#include "tpa/experiment.hpp"
#include "tpa/fourier.hpp"
#include "tpa/instances.hpp"
#include "tpa/ops.hpp"
#include "tpa/oracle.hpp"
#include "tpa/perturb.hpp"
#include "tpa/smw.hpp"
#include "tpa/solve.hpp"
#include "tpa/tensor.hpp"
#include "tpa/tinverse.hpp"

using namespace tpa;
namespace fs = std::filesystem;

namespace {

std::string g_cli;
fs::path g_config_dir;
fs::path g_scratch;

double rel_diff(const Tensor3& a, const Tensor3& b) {
  return frobenius_norm(sub(a, b)) / std::max(frobenius_norm(b), 1e-300);
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2e", v);
  return buf;
}

int run_cmd(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  if (status == -1) return -1;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

// ---- 1: fft product vs block circulant oracle ---------------------------

bool oracle_equivalence(std::string& detail) {
  struct Shape { int n1, n2, n4, n3; };
  const Shape shapes[] = {{4, 3, 2, 5}, {1, 1, 1, 1}, {3, 3, 3, 1}, {5, 4, 3, 2},
                          {2, 5, 4, 3}, {6, 2, 3, 4}, {3, 6, 2, 8}, {4, 4, 4, 6},
                          {2, 2, 2, 7}, {5, 5, 5, 4}};
  double worst = 0.0;
  for (int i = 0; i < 500; ++i) {
    const Shape& s = shapes[i % 10];
    const Tensor3 a = random_tensor(s.n1, s.n2, s.n3, 1000 + 2 * i);
    const Tensor3 b = random_tensor(s.n2, s.n4, s.n3, 1001 + 2 * i);
    const Tensor3 ref = oracle::tprod_bcirc(a, b);
    worst = std::max(worst, frobenius_norm(sub(tprod(a, b), ref)) /
                                std::max(frobenius_norm(ref), 1e-300));
  }
  detail = "max relative discrepancy " + sci(worst) + " over 500 shapes";
  return worst <= 1e-12;
}

// ---- 2: DFT block-diagonalization of the block circulant ----------------

bool diagonalization(std::string& detail) {
  double worst_off = 0.0, worst_block = 0.0;
  for (int i = 0; i < 100; ++i) {
    const int n1 = 2 + i % 3, n2 = 2 + (i / 3) % 3, n3 = 1 + i % 5;
    const Tensor3 a = random_tensor(n1, n2, n3, 2000 + i);
    const Eigen::MatrixXcd f = dft_matrix(n3);
    const Eigen::MatrixXcd finv = f.adjoint() / static_cast<double>(n3);
    const Eigen::MatrixXcd left =
        Eigen::kroneckerProduct(f, Eigen::MatrixXcd::Identity(n1, n1)).eval();
    const Eigen::MatrixXcd right =
        Eigen::kroneckerProduct(finv, Eigen::MatrixXcd::Identity(n2, n2)).eval();
    const Eigen::MatrixXcd d = left * oracle::bcirc(a) * right;
    const FourierFaces faces = to_faces(a);
    double off = 0.0;
    for (int bi = 0; bi < n3; ++bi) {
      for (int bj = 0; bj < n3; ++bj) {
        const Eigen::MatrixXcd block = d.block(bi * n1, bj * n2, n1, n2);
        if (bi == bj) {
          worst_block = std::max(
              worst_block, (block - faces.faces[bi]).norm() / (1.0 + faces.faces[bi].norm()));
        } else {
          off += block.squaredNorm();
        }
      }
    }
    worst_off = std::max(worst_off, std::sqrt(off) / std::max(d.norm(), 1e-300));
  }
  detail = "off-block mass " + sci(worst_off) + ", face mismatch " +
           sci(worst_block) + " over 100 instances";
  return worst_off <= 1e-10 && worst_block <= 1e-10;
}

// ---- 3: norm identities and product/triangle inequalities ---------------

bool norm_identities(std::string& detail) {
  double worst_id = 0.0;
  bool inequalities = true;
  for (int i = 0; i < 1000; ++i) {
    const int n1 = 2 + i % 4, n2 = 2 + (i / 4) % 3, n4 = 1 + i % 3, n3 = 1 + i % 6;
    const Tensor3 a = random_tensor(n1, n2, n3, 3000 + 3 * i);
    const Tensor3 b = random_tensor(n2, n4, n3, 3001 + 3 * i);
    const Tensor3 a2 = random_tensor(n1, n2, n3, 3002 + 3 * i);

    // Frobenius norm carried by the face stack, scaled by 1/sqrt(n3).
    const double f_direct = frobenius_norm(a);
    const double f_faces = face_stack_norm(to_faces(a)) / std::sqrt(static_cast<double>(n3));
    worst_id = std::max(worst_id, std::abs(f_direct - f_faces) / std::max(f_direct, 1e-300));

    // Spectral norm equals the spectral norm of the block circulant.
    const double s_direct = spectral_norm(a);
    const double s_bcirc = oracle::bcirc(a).jacobiSvd().singularValues()(0);
    worst_id = std::max(worst_id, std::abs(s_direct - s_bcirc) / std::max(s_direct, 1e-300));

    const double af = frobenius_norm(a), bf = frobenius_norm(b), a2f = frobenius_norm(a2);
    const double a_2 = s_direct, b_2 = spectral_norm(b), a2_2 = spectral_norm(a2);
    const Tensor3 ab = tprod(a, b);
    const double abf = frobenius_norm(ab), ab_2 = spectral_norm(ab);
    const double rt = std::sqrt(static_cast<double>(n3));

    inequalities = inequalities && bound_holds(abf, a_2 * bf) && bound_holds(abf, af * b_2) &&
                   bound_holds(ab_2, a_2 * b_2) && bound_holds(abf, rt * af * bf) &&
                   bound_holds(frobenius_norm(add(a, a2)), af + a2f) &&
                   bound_holds(spectral_norm(add(a, a2)), a_2 + a2_2) &&
                   bound_holds(a_2, rt * af);
  }
  detail = "worst identity error " + sci(worst_id) + ", inequalities " +
           (inequalities ? "all hold" : "VIOLATED") + " over 1000 instances";
  return worst_id <= 1e-10 && inequalities;
}

// ---- 4: four defining pseudoinverse identities ---------------------------

bool penrose_suite(std::string& detail) {
  double worst = 0.0;
  for (int i = 0; i < 500; ++i) {
    const int n1 = 3 + i % 3, n2 = 3 + (i / 3) % 3, n3 = 1 + i % 5;
    Tensor3 a;
    if (i % 2 == 0) {
      a = random_tensor(n1, n2, n3, 4000 + i);
    } else {
      std::vector<int> profile(n3);
      const int cap = std::max(1, std::min(n1, n2) - 1);
      for (int k = 0; k < n3; ++k) profile[k] = 1 + static_cast<int>(splitmix64(4000 + i) % cap);
      for (int k = 1; k < n3; ++k) profile[k] = profile[n3 - k];  // conjugate symmetry
      a = random_rank_profile(n1, n2, n3, profile, 4001 + i);
    }
    const Tensor3 ap = pinv(a);
    const Tensor3 aap = tprod(a, ap), apa = tprod(ap, a);
    const double na = std::max(frobenius_norm(a), 1e-300);
    const double nap = std::max(frobenius_norm(ap), 1e-300);
    worst = std::max({worst, frobenius_norm(sub(tprod(aap, a), a)) / na,
                      frobenius_norm(sub(tprod(apa, ap), ap)) / nap,
                      frobenius_norm(sub(transpose(aap), aap)) /
                          std::max(frobenius_norm(aap), 1e-300),
                      frobenius_norm(sub(transpose(apa), apa)) /
                          std::max(frobenius_norm(apa), 1e-300)});
  }
  detail = "worst identity residual " + sci(worst) + " over 500 instances";
  return worst <= 1e-9;
}

// ---- 5: every bound dominates its measured error -------------------------

bool bound_dominance(std::string& detail) {
  struct Run {
    const char* token;
    int n1, n2, n3, n4;
    std::optional<std::vector<int>> profile;
  };
  const Run runs[] = {
      {"T3_1", 4, 4, 3, 2, std::nullopt},
      {"T3_2", 4, 4, 3, 2, std::nullopt},
      {"T3_3", 4, 4, 3, 2, std::nullopt},
      {"T4_1", 5, 4, 3, 2, std::nullopt},
      {"T4_2", 5, 4, 3, 2, std::nullopt},
      {"T4_3", 5, 4, 3, 2, std::nullopt},
      {"T4_4", 5, 4, 3, 2, std::nullopt},
      {"T4_4", 6, 4, 3, 2, std::vector<int>{4, 4, 4}},  // every face full column rank
      {"T5_2", 4, 4, 3, 2, std::nullopt},
  };
  double worst_ratio = 0.0;
  int min_applicable = 1 << 30;
  for (std::size_t i = 0; i < sizeof(runs) / sizeof(runs[0]); ++i) {
    const Run& run = runs[i];
    ExperimentConfig c;
    c.kind = *parse_experiment_kind(run.token);
    c.n1 = run.n1;
    c.n2 = run.n2;
    c.n3 = run.n3;
    c.n4 = run.n4;
    c.trials = 1050;
    c.seed = 5000 + i;
    c.perturbation_scale = 1e-3;
    c.rank_profile = run.profile;
    const ExperimentResult r = run_experiment(c);
    min_applicable = std::min(min_applicable, r.summary.applicable);
    worst_ratio = std::max({worst_ratio, r.summary.max_ratio_f, r.summary.max_ratio_2});
    if (r.summary.applicable < 1000 || r.summary.bound_violations != 0) {
      detail = std::string(run.token) + ": applicable=" + std::to_string(r.summary.applicable) +
               " bound_violations=" + std::to_string(r.summary.bound_violations);
      return false;
    }
  }
  int golden = 0;
  for (const auto& entry : fs::directory_iterator(g_config_dir)) {
    if (entry.path().extension() != ".json") continue;
    ++golden;
    if (run_cmd(g_cli + " bounds --config " + entry.path().string() + " > /dev/null 2>&1") != 0) {
      detail = "binary returned nonzero on " + entry.path().filename().string();
      return false;
    }
  }
  detail = "9 suites x 1050 trials, min applicable " + std::to_string(min_applicable) +
           ", worst ratio " + sci(worst_ratio) + ", " + std::to_string(golden) +
           " shipped configs exit 0";
  return golden >= 11;
}

// ---- 6: rank-case constant table -----------------------------------------

bool rank_case_constants(std::string& detail) {
  const double root2 = std::sqrt(2.0), golden_ratio = (1.0 + std::sqrt(5.0)) / 2.0;
  for (int i = 0; i < 10; ++i) {
    const Tensor3 deficient = random_rank_profile(5, 4, 3, {2, 2, 2}, 6000 + i);
    const MuLambda d = mu_lambda(multirank(deficient), 5, 4, 3);
    if (d.rank_case != MuLambda::RankCase::kDeficient || d.mu != root2 ||
        d.lambda != golden_ratio) {
      detail = "rank-deficient family selected the wrong constants";
      return false;
    }
    const Tensor3 rect = random_rank_profile(5, 4, 3, {4, 4, 4}, 6100 + i);
    const MuLambda r = mu_lambda(multirank(rect), 5, 4, 3);
    if (r.rank_case != MuLambda::RankCase::kFullNonSquare || r.mu != 1.0 || r.lambda != root2) {
      detail = "full non-square family selected the wrong constants";
      return false;
    }
    const Tensor3 square = random_well_conditioned(4, 4, 3, 6200 + i);
    const MuLambda s = mu_lambda(multirank(square), 4, 4, 3);
    if (s.rank_case != MuLambda::RankCase::kFullSquare || s.mu != 1.0 || s.lambda != 1.0) {
      detail = "full square family selected the wrong constants";
      return false;
    }
    // The constants drive the live bound reports as well.
    const BoundReport rep =
        pinv_perturb_rank_preserving(deficient, rank_preserving_perturbation(deficient, 1e-3,
                                                                             6300 + i));
    if (!rep.applicable() || rep.mu != root2 || rep.lambda != golden_ratio) {
      detail = "bound report carries different constants than the table";
      return false;
    }
  }
  detail = "all three families select sqrt(2), (1+sqrt 5)/2, 1, sqrt(2), 1, 1 exactly";
  return true;
}

// ---- 7: inverse update formula --------------------------------------------

bool update_inverse(std::string& detail) {
  double worst = 0.0, worst_matrix = 0.0;
  for (int i = 0; i < 200; ++i) {
    const int n = 4 + i % 3, k = 1 + i % 3, n3 = 1 + i % 4;
    const Tensor3 a = random_well_conditioned(n, n, n3, 7000 + 4 * i);
    const Tensor3 u = random_tensor(n, k, n3, 7001 + 4 * i);
    const Tensor3 b = random_well_conditioned(k, k, n3, 7002 + 4 * i);
    const Tensor3 v = random_tensor(k, n, n3, 7003 + 4 * i);
    const Tensor3 via_update = smw_inverse(a, u, b, v);
    worst = std::max(worst, rel_diff(via_update, inv(add(a, tprod(u, tprod(b, v))))));
    if (n3 == 1) {
      // The single-slice case must reproduce the classical matrix identity.
      const Eigen::MatrixXd am = a.slice(0), um = u.slice(0), bm = b.slice(0), vm = v.slice(0);
      const Eigen::MatrixXd ai = am.inverse();
      const Eigen::MatrixXd classical =
          ai - ai * um * (bm.inverse() + vm * ai * um).inverse() * vm * ai;
      worst_matrix =
          std::max(worst_matrix, (via_update.slice(0) - classical).norm() / classical.norm());
    }
  }
  detail = "max deviation from the direct inverse " + sci(worst) +
           ", from the matrix identity " + sci(worst_matrix) + " over 200 instances";
  return worst <= 1e-9 && worst_matrix <= 1e-9;
}

// ---- 8: pseudoinverse update formula --------------------------------------

bool update_pseudoinverse(std::string& detail) {
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const SmwFamily family =
        i % 2 == 0 ? SmwFamily::kOrthonormalComplement : SmwFamily::kZeroOrthogonal;
    const int n = 4 + i % 3, k = 1 + i % 2, n3 = 1 + i % 4;
    const ConditionedInstance inst = construct_conditioned_instance(n, k, n3, 8000 + i, family);
    const ConditionReport rep = check_smw_conditions(inst.factors);
    if (!rep.satisfied) {
      detail = "constructed bundle " + std::to_string(i) + " failed its own conditions";
      return false;
    }
    worst = std::max(worst, rel_diff(smw_pinv(inst.a, inst.factors), pinv(inst.m)));
  }
  if (worst > 1e-8) {
    detail = "update formula drifted " + sci(worst) + " from the direct result";
    return false;
  }
  int refused = 0;
  for (int i = 0; i < 100; ++i) {
    const int n = 4 + i % 3, k = 1 + i % 2, n3 = 1 + i % 4;
    SmwFactors f;
    f.u = random_tensor(n, k, n3, 8200 + 9 * i);
    f.b = random_tensor(k, k, n3, 8201 + 9 * i);
    f.v = random_tensor(k, n, n3, 8202 + 9 * i);
    f.x1 = random_tensor(n, k, n3, 8203 + 9 * i);
    f.y1 = random_tensor(n, k, n3, 8204 + 9 * i);
    f.x2 = random_tensor(n, k, n3, 8205 + 9 * i);
    f.y2 = random_tensor(n, k, n3, 8206 + 9 * i);
    f.e1 = random_tensor(n, k, n3, 8207 + 9 * i);
    f.e2 = random_tensor(n, k, n3, 8208 + 9 * i);
    if (check_smw_conditions(f).satisfied) continue;
    const Tensor3 a = random_tensor(n, n, n3, 8209 + 9 * i);
    try {
      smw_pinv(a, f);
    } catch (const ConditionsNotSatisfied&) {
      ++refused;
    }
  }
  detail = "100 conditioned bundles match to " + sci(worst) + "; " +
           std::to_string(refused) + "/100 generic bundles refused";
  return refused == 100;
}

// ---- 9: range splits, exact solver, least squares --------------------------

bool solvers(std::string& detail) {
  double worst_split = 0.0;
  int verdicts = 0;
  for (int i = 0; i < 200; ++i) {
    const int n1 = 4 + i % 3, n2 = 3 + i % 2, n3 = 1 + i % 4, n4 = 1 + i % 2;
    std::vector<int> profile(n3);
    const int cap = std::max(1, std::min(n1, n2) - 1);
    profile[0] = 1 + static_cast<int>(splitmix64(9000 + i) % cap);
    for (int k = 1; k < n3; ++k) profile[k] = profile[0];
    const Tensor3 a = random_rank_profile(n1, n2, n3, profile, 9000 + 3 * i);

    // Range split invariants.
    const Tensor3 u = random_tensor(n1, n4, n3, 9001 + 3 * i);
    const RangeSplit s = split_against_range(a, u);
    const double scale_u = 1.0 + frobenius_norm(u);
    worst_split = std::max({worst_split,
                            frobenius_norm(sub(add(s.in_range, s.orthogonal), u)) / scale_u,
                            frobenius_norm(tprod(transpose(a), s.orthogonal)) /
                                (1.0 + frobenius_norm(a) * frobenius_norm(u)),
                            frobenius_norm(sub(tprod(tprod(a, pinv(a)), s.in_range),
                                               s.in_range)) / scale_u});

    // Consistency verdict against constructed ground truth.
    const Tensor3 x0 = random_tensor(n2, n4, n3, 9002 + 3 * i);
    const Tensor3 in_range = tprod(a, x0);
    if (i % 2 == 0) {
      if (solve_exact(a, in_range).consistent) ++verdicts;
    } else {
      const Tensor3 w = random_tensor(n1, n4, n3, 9003 + 3 * i);
      const Tensor3 out = split_against_range(a, w).orthogonal;
      if (frobenius_norm(out) < 1e-6) {
        ++verdicts;  // no orthogonal direction exists; nothing to test
      } else if (!solve_exact(a, add(in_range, out)).consistent) {
        ++verdicts;
      }
    }
  }
  if (worst_split > 1e-10) {
    detail = "range split residual " + sci(worst_split);
    return false;
  }
  if (verdicts != 200) {
    detail = "consistency verdict wrong on " + std::to_string(200 - verdicts) + "/200 systems";
    return false;
  }

  // Minimum-norm least squares against sampled alternatives.
  for (int i = 0; i < 50; ++i) {
    const Tensor3 a = random_rank_profile(5, 4, 3, {2, 2, 2}, 9700 + 2 * i);
    const Tensor3 b = random_tensor(5, 2, 3, 9701 + 2 * i);
    const Tensor3 x = lstsq_min_norm(a, b);
    const double best_res = frobenius_norm(sub(tprod(a, x), b));
    const double best_norm = frobenius_norm(x);
    const Tensor3 null_proj = sub(identity(4, 3), tprod(pinv(a), a));
    for (int j = 0; j < 100; ++j) {
      const Tensor3 w = random_tensor(4, 2, 3, 9800 + 100 * i + j);
      if (j % 2 == 0) {
        // Generic competitor: can never beat the least-squares residual.
        const Tensor3 other = add(x, with_frobenius_norm(w, 0.05 * (1.0 + best_norm)));
        if (frobenius_norm(sub(tprod(a, other), b)) < best_res * (1.0 - 1e-9)) {
          detail = "a sampled competitor achieved a smaller residual";
          return false;
        }
      } else {
        // Same-residual competitor from the null space: never a smaller norm.
        const Tensor3 other = add(x, tprod(null_proj, w));
        if (frobenius_norm(other) < best_norm * (1.0 - 1e-9)) {
          detail = "a same-residual competitor had a smaller norm";
          return false;
        }
      }
    }
  }
  detail = "splits within " + sci(worst_split) +
           ", 200/200 verdicts, minimal norm against 100 alternatives x 50 systems";
  return true;
}

// ---- 10: geometric series and guaranteed invertibility ----------------------

bool series_and_invertibility(std::string& detail) {
  double worst_ratio = 0.0;
  for (int i = 0; i < 500; ++i) {
    const int n = 3 + i % 3, n3 = 1 + i % 4;
    const double target = 0.05 + 0.9 * ((i * 7919) % 100) / 100.0;  // spectral norm < 1
    const Tensor3 a =
        with_spectral_norm(random_tensor(n, n, n3, 10000 + 2 * i), target);
    const Tensor3 resolvent = inv(sub(identity(n, n3), a));
    const double bound = 1.0 / (1.0 - spectral_norm(a));
    if (!bound_holds(spectral_norm(resolvent), bound)) {
      detail = "resolvent norm exceeded the geometric-series bound";
      return false;
    }
    worst_ratio = std::max(worst_ratio, spectral_norm(resolvent) / bound);
  }
  for (int i = 0; i < 500; ++i) {
    const int n = 3 + i % 3, n3 = 1 + i % 4;
    const Tensor3 a = random_well_conditioned(n, n, n3, 11000 + 2 * i);
    const double budget = (0.05 + 0.9 * ((i * 104729) % 100) / 100.0) /
                          spectral_norm(pinv(a));  // keeps ||A^-1||*||E|| < 1
    const Tensor3 e = with_spectral_norm(random_tensor(n, n, n3, 11001 + 2 * i), budget);
    try {
      inv(add(a, e));
    } catch (const SingularTensor&) {
      detail = "a perturbation inside the invertibility radius was refused";
      return false;
    }
  }
  detail = "500 resolvent bounds (worst ratio " + sci(worst_ratio) +
           ") and 500 guaranteed inversions";
  return true;
}

// ---- 11: byte-identical reports ---------------------------------------------

bool reproducibility(std::string& detail) {
  const std::string base = g_cli +
      " bounds --theorem T4_2 --dims 5,4,3 --trials 200 --seed 7 --scale 1e-3 --out ";
  const fs::path r1 = g_scratch / "acc_r1.csv";
  const fs::path r2 = g_scratch / "acc_r2.csv";
  const fs::path r3 = g_scratch / "acc_r3.csv";
  if (run_cmd("env TPROD_THREADS=1 " + base + r1.string() + " 2> /dev/null") != 0 ||
      run_cmd("env TPROD_THREADS=1 " + base + r2.string() + " 2> /dev/null") != 0 ||
      run_cmd("env TPROD_THREADS=8 " + base + r3.string() + " 2> /dev/null") != 0) {
    detail = "a report run exited nonzero";
    return false;
  }
  const std::string b1 = slurp(r1);
  if (b1.empty() || b1 != slurp(r2) || b1 != slurp(r3)) {
    detail = "reports differ across runs or thread counts";
    return false;
  }
  detail = "identical bytes across repeated serial and 8-thread runs";
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: acceptance <path-to-binary> <config-dir>\n";
    return 2;
  }
  g_cli = argv[1];
  g_config_dir = argv[2];
  g_scratch = fs::temp_directory_path() / "tpa_acceptance";
  fs::create_directories(g_scratch);

  struct Criterion {
    const char* name;
    bool (*fn)(std::string&);
  };
  const Criterion criteria[] = {
      {"product matches the block circulant oracle", oracle_equivalence},
      {"DFT block-diagonalizes the block circulant", diagonalization},
      {"norm identities and product inequalities", norm_identities},
      {"pseudoinverse satisfies its four identities", penrose_suite},
      {"every perturbation bound dominates the measurement", bound_dominance},
      {"rank-case constants match the table exactly", rank_case_constants},
      {"update inverse equals the direct inverse", update_inverse},
      {"update pseudoinverse: exact when conditioned, refused when not", update_pseudoinverse},
      {"range splits, consistency verdicts, minimal-norm least squares", solvers},
      {"geometric-series bound and guaranteed invertibility", series_and_invertibility},
      {"reports are byte-identical across runs and thread counts", reproducibility},
  };

  int failed = 0;
  const int total = static_cast<int>(sizeof(criteria) / sizeof(criteria[0]));
  for (int i = 0; i < total; ++i) {
    std::string detail;
    bool ok = false;
    try {
      ok = criteria[i].fn(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::cout << "[" << (i + 1) << "/" << total << "] " << (ok ? "pass" : "FAIL") << "  "
              << criteria[i].name << " -- " << detail << "\n";
    if (!ok) ++failed;
  }
  std::cout << (failed == 0 ? "ACCEPTANCE PASSED" : "ACCEPTANCE FAILED") << " (" << (total - failed)
            << "/" << total << ")\n";
  return failed == 0 ? 0 : 1;
}
