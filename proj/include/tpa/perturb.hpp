#pragma once

#include <string>
#include <vector>

#include "tpa/smw.hpp"
#include "tpa/tensor.hpp"
#include "tpa/tinverse.hpp"

namespace tpa {

// A calculator either applies (hypotheses hold, bounds computed) or reports
// which hypothesis failed. Hypothesis violations are data, not errors: under
// aggressive perturbation scales they are expected and the caller decides
// what to do with them.
enum class Applicability { kApplicable, kHypothesisViolated };

// Secondary inequality checked alongside a calculator's headline bounds
// (size bounds, corollary forms, proof variants).
struct ExtraBound {
  std::string name;
  double bound = 0.0;
  double actual = 0.0;
  bool holds = false;
};

// One verified perturbation bound: the predicted bound, the measured actual,
// and whether actual <= bound at the shared tolerance, in both norms.
// kappa/gamma/mu/lambda are the constants the bound was assembled from; NaN
// where a particular constant plays no part.
struct BoundReport {
  Applicability applicability = Applicability::kHypothesisViolated;
  std::string hypothesis;  // human-readable reason when not applicable

  double bound_f = 0.0, actual_f = 0.0;
  double bound_2 = 0.0, actual_2 = 0.0;
  bool holds_f = false, holds_2 = false;

  double kappa_f = 0.0, kappa_2 = 0.0;
  double gamma_f = 0.0, gamma_2 = 0.0;
  double mu = 0.0, lambda = 0.0;

  std::vector<ExtraBound> extras;

  bool applicable() const { return applicability == Applicability::kApplicable; }
  bool all_hold() const;  // headline bounds and every extra
};

// Shared dominance predicate: actual <= bound * (1 + 1e-9) + 1e-12.
bool bound_holds(double actual, double bound);

// x / y with the 0/0 = 0 convention (perturbation ratios from zero data).
double safe_ratio(double x, double y);

// Constant pair for the pseudoinverse perturbation bounds, selected by how
// the total rank sum compares to the tensor's flattened dimensions:
//   sum < min(n1*n3, n2*n3)           -> mu = sqrt(2), lambda = (1+sqrt 5)/2
//   sum = min, n1 != n2               -> mu = 1,       lambda = sqrt(2)
//   sum = n1*n3 = n2*n3 (full square) -> mu = 1,       lambda = 1
struct MuLambda {
  enum class RankCase { kDeficient, kFullNonSquare, kFullSquare };
  RankCase rank_case;
  double mu;
  double lambda;
};
MuLambda mu_lambda(const MultiRank& rank, int n1, int n2, int n3);

// ---- inverse perturbation ----------------------------------------------

// A-posteriori bound on the inverse: measures B = A + E directly.
//   rel_F <= kappa_F * ||E||_2 / ||A||_F, kappa_F = ||A||_F * ||B^-1||_2
//   rel_2 <= kappa_2 * ||E||_2 / ||A||_2, kappa_2 = ||A||_2 * ||B^-1||_2
// Extra: the proof-stage variant rel_F <= sqrt(n3) * ||E||_2 * ||B^-1||_F.
// Hypotheses: A and B invertible.
BoundReport inv_perturb_posterior(const Tensor3& a, const Tensor3& e);

// A-priori bound using only A and E, valid while ||A^-1||_2 * ||E||_2 < 1:
//   rel <= (kappa / gamma) * ||E||_2 / ||A||,
// with kappa_F = ||A||_F*||A^-1||_2, kappa_2 = ||A||_2*||A^-1||_2 and
// gamma = 1 - kappa*||E||_2/||A||. Extras carry the size bounds
// ||B^-1|| <= ||A^-1|| / gamma in both norms.
BoundReport inv_perturb_prior(const Tensor3& a, const Tensor3& e);

// Perturbed linear system (A+E)*(X+H) = B+K versus A*X = B:
//   rel_F(H) <= (kappa_F/gamma_F) * (||E||_2/||A||_F + sqrt(n3)*||K||_F/||B||_F)
//   rel_2(H) <= (kappa_2/gamma_2) * (||E||_2/||A||_2 + ||K||_2/||B||_2)
// Hypotheses: A invertible, ||A^-1||_2*||E||_2 < 1, B nonzero.
BoundReport equation_perturb(const Tensor3& a, const Tensor3& e, const Tensor3& b,
                             const Tensor3& k);

// ---- pseudoinverse perturbation ----------------------------------------

// Rank-free absolute bound on B+ - A+ (B = A + E):
//   ||B+ - A+||_F <= sqrt(2) * max(||A+||_2, ||B+||_2)^2 * ||E||_F
//   ||B+ - A+||_2 <= (1+sqrt 5)/2 * max(||A+||_2, ||B+||_2)^2 * ||E||_2
// Always applicable.
BoundReport pinv_perturb_general(const Tensor3& a, const Tensor3& e);

// Sharper absolute bound when multirank(B) == multirank(A):
//   ||B+ - A+||_F <= mu * ||A+||_2 * ||B+||_2 * ||E||_F   (same with lambda,
// spectral norms). Extras carry the relative corollary
//   ||B+ - A+||_F / ||B+||_2 <= mu * kappa * ||E||_F / ||A||_2, kappa =
// ||A+||_2*||A||_2 (and its spectral form with lambda).
BoundReport pinv_perturb_rank_preserving(const Tensor3& a, const Tensor3& e);

// Relative bound normalized by ||A+||_2, valid while the ranks match and
// gamma = 1 - ||A+||_2*||E||_2 > 0:
//   ||B+ - A+||_F / ||A+||_2 <= (mu*kappa_F/gamma) * ||E||_F/||A||_F
//   ||B+ - A+||_2 / ||A+||_2 <= (mu*kappa_2/gamma) * ||E||_2/||A||_2
// with kappa_F = ||A+||_2*||A||_F, kappa_2 = ||A+||_2*||A||_2. Extra: size
// bound ||B+||_2 <= ||A+||_2 / gamma.
BoundReport pinv_perturb_relative(const Tensor3& a, const Tensor3& e);

// Least-squares solution perturbation, X = A+*B versus (A+E)+*(B+K):
// absolute bound on ||H||_F built from kappa_F/gamma with residual R = B-A*X
// and Y = transpose(A+); the fourth term sqrt(n3)*||E||_2*||Y*X||_F drops
// when every face has full column rank. Spectral analogue has no sqrt(n3).
// Hypotheses: ranks match, gamma = 1 - ||A+||_2*||E||_2 > 0.
BoundReport lstsq_perturb(const Tensor3& a, const Tensor3& e, const Tensor3& b,
                          const Tensor3& k);

// ---- structured update + right-hand-side perturbation ------------------

// Solution drift for A*X = D versus M+*(D+H) where M = A + U*B*V carries a
// structured update admitting the pseudoinverse update formula, the update
// pieces are bounded by eps_a relative to A (||Xi|| <= eps_a*||A||,
// ||Ei|| <= eps_a*||A||, ||B+|| <= eps_a*||A||, per norm) and ||H|| <=
// eps_d*||D||. Relative drift bounds:
//   F: (1+eps_d)*(2*n3^2*eps_a^2*||A+||_F + n3^2*eps_a^3*||A||_F
//        + n3^3*eps_a^4*||A||_F^2*||A+||_F) + n3*eps_d*||A||_F*||A+||_F
//   2: same shape with every n3 power equal to 1 and spectral norms.
// Hypotheses violations name the failing inequality; the factor bundle must
// pass check_smw_conditions.
BoundReport smw_solve_perturb(const Tensor3& a, const SmwFactors& f, const Tensor3& d,
                              const Tensor3& h, double eps_a, double eps_d);

}  // namespace tpa
