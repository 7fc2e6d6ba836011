#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "tpa/tensor.hpp"

namespace tpa {

// Inverse of A + U * B * V via the update identity
//   (A + U*B*V)^-1 = A^-1 - A^-1*U*(B^-1 + V*A^-1*U)^-1*V*A^-1.
// A is n x n x n3, U is n x k x n3, B is k x k x n3, V is k x n x n3; A, B and
// the capacitance B^-1 + V*A^-1*U must all be invertible (SingularTensor
// otherwise, from whichever inversion fails).
Tensor3 smw_inverse(const Tensor3& a, const Tensor3& u, const Tensor3& b, const Tensor3& v);

// Factor bundle for the pseudoinverse update of M = A + U * B * V.
// U splits as X1 + Y1 against the range of A, transpose(V) as X2 + Y2 against
// the range of transpose(A); Ei = Yi * pinv(transpose(Yi) * Yi).
struct SmwFactors {
  Tensor3 u, b, v;
  Tensor3 x1, y1, x2, y2;
  Tensor3 e1, e2;
};

// Builds the bundle from raw factors by range-splitting against A.
SmwFactors build_smw_factors(const Tensor3& a, const Tensor3& u, const Tensor3& b,
                             const Tensor3& v);

// The six algebraic conditions under which the pseudoinverse update formula
// is exact. Each residual is ||lhs - rhs||_F / max(||lhs||_F, ||rhs||_F)
// (0 when both sides vanish); the bundle passes when every residual is at
// most `threshold` (default 1e-8).
struct ConditionReport {
  std::array<double, 6> residuals{};
  std::array<std::string, 6> names{};
  double threshold = 0.0;
  bool satisfied = false;
  double worst() const;
};
ConditionReport check_smw_conditions(const SmwFactors& f, double threshold = 1e-8);

// Pseudoinverse of M = A + U * B * V:
//   M+ = A+ - E2*X2^T*A+ - A+*X1*E1^T + E2*(B+ + X2^T*A+*X1)*E1^T.
// Refuses (ConditionsNotSatisfied, message carries the worst residual) unless
// check_smw_conditions passes.
Tensor3 smw_pinv(const Tensor3& a, const SmwFactors& f);

// Instance families for which the condition set holds by construction.
//   kZeroOrthogonal: Y1 = Y2 = 0, B = 0, X's inside the ranges; degenerate
//     update (E = 0, M = A) exercising the all-zero branches.
//   kOrthonormalComplement: rank-deficient A; Y1, Y2 with per-face orthonormal
//     columns spanning directions orthogonal to the ranges (so Ei = Yi
//     exactly) and invertible B.
enum class SmwFamily { kZeroOrthogonal, kOrthonormalComplement };

struct ConditionedInstance {
  Tensor3 a;
  SmwFactors factors;
  Tensor3 m;  // A + U * B * V
};

// Deterministic construction; A is n x n x n3 and the update has width k.
// Throws InfeasibleDims when n is too small to host a nontrivial orthogonal
// complement (needs 1 <= rank <= n - k per face for the orthonormal family).
ConditionedInstance construct_conditioned_instance(int n, int k, int n3, std::uint64_t seed,
                                                   SmwFamily family = SmwFamily::kOrthonormalComplement);

}  // namespace tpa
