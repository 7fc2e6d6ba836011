#pragma once

#include <optional>

#include "tpa/tensor.hpp"

namespace tpa {

// Result of solving A * X = D in the exact (consistency-checked) sense.
struct SolveResult {
  Tensor3 solution;               // A+*D + (I - A+*A)*free
  Tensor3 particular;             // A+*D
  Tensor3 homogeneous_projector;  // I - A+*A (n2 x n2 x n3)
  bool consistent = false;        // residual <= 1e-9 * ||D||_F
  double consistency_residual = 0.0;  // ||A*A+*D - D||_F
};

// General solution of A * X = D for A (n1 x n2 x n3), D (n1 x n4 x n3).
// The system is consistent exactly when A*A+*D = D; `free` (n2 x n4 x n3,
// zero when omitted) parameterizes the homogeneous part.
SolveResult solve_exact(const Tensor3& a, const Tensor3& d,
                        const std::optional<Tensor3>& free = std::nullopt);

// Minimum-Frobenius-norm least-squares solution argmin ||A*X - B||_F,
// X = A+ * B. For consistent systems this is the minimum-norm solution.
Tensor3 lstsq_min_norm(const Tensor3& a, const Tensor3& b);

}  // namespace tpa
