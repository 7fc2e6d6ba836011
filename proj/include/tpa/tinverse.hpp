#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "tpa/tensor.hpp"

namespace tpa {

// Per-face ranks under the tolerances actually used. ranks[i] counts the
// singular values of Fourier face i strictly above tau[i].
struct MultiRank {
  std::vector<int> ranks;
  std::vector<double> tau;

  int sum() const;
  bool operator==(const MultiRank& other) const { return ranks == other.ranks; }
};

// Singular values of every Fourier face, descending within each face.
std::vector<Eigen::VectorXd> face_singular_values(const Tensor3& a);

// Per-face rank. With no explicit tolerance, face i uses
// tau_i = max(n1,n2) * eps * sigma_max(face i).
MultiRank multirank(const Tensor3& a, std::optional<double> tau = std::nullopt);

// t-inverse of a square tensor: every Fourier face inverted. Refuses when any
// face has sigma_min <= n * eps * sigma_max * 1e3 and throws SingularTensor
// naming the offending face and its smallest singular value.
Tensor3 inv(const Tensor3& a);

// Moore-Penrose pseudoinverse: face-wise SVD with singular values at or below
// the rank tolerance truncated. Satisfies the four Penrose identities under
// the t-product. pinv of the zero tensor is the zero (transposed-shape) tensor.
Tensor3 pinv(const Tensor3& a, std::optional<double> tau = std::nullopt);

// Orthogonal projectors onto the range of A and of transpose(A):
// col = A * pinv(A) (n1 x n1 x n3), row = pinv(A) * A (n2 x n2 x n3). Built
// face-wise from the SVD bases, so they are idempotent and t-symmetric to
// machine precision.
struct RangeProjectors {
  Tensor3 col;
  Tensor3 row;
};
RangeProjectors range_projectors(const Tensor3& a);

// Splits U (n1 x k x n3) as U = X + Y with X = P_col * U in the range of A
// and Y orthogonal to it (transpose(A) * Y = 0).
struct RangeSplit {
  Tensor3 in_range;    // X
  Tensor3 orthogonal;  // Y
};
RangeSplit split_against_range(const Tensor3& a, const Tensor3& u);

}  // namespace tpa
