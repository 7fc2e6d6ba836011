#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "tpa/errors.hpp"

namespace tpa {

// Dense real third-order tensor, n1 x n2 x n3.
//
// Storage is slice-major: frontal slice index outermost, then column, then
// row. Entry (i,j,k) lives at data[k*n1*n2 + j*n1 + i], so each frontal slice
// is a contiguous column-major n1 x n2 block and maps zero-copy onto Eigen.
// Entries must be finite; constructors reject NaN/Inf. Operations never
// mutate their inputs.
class Tensor3 {
 public:
  Tensor3() : n1_(0), n2_(0), n3_(0) {}

  // Zero tensor of the given shape.
  Tensor3(int n1, int n2, int n3);

  // Takes ownership of `data`, which must hold n1*n2*n3 finite values in
  // slice-major order.
  Tensor3(int n1, int n2, int n3, std::vector<double> data);

  int n1() const { return n1_; }
  int n2() const { return n2_; }
  int n3() const { return n3_; }
  std::int64_t size() const { return static_cast<std::int64_t>(n1_) * n2_ * n3_; }

  const std::vector<double>& data() const { return data_; }

  double operator()(int i, int j, int k) const {
    return data_[static_cast<std::size_t>(k) * n1_ * n2_ + static_cast<std::size_t>(j) * n1_ + i];
  }
  double& operator()(int i, int j, int k) {
    return data_[static_cast<std::size_t>(k) * n1_ * n2_ + static_cast<std::size_t>(j) * n1_ + i];
  }

  // Zero-copy views of frontal slice k (0-based).
  Eigen::Map<const Eigen::MatrixXd> slice(int k) const {
    return {data_.data() + static_cast<std::size_t>(k) * n1_ * n2_, n1_, n2_};
  }
  Eigen::Map<Eigen::MatrixXd> slice(int k) {
    return {data_.data() + static_cast<std::size_t>(k) * n1_ * n2_, n1_, n2_};
  }

  bool same_shape(const Tensor3& other) const {
    return n1_ == other.n1_ && n2_ == other.n2_ && n3_ == other.n3_;
  }

 private:
  int n1_, n2_, n3_;
  std::vector<double> data_;
};

// Elementwise algebra.
Tensor3 add(const Tensor3& a, const Tensor3& b);
Tensor3 sub(const Tensor3& a, const Tensor3& b);
Tensor3 scale(const Tensor3& a, double alpha);

// Tensor transpose: slice 1 is transposed in place, slice k (1-based, k >= 2)
// of the result is the transpose of slice n3+2-k of the input.
Tensor3 transpose(const Tensor3& a);

// Identity tensor: first frontal slice I_n, remaining slices zero.
Tensor3 identity(int n, int n3);

// sqrt of the sum of squared entries.
double frobenius_norm(const Tensor3& a);

double max_abs(const Tensor3& a);

// Tubal scalar: a 1 x 1 x n3 tensor.
class TubalScalar {
 public:
  explicit TubalScalar(Tensor3 t);
  const Tensor3& tensor() const { return t_; }
  int n3() const { return t_.n3(); }
  double entry(int k) const { return t_(0, 0, k); }

 private:
  Tensor3 t_;
};

// <X, Y> = transpose(X) * Y for lateral slices X, Y of shape n1 x 1 x n3.
TubalScalar inner_product(const Tensor3& x, const Tensor3& y);

// unfold stacks the frontal slices vertically into an (n1*n3) x n2 matrix;
// fold inverts it. fold(unfold(A), n3) == A exactly.
Eigen::MatrixXd unfold(const Tensor3& a);
Tensor3 fold(const Eigen::MatrixXd& m, int n3);

}  // namespace tpa
