#include "tpa/tensor.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace tpa {

namespace {

void check_dims(int n1, int n2, int n3) {
  if (n1 <= 0 || n2 <= 0 || n3 <= 0) {
    throw DimensionMismatch("tensor dims must be positive, got " + std::to_string(n1) + "x" +
                            std::to_string(n2) + "x" + std::to_string(n3));
  }
}

void check_same_shape(const Tensor3& a, const Tensor3& b, const char* op) {
  if (!a.same_shape(b)) {
    throw DimensionMismatch(std::string(op) + ": shapes " + std::to_string(a.n1()) + "x" +
                            std::to_string(a.n2()) + "x" + std::to_string(a.n3()) + " vs " +
                            std::to_string(b.n1()) + "x" + std::to_string(b.n2()) + "x" +
                            std::to_string(b.n3()));
  }
}

}  // namespace

Tensor3::Tensor3(int n1, int n2, int n3) : n1_(n1), n2_(n2), n3_(n3) {
  check_dims(n1, n2, n3);
  data_.assign(static_cast<std::size_t>(n1) * n2 * n3, 0.0);
}

Tensor3::Tensor3(int n1, int n2, int n3, std::vector<double> data)
    : n1_(n1), n2_(n2), n3_(n3), data_(std::move(data)) {
  check_dims(n1, n2, n3);
  if (data_.size() != static_cast<std::size_t>(size())) {
    throw DimensionMismatch("data length " + std::to_string(data_.size()) +
                            " does not match dims product " + std::to_string(size()));
  }
  for (double v : data_) {
    if (!std::isfinite(v)) throw NonFiniteValue("tensor entries must be finite");
  }
}

Tensor3 add(const Tensor3& a, const Tensor3& b) {
  check_same_shape(a, b, "add");
  std::vector<double> d(a.data().size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = a.data()[i] + b.data()[i];
  return {a.n1(), a.n2(), a.n3(), std::move(d)};
}

Tensor3 sub(const Tensor3& a, const Tensor3& b) {
  check_same_shape(a, b, "sub");
  std::vector<double> d(a.data().size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = a.data()[i] - b.data()[i];
  return {a.n1(), a.n2(), a.n3(), std::move(d)};
}

Tensor3 scale(const Tensor3& a, double alpha) {
  std::vector<double> d(a.data().size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = alpha * a.data()[i];
  return {a.n1(), a.n2(), a.n3(), std::move(d)};
}

Tensor3 transpose(const Tensor3& a) {
  Tensor3 t(a.n2(), a.n1(), a.n3());
  t.slice(0) = a.slice(0).transpose();
  for (int k = 1; k < a.n3(); ++k) {
    t.slice(k) = a.slice(a.n3() - k).transpose();
  }
  return t;
}

Tensor3 identity(int n, int n3) {
  Tensor3 e(n, n, n3);
  e.slice(0) = Eigen::MatrixXd::Identity(n, n);
  return e;
}

double frobenius_norm(const Tensor3& a) {
  double s = 0.0;
  for (double v : a.data()) s += v * v;
  return std::sqrt(s);
}

double max_abs(const Tensor3& a) {
  double m = 0.0;
  for (double v : a.data()) m = std::max(m, std::abs(v));
  return m;
}

TubalScalar::TubalScalar(Tensor3 t) : t_(std::move(t)) {
  if (t_.n1() != 1 || t_.n2() != 1) {
    throw DimensionMismatch("tubal scalar must be 1x1xn3, got " + std::to_string(t_.n1()) + "x" +
                            std::to_string(t_.n2()) + "x" + std::to_string(t_.n3()));
  }
}

TubalScalar inner_product(const Tensor3& x, const Tensor3& y) {
  if (x.n2() != 1 || y.n2() != 1) {
    throw DimensionMismatch("inner_product expects lateral slices (n1 x 1 x n3)");
  }
  check_same_shape(x, y, "inner_product");
  // Slice k of transpose(X) * Y written out as a circular correlation:
  // entry k = sum_j <X slice j, Y slice (j+k) mod n3>. Entry 0 is the
  // Frobenius inner product of X and Y.
  const int n3 = x.n3();
  Tensor3 out(1, 1, n3);
  for (int k = 0; k < n3; ++k) {
    double s = 0.0;
    for (int j = 0; j < n3; ++j) {
      s += x.slice(j).col(0).dot(y.slice((j + k) % n3).col(0));
    }
    out(0, 0, k) = s;
  }
  return TubalScalar(out);
}

Eigen::MatrixXd unfold(const Tensor3& a) {
  Eigen::MatrixXd m(static_cast<std::int64_t>(a.n1()) * a.n3(), a.n2());
  for (int k = 0; k < a.n3(); ++k) {
    m.middleRows(static_cast<std::int64_t>(k) * a.n1(), a.n1()) = a.slice(k);
  }
  return m;
}

Tensor3 fold(const Eigen::MatrixXd& m, int n3) {
  if (n3 <= 0 || m.rows() % n3 != 0) {
    throw DimensionMismatch("fold: row count " + std::to_string(m.rows()) +
                            " not divisible by n3 = " + std::to_string(n3));
  }
  const int n1 = static_cast<int>(m.rows()) / n3;
  Tensor3 a(n1, static_cast<int>(m.cols()), n3);
  for (int k = 0; k < n3; ++k) {
    a.slice(k) = m.middleRows(static_cast<std::int64_t>(k) * n1, n1);
  }
  return a;
}

}  // namespace tpa
