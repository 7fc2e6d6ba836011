#include "tpa/ops.hpp"

#include <Eigen/SVD>
#include <string>

#include "tpa/fourier.hpp"

namespace tpa {

Tensor3 tprod(const Tensor3& a, const Tensor3& b) {
  if (a.n2() != b.n1() || a.n3() != b.n3()) {
    throw DimensionMismatch("tprod: " + std::to_string(a.n1()) + "x" + std::to_string(a.n2()) +
                            "x" + std::to_string(a.n3()) + " * " + std::to_string(b.n1()) + "x" +
                            std::to_string(b.n2()) + "x" + std::to_string(b.n3()));
  }
  return map_faces2(
      a, b, [](const Eigen::MatrixXcd& fa, const Eigen::MatrixXcd& fb) { return fa * fb; },
      a.n1(), b.n2());
}

double spectral_norm(const Tensor3& a) {
  const FourierFaces f = to_faces(a);
  double s = 0.0;
  for (int i = 0; i < f.n3; ++i) {
    if (i > f.partner(i)) continue;  // conjugate faces share singular values
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(f.faces[i]);
    s = std::max(s, svd.singularValues()(0));
  }
  return s;
}

}  // namespace tpa
