// Internal helpers for building real tensors face-by-face in the Fourier
// domain. Generation runs serially on one RNG so results are reproducible
// regardless of thread count.
#pragma once

#include <Eigen/Dense>
#include <Eigen/QR>
#include <complex>
#include <functional>
#include <random>
#include <utility>

#include "tpa/fourier.hpp"
#include "tpa/tensor.hpp"

namespace tpa::detail {

using Rng = std::mt19937_64;

inline double normal(Rng& rng) {
  std::normal_distribution<double> d;
  return d(rng);
}

// Gaussian matrix; real_only restricts to the real subspace (used for
// self-partnered faces, which must stay real).
inline Eigen::MatrixXcd ginibre(Rng& rng, int rows, int cols, bool real_only) {
  Eigen::MatrixXcd g(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = real_only ? 0.0 : normal(rng);
      g(i, j) = std::complex<double>(re, im);
    }
  }
  return g;
}

// Unitary (orthogonal when real_only) factor of a Gaussian matrix.
inline Eigen::MatrixXcd haar_unitary(Rng& rng, int n, bool real_only) {
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(ginibre(rng, n, n, real_only));
  return qr.householderQ();
}

inline Eigen::VectorXd uniform_sigmas(Rng& rng, int count, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  Eigen::VectorXd s(count);
  for (int i = 0; i < count; ++i) s(i) = d(rng);
  return s;
}

// Builds a real tensor from per-face constructions: `build(i, self, rng)`
// runs serially over independent faces, partners are conjugate mirrors.
inline Tensor3 assemble_faces(int n1, int n2, int n3, Rng& rng,
                              const std::function<Eigen::MatrixXcd(int, bool, Rng&)>& build) {
  FourierFaces f;
  f.n1 = n1;
  f.n2 = n2;
  f.n3 = n3;
  f.faces.assign(n3, Eigen::MatrixXcd());
  for (int i = 0; i < n3; ++i) {
    if (i > f.partner(i)) continue;
    Eigen::MatrixXcd face = build(i, f.self_partnered(i), rng);
    if (f.self_partnered(i)) face.imag().setZero();
    f.faces[i] = std::move(face);
  }
  for (int i = 0; i < n3; ++i) {
    if (i > f.partner(i)) f.faces[i] = f.faces[f.partner(i)].conjugate();
  }
  return from_faces(f);
}

}  // namespace tpa::detail
