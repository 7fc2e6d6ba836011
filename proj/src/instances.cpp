#include "tpa/instances.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "facegen.hpp"
#include "tpa/errors.hpp"
#include "tpa/fourier.hpp"
#include "tpa/ops.hpp"

namespace tpa {

namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;
constexpr double kEps = std::numeric_limits<double>::epsilon();

using detail::Rng;

void validate_profile(int n1, int n2, int n3, const std::vector<int>& ranks) {
  if (static_cast<int>(ranks.size()) != n3) {
    throw InfeasibleDims("rank profile length " + std::to_string(ranks.size()) +
                         " does not match n3 = " + std::to_string(n3));
  }
  const int rmax = std::min(n1, n2);
  for (int i = 0; i < n3; ++i) {
    if (ranks[i] < 0 || ranks[i] > rmax) {
      throw InfeasibleDims("rank profile entry " + std::to_string(ranks[i]) +
                           " outside [0, " + std::to_string(rmax) + "]");
    }
    const int partner = (n3 - i) % n3;
    if (ranks[i] != ranks[partner]) {
      throw InfeasibleDims(
          "rank profile must be conjugate-symmetric (entry " + std::to_string(i) + " vs " +
          std::to_string(partner) + "); a real tensor cannot realize it otherwise");
    }
  }
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
  x += kGamma;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial) {
  return splitmix64(master + (trial + 1) * kGamma);
}

Tensor3 random_tensor(int n1, int n2, int n3, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> data(static_cast<std::size_t>(n1) * n2 * n3);
  for (double& v : data) v = detail::normal(rng);
  return {n1, n2, n3, std::move(data)};
}

Tensor3 random_well_conditioned(int n1, int n2, int n3, std::uint64_t seed, double sigma_min,
                                double sigma_max) {
  Rng rng(seed);
  const int m = std::min(n1, n2);
  return detail::assemble_faces(n1, n2, n3, rng, [&](int, bool self, Rng& r) {
    const Eigen::MatrixXcd u = detail::haar_unitary(r, n1, self).leftCols(m);
    const Eigen::MatrixXcd v = detail::haar_unitary(r, n2, self).leftCols(m);
    const Eigen::VectorXd s = detail::uniform_sigmas(r, m, sigma_min, sigma_max);
    return Eigen::MatrixXcd(u * s.asDiagonal() * v.adjoint());
  });
}

Tensor3 random_rank_profile(int n1, int n2, int n3, const std::vector<int>& ranks,
                            std::uint64_t seed, double sigma_min, double sigma_max) {
  validate_profile(n1, n2, n3, ranks);
  Rng rng(seed);
  return detail::assemble_faces(n1, n2, n3, rng, [&](int i, bool self, Rng& r) {
    const int rank = ranks[i];
    if (rank == 0) return Eigen::MatrixXcd(Eigen::MatrixXcd::Zero(n1, n2));
    const Eigen::MatrixXcd u = detail::haar_unitary(r, n1, self).leftCols(rank);
    const Eigen::MatrixXcd v = detail::haar_unitary(r, n2, self).leftCols(rank);
    const Eigen::VectorXd s = detail::uniform_sigmas(r, rank, sigma_min, sigma_max);
    return Eigen::MatrixXcd(u * s.asDiagonal() * v.adjoint());
  });
}

Tensor3 random_singular(int n, int n3, std::uint64_t seed) {
  std::vector<int> ranks(n3, n);
  ranks[0] = n - 1;  // DC face is self-partnered, so the profile stays symmetric
  return random_rank_profile(n, n, n3, ranks, seed);
}

Tensor3 rank_preserving_perturbation(const Tensor3& a, double scale, std::uint64_t seed) {
  const FourierFaces f = to_faces(a);
  const int n1 = a.n1(), n2 = a.n2(), n3 = a.n3();
  Rng rng(seed);
  return detail::assemble_faces(n1, n2, n3, rng, [&](int i, bool self, Rng& r) {
    Eigen::MatrixXcd face = f.faces[i];
    if (self) face.imag().setZero();
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(face, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& s = svd.singularValues();
    const double tau = std::max(n1, n2) * kEps * (s.size() > 0 ? s(0) : 0.0);
    int rank = 0;
    while (rank < s.size() && s(rank) > tau) ++rank;
    if (rank == 0) return Eigen::MatrixXcd(Eigen::MatrixXcd::Zero(n1, n2));
    // Perturb inside the top singular subspaces: rank cannot grow, and the
    // cap of 0.4 * sigma_rank keeps it from collapsing either.
    Eigen::MatrixXcd g = detail::ginibre(r, rank, rank, self);
    const double g_norm = Eigen::JacobiSVD<Eigen::MatrixXcd>(g).singularValues()(0);
    const double target = std::min(scale * s(0), 0.4 * s(rank - 1));
    if (g_norm == 0.0 || target <= 0.0) return Eigen::MatrixXcd(Eigen::MatrixXcd::Zero(n1, n2));
    g *= target / g_norm;
    return Eigen::MatrixXcd(svd.matrixU().leftCols(rank) * g *
                            svd.matrixV().leftCols(rank).adjoint());
  });
}

Tensor3 with_frobenius_norm(const Tensor3& a, double target) {
  const double n = frobenius_norm(a);
  if (n == 0.0) return a;
  return scale(a, target / n);
}

Tensor3 with_spectral_norm(const Tensor3& a, double target) {
  const double n = spectral_norm(a);
  if (n == 0.0) return a;
  return scale(a, target / n);
}

}  // namespace tpa
