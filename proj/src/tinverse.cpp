#include "tpa/tinverse.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <string>

#include "tpa/fourier.hpp"
#include "tpa/ops.hpp"
#include "tpa/parallel.hpp"

namespace tpa {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

using Svd = Eigen::JacobiSVD<Eigen::MatrixXcd>;

std::vector<int> independent_faces(const FourierFaces& f) {
  std::vector<int> idx;
  for (int i = 0; i < f.n3; ++i) {
    if (i <= f.partner(i)) idx.push_back(i);
  }
  return idx;
}

// Self-partnered faces of a real-origin stack are real up to transform
// roundoff; dropping the noise keeps downstream results exactly
// conjugate-symmetric.
Eigen::MatrixXcd clean_face(const FourierFaces& f, int i) {
  if (f.self_partnered(i)) return f.faces[i].real().cast<std::complex<double>>();
  return f.faces[i];
}

double default_tau(const Eigen::VectorXd& sigma, int n1, int n2) {
  const double sigma_max = sigma.size() > 0 ? sigma(0) : 0.0;
  return std::max(n1, n2) * kEps * sigma_max;
}

int rank_above(const Eigen::VectorXd& sigma, double tau) {
  int r = 0;
  while (r < sigma.size() && sigma(r) > tau) ++r;
  return r;
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

// Runs `op` on the SVD of every independent face (in parallel), mirrors the
// partners by conjugation and assembles a real tensor.
Tensor3 map_face_svds(const Tensor3& a,
                      const std::function<Eigen::MatrixXcd(const Svd&, int)>& op, int out_rows,
                      int out_cols) {
  const FourierFaces in = to_faces(a);
  const std::vector<int> idx = independent_faces(in);
  FourierFaces out;
  out.n1 = out_rows;
  out.n2 = out_cols;
  out.n3 = in.n3;
  out.faces.assign(in.n3, Eigen::MatrixXcd());
  parallel_for(idx.size(), [&](std::size_t t) {
    const int i = idx[t];
    Svd svd(clean_face(in, i), Eigen::ComputeThinU | Eigen::ComputeThinV);
    Eigen::MatrixXcd r = op(svd, i);
    if (in.self_partnered(i)) r.imag().setZero();
    out.faces[i] = std::move(r);
  });
  for (int i = 0; i < in.n3; ++i) {
    if (i > in.partner(i)) out.faces[i] = out.faces[in.partner(i)].conjugate();
  }
  return from_faces(out);
}

}  // namespace

int MultiRank::sum() const { return std::accumulate(ranks.begin(), ranks.end(), 0); }

std::vector<Eigen::VectorXd> face_singular_values(const Tensor3& a) {
  const FourierFaces f = to_faces(a);
  std::vector<Eigen::VectorXd> sigma(f.n3);
  const std::vector<int> idx = independent_faces(f);
  parallel_for(idx.size(), [&](std::size_t t) {
    const int i = idx[t];
    sigma[i] = Svd(clean_face(f, i)).singularValues();
  });
  for (int i = 0; i < f.n3; ++i) {
    if (i > f.partner(i)) sigma[i] = sigma[f.partner(i)];
  }
  return sigma;
}

MultiRank multirank(const Tensor3& a, std::optional<double> tau) {
  const std::vector<Eigen::VectorXd> sigma = face_singular_values(a);
  MultiRank mr;
  mr.ranks.resize(sigma.size());
  mr.tau.resize(sigma.size());
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    mr.tau[i] = tau ? *tau : default_tau(sigma[i], a.n1(), a.n2());
    mr.ranks[i] = rank_above(sigma[i], mr.tau[i]);
  }
  return mr;
}

Tensor3 inv(const Tensor3& a) {
  if (a.n1() != a.n2()) {
    throw DimensionMismatch("inv requires a square tensor, got " + std::to_string(a.n1()) + "x" +
                            std::to_string(a.n2()) + "x" + std::to_string(a.n3()));
  }
  // Scan singular values first so the reported face is the first offender in
  // face order, independent of thread scheduling.
  const std::vector<Eigen::VectorXd> sigma = face_singular_values(a);
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    const double sigma_max = sigma[i](0);
    const double sigma_min = sigma[i](sigma[i].size() - 1);
    const double threshold = a.n1() * kEps * sigma_max * 1e3;
    if (sigma_min <= threshold) {
      throw SingularTensor(static_cast<int>(i), sigma_min, threshold,
                           "tensor is singular or near-singular: face " + std::to_string(i) +
                               " has smallest singular value " + sci(sigma_min) +
                               " (threshold " + sci(threshold) + ")");
    }
  }
  return map_face_svds(
      a,
      [](const Svd& svd, int) {
        return Eigen::MatrixXcd(svd.matrixV() *
                                svd.singularValues().cwiseInverse().asDiagonal() *
                                svd.matrixU().adjoint());
      },
      a.n2(), a.n1());
}

Tensor3 pinv(const Tensor3& a, std::optional<double> tau) {
  const int n1 = a.n1(), n2 = a.n2();
  return map_face_svds(
      a,
      [&](const Svd& svd, int) {
        const Eigen::VectorXd& s = svd.singularValues();
        const double t = tau ? *tau : default_tau(s, n1, n2);
        const int r = rank_above(s, t);
        if (r == 0) return Eigen::MatrixXcd(Eigen::MatrixXcd::Zero(n2, n1));
        return Eigen::MatrixXcd(svd.matrixV().leftCols(r) *
                                s.head(r).cwiseInverse().asDiagonal() *
                                svd.matrixU().leftCols(r).adjoint());
      },
      n2, n1);
}

RangeProjectors range_projectors(const Tensor3& a) {
  const int n1 = a.n1(), n2 = a.n2();
  const FourierFaces in = to_faces(a);
  const std::vector<int> idx = independent_faces(in);
  FourierFaces col, row;
  col.n1 = col.n2 = n1;
  row.n1 = row.n2 = n2;
  col.n3 = row.n3 = in.n3;
  col.faces.assign(in.n3, Eigen::MatrixXcd());
  row.faces.assign(in.n3, Eigen::MatrixXcd());
  parallel_for(idx.size(), [&](std::size_t t) {
    const int i = idx[t];
    Svd svd(clean_face(in, i), Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& s = svd.singularValues();
    const int r = rank_above(s, default_tau(s, n1, n2));
    Eigen::MatrixXcd pc = r == 0 ? Eigen::MatrixXcd::Zero(n1, n1).eval()
                                 : Eigen::MatrixXcd(svd.matrixU().leftCols(r) *
                                                    svd.matrixU().leftCols(r).adjoint());
    Eigen::MatrixXcd pr = r == 0 ? Eigen::MatrixXcd::Zero(n2, n2).eval()
                                 : Eigen::MatrixXcd(svd.matrixV().leftCols(r) *
                                                    svd.matrixV().leftCols(r).adjoint());
    if (in.self_partnered(i)) {
      pc.imag().setZero();
      pr.imag().setZero();
    }
    col.faces[i] = std::move(pc);
    row.faces[i] = std::move(pr);
  });
  for (int i = 0; i < in.n3; ++i) {
    if (i > in.partner(i)) {
      col.faces[i] = col.faces[in.partner(i)].conjugate();
      row.faces[i] = row.faces[in.partner(i)].conjugate();
    }
  }
  return {from_faces(col), from_faces(row)};
}

RangeSplit split_against_range(const Tensor3& a, const Tensor3& u) {
  if (u.n1() != a.n1() || u.n3() != a.n3()) {
    throw DimensionMismatch("split_against_range: U must be " + std::to_string(a.n1()) + "x*x" +
                            std::to_string(a.n3()));
  }
  const Tensor3 x = tprod(range_projectors(a).col, u);
  return {x, sub(u, x)};
}

}  // namespace tpa
