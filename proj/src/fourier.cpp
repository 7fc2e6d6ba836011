#include "tpa/fourier.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "tpa/parallel.hpp"

namespace tpa {

namespace {

void check_faces(const FourierFaces& f, const char* op) {
  if (f.n3 <= 0 || f.faces.size() != static_cast<std::size_t>(f.n3)) {
    throw DimensionMismatch(std::string(op) + ": face count does not match n3");
  }
  for (const auto& face : f.faces) {
    if (face.rows() != f.n1 || face.cols() != f.n2) {
      throw DimensionMismatch(std::string(op) + ": inconsistent face shapes");
    }
  }
}

// The length-1 transform is the identity; kissfft does not accept nfft == 1.
void fft_fwd(std::vector<std::complex<double>>& out, const std::vector<std::complex<double>>& in) {
  if (in.size() == 1) {
    out = in;
    return;
  }
  static thread_local Eigen::FFT<double> fft;
  fft.fwd(out, in);
}

void fft_inv(std::vector<std::complex<double>>& out, const std::vector<std::complex<double>>& in) {
  if (in.size() == 1) {
    out = in;
    return;
  }
  static thread_local Eigen::FFT<double> fft;
  fft.inv(out, in);
}

}  // namespace

FourierFaces to_faces(const Tensor3& a) {
  const int n1 = a.n1(), n2 = a.n2(), n3 = a.n3();
  FourierFaces f;
  f.n1 = n1;
  f.n2 = n2;
  f.n3 = n3;
  f.faces.assign(n3, Eigen::MatrixXcd(n1, n2));
  // One length-n3 transform per tube; tubes write disjoint slots.
  parallel_for(static_cast<std::size_t>(n1) * n2, [&](std::size_t t) {
    const int i = static_cast<int>(t % n1);
    const int j = static_cast<int>(t / n1);
    std::vector<std::complex<double>> in(n3), out(n3);
    for (int k = 0; k < n3; ++k) in[k] = a(i, j, k);
    fft_fwd(out, in);
    for (int k = 0; k < n3; ++k) f.faces[k](i, j) = out[k];
  });
  return f;
}

Tensor3 from_faces(const FourierFaces& f) {
  check_faces(f, "from_faces");
  const int n1 = f.n1, n2 = f.n2, n3 = f.n3;
  Tensor3 a(n1, n2, n3);
  std::vector<double> tube_residual(static_cast<std::size_t>(n1) * n2, 0.0);
  parallel_for(static_cast<std::size_t>(n1) * n2, [&](std::size_t t) {
    const int i = static_cast<int>(t % n1);
    const int j = static_cast<int>(t / n1);
    std::vector<std::complex<double>> in(n3), out(n3);
    for (int k = 0; k < n3; ++k) in[k] = f.faces[k](i, j);
    fft_inv(out, in);
    double r = 0.0;
    for (int k = 0; k < n3; ++k) {
      a(i, j, k) = out[k].real();
      r = std::max(r, std::abs(out[k].imag()));
    }
    tube_residual[t] = r;
  });
  double residual = 0.0;
  for (double r : tube_residual) residual = std::max(residual, r);
  const double threshold = 1e-10 * (1.0 + face_stack_norm(f));
  if (residual > threshold) {
    throw ImaginaryResidualExceeded(
        residual, threshold,
        "face data is not conjugate-symmetric: imaginary residual " + std::to_string(residual) +
            " exceeds " + std::to_string(threshold));
  }
  return a;
}

double face_stack_norm(const FourierFaces& f) {
  double s = 0.0;
  for (const auto& face : f.faces) s += face.squaredNorm();
  return std::sqrt(s);
}

Eigen::MatrixXcd dft_matrix(int n) {
  if (n <= 0) throw DimensionMismatch("dft_matrix: n must be positive");
  Eigen::MatrixXcd f(n, n);
  const double step = -2.0 * std::numbers::pi / n;
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      f(j, k) = std::polar(1.0, step * ((static_cast<long long>(j) * k) % n));
    }
  }
  return f;
}

Tensor3 map_faces(const Tensor3& a,
                  const std::function<Eigen::MatrixXcd(const Eigen::MatrixXcd&)>& op,
                  int out_rows, int out_cols) {
  const FourierFaces in = to_faces(a);
  FourierFaces out;
  out.n1 = out_rows;
  out.n2 = out_cols;
  out.n3 = in.n3;
  out.faces.assign(in.n3, Eigen::MatrixXcd());
  // Independent faces only; partners are conjugate mirrors, so the output
  // stack is exactly conjugate-symmetric and self-partnered faces exactly real.
  std::vector<int> independent;
  for (int i = 0; i < in.n3; ++i) {
    if (i <= in.partner(i)) independent.push_back(i);
  }
  parallel_for(independent.size(), [&](std::size_t idx) {
    const int i = independent[idx];
    Eigen::MatrixXcd r = op(in.faces[i]);
    if (r.rows() != out_rows || r.cols() != out_cols) {
      throw DimensionMismatch("map_faces: face op produced an unexpected shape");
    }
    if (in.self_partnered(i)) r.imag().setZero();
    out.faces[i] = std::move(r);
  });
  for (int i = 0; i < in.n3; ++i) {
    if (i > in.partner(i)) out.faces[i] = out.faces[in.partner(i)].conjugate();
  }
  return from_faces(out);
}

Tensor3 map_faces2(const Tensor3& a, const Tensor3& b,
                   const std::function<Eigen::MatrixXcd(const Eigen::MatrixXcd&,
                                                         const Eigen::MatrixXcd&)>& op,
                   int out_rows, int out_cols) {
  if (a.n3() != b.n3()) {
    throw DimensionMismatch("face-wise binary op: n3 " + std::to_string(a.n3()) + " vs " +
                            std::to_string(b.n3()));
  }
  const FourierFaces fa = to_faces(a);
  const FourierFaces fb = to_faces(b);
  FourierFaces out;
  out.n1 = out_rows;
  out.n2 = out_cols;
  out.n3 = fa.n3;
  out.faces.assign(fa.n3, Eigen::MatrixXcd());
  std::vector<int> independent;
  for (int i = 0; i < fa.n3; ++i) {
    if (i <= fa.partner(i)) independent.push_back(i);
  }
  parallel_for(independent.size(), [&](std::size_t idx) {
    const int i = independent[idx];
    Eigen::MatrixXcd r = op(fa.faces[i], fb.faces[i]);
    if (r.rows() != out_rows || r.cols() != out_cols) {
      throw DimensionMismatch("map_faces2: face op produced an unexpected shape");
    }
    if (fa.self_partnered(i)) r.imag().setZero();
    out.faces[i] = std::move(r);
  });
  for (int i = 0; i < fa.n3; ++i) {
    if (i > fa.partner(i)) out.faces[i] = out.faces[fa.partner(i)].conjugate();
  }
  return from_faces(out);
}

}  // namespace tpa
