#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "tpa/tensor.hpp"

namespace tpa {

// Frontal faces of a tensor after the mode-3 DFT (unnormalized forward
// transform, inverse scaled by 1/n3). Face i of a real-origin stack satisfies
// faces[i] = conj(faces[(n3 - i) % n3]) for all i (0-based), which makes the
// DC face (and the Nyquist face for even n3) real.
struct FourierFaces {
  int n1 = 0, n2 = 0, n3 = 0;
  std::vector<Eigen::MatrixXcd> faces;

  // Partner of face i under conjugate symmetry.
  int partner(int i) const { return (n3 - i) % n3; }
  bool self_partnered(int i) const { return partner(i) == i; }
};

// Mode-3 DFT of every tube.
FourierFaces to_faces(const Tensor3& a);

// Inverse mode-3 DFT. The imaginary part of the result is measured before
// being discarded; if max|Im| exceeds 1e-10 * (1 + ||F||_F) the face data was
// not conjugate-symmetric and ImaginaryResidualExceeded is thrown.
Tensor3 from_faces(const FourierFaces& f);

// sqrt of total squared magnitude over all faces (norm of the stacked data).
double face_stack_norm(const FourierFaces& f);

// Explicit n x n DFT matrix, entry (j,k) = exp(-2*pi*i*j*k/n), 0-based.
// F/sqrt(n) is unitary. O(n^2) construction; this is the oracle the fast
// transform is tested against.
Eigen::MatrixXcd dft_matrix(int n);

// Applies `op` face-wise to a real tensor and returns the real result.
// Only independent faces (i <= n3-i) are computed; partners are mirrored by
// conjugation and self-partnered outputs have their imaginary part dropped,
// so the output face stack is exactly conjugate-symmetric. `op` must commute
// with complex conjugation (true for all matrix functions used here).
// out_rows/out_cols give the face shape produced by `op`.
Tensor3 map_faces(const Tensor3& a,
                  const std::function<Eigen::MatrixXcd(const Eigen::MatrixXcd&)>& op,
                  int out_rows, int out_cols);

// Same, for a binary face-wise operation on two tensors sharing n3.
Tensor3 map_faces2(const Tensor3& a, const Tensor3& b,
                   const std::function<Eigen::MatrixXcd(const Eigen::MatrixXcd&,
                                                         const Eigen::MatrixXcd&)>& op,
                   int out_rows, int out_cols);

}  // namespace tpa
