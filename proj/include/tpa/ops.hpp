#pragma once

#include "tpa/tensor.hpp"

namespace tpa {

// t-product C = A * B for A (n1 x n2 x n3), B (n2 x n4 x n3), computed
// face-wise in the Fourier domain. Equals fold(bcirc(A) * unfold(B)) and
// reduces to the matrix product when n3 == 1.
Tensor3 tprod(const Tensor3& a, const Tensor3& b);

// Largest singular value over all Fourier faces; equals ||bcirc(A)||_2.
double spectral_norm(const Tensor3& a);

}  // namespace tpa
