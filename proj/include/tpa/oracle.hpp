#pragma once

#include <Eigen/Dense>

#include "tpa/tensor.hpp"

namespace tpa::oracle {

// Block circulant matrix of A: (n1*n3) x (n2*n3), block (i,j) (0-based) is
// frontal slice (i - j) mod n3. Reference semantics for the t-product; used
// by tests, not by the production path.
Eigen::MatrixXd bcirc(const Tensor3& a);

// t-product through the block circulant: fold(bcirc(A) * unfold(B)).
Tensor3 tprod_bcirc(const Tensor3& a, const Tensor3& b);

}  // namespace tpa::oracle
