#include "tpa/solve.hpp"

#include <string>

#include "tpa/errors.hpp"
#include "tpa/ops.hpp"
#include "tpa/tinverse.hpp"

namespace tpa {

SolveResult solve_exact(const Tensor3& a, const Tensor3& d, const std::optional<Tensor3>& free) {
  if (d.n1() != a.n1() || d.n3() != a.n3()) {
    throw DimensionMismatch("solve_exact: right-hand side must be n1 x n4 with A's depth");
  }
  if (free && (free->n1() != a.n2() || free->n2() != d.n2() || free->n3() != a.n3())) {
    throw DimensionMismatch("solve_exact: free tensor must be n2 x n4 with A's depth");
  }

  const Tensor3 ap = pinv(a);
  SolveResult r;
  r.particular = tprod(ap, d);
  r.homogeneous_projector = sub(identity(a.n2(), a.n3()), tprod(ap, a));
  r.consistency_residual = frobenius_norm(sub(tprod(a, r.particular), d));
  r.consistent = r.consistency_residual <= 1e-9 * frobenius_norm(d);
  r.solution = free ? add(r.particular, tprod(r.homogeneous_projector, *free)) : r.particular;
  return r;
}

Tensor3 lstsq_min_norm(const Tensor3& a, const Tensor3& b) {
  if (b.n1() != a.n1() || b.n3() != a.n3()) {
    throw DimensionMismatch("lstsq_min_norm: right-hand side must be n1 x n4 with A's depth");
  }
  return tprod(pinv(a), b);
}

}  // namespace tpa
