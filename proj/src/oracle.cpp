#include "tpa/oracle.hpp"

#include <string>

namespace tpa::oracle {

Eigen::MatrixXd bcirc(const Tensor3& a) {
  const int n1 = a.n1(), n2 = a.n2(), n3 = a.n3();
  Eigen::MatrixXd m(static_cast<std::int64_t>(n1) * n3, static_cast<std::int64_t>(n2) * n3);
  for (int bi = 0; bi < n3; ++bi) {
    for (int bj = 0; bj < n3; ++bj) {
      m.block(static_cast<std::int64_t>(bi) * n1, static_cast<std::int64_t>(bj) * n2, n1, n2) =
          a.slice(((bi - bj) % n3 + n3) % n3);
    }
  }
  return m;
}

Tensor3 tprod_bcirc(const Tensor3& a, const Tensor3& b) {
  if (a.n2() != b.n1() || a.n3() != b.n3()) {
    throw DimensionMismatch("tprod: " + std::to_string(a.n1()) + "x" + std::to_string(a.n2()) +
                            "x" + std::to_string(a.n3()) + " * " + std::to_string(b.n1()) + "x" +
                            std::to_string(b.n2()) + "x" + std::to_string(b.n3()));
  }
  return fold(bcirc(a) * unfold(b), a.n3());
}

}  // namespace tpa::oracle
