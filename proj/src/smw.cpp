#include "tpa/smw.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <string>

#include "facegen.hpp"
#include "tpa/errors.hpp"
#include "tpa/instances.hpp"
#include "tpa/ops.hpp"
#include "tpa/tinverse.hpp"

namespace tpa {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw DimensionMismatch(msg);
}

Tensor3 invert_labeled(const Tensor3& t, const std::string& label) {
  try {
    return inv(t);
  } catch (const SingularTensor& e) {
    throw SingularTensor(e.face(), e.sigma_min(), e.threshold(),
                         "smw_inverse: " + label + " is not invertible: " + e.what());
  }
}

// ||lhs - rhs||_F normalized by the larger side; 0 when both sides vanish.
double pair_residual(const Tensor3& lhs, const Tensor3& rhs) {
  const double denom = std::max(frobenius_norm(lhs), frobenius_norm(rhs));
  if (denom == 0.0) return 0.0;
  return frobenius_norm(sub(lhs, rhs)) / denom;
}

}  // namespace

Tensor3 smw_inverse(const Tensor3& a, const Tensor3& u, const Tensor3& b, const Tensor3& v) {
  const int n = a.n1(), n3 = a.n3(), k = u.n2();
  require(a.n2() == n, "smw_inverse: A must be square");
  require(u.n1() == n && u.n3() == n3, "smw_inverse: U must be n x k with A's depth");
  require(b.n1() == k && b.n2() == k && b.n3() == n3, "smw_inverse: B must be k x k with A's depth");
  require(v.n1() == k && v.n2() == n && v.n3() == n3, "smw_inverse: V must be k x n with A's depth");

  const Tensor3 ainv = invert_labeled(a, "A");
  const Tensor3 binv = invert_labeled(b, "B");
  const Tensor3 ainv_u = tprod(ainv, u);
  const Tensor3 v_ainv = tprod(v, ainv);
  const Tensor3 cap = add(binv, tprod(v, ainv_u));
  const Tensor3 cap_inv = invert_labeled(cap, "capacitance B^-1 + V*A^-1*U");
  return sub(ainv, tprod(ainv_u, tprod(cap_inv, v_ainv)));
}

SmwFactors build_smw_factors(const Tensor3& a, const Tensor3& u, const Tensor3& b,
                             const Tensor3& v) {
  const int k = u.n2();
  require(u.n1() == a.n1() && u.n3() == a.n3(),
          "build_smw_factors: U must be n1 x k with A's depth");
  require(b.n1() == k && b.n2() == k && b.n3() == a.n3(),
          "build_smw_factors: B must be k x k with A's depth");
  require(v.n1() == k && v.n2() == a.n2() && v.n3() == a.n3(),
          "build_smw_factors: V must be k x n2 with A's depth");

  SmwFactors f;
  f.u = u;
  f.b = b;
  f.v = v;
  const RangeSplit s1 = split_against_range(a, u);
  f.x1 = s1.in_range;
  f.y1 = s1.orthogonal;
  const RangeSplit s2 = split_against_range(transpose(a), transpose(v));
  f.x2 = s2.in_range;
  f.y2 = s2.orthogonal;
  f.e1 = tprod(f.y1, pinv(tprod(transpose(f.y1), f.y1)));
  f.e2 = tprod(f.y2, pinv(tprod(transpose(f.y2), f.y2)));
  return f;
}

double ConditionReport::worst() const {
  return *std::max_element(residuals.begin(), residuals.end());
}

ConditionReport check_smw_conditions(const SmwFactors& f, double threshold) {
  const Tensor3 bp = pinv(f.b);
  const Tensor3 e1t = transpose(f.e1);
  const Tensor3 y2t = transpose(f.y2);
  const Tensor3 x2t = transpose(f.x2);
  const Tensor3 e1t_y1 = tprod(e1t, f.y1);
  const Tensor3 b_y2t_e2 = tprod(f.b, tprod(y2t, f.e2));

  ConditionReport r;
  r.threshold = threshold;
  r.names = {
      "E2 * pinv(B) * E1^T * Y1 * B == E2",
      "X1 * E1^T * Y1 * B == X1 * B",
      "Y1 * E1^T * Y1 == Y1",
      "B * Y2^T * E2 * pinv(B) * E1^T == E1^T",
      "B * Y2^T * E2 * X2^T == B * X2^T",
      "E2 * Y2^T * E2 == E2",
  };
  r.residuals[0] = pair_residual(tprod(f.e2, tprod(bp, tprod(e1t_y1, f.b))), f.e2);
  r.residuals[1] = pair_residual(tprod(f.x1, tprod(e1t_y1, f.b)), tprod(f.x1, f.b));
  r.residuals[2] = pair_residual(tprod(f.y1, e1t_y1), f.y1);
  r.residuals[3] = pair_residual(tprod(b_y2t_e2, tprod(bp, e1t)), e1t);
  r.residuals[4] = pair_residual(tprod(b_y2t_e2, x2t), tprod(f.b, x2t));
  r.residuals[5] = pair_residual(tprod(f.e2, tprod(y2t, f.e2)), f.e2);

  r.satisfied = std::all_of(r.residuals.begin(), r.residuals.end(),
                            [&](double res) { return res <= threshold; });
  return r;
}

Tensor3 smw_pinv(const Tensor3& a, const SmwFactors& f) {
  const ConditionReport rep = check_smw_conditions(f);
  if (!rep.satisfied) {
    std::ostringstream os;
    os << "smw_pinv: factor bundle fails its exactness conditions (worst residual " << rep.worst()
       << " exceeds threshold " << rep.threshold << ")";
    throw ConditionsNotSatisfied(os.str());
  }
  const Tensor3 ap = pinv(a);
  const Tensor3 bp = pinv(f.b);
  const Tensor3 e1t = transpose(f.e1);
  const Tensor3 x2t_ap = tprod(transpose(f.x2), ap);

  Tensor3 out = sub(ap, tprod(f.e2, x2t_ap));
  out = sub(out, tprod(ap, tprod(f.x1, e1t)));
  const Tensor3 core = add(bp, tprod(x2t_ap, f.x1));
  return add(out, tprod(f.e2, tprod(core, e1t)));
}

ConditionedInstance construct_conditioned_instance(int n, int k, int n3, std::uint64_t seed,
                                                   SmwFamily family) {
  if (n < 1 || k < 1 || n3 < 1) {
    throw InfeasibleDims("construct_conditioned_instance: dims must be positive");
  }
  using detail::Rng;
  Rng rng(seed);

  if (family == SmwFamily::kZeroOrthogonal) {
    // B = 0, Y's = 0, so E's = 0, M = A, and every condition holds exactly.
    std::uniform_int_distribution<int> pick(1, std::max(1, n - 1));
    const std::vector<int> ranks(n3, pick(rng));
    const Tensor3 a = random_rank_profile(n, n, n3, ranks, splitmix64(seed));
    const Tensor3 w1 = random_tensor(n, k, n3, splitmix64(seed + 1));
    const Tensor3 w2 = random_tensor(n, k, n3, splitmix64(seed + 2));
    SmwFactors f;
    f.x1 = tprod(a, w1);
    f.x2 = tprod(transpose(a), w2);
    f.y1 = Tensor3(n, k, n3);
    f.y2 = Tensor3(n, k, n3);
    f.e1 = Tensor3(n, k, n3);
    f.e2 = Tensor3(n, k, n3);
    f.u = f.x1;
    f.b = Tensor3(k, k, n3);
    f.v = transpose(f.x2);
    ConditionedInstance inst{a, f, Tensor3()};
    inst.m = add(a, tprod(f.u, tprod(f.b, f.v)));
    return inst;
  }

  if (n - k < 1) {
    throw InfeasibleDims("construct_conditioned_instance: orthonormal-complement family needs "
                         "k <= n - 1 (got n = " +
                         std::to_string(n) + ", k = " + std::to_string(k) + ")");
  }

  // Per face: A = U_A S V_A^H of rank r <= n - k; Y1/Y2 get orthonormal
  // columns from the unused parts of the same unitaries, so they span
  // directions orthogonal to the ranges and Ei reduces to Yi; B invertible.
  FourierFaces fa, fy1, fy2, fb, fx1, fx2;
  for (FourierFaces* f : {&fa, &fy1, &fy2, &fb, &fx1, &fx2}) {
    f->n1 = n;
    f->n2 = n;
    f->n3 = n3;
    f->faces.assign(n3, Eigen::MatrixXcd());
  }
  fa.n2 = n;
  fy1.n2 = fy2.n2 = fx1.n2 = fx2.n2 = k;
  fb.n1 = fb.n2 = k;

  std::uniform_int_distribution<int> pick_rank(1, n - k);
  for (int i = 0; i < n3; ++i) {
    if (i > fa.partner(i)) continue;
    const bool self = fa.self_partnered(i);
    const int r = pick_rank(rng);
    const Eigen::MatrixXcd ql = detail::haar_unitary(rng, n, self);
    const Eigen::MatrixXcd qr = detail::haar_unitary(rng, n, self);
    const Eigen::VectorXd s = detail::uniform_sigmas(rng, r, 1.0, 2.0);
    const Eigen::MatrixXcd ub = detail::haar_unitary(rng, k, self);
    const Eigen::MatrixXcd vb = detail::haar_unitary(rng, k, self);
    const Eigen::VectorXd sb = detail::uniform_sigmas(rng, k, 1.0, 2.0);

    fa.faces[i] = ql.leftCols(r) * s.asDiagonal() * qr.leftCols(r).adjoint();
    fy1.faces[i] = ql.middleCols(r, k);
    fy2.faces[i] = qr.middleCols(r, k);
    fb.faces[i] = ub * sb.asDiagonal() * vb.adjoint();
    fx1.faces[i] = fa.faces[i] * detail::ginibre(rng, n, k, self);
    fx2.faces[i] = fa.faces[i].adjoint() * detail::ginibre(rng, n, k, self);
    if (self) {
      for (FourierFaces* f : {&fa, &fy1, &fy2, &fb, &fx1, &fx2}) f->faces[i].imag().setZero();
    }
  }
  for (FourierFaces* f : {&fa, &fy1, &fy2, &fb, &fx1, &fx2}) {
    for (int i = 0; i < n3; ++i) {
      if (i > f->partner(i)) f->faces[i] = f->faces[f->partner(i)].conjugate();
    }
  }

  const Tensor3 a = from_faces(fa);
  const Tensor3 y1 = from_faces(fy1);
  const Tensor3 y2 = from_faces(fy2);
  const Tensor3 b = from_faces(fb);
  const Tensor3 x1 = from_faces(fx1);
  const Tensor3 x2 = from_faces(fx2);

  const Tensor3 u = add(x1, y1);
  const Tensor3 v = transpose(add(x2, y2));
  ConditionedInstance inst{a, build_smw_factors(a, u, b, v), Tensor3()};
  inst.m = add(a, tprod(u, tprod(b, v)));
  return inst;
}

}  // namespace tpa
