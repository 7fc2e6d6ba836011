#include "tpa/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "tpa/errors.hpp"
#include "tpa/ops.hpp"

namespace tpa {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

BoundReport blank() {
  BoundReport r;
  r.bound_f = r.actual_f = r.bound_2 = r.actual_2 = kNaN;
  r.kappa_f = r.kappa_2 = r.gamma_f = r.gamma_2 = r.mu = r.lambda = kNaN;
  return r;
}

BoundReport violated(const std::string& why) {
  BoundReport r = blank();
  r.hypothesis = why;
  return r;
}

// Marks the report applicable and evaluates every dominance flag.
void finalize(BoundReport& r) {
  r.applicability = Applicability::kApplicable;
  r.holds_f = bound_holds(r.actual_f, r.bound_f);
  r.holds_2 = bound_holds(r.actual_2, r.bound_2);
  for (ExtraBound& e : r.extras) e.holds = bound_holds(e.actual, e.bound);
}

void require_same_shape(const Tensor3& a, const Tensor3& e, const char* who, const char* what) {
  if (!a.same_shape(e)) {
    throw DimensionMismatch(std::string(who) + ": " + what + " must match A's shape");
  }
}

void require_square(const Tensor3& a, const char* who) {
  if (a.n1() != a.n2()) throw DimensionMismatch(std::string(who) + ": A must be square");
}

void require_rhs(const Tensor3& a, const Tensor3& b, const char* who) {
  if (b.n1() != a.n1() || b.n3() != a.n3()) {
    throw DimensionMismatch(std::string(who) + ": right-hand side must be n1 x n4 with A's depth");
  }
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

std::string ranks_str(const MultiRank& r) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < r.ranks.size(); ++i) os << (i ? "," : "") << r.ranks[i];
  os << "]";
  return os.str();
}

}  // namespace

bool BoundReport::all_hold() const {
  if (!applicable() || !holds_f || !holds_2) return false;
  return std::all_of(extras.begin(), extras.end(), [](const ExtraBound& e) { return e.holds; });
}

bool bound_holds(double actual, double bound) {
  return actual <= bound * (1.0 + 1e-9) + 1e-12;
}

double safe_ratio(double x, double y) {
  if (y == 0.0) return x == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return x / y;
}

MuLambda mu_lambda(const MultiRank& rank, int n1, int n2, int n3) {
  const long long sum = rank.sum();
  const long long full =
      std::min(static_cast<long long>(n1) * n3, static_cast<long long>(n2) * n3);
  MuLambda m{};
  if (sum < full) {
    m.rank_case = MuLambda::RankCase::kDeficient;
    m.mu = std::sqrt(2.0);
    m.lambda = (1.0 + std::sqrt(5.0)) / 2.0;
  } else if (n1 != n2) {
    m.rank_case = MuLambda::RankCase::kFullNonSquare;
    m.mu = 1.0;
    m.lambda = std::sqrt(2.0);
  } else {
    m.rank_case = MuLambda::RankCase::kFullSquare;
    m.mu = 1.0;
    m.lambda = 1.0;
  }
  return m;
}

BoundReport inv_perturb_posterior(const Tensor3& a, const Tensor3& e) {
  require_square(a, "inv_perturb_posterior");
  require_same_shape(a, e, "inv_perturb_posterior", "E");

  Tensor3 ainv, binv;
  try {
    ainv = inv(a);
  } catch (const SingularTensor& s) {
    return violated(std::string("A is not invertible: ") + s.what());
  }
  try {
    binv = inv(add(a, e));
  } catch (const SingularTensor& s) {
    return violated(std::string("A + E is not invertible: ") + s.what());
  }

  const double a_f = frobenius_norm(a), a_2 = spectral_norm(a);
  const double e_2 = spectral_norm(e);
  const double binv_2 = spectral_norm(binv);
  const Tensor3 diff = sub(binv, ainv);

  BoundReport r = blank();
  r.kappa_f = a_f * binv_2;
  r.kappa_2 = a_2 * binv_2;
  r.bound_f = r.kappa_f * safe_ratio(e_2, a_f);
  r.bound_2 = r.kappa_2 * safe_ratio(e_2, a_2);
  r.actual_f = safe_ratio(frobenius_norm(diff), frobenius_norm(ainv));
  r.actual_2 = safe_ratio(spectral_norm(diff), spectral_norm(ainv));
  r.extras.push_back({"frobenius variant: rel_F <= sqrt(n3)*||E||_2*||B^-1||_F",
                      std::sqrt(static_cast<double>(a.n3())) * e_2 * frobenius_norm(binv),
                      r.actual_f, false});
  finalize(r);
  return r;
}

BoundReport inv_perturb_prior(const Tensor3& a, const Tensor3& e) {
  require_square(a, "inv_perturb_prior");
  require_same_shape(a, e, "inv_perturb_prior", "E");

  Tensor3 ainv;
  try {
    ainv = inv(a);
  } catch (const SingularTensor& s) {
    return violated(std::string("A is not invertible: ") + s.what());
  }
  const double ainv_2 = spectral_norm(ainv), ainv_f = frobenius_norm(ainv);
  const double e_2 = spectral_norm(e);
  const double gamma = 1.0 - ainv_2 * e_2;
  if (!(gamma > 0.0)) {
    return violated("gamma = 1 - ||A^-1||_2*||E||_2 = " + fmt(gamma) + " is not positive");
  }
  Tensor3 binv;
  try {
    binv = inv(add(a, e));
  } catch (const SingularTensor& s) {
    return violated(std::string("A + E is not numerically invertible: ") + s.what());
  }

  const double a_f = frobenius_norm(a), a_2 = spectral_norm(a);
  const Tensor3 diff = sub(binv, ainv);

  BoundReport r = blank();
  r.kappa_f = a_f * ainv_2;
  r.kappa_2 = a_2 * ainv_2;
  r.gamma_f = r.gamma_2 = gamma;
  r.bound_f = (r.kappa_f / gamma) * safe_ratio(e_2, a_f);
  r.bound_2 = (r.kappa_2 / gamma) * safe_ratio(e_2, a_2);
  r.actual_f = safe_ratio(frobenius_norm(diff), ainv_f);
  r.actual_2 = safe_ratio(spectral_norm(diff), ainv_2);
  r.extras.push_back(
      {"size bound: ||B^-1||_F <= ||A^-1||_F / gamma", ainv_f / gamma, frobenius_norm(binv), false});
  r.extras.push_back(
      {"size bound: ||B^-1||_2 <= ||A^-1||_2 / gamma", ainv_2 / gamma, spectral_norm(binv), false});
  finalize(r);
  return r;
}

BoundReport equation_perturb(const Tensor3& a, const Tensor3& e, const Tensor3& b,
                             const Tensor3& k) {
  require_square(a, "equation_perturb");
  require_same_shape(a, e, "equation_perturb", "E");
  require_rhs(a, b, "equation_perturb");
  require_same_shape(b, k, "equation_perturb", "K");

  Tensor3 ainv;
  try {
    ainv = inv(a);
  } catch (const SingularTensor& s) {
    return violated(std::string("A is not invertible: ") + s.what());
  }
  const double ainv_2 = spectral_norm(ainv);
  const double e_2 = spectral_norm(e);
  const double gamma = 1.0 - ainv_2 * e_2;
  if (!(gamma > 0.0)) {
    return violated("gamma = 1 - ||A^-1||_2*||E||_2 = " + fmt(gamma) + " is not positive");
  }
  const double b_f = frobenius_norm(b), b_2 = spectral_norm(b);
  if (b_f == 0.0) return violated("right-hand side B is zero");
  Tensor3 minv;
  try {
    minv = inv(add(a, e));
  } catch (const SingularTensor& s) {
    return violated(std::string("A + E is not numerically invertible: ") + s.what());
  }

  const double a_f = frobenius_norm(a), a_2 = spectral_norm(a);
  const Tensor3 x = tprod(ainv, b);
  const Tensor3 h = sub(tprod(minv, add(b, k)), x);

  BoundReport r = blank();
  r.kappa_f = a_f * ainv_2;
  r.kappa_2 = a_2 * ainv_2;
  r.gamma_f = r.gamma_2 = gamma;
  r.bound_f = (r.kappa_f / gamma) *
              (safe_ratio(e_2, a_f) +
               std::sqrt(static_cast<double>(a.n3())) * safe_ratio(frobenius_norm(k), b_f));
  r.bound_2 = (r.kappa_2 / gamma) * (safe_ratio(e_2, a_2) + safe_ratio(spectral_norm(k), b_2));
  r.actual_f = safe_ratio(frobenius_norm(h), frobenius_norm(x));
  r.actual_2 = safe_ratio(spectral_norm(h), spectral_norm(x));
  finalize(r);
  return r;
}

BoundReport pinv_perturb_general(const Tensor3& a, const Tensor3& e) {
  require_same_shape(a, e, "pinv_perturb_general", "E");

  const Tensor3 ap = pinv(a);
  const Tensor3 bp = pinv(add(a, e));
  const double m = std::max(spectral_norm(ap), spectral_norm(bp));
  const Tensor3 diff = sub(bp, ap);

  BoundReport r = blank();
  r.mu = std::sqrt(2.0);
  r.lambda = (1.0 + std::sqrt(5.0)) / 2.0;
  r.kappa_f = r.kappa_2 = m;
  r.bound_f = r.mu * m * m * frobenius_norm(e);
  r.bound_2 = r.lambda * m * m * spectral_norm(e);
  r.actual_f = frobenius_norm(diff);
  r.actual_2 = spectral_norm(diff);
  finalize(r);
  return r;
}

BoundReport pinv_perturb_rank_preserving(const Tensor3& a, const Tensor3& e) {
  require_same_shape(a, e, "pinv_perturb_rank_preserving", "E");

  const Tensor3 b = add(a, e);
  const MultiRank ra = multirank(a), rb = multirank(b);
  if (!(ra == rb)) {
    return violated("multirank changed: " + ranks_str(ra) + " -> " + ranks_str(rb));
  }

  const Tensor3 ap = pinv(a);
  const Tensor3 bp = pinv(b);
  const double ap_2 = spectral_norm(ap), bp_2 = spectral_norm(bp);
  const double a_2 = spectral_norm(a);
  const double e_f = frobenius_norm(e), e_2 = spectral_norm(e);
  const MuLambda ml = mu_lambda(ra, a.n1(), a.n2(), a.n3());
  const Tensor3 diff = sub(bp, ap);
  const double diff_f = frobenius_norm(diff), diff_2 = spectral_norm(diff);

  BoundReport r = blank();
  r.mu = ml.mu;
  r.lambda = ml.lambda;
  r.kappa_f = r.kappa_2 = ap_2 * a_2;
  r.bound_f = ml.mu * ap_2 * bp_2 * e_f;
  r.bound_2 = ml.lambda * ap_2 * bp_2 * e_2;
  r.actual_f = diff_f;
  r.actual_2 = diff_2;
  r.extras.push_back({"corollary: ||B+ - A+||_F/||B+||_2 <= mu*kappa*||E||_F/||A||_2",
                      ml.mu * r.kappa_f * safe_ratio(e_f, a_2), safe_ratio(diff_f, bp_2), false});
  r.extras.push_back({"corollary: ||B+ - A+||_2/||B+||_2 <= lambda*kappa*||E||_2/||A||_2",
                      ml.lambda * r.kappa_2 * safe_ratio(e_2, a_2), safe_ratio(diff_2, bp_2),
                      false});
  finalize(r);
  return r;
}

BoundReport pinv_perturb_relative(const Tensor3& a, const Tensor3& e) {
  require_same_shape(a, e, "pinv_perturb_relative", "E");

  const Tensor3 b = add(a, e);
  const MultiRank ra = multirank(a), rb = multirank(b);
  if (!(ra == rb)) {
    return violated("multirank changed: " + ranks_str(ra) + " -> " + ranks_str(rb));
  }
  const Tensor3 ap = pinv(a);
  const double ap_2 = spectral_norm(ap);
  const double e_f = frobenius_norm(e), e_2 = spectral_norm(e);
  const double gamma = 1.0 - ap_2 * e_2;
  if (!(gamma > 0.0)) {
    return violated("gamma = 1 - ||A+||_2*||E||_2 = " + fmt(gamma) + " is not positive");
  }

  const Tensor3 bp = pinv(b);
  const double a_f = frobenius_norm(a), a_2 = spectral_norm(a);
  const MuLambda ml = mu_lambda(ra, a.n1(), a.n2(), a.n3());
  const Tensor3 diff = sub(bp, ap);

  BoundReport r = blank();
  r.mu = ml.mu;
  r.kappa_f = ap_2 * a_f;
  r.kappa_2 = ap_2 * a_2;
  r.gamma_f = r.gamma_2 = gamma;
  r.bound_f = (ml.mu * r.kappa_f / gamma) * safe_ratio(e_f, a_f);
  r.bound_2 = (ml.mu * r.kappa_2 / gamma) * safe_ratio(e_2, a_2);
  r.actual_f = safe_ratio(frobenius_norm(diff), ap_2);
  r.actual_2 = safe_ratio(spectral_norm(diff), ap_2);
  r.extras.push_back(
      {"size bound: ||B+||_2 <= ||A+||_2 / gamma", ap_2 / gamma, spectral_norm(bp), false});
  finalize(r);
  return r;
}

BoundReport lstsq_perturb(const Tensor3& a, const Tensor3& e, const Tensor3& b,
                          const Tensor3& k) {
  require_same_shape(a, e, "lstsq_perturb", "E");
  require_rhs(a, b, "lstsq_perturb");
  require_same_shape(b, k, "lstsq_perturb", "K");

  const Tensor3 m = add(a, e);
  const MultiRank ra = multirank(a), rm = multirank(m);
  if (!(ra == rm)) {
    return violated("multirank changed: " + ranks_str(ra) + " -> " + ranks_str(rm));
  }
  const Tensor3 ap = pinv(a);
  const double ap_2 = spectral_norm(ap);
  const double e_2 = spectral_norm(e);
  const double gamma = 1.0 - ap_2 * e_2;
  if (!(gamma > 0.0)) {
    return violated("gamma = 1 - ||A+||_2*||E||_2 = " + fmt(gamma) + " is not positive");
  }

  const double a_f = frobenius_norm(a), a_2 = spectral_norm(a);
  const Tensor3 x = tprod(ap, b);
  const Tensor3 h = sub(tprod(pinv(m), add(b, k)), x);
  const Tensor3 resid = sub(b, tprod(a, x));
  const Tensor3 yx = tprod(transpose(ap), x);

  const bool full_col = std::all_of(ra.ranks.begin(), ra.ranks.end(),
                                    [&](int r0) { return r0 == a.n2(); });

  BoundReport r = blank();
  r.kappa_f = ap_2 * a_f;
  r.kappa_2 = ap_2 * a_2;
  r.gamma_f = r.gamma_2 = gamma;

  const double cf = r.kappa_f / gamma, c2 = r.kappa_2 / gamma;
  const double term4_f =
      full_col ? 0.0 : std::sqrt(static_cast<double>(a.n3())) * e_2 * frobenius_norm(yx);
  const double term4_2 = full_col ? 0.0 : e_2 * spectral_norm(yx);
  r.bound_f = cf * (safe_ratio(e_2, a_f) * frobenius_norm(x) +
                    safe_ratio(frobenius_norm(k), a_f) +
                    cf * safe_ratio(e_2, a_f) * safe_ratio(frobenius_norm(resid), a_f) + term4_f);
  r.bound_2 = c2 * (safe_ratio(e_2, a_2) * spectral_norm(x) +
                    safe_ratio(spectral_norm(k), a_2) +
                    c2 * safe_ratio(e_2, a_2) * safe_ratio(spectral_norm(resid), a_2) + term4_2);
  r.actual_f = frobenius_norm(h);
  r.actual_2 = spectral_norm(h);
  finalize(r);
  return r;
}

BoundReport smw_solve_perturb(const Tensor3& a, const SmwFactors& f, const Tensor3& d,
                              const Tensor3& h, double eps_a, double eps_d) {
  require_rhs(a, d, "smw_solve_perturb");
  require_same_shape(d, h, "smw_solve_perturb", "H");

  const ConditionReport rep = check_smw_conditions(f);
  if (!rep.satisfied) {
    return violated("factor bundle fails its exactness conditions (worst residual " +
                    fmt(rep.worst()) + ")");
  }
  const double d_f = frobenius_norm(d);
  if (d_f == 0.0) return violated("right-hand side D is zero");

  const Tensor3 ap = pinv(a);
  const double a_f = frobenius_norm(a), a_2 = spectral_norm(a);
  const double ap_f = frobenius_norm(ap), ap_2 = spectral_norm(ap);
  const double d_2 = spectral_norm(d);

  struct Check {
    std::string name;
    double value;
    double limit;
  };
  const Tensor3 bp = pinv(f.b);
  const std::vector<Check> checks = {
      {"||X1||_F <= eps_a*||A||_F", frobenius_norm(f.x1), eps_a * a_f},
      {"||X1||_2 <= eps_a*||A||_2", spectral_norm(f.x1), eps_a * a_2},
      {"||X2||_F <= eps_a*||A||_F", frobenius_norm(f.x2), eps_a * a_f},
      {"||X2||_2 <= eps_a*||A||_2", spectral_norm(f.x2), eps_a * a_2},
      {"||E1||_F <= eps_a*||A||_F", frobenius_norm(f.e1), eps_a * a_f},
      {"||E1||_2 <= eps_a*||A||_2", spectral_norm(f.e1), eps_a * a_2},
      {"||E2||_F <= eps_a*||A||_F", frobenius_norm(f.e2), eps_a * a_f},
      {"||E2||_2 <= eps_a*||A||_2", spectral_norm(f.e2), eps_a * a_2},
      {"||pinv(B)||_F <= eps_a*||A||_F", frobenius_norm(bp), eps_a * a_f},
      {"||pinv(B)||_2 <= eps_a*||A||_2", spectral_norm(bp), eps_a * a_2},
      {"||H||_F <= eps_d*||D||_F", frobenius_norm(h), eps_d * d_f},
      {"||H||_2 <= eps_d*||D||_2", spectral_norm(h), eps_d * d_2},
  };
  for (const Check& c : checks) {
    if (!bound_holds(c.value, c.limit)) {
      return violated("hypothesis " + c.name + " fails: " + fmt(c.value) + " > " + fmt(c.limit));
    }
  }

  const Tensor3 x = tprod(ap, d);
  const double consistency = frobenius_norm(sub(tprod(a, x), d));
  if (consistency > 1e-9 * d_f) {
    return violated("A*X = D is inconsistent (residual " + fmt(consistency) + ")");
  }

  const Tensor3 y = tprod(smw_pinv(a, f), add(d, h));
  const Tensor3 diff = sub(y, x);
  const double n3d = static_cast<double>(a.n3());

  BoundReport r = blank();
  r.kappa_f = a_f * ap_f;
  r.kappa_2 = a_2 * ap_2;
  r.bound_f = (1.0 + eps_d) * (2.0 * n3d * n3d * eps_a * eps_a * ap_f +
                               n3d * n3d * eps_a * eps_a * eps_a * a_f +
                               n3d * n3d * n3d * eps_a * eps_a * eps_a * eps_a * a_f * a_f * ap_f) +
              n3d * eps_d * ap_f * a_f;
  r.bound_2 =
      (1.0 + eps_d) * (2.0 * eps_a * eps_a * ap_2 + eps_a * eps_a * eps_a * a_2 +
                       eps_a * eps_a * eps_a * eps_a * a_2 * a_2 * ap_2) +
      eps_d * a_2 * ap_2;
  r.actual_f = safe_ratio(frobenius_norm(diff), frobenius_norm(x));
  r.actual_2 = safe_ratio(spectral_norm(diff), spectral_norm(x));
  finalize(r);
  return r;
}

}  // namespace tpa
