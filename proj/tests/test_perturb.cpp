#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "tpa/errors.hpp"
#include "tpa/instances.hpp"
#include "tpa/ops.hpp"
#include "tpa/perturb.hpp"
#include "tpa/smw.hpp"
#include "tpa/tensor.hpp"
#include "tpa/tinverse.hpp"

using namespace tpa;

namespace {

Tensor3 scalar_tensor(double v) {
  Tensor3 t(1, 1, 1);
  t(0, 0, 0) = v;
  return t;
}

}  // namespace

TEST_CASE("bound_holds applies the shared slack") {
  CHECK(bound_holds(1.0, 1.0));
  CHECK(bound_holds(1.0 + 5e-10, 1.0));
  CHECK_FALSE(bound_holds(1.0 + 3e-9, 1.0));
  CHECK(bound_holds(1e-13, 0.0));
  CHECK_FALSE(bound_holds(1e-11, 0.0));
  CHECK(bound_holds(0.0, 0.0));
}

TEST_CASE("safe_ratio conventions") {
  CHECK(safe_ratio(0.0, 0.0) == 0.0);
  CHECK(safe_ratio(3.0, 2.0) == 1.5);
  CHECK(safe_ratio(1.0, 0.0) == std::numeric_limits<double>::infinity());
}

TEST_CASE("rank-case constants select exactly by the rank sum") {
  const Tensor3 deficient = random_rank_profile(5, 4, 3, {2, 2, 2}, 1);
  const MuLambda d = mu_lambda(multirank(deficient), 5, 4, 3);
  CHECK(d.rank_case == MuLambda::RankCase::kDeficient);
  CHECK(d.mu == std::sqrt(2.0));
  CHECK(d.lambda == (1.0 + std::sqrt(5.0)) / 2.0);

  const Tensor3 full_rect = random_rank_profile(5, 4, 3, {4, 4, 4}, 2);
  const MuLambda r = mu_lambda(multirank(full_rect), 5, 4, 3);
  CHECK(r.rank_case == MuLambda::RankCase::kFullNonSquare);
  CHECK(r.mu == 1.0);
  CHECK(r.lambda == std::sqrt(2.0));

  const Tensor3 full_square = random_well_conditioned(4, 4, 3, 3);
  const MuLambda s = mu_lambda(multirank(full_square), 4, 4, 3);
  CHECK(s.rank_case == MuLambda::RankCase::kFullSquare);
  CHECK(s.mu == 1.0);
  CHECK(s.lambda == 1.0);
}

TEST_CASE("posterior inverse bound is tight in one dimension") {
  const BoundReport r = inv_perturb_posterior(scalar_tensor(2.0), scalar_tensor(0.5));
  REQUIRE(r.applicable());
  // B = 2.5: relative error |1/2.5 - 1/2| / (1/2) = 0.2; kappa * ||E|| / ||A||
  // = (2 * 0.4) * 0.5 / 2 = 0.2 as well.
  CHECK(r.actual_2 == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(r.bound_2 == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(r.actual_f == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(r.holds_f);
  CHECK(r.holds_2);
  CHECK(r.all_hold());
}

TEST_CASE("prior inverse bound reproduces the closed-form scalar value") {
  const BoundReport r = inv_perturb_prior(scalar_tensor(2.0), scalar_tensor(0.5));
  REQUIRE(r.applicable());
  // kappa = 1, gamma = 1 - 0.5*0.5 = 0.75, bound = (1/0.75)*(0.5/2) = 1/3.
  CHECK(r.bound_2 == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(r.actual_2 == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(r.gamma_2 == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(r.kappa_2 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.all_hold());
  REQUIRE(r.extras.size() == 2);  // inverse size bounds in both norms
  for (const ExtraBound& e : r.extras) CHECK(e.holds);
}

TEST_CASE("perturbed system bound reproduces the closed-form scalar value") {
  const BoundReport r = equation_perturb(scalar_tensor(4.0), scalar_tensor(1.0),
                                         scalar_tensor(8.0), scalar_tensor(0.0));
  REQUIRE(r.applicable());
  // X = 2, perturbed solution 8/5: rel error 0.2; bound (1/gamma)*(1/4) = 1/3.
  CHECK(r.actual_2 == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(r.bound_2 == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(r.actual_f == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(r.bound_f == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(r.all_hold());
}

TEST_CASE("rank-free pseudoinverse bound is absolute and always applicable") {
  const Tensor3 a = random_tensor(5, 4, 3, 11);
  const Tensor3 e = with_frobenius_norm(random_tensor(5, 4, 3, 12), 0.3 * frobenius_norm(a));
  const BoundReport r = pinv_perturb_general(a, e);
  REQUIRE(r.applicable());
  CHECK(r.mu == std::sqrt(2.0));
  CHECK(r.lambda == (1.0 + std::sqrt(5.0)) / 2.0);
  CHECK(r.all_hold());
  // Bound stays applicable even when the perturbation changes the rank.
  const Tensor3 deficient = random_rank_profile(4, 4, 2, {2, 2}, 13);
  const Tensor3 big = random_well_conditioned(4, 4, 2, 14);
  CHECK(pinv_perturb_general(deficient, big).applicable());
}

TEST_CASE("rank-preserving pseudoinverse bound is tight for a pure rescaling") {
  // B = 3A has the same multirank; in the full square case mu = 1 and the
  // Frobenius bound ||A+||*||B+||*||E|| = 1*(1/3)*2 equals |B+ - A+| = 2/3.
  const BoundReport r = pinv_perturb_rank_preserving(scalar_tensor(1.0), scalar_tensor(2.0));
  REQUIRE(r.applicable());
  CHECK(r.mu == 1.0);
  CHECK(r.lambda == 1.0);
  CHECK(r.actual_f == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(r.bound_f == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(r.all_hold());
  REQUIRE(r.extras.size() == 2);  // relative corollary forms
  for (const ExtraBound& e : r.extras) CHECK(e.holds);
}

TEST_CASE("rank-preserving bound refuses when the multirank changes") {
  const Tensor3 a = random_rank_profile(4, 4, 2, {2, 2}, 21);
  const Tensor3 e = random_well_conditioned(4, 4, 2, 22);  // full rank, O(1)
  const BoundReport r = pinv_perturb_rank_preserving(a, e);
  CHECK_FALSE(r.applicable());
  CHECK_FALSE(r.hypothesis.empty());
}

TEST_CASE("relative pseudoinverse bound refuses when gamma is not positive") {
  const Tensor3 a = random_rank_profile(4, 4, 2, {2, 2}, 23);
  const BoundReport r = pinv_perturb_relative(a, scale(a, 2.0));  // ranks match, gamma < 0
  CHECK_FALSE(r.applicable());
  CHECK_FALSE(r.hypothesis.empty());
}

TEST_CASE("relative pseudoinverse bound holds on rank-preserving noise") {
  const Tensor3 a = random_rank_profile(5, 4, 3, {3, 2, 2}, 24);
  const Tensor3 e = rank_preserving_perturbation(a, 1e-3, 25);
  const BoundReport r = pinv_perturb_relative(a, e);
  REQUIRE(r.applicable());
  CHECK(r.gamma_f > 0.0);
  CHECK(r.all_hold());
  REQUIRE(r.extras.size() == 1);  // pseudoinverse size bound
  CHECK(r.extras[0].holds);
}

TEST_CASE("system bound needs an invertible matrix and a nonzero right side") {
  const Tensor3 a = random_well_conditioned(3, 3, 2, 31);
  const Tensor3 e = with_spectral_norm(random_tensor(3, 3, 2, 32), 1e-3);
  const Tensor3 b = random_tensor(3, 2, 2, 33);
  const Tensor3 k = with_frobenius_norm(random_tensor(3, 2, 2, 34), 1e-3);
  CHECK(equation_perturb(a, e, b, k).applicable());
  CHECK_FALSE(equation_perturb(a, e, Tensor3(3, 2, 2), k).applicable());
  const Tensor3 huge = with_spectral_norm(random_tensor(3, 3, 2, 35), 10.0 * spectral_norm(a));
  CHECK_FALSE(equation_perturb(a, huge, b, k).applicable());
}

TEST_CASE("posterior and prior inverse bounds refuse singular input") {
  const Tensor3 s = random_singular(4, 3, 41);
  const Tensor3 e = with_spectral_norm(random_tensor(4, 4, 3, 42), 1e-3);
  CHECK_FALSE(inv_perturb_posterior(s, e).applicable());
  CHECK_FALSE(inv_perturb_prior(s, e).applicable());
  // Posterior also needs the perturbed tensor to stay invertible.
  const Tensor3 a = random_well_conditioned(4, 4, 3, 43);
  CHECK_FALSE(inv_perturb_posterior(a, scale(a, -1.0)).applicable());
}

TEST_CASE("least-squares bound holds in both the general and full-rank forms") {
  const Tensor3 b = random_tensor(5, 2, 3, 52);
  const Tensor3 k = with_frobenius_norm(random_tensor(5, 2, 3, 53), 1e-4);

  const Tensor3 general = random_rank_profile(5, 4, 3, {3, 2, 2}, 51);
  const BoundReport rg =
      lstsq_perturb(general, rank_preserving_perturbation(general, 1e-3, 54), b, k);
  REQUIRE(rg.applicable());
  CHECK(rg.all_hold());

  const Tensor3 full_col = random_rank_profile(5, 4, 3, {4, 4, 4}, 55);
  const BoundReport rf =
      lstsq_perturb(full_col, rank_preserving_perturbation(full_col, 1e-3, 56), b, k);
  REQUIRE(rf.applicable());
  CHECK(rf.all_hold());
}

TEST_CASE("least-squares bound refuses rank changes") {
  const Tensor3 a = random_rank_profile(5, 4, 3, {2, 2, 2}, 61);
  const Tensor3 e = random_well_conditioned(5, 4, 3, 62);
  const Tensor3 b = random_tensor(5, 2, 3, 63);
  CHECK_FALSE(lstsq_perturb(a, e, b, Tensor3(5, 2, 3)).applicable());
}

TEST_CASE("structured-update solve bound checks its budget hypotheses") {
  const ConditionedInstance inst = construct_conditioned_instance(5, 2, 3, 71);
  const Tensor3 d = tprod(inst.a, random_tensor(5, 2, 3, 72));
  const Tensor3 h = with_frobenius_norm(random_tensor(5, 2, 3, 73), 1e-6 * frobenius_norm(d));

  // Generous budgets: every update piece is trivially inside them.
  const BoundReport ok = smw_solve_perturb(inst.a, inst.factors, d, h, 50.0, 1.0);
  REQUIRE(ok.applicable());
  CHECK(ok.holds_f);
  CHECK(ok.holds_2);

  // Impossible budget: the same bundle must be rejected, with the failing
  // inequality named.
  const BoundReport tiny = smw_solve_perturb(inst.a, inst.factors, d, h, 1e-14, 1.0);
  CHECK_FALSE(tiny.applicable());
  CHECK_FALSE(tiny.hypothesis.empty());
}

TEST_CASE("structured-update solve bound needs a consistent system") {
  const ConditionedInstance inst = construct_conditioned_instance(5, 2, 3, 81);
  const Tensor3 d = random_tensor(5, 2, 3, 82);  // generic D is out of range
  const Tensor3 h = with_frobenius_norm(random_tensor(5, 2, 3, 83), 1e-6);
  const BoundReport r = smw_solve_perturb(inst.a, inst.factors, d, h, 50.0, 1.0);
  CHECK_FALSE(r.applicable());
}

TEST_CASE("calculators validate operand shapes") {
  const Tensor3 a = random_well_conditioned(4, 4, 3, 91);
  CHECK_THROWS_AS(inv_perturb_posterior(a, random_tensor(3, 3, 3, 92)), DimensionMismatch);
  CHECK_THROWS_AS(inv_perturb_prior(random_tensor(4, 3, 3, 93), random_tensor(4, 3, 3, 94)),
                  DimensionMismatch);
  CHECK_THROWS_AS(pinv_perturb_general(a, random_tensor(4, 4, 2, 95)), DimensionMismatch);
}
