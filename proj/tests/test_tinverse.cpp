#include <doctest.h>

#include <cmath>
#include <vector>

#include "tpa/errors.hpp"
#include "tpa/instances.hpp"
#include "tpa/ops.hpp"
#include "tpa/tensor.hpp"
#include "tpa/tinverse.hpp"

using namespace tpa;

namespace {

double rel_diff(const Tensor3& a, const Tensor3& b) {
  return frobenius_norm(sub(a, b)) / std::max(frobenius_norm(b), 1e-300);
}

double penrose_worst(const Tensor3& a, const Tensor3& ap) {
  const Tensor3 aap = tprod(a, ap), apa = tprod(ap, a);
  const double na = std::max(frobenius_norm(a), 1e-300);
  const double nap = std::max(frobenius_norm(ap), 1e-300);
  double worst = frobenius_norm(sub(tprod(aap, a), a)) / na;
  worst = std::max(worst, frobenius_norm(sub(tprod(apa, ap), ap)) / nap);
  worst = std::max(worst, frobenius_norm(sub(transpose(aap), aap)) /
                              std::max(frobenius_norm(aap), 1e-300));
  worst = std::max(worst, frobenius_norm(sub(transpose(apa), apa)) /
                              std::max(frobenius_norm(apa), 1e-300));
  return worst;
}

}  // namespace

TEST_CASE("inv produces two-sided inverses") {
  for (int n3 : {1, 2, 3, 5}) {
    const Tensor3 a = random_well_conditioned(4, 4, n3, 200 + n3);
    const Tensor3 ai = inv(a);
    CHECK(rel_diff(tprod(a, ai), identity(4, n3)) < 1e-10);
    CHECK(rel_diff(tprod(ai, a), identity(4, n3)) < 1e-10);
  }
}

TEST_CASE("inv refuses near-singular faces and names the first offender") {
  const Tensor3 s = random_singular(4, 3, 77);
  CHECK_THROWS_AS(inv(s), SingularTensor);
  try {
    inv(s);
  } catch (const SingularTensor& e) {
    CHECK(e.face() == 0);
    CHECK(e.sigma_min() <= e.threshold());
    CHECK(std::string(e.what()).find("face 0") != std::string::npos);
  }
}

TEST_CASE("inv requires a square tensor") {
  CHECK_THROWS_AS(inv(random_tensor(3, 4, 2, 1)), DimensionMismatch);
}

TEST_CASE("pinv agrees with inv on invertible tensors") {
  const Tensor3 a = random_well_conditioned(5, 5, 3, 301);
  CHECK(rel_diff(pinv(a), inv(a)) < 1e-11);
}

TEST_CASE("pinv satisfies the four Penrose identities on rank-deficient input") {
  const Tensor3 a = random_rank_profile(5, 4, 3, {2, 3, 3}, 302);
  CHECK(penrose_worst(a, pinv(a)) < 1e-10);
}

TEST_CASE("pinv of the zero tensor is the zero tensor with transposed shape") {
  const Tensor3 zp = pinv(Tensor3(3, 5, 4));
  CHECK(zp.n1() == 5);
  CHECK(zp.n2() == 3);
  CHECK(zp.n3() == 4);
  CHECK(frobenius_norm(zp) == 0.0);
}

TEST_CASE("pinv is an involution on well-behaved input") {
  const Tensor3 a = random_rank_profile(4, 5, 3, {3, 2, 2}, 303);
  CHECK(rel_diff(pinv(pinv(a)), a) < 1e-10);
}

TEST_CASE("multirank reports the constructed per-face ranks") {
  const std::vector<int> profile = {2, 3, 3};
  const Tensor3 a = random_rank_profile(5, 4, 3, profile, 304);
  const MultiRank mr = multirank(a);
  CHECK(mr.ranks == profile);
  CHECK(mr.sum() == 8);
  const Tensor3 w = random_well_conditioned(4, 4, 4, 305);
  CHECK(multirank(w).ranks == std::vector<int>{4, 4, 4, 4});
}

TEST_CASE("explicit tau overrides the per-face default") {
  const Tensor3 a = random_rank_profile(4, 4, 2, {3, 3}, 306, 1.0, 2.0);
  CHECK(multirank(a, 0.5).ranks == std::vector<int>{3, 3});
  CHECK(multirank(a, 10.0).ranks == std::vector<int>{0, 0});
}

TEST_CASE("face singular values are descending and conjugate faces share them") {
  const Tensor3 a = random_tensor(4, 3, 5, 307);
  const auto sigma = face_singular_values(a);
  REQUIRE(sigma.size() == 5);
  for (int i = 0; i < 5; ++i) {
    for (int k = 0; k + 1 < sigma[i].size(); ++k) CHECK(sigma[i](k) >= sigma[i](k + 1));
  }
  CHECK((sigma[1] - sigma[4]).norm() < 1e-12);
  CHECK((sigma[2] - sigma[3]).norm() < 1e-12);
}

TEST_CASE("spectral norm equals the largest face singular value") {
  const Tensor3 a = random_tensor(4, 4, 3, 308);
  const auto sigma = face_singular_values(a);
  double top = 0.0;
  for (const auto& s : sigma) top = std::max(top, s.size() ? s(0) : 0.0);
  CHECK(spectral_norm(a) == doctest::Approx(top).epsilon(1e-12));
}

TEST_CASE("range projectors are idempotent, symmetric, and reproduce A") {
  const Tensor3 a = random_rank_profile(5, 4, 3, {2, 3, 3}, 309);
  const RangeProjectors p = range_projectors(a);
  CHECK(rel_diff(tprod(p.col, p.col), p.col) < 1e-10);
  CHECK(rel_diff(tprod(p.row, p.row), p.row) < 1e-10);
  CHECK(rel_diff(transpose(p.col), p.col) < 1e-10);
  CHECK(rel_diff(transpose(p.row), p.row) < 1e-10);
  CHECK(rel_diff(tprod(p.col, a), a) < 1e-10);
  CHECK(rel_diff(tprod(a, p.row), a) < 1e-10);
}

TEST_CASE("split_against_range separates in-range and orthogonal parts") {
  const Tensor3 a = random_rank_profile(5, 5, 3, {3, 2, 2}, 310);
  const Tensor3 u = random_tensor(5, 2, 3, 311);
  const RangeSplit s = split_against_range(a, u);
  CHECK(frobenius_norm(sub(add(s.in_range, s.orthogonal), u)) < 1e-12 * frobenius_norm(u));
  CHECK(frobenius_norm(tprod(transpose(a), s.orthogonal)) <
        1e-10 * (1.0 + frobenius_norm(a) * frobenius_norm(u)));
  const RangeProjectors p = range_projectors(a);
  CHECK(frobenius_norm(sub(tprod(p.col, s.in_range), s.in_range)) <
        1e-10 * (1.0 + frobenius_norm(u)));
}
