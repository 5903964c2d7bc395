#include <cmath>

#include "doctest.h"
#include "ehtcp/fixtures.hpp"
#include "ehtcp/problem.hpp"
#include "ehtcp/util.hpp"

using namespace ehtcp;

namespace {

Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

Vec vec3(double a, double b, double c) {
  Vec v(3);
  v << a, b, c;
  return v;
}

CandidateSolution cand(std::vector<Vec> blocks) {
  CandidateSolution c;
  c.blocks = std::move(blocks);
  return c;
}

}  // namespace

TEST_CASE("instance validation") {
  const auto tuple = fixtures::swap_squares_trio();  // k = 2
  // d must be strictly positive.
  CHECK_THROWS_AS(EhtcpInstance(tuple, {vec2(1, 0)}, vec2(0, 0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(EhtcpInstance(tuple, {vec2(1, -1)}, vec2(0, 0)),
                  std::invalid_argument);
  // d list must have k-1 vectors.
  CHECK_THROWS_AS(EhtcpInstance(tuple, {}, vec2(0, 0)), std::invalid_argument);
  CHECK_NOTHROW(EhtcpInstance(tuple, {vec2(1, 1)}, vec2(0, 0)));
  // q must match the dimension.
  CHECK_THROWS_AS(EhtcpInstance(tuple, {vec2(1, 1)}, vec3(0, 0, 0)),
                  std::invalid_argument);
}

TEST_CASE("stacked residual: known zero and nonzero points") {
  // Family member of the infinite-solution instance at theta = 0.
  const auto inst = fixtures::circle_family_instance();
  const auto member =
      cand({vec3(1, 0, 0), Vec::Zero(3), Vec::Zero(3)});
  CHECK(residual_psi_d(inst, member).lpNorm<Eigen::Infinity>() == 0.0);

  // The zero point solves every homogeneous instance.
  const auto tuple = fixtures::swap_squares_trio();
  const EhtcpInstance hom(tuple, {vec2(1, 1)}, vec2(0, 0));
  const auto zero = cand({vec2(0, 0), vec2(0, 0), vec2(0, 0)});
  CHECK(residual_psi_d(hom, zero).lpNorm<Eigen::Infinity>() == 0.0);

  // Diagonal-cube closed form: y = 0 turns the strong pair instance into
  // x_i^3 = q_i, so x = (1,1) solves q = (1,1).
  const auto pair = fixtures::triangular_cubes_pair();
  const auto inst34 = fixtures::instance_with(pair, vec2(1, 1));
  CHECK(residual_psi_d(inst34, cand({vec2(1, 1), vec2(0, 0)}))
            .lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("leading-min residual map") {
  const auto cubes = fixtures::alternating_cubes_trio();
  // The known homogeneous balance point.
  CHECK(residual_psi_a(cubes, cand({vec2(0, 0), vec2(1, 1), vec2(1, 1)}))
            .lpNorm<Eigen::Infinity>() == 0.0);
  // Zero is always a zero of the leading map.
  CHECK(residual_psi_a(cubes, cand({vec2(0, 0), vec2(0, 0), vec2(0, 0)}))
            .isZero());
  // Direct evaluation of a nonzero point on the swap-squares trio.
  const auto trio = fixtures::swap_squares_trio();
  Vec expected(6);
  expected << 0, 0, 0, 0, 1, 0;
  CHECK(residual_psi_a(trio, cand({vec2(0, 1), vec2(0, 0), vec2(0, 0)}))
            .isApprox(expected));
}

TEST_CASE("is_solution on the quarter-circle family") {
  const auto inst = fixtures::circle_family_instance();
  const double s = std::sqrt(2.0) / 2.0;
  const auto member = cand({vec3(s, s, 0), Vec::Zero(3), Vec::Zero(3)});
  CHECK(is_solution(inst, member, 1e-10));

  const auto zero = cand({Vec::Zero(3), Vec::Zero(3), Vec::Zero(3)});
  CHECK_FALSE(is_solution(inst, zero, 1e-10));  // q = (1,0,0) != 0

  auto perturbed = member;
  perturbed.blocks[0][0] += 1e-3;
  CHECK_FALSE(is_solution(inst, perturbed, 1e-9));
  CHECK_THROWS_AS(is_solution(inst, member, 0.0), std::invalid_argument);
}

TEST_CASE("leading complementarity holds at solutions, fails on violations") {
  const auto inst = fixtures::circle_family_instance();
  Rng rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    const double theta = rng.uniform(0.0, M_PI / 2);
    const auto member = cand(
        {vec3(std::cos(theta), std::sin(theta), 0), Vec::Zero(3), Vec::Zero(3)});
    REQUIRE(is_solution(inst, member, 1e-9));
    CHECK(has_leading_complementarity(inst, member, 1e-7));
  }
  // Zero point with q = 0.
  const auto tuple = fixtures::swap_squares_trio();
  const EhtcpInstance hom(tuple, {vec2(1, 1)}, vec2(0, 0));
  CHECK(has_leading_complementarity(
      hom, cand({vec2(0, 0), vec2(0, 0), vec2(0, 0)}), 1e-7));
  // Hand-built violation of x_0 /\ x_2 = 0 by 0.1.
  CHECK_FALSE(has_leading_complementarity(
      hom, cand({vec2(0.1, 0), vec2(0, 1), vec2(0.1, 0)}), 1e-7));
}

TEST_CASE("q = 0 residual agrees with the leading map's tensor block") {
  const auto tuple = fixtures::swap_squares_trio();
  const EhtcpInstance hom(tuple, {vec2(1, 1)}, vec2(0, 0));
  Rng rng(11);
  const int n = 2;
  for (int trial = 0; trial < 50; ++trial) {
    // Points with exact leading complementarity: per component, x_0 or all
    // x_i carry the mass.
    std::vector<Vec> blocks(3, Vec::Zero(n));
    for (int c = 0; c < n; ++c) {
      if (rng.uniform() < 0.5)
        blocks[0][c] = std::abs(rng.normal());
      else {
        blocks[1][c] = std::abs(rng.normal());
        blocks[2][c] = std::abs(rng.normal());
      }
    }
    const auto point = cand(blocks);
    const Vec rd = residual_psi_d(hom, point);
    const Vec ra = residual_psi_a(tuple, point);
    CHECK(rd.segment(2 * n, n) == ra.segment(2 * n, n));
  }
}

TEST_CASE("min rows of the leading map scale linearly under t > 0") {
  const auto tuple = fixtures::alternating_cubes_trio();
  Rng rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Vec> blocks;
    for (int b = 0; b < 3; ++b) {
      Vec v(2);
      v << rng.normal(), rng.normal();
      blocks.push_back(v);
    }
    const double t = rng.uniform(0.1, 3.0);
    auto scaled_blocks = blocks;
    for (auto& b : scaled_blocks) b *= t;
    const Vec base = residual_psi_a(tuple, cand(blocks));
    const Vec scaled = residual_psi_a(tuple, cand(scaled_blocks));
    const int min_rows = 2 * 2;  // k*n
    CHECK((scaled.segment(0, min_rows) - t * base.segment(0, min_rows))
              .lpNorm<Eigen::Infinity>() <= 1e-12 * (1.0 + t));
  }
}

TEST_CASE("flatten and unflatten round-trip") {
  Rng rng(31);
  std::vector<Vec> blocks;
  for (int b = 0; b < 3; ++b) {
    Vec v(4);
    for (int i = 0; i < 4; ++i) v[i] = rng.normal();
    blocks.push_back(v);
  }
  const Vec flat = flatten(blocks);
  const auto back = unflatten(flat, 3, 4);
  for (int b = 0; b < 3; ++b) CHECK(back[b] == blocks[b]);
  CHECK_THROWS_AS(unflatten(flat, 2, 4), std::invalid_argument);
}

TEST_CASE("make_candidate fills diagnostics") {
  const auto inst = fixtures::circle_family_instance();
  const auto c = make_candidate(
      inst, {vec3(1, 0, 0), Vec::Zero(3), Vec::Zero(3)});
  CHECK(c.residual_inf == 0.0);
  CHECK(c.complementarity_inf == 0.0);
  const auto bad = make_candidate(
      inst, {vec3(1, 1, 0), vec3(0.5, 0, 0), Vec::Zero(3)});
  CHECK(bad.residual_inf > 0.0);
  CHECK(bad.complementarity_inf == doctest::Approx(0.5));
}
