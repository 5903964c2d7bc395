#include <cmath>

#include "doctest.h"
#include "ehtcp/fixtures.hpp"
#include "ehtcp/tensor.hpp"
#include "ehtcp/util.hpp"

using namespace ehtcp;

namespace {

Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

/// Central finite differences, the independent oracle for jacobian().
Matrix fd_jacobian(const Tensor& a, const Vec& x, double h = 1e-6) {
  Matrix J(a.dim(), a.dim());
  for (int j = 0; j < a.dim(); ++j) {
    Vec xp = x, xm = x;
    xp[j] += h;
    xm[j] -= h;
    J.col(j) = (apply_power(a, xp) - apply_power(a, xm)) / (2 * h);
  }
  return J;
}

Tensor random_tensor(int m, int n, Rng& rng) {
  std::vector<TensorEntry> entries;
  const int nnz = 2 * n;
  int guard = 0;
  while (static_cast<int>(entries.size()) < nnz && guard++ < 100) {
    TensorEntry e;
    for (int p = 0; p < m; ++p)
      e.index.push_back(static_cast<int>(rng.next_u64() % n));
    bool dup = false;
    for (const auto& other : entries) dup = dup || other.index == e.index;
    if (dup) continue;
    e.value = rng.uniform(-2.0, 2.0);
    entries.push_back(e);
  }
  return Tensor(m, n, entries);
}

Vec random_vec(int n, Rng& rng, double scale = 1.0) {
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.normal() * scale;
  return v;
}

}  // namespace

TEST_CASE("apply_power reproduces the worked contractions") {
  const auto trio = fixtures::swap_squares_trio();
  // A_0 x^2 = (x2^2, x1^2) at x = (1,2).
  CHECK(apply_power(trio[0], vec2(1, 2)).isApprox(vec2(4, 1)));

  // Identity tensor: I x^{m-1} = x^[m-1].
  for (int m : {2, 3, 4}) {
    const Tensor id = Tensor::identity(m, 2);
    const Vec x = vec2(-1.5, 2.0);
    CHECK(apply_power(id, x).isApprox(elementwise_power(x, m - 1)));
  }

  // Alternating cubes, second part: A_1 y^3 = (-y2^3, y1^3) at (2,1).
  const auto cubes = fixtures::alternating_cubes_trio();
  CHECK(apply_power(cubes[1], vec2(2, 1)).isApprox(vec2(-1, 8)));
}

TEST_CASE("apply_power rejects dimension mismatch") {
  const auto trio = fixtures::swap_squares_trio();
  Vec x(3);
  x << 1, 2, 3;
  CHECK_THROWS_AS(apply_power(trio[0], x), std::invalid_argument);
  CHECK_THROWS_AS(jacobian(trio[0], x), std::invalid_argument);
}

TEST_CASE("tensor validation") {
  CHECK_THROWS_AS(Tensor(1, 2, {}), std::invalid_argument);
  CHECK_THROWS_AS(Tensor(2, 0, {}), std::invalid_argument);
  // Duplicate tuples are rejected.
  CHECK_THROWS_AS(Tensor(2, 2, {{{0, 1}, 1.0}, {{0, 1}, 2.0}}),
                  std::invalid_argument);
  // Out of range index.
  CHECK_THROWS_AS(Tensor(2, 2, {{{0, 2}, 1.0}}), std::invalid_argument);
  // Wrong tuple length.
  CHECK_THROWS_AS(Tensor(3, 2, {{{0, 1}, 1.0}}), std::invalid_argument);
  // Non-finite coefficient.
  CHECK_THROWS_AS(Tensor(2, 2, {{{0, 1}, std::nan("")}}),
                  std::invalid_argument);
  // Entries canonicalize to lexicographic order.
  Tensor t(2, 2, {{{1, 0}, 2.0}, {{0, 1}, 1.0}});
  CHECK(t.entries()[0].index == std::vector<int>({0, 1}));
}

TEST_CASE("jacobian: linear case equals the matrix") {
  Matrix a(2, 2);
  a << 1.5, -2.0, 0.25, 3.0;
  const Tensor t = Tensor::from_matrix(a);
  Rng rng(7);
  const Vec x = random_vec(2, rng);
  CHECK(jacobian(t, x).isApprox(a));
  CHECK(apply_power(t, x).isApprox(a * x));
}

TEST_CASE("jacobian matches the frozen finite-difference value") {
  const auto trio = fixtures::swap_squares_trio();
  const Vec x = vec2(1, 2);
  Matrix expected(2, 2);
  expected << 0, 4, 2, 0;  // frozen from central differences at step 1e-6
  const Matrix fd = fd_jacobian(trio[0], x);
  CHECK((fd - expected).lpNorm<Eigen::Infinity>() <= 1e-6 * 4);
  CHECK(jacobian(trio[0], x).isApprox(expected, 1e-12));
}

TEST_CASE("jacobian of the diagonal tensor") {
  const Tensor id = Tensor::identity(3, 2);
  const Vec x = vec2(3.0, -0.5);
  Matrix expected = Matrix::Zero(2, 2);
  expected(0, 0) = 2 * x[0];
  expected(1, 1) = 2 * x[1];
  CHECK(jacobian(id, x).isApprox(expected));
}

TEST_CASE("jacobian consistency: finite differences on random inputs") {
  Rng rng(20240811);
  for (int trial = 0; trial < 100; ++trial) {
    const int m = 2 + static_cast<int>(rng.next_u64() % 3);
    const int n = 2 + static_cast<int>(rng.next_u64() % 2);
    const Tensor a = random_tensor(m, n, rng);
    Vec x = random_vec(n, rng);
    if (x.norm() > 2.0) x *= 2.0 / x.norm();
    const Matrix J = jacobian(a, x);
    const Matrix fd = fd_jacobian(a, x);
    const double scale = std::max(1.0, J.lpNorm<Eigen::Infinity>());
    CHECK((J - fd).lpNorm<Eigen::Infinity>() <= 1e-6 * scale);
  }
}

TEST_CASE("homogeneity: A(t x)^{m-1} = t^{m-1} A x^{m-1}") {
  Rng rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    const int m = 2 + static_cast<int>(rng.next_u64() % 3);
    const int n = 2 + static_cast<int>(rng.next_u64() % 2);
    const Tensor a = random_tensor(m, n, rng);
    const Vec x = random_vec(n, rng);
    const double t = rng.uniform(-2.0, 2.0);
    const Vec lhs = apply_power(a, t * x);
    const Vec rhs = std::pow(t, m - 1) * apply_power(a, x);
    const double scale = std::max(1.0, rhs.lpNorm<Eigen::Infinity>());
    CHECK((lhs - rhs).lpNorm<Eigen::Infinity>() <= 1e-12 * scale);
  }
}

TEST_CASE("linearity of apply_power in the tensor argument") {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 2 + static_cast<int>(rng.next_u64() % 3);
    const Tensor a = random_tensor(m, 2, rng);
    const Tensor b = random_tensor(m, 2, rng);
    const Vec x = random_vec(2, rng);
    const Vec sum = apply_power(tensor_sum(a, b), x);
    CHECK(sum.isApprox(apply_power(a, x) + apply_power(b, x), 1e-12));
  }
}

TEST_CASE("min map and elementwise algebra") {
  CHECK(min_map(vec2(1, -2), vec2(0, -1)).isApprox(vec2(0, -2)));
  CHECK(hadamard(vec2(2, 3), vec2(4, 5)).isApprox(vec2(8, 15)));
  CHECK(elementwise_power(vec2(-2, 3), 3).isApprox(vec2(-8, 27)));
  CHECK(hadamard(vec2(3, -1), Vec::Zero(2)).isApprox(Vec::Zero(2)));
  CHECK_THROWS_AS(min_map(vec2(1, 2), Vec::Zero(3)), std::invalid_argument);
  CHECK_THROWS_AS(hadamard(vec2(1, 2), Vec::Zero(3)), std::invalid_argument);
}

TEST_CASE("translation identity holds exactly") {
  Rng rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const Vec x = random_vec(3, rng);
    const Vec y = random_vec(3, rng);
    const Vec z = random_vec(3, rng);
    const Vec lhs = z + min_map(x, y);
    const Vec rhs = min_map(z + x, z + y);
    CHECK(lhs == rhs);  // exact: addition is monotone in each component
  }
}

TEST_CASE("complementarity characterizations agree") {
  // x /\ y = 0 iff x,y >= 0 with x*y = 0 iff x,y >= 0 with <x,y> = 0.
  CHECK(min_map(vec2(1, 0), vec2(0, 3)).isZero());
  Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    Vec x = Vec::Zero(3), y = Vec::Zero(3);
    for (int i = 0; i < 3; ++i) {
      const double v = std::abs(rng.normal());
      if (rng.uniform() < 0.5)
        x[i] = v;
      else
        y[i] = v;
    }
    const bool min_zero = min_map(x, y).isZero();
    const bool had_zero = (x.minCoeff() >= 0) && (y.minCoeff() >= 0) &&
                          hadamard(x, y).isZero();
    const bool dot_zero =
        (x.minCoeff() >= 0) && (y.minCoeff() >= 0) && (x.dot(y) == 0.0);
    CHECK(min_zero == had_zero);
    CHECK(had_zero == dot_zero);
  }
}

TEST_CASE("real odd roots of negative numbers") {
  CHECK(real_nth_root(-8.0, 3) == doctest::Approx(-2.0));
  CHECK(real_nth_root(27.0, 3) == doctest::Approx(3.0));
  CHECK(real_nth_root(16.0, 4) == doctest::Approx(2.0));
  CHECK_THROWS_AS(real_nth_root(-1.0, 2), std::domain_error);
}
