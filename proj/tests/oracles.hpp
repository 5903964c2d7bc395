// Independent oracles used by the tests: straight-line closed-form case
// enumerations and a brute-force linear signed count. These deliberately
// avoid the library's solver/degree code paths.
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

#include "ehtcp/problem.hpp"
#include "ehtcp/tensor.hpp"

namespace oracles {

using ehtcp::Vec;

inline Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

/// Closed-form solution set of the mixed-cubes pair
///   x1^3 = q1 + y1^3 + y2^3,  x2^3 = q2 - y2^3 - y1*y2^2,  x /\ y = 0,
/// by the complementarity case split. Returns stacked (x, y) vectors.
inline std::vector<Vec> mixed_cubes_solutions(const Vec& q) {
  const double q1 = q[0], q2 = q[1];
  std::vector<Vec> out;
  auto cbrt = [](double t) { return std::cbrt(t); };
  auto push = [&](double x1, double x2, double y1, double y2) {
    Vec s(4);
    s << x1, x2, y1, y2;
    // Verify the defining equations before accepting a case.
    const double r1 = x1 * x1 * x1 - q1 - y1 * y1 * y1 - y2 * y2 * y2;
    const double r2 = x2 * x2 * x2 - q2 + y2 * y2 * y2 + y1 * y2 * y2;
    const bool comp = std::min(x1, y1) == 0.0 && std::min(x2, y2) == 0.0 &&
                      x1 >= 0 && x2 >= 0 && y1 >= 0 && y2 >= 0;
    if (std::abs(r1) <= 1e-9 && std::abs(r2) <= 1e-9 && comp) {
      for (const auto& seen : out)
        if ((seen - s).lpNorm<Eigen::Infinity>() <= 1e-7) return;
      out.push_back(s);
    }
  };

  // x = 0 cases.
  if (q1 == 0.0 && q2 == 0.0) push(0, 0, 0, 0);
  if (q2 == 0.0 && -q1 > 0.0) push(0, 0, cbrt(-q1), 0);          // y = (y1, 0)
  if (q2 == -q1 && q2 > 0.0) push(0, 0, 0, cbrt(q2));            // y = (0, y2)
  {
    // y1, y2 > 0: roots of ((q1+q2) + t)^3 - t (q1 + t)^2 in t = y1^3.
    // Scan + bisect: t in (0, T] with T generous for |q| <= 4.
    auto g = [&](double t) {
      const double a = q1 + q2 + t;
      const double b = q1 + t;
      return a * a * a - t * b * b;
    };
    const double T = 64.0 + 8.0 * (std::abs(q1) + std::abs(q2));
    double prev_t = 1e-12, prev_g = g(prev_t);
    const int grid = 4000;
    for (int i = 1; i <= grid; ++i) {
      const double t = T * static_cast<double>(i) / grid;
      const double gt = g(t);
      if (prev_g == 0.0 || (prev_g < 0) != (gt < 0)) {
        double lo = prev_t, hi = t;
        for (int it = 0; it < 200; ++it) {
          const double mid = 0.5 * (lo + hi);
          if ((g(lo) < 0) != (g(mid) < 0))
            hi = mid;
          else
            lo = mid;
        }
        const double y1 = cbrt(0.5 * (lo + hi));
        const double y23 = -q1 - y1 * y1 * y1;
        if (y1 > 0 && y23 > 0) push(0, 0, y1, cbrt(y23));
      }
      prev_t = t;
      prev_g = gt;
    }
  }
  // x nonzero cases.
  if (q1 + q2 > 0.0 && q2 >= 0.0)
    push(cbrt(q1 + q2), 0, 0, cbrt(q2));   // x1 > 0, x2 = 0
  if (q2 > 0.0 && q1 <= 0.0)
    push(0, cbrt(q2), cbrt(-q1), 0);       // x1 = 0, x2 > 0
  if (q1 > 0.0 && q2 > 0.0)
    push(cbrt(q1), cbrt(q2), 0, 0);        // x1, x2 > 0
  return out;
}

/// Brute-force signed count for the order-2 identity pair: the stacked map
/// rows are min(x0_c, x1_c) and x0 - x1; every branch system is linear and
/// solved directly. Returns the sum of Jacobian determinant signs over the
/// branch solutions of map = p.
inline int identity_pair_signed_count(const Vec& p, int n) {
  using Matrix = ehtcp::Matrix;
  int total = 0;
  for (int branch = 0; branch < (1 << n); ++branch) {
    Matrix J = Matrix::Zero(2 * n, 2 * n);
    Vec rhs(2 * n);
    for (int c = 0; c < n; ++c) {
      if ((branch >> c) & 1)
        J(c, n + c) = 1.0;  // x1_c pinned to p
      else
        J(c, c) = 1.0;      // x0_c pinned to p
      rhs[c] = p[c];
      J(n + c, c) = 1.0;
      J(n + c, n + c) = -1.0;
      rhs[n + c] = p[n + c];
    }
    Eigen::FullPivLU<Matrix> lu(J);
    if (!lu.isInvertible()) continue;
    const Vec sol = lu.solve(rhs);
    bool feasible = true;
    for (int c = 0; c < n; ++c) {
      const double other = ((branch >> c) & 1) ? sol[c] : sol[n + c];
      if (other < p[c]) feasible = false;  // the pinned side must be the min
    }
    if (!feasible) continue;
    total += lu.determinant() > 0 ? 1 : -1;
  }
  return total;
}

}  // namespace oracles
