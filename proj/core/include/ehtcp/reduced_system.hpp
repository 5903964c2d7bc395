#pragma once

#include <limits>
#include <vector>

#include "ehtcp/patterns.hpp"
#include "ehtcp/problem.hpp"
#include "ehtcp/util.hpp"

namespace ehtcp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// The square polynomial system left after a case split pins part of the
/// stacked variables: the n tensor rows A_0 x_0^{m-1} - sum_j A_j x_j^{m-1}
/// = rhs over the free variables, plus box bounds used as side conditions.
/// Global variable ids are block-major: var = block * n + component.
struct ReducedSystem {
  const TensorTuple* tuple = nullptr;
  Vec rhs;
  std::vector<double> pin;    // size (k+1)*n; NaN marks a free variable
  std::vector<int> free_vars; // ascending global ids
  std::vector<double> lower;  // per global var, -inf when absent
  std::vector<double> upper;  // per global var, +inf when absent
  bool pin_conflict = false;

  int n() const { return tuple->dim(); }
  int k() const { return tuple->k(); }
  int num_free() const { return static_cast<int>(free_vars.size()); }
  bool is_free(int var) const;

  /// Full blocks with pins in place and free values substituted.
  std::vector<Vec> assemble(const Vec& free_values) const;
  /// Tensor rows minus rhs.
  Vec eval(const Vec& free_values) const;
  /// Jacobian of eval with respect to the free variables (n x num_free).
  Matrix jac(const Vec& free_values) const;
  /// Signed bound slack of a full point: min over bounds of how far inside
  /// the box it sits (negative = violated).
  double bound_slack(const std::vector<Vec>& blocks) const;
};

/// Accumulates pins and box bounds for a case split, then produces the
/// ReducedSystem. Re-pinning a variable to a different value, or pinning it
/// outside its bounds, marks the system as conflicting (certified empty).
class ReducedSystemBuilder {
 public:
  ReducedSystemBuilder(const TensorTuple& tuple, Vec rhs);

  void pin(int var, double value);
  void bound_below(int var, double bound);
  void bound_above(int var, double bound);

  ReducedSystem build() const;

 private:
  const TensorTuple* tuple_;
  Vec rhs_;
  std::vector<double> pin_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  bool conflict_ = false;
};

/// Builds the reduced system for one complementarity pattern of `inst`:
/// pins per the pattern, rhs = q, bounds = the pattern's side conditions.
/// Conflicting pins (a variable pinned to both 0 and d_j > 0) set
/// pin_conflict, which certifies the pattern empty.
ReducedSystem reduce_pattern(const EhtcpInstance& inst, const Pattern& pattern);

/// Interval sign reasoning on the tensor rows: a row whose monomials all
/// have a determinate sign on the bound box and whose constant term strictly
/// dominates cannot vanish, so the system is certified empty.
bool certify_empty_by_sign(const ReducedSystem& sys);

struct NewtonOptions {
  int max_iters = 80;
  double tol = 1e-12;        // inf-norm target for the reduced residual
  double step_floor = 1e-12; // Armijo floor, then declare a stall
  double armijo_c = 1e-4;
};

enum class NewtonStatus { Converged, Stalled, MaxIterations };

struct NewtonOutcome {
  NewtonStatus status = NewtonStatus::Stalled;
  Vec free_values;
  int iters = 0;
  bool hit_singular_jacobian = false;
};

/// Damped Newton on the reduced system with Armijo backtracking on
/// 0.5*||f||^2; falls back to a Levenberg-Marquardt step when the Jacobian
/// is singular or the plain step fails.
NewtonOutcome newton_reduced(const ReducedSystem& sys, Vec start,
                             const NewtonOptions& opts);

struct MultistartReport {
  std::vector<Vec> roots;  // deduplicated free-variable roots, found order
  int starts = 0;
  int converged = 0;
  int stalled = 0;
  int singular_events = 0;
  long newton_iters = 0;
  /// True when the trailing half of the starts produced no new root (or the
  /// system is linear and was solved directly).
  bool saturated = false;
  bool all_converged = false;
};

/// Runs `starts` Newton attempts from N(0,1)*scale starting points (paired
/// with their negatives for symmetric coverage) and merges distinct roots.
/// Deterministic for a fixed rng seed regardless of `threads`.
MultistartReport solve_multistart(const ReducedSystem& sys, int starts,
                                  double start_scale, Rng rng,
                                  const NewtonOptions& opts, int threads);

}  // namespace ehtcp
