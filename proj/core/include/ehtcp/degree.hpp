#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ehtcp/classes.hpp"
#include "ehtcp/problem.hpp"

namespace ehtcp {

struct DegreeOptions {
  std::uint64_t seed = 1;
  int multistart_factor = 16;  // Newton starts per free variable and branch
  int threads = 1;
  double kink_tol = 1e-6;      // counted solutions must clear min-kinks by this
  int max_target_retries = 8;  // resample the target on kink/singular trouble
  double target_scale = 0.1;   // target inf-norm = scale * (1 + max |coeff|)
  long gate_restarts = 400;    // falsify(EHR0) budget gating the computation
  double tol = 1e-9;
  int max_newton_iters = 100;
};

struct CountedSolution {
  std::vector<Vec> blocks;
  int sign = 0;          // sign of det of the smooth branch Jacobian
  double kink_gap = 0.0; // distance to the nearest min-kink
  double jac_det = 0.0;
};

struct DegreeEstimate {
  int value = 0;  // sum of recorded signs
  Vec target;     // the generic right-hand side used
  std::vector<CountedSolution> solutions;
  bool exhaustive_sweep = false;
  bool all_nonsingular = true;
  bool no_kink_proximity = true;
  std::uint64_t branches_total = 0;
  std::uint64_t branches_conflict = 0;
  std::uint64_t branches_certified_empty = 0;
  std::uint64_t branches_complete = 0;
  int target_retries = 0;
};

/// Estimate result; refused (no estimate) when the gate falsifies EHR0,
/// since the degree is defined only for EHR0 tuples.
struct DegreeResult {
  std::optional<DegreeEstimate> estimate;
  std::string refusal_reason;
  std::optional<ClassVerdict> gate;
  bool refused() const { return !estimate.has_value(); }
};

/// Signed solution count of the leading-min stacked map at a random small
/// generic target: each min row splits into its two smooth branches, every
/// branch system is solved by multistart Newton, and sign(det) of the full
/// branch Jacobian is summed over the distinct solutions found.
DegreeResult estimate_degree(const TensorTuple& tuple,
                             const DegreeOptions& opts);

struct DegreeComparison {
  DegreeResult leading;  // count for the leading-min map
  DegreeResult paired;   // count for the paired map with d rows
  bool agree = false;
};

/// Computes the analogous signed count for the paired map (the one with
/// (d_j - x_j) /\ x_{j+1} rows) at the same generic target and compares.
/// Meaningful when d is strictly positive with components exceeding the
/// solution radius, so the d rows select the same branches near counted
/// solutions.
DegreeComparison verify_degree_equivalence(const TensorTuple& tuple,
                                           const std::vector<Vec>& d,
                                           const DegreeOptions& opts);

}  // namespace ehtcp
