#pragma once

#include <cstdint>
#include <vector>

#include "ehtcp/patterns.hpp"
#include "ehtcp/problem.hpp"
#include "ehtcp/reduced_system.hpp"

namespace ehtcp {

struct SolveOptions {
  double tol = kDefaultFeasTol;  // feasibility tolerance, inf-norm
  double newton_tol = 1e-12;     // reduced-system convergence target
  double dedup_tol = 1e-6;       // inf-norm distance separating solutions
  double ineq_tol = 1e-12;       // allowed slack on pattern side conditions
  int multistart_factor = 8;     // starts per free variable
  int max_newton_iters = 80;
  double step_floor = 1e-12;
  std::uint64_t seed = 1;
  int threads = 1;
  int continuation_steps = 20;
  int fallback_starts = 64;  // semismooth starts when patterns are over budget
};

struct PatternDiagnostics {
  std::uint32_t pattern_bits = 0;
  enum class Status { PinConflict, CertifiedEmptyBySign, MultistartDone };
  Status status = Status::MultistartDone;
  int starts = 0;
  int converged = 0;
  int stalled = 0;
  int singular_events = 0;
  long newton_iters = 0;
  int solutions_found = 0;
  /// Certified empty, or every Newton start met its convergence criterion.
  bool complete = false;
};

struct SolveStats {
  std::uint64_t patterns_total = 0;
  std::uint64_t patterns_processed = 0;
  std::uint64_t patterns_certified_empty = 0;
  long newton_iterations = 0;
};

/// Deduplicated verified solutions plus per-pattern diagnostics.
struct SolutionSet {
  std::vector<CandidateSolution> solutions;
  /// True when every pattern was processed to convergence or certified empty.
  bool exhaustive = false;
  SolveStats stats;
  std::vector<PatternDiagnostics> diagnostics;
};

/// Pins variables per the pattern, solves the remaining square polynomial
/// system by damped multistart Newton, then filters by the pattern's side
/// conditions and full feasibility. Returns all distinct verified solutions
/// found within budget.
std::vector<CandidateSolution> solve_pattern(const EhtcpInstance& inst,
                                             const Pattern& pattern,
                                             const SolveOptions& opts,
                                             PatternDiagnostics* diag = nullptr);

/// Union of solve_pattern over every complementarity pattern, deduplicated.
/// Falls back to multistart semismooth Newton plus continuation when n*k
/// exceeds the pattern budget guard (exhaustive stays false).
SolutionSet solve_all(const EhtcpInstance& inst, const SolveOptions& opts);

struct SemismoothResult {
  bool converged = false;
  enum class Failure { None, MaxIterations, LineSearchStall, SingularJacobian };
  Failure failure = Failure::None;
  CandidateSolution point;
  int iters = 0;
};

/// Damped Newton on the stacked min-map residual. Generalized Jacobian rows
/// for each min row take the smaller argument's derivative (ties go left).
SemismoothResult semismooth_newton(const EhtcpInstance& inst,
                                   const CandidateSolution& start,
                                   const SolveOptions& opts);

struct ContinuationResult {
  std::vector<CandidateSolution> solutions;  // end-of-path points
  bool diverged = false;
  double last_good_t = 0.0;
};

/// Traces the homotopy that scales q from 0 (where x = 0 solves the problem)
/// to 1, warm-starting semismooth Newton at each step.
ContinuationResult continuation_solve(const EhtcpInstance& inst, int steps,
                                      const SolveOptions& opts);

}  // namespace ehtcp
