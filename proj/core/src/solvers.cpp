#include "ehtcp/solvers.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ehtcp/util.hpp"

namespace ehtcp {

namespace {

double start_scale_for(const Vec& q, int order) {
  const double qn = q.lpNorm<Eigen::Infinity>();
  return 1.0 + std::pow(qn, 1.0 / (order - 1));
}

/// Zeroes small components when that keeps the point feasible; pattern pins
/// (0 or d_j) are unaffected. Canonicalizes near-boundary roots so that
/// duplicates from adjacent patterns collapse exactly.
CandidateSolution snap_candidate(const EhtcpInstance& inst,
                                 std::vector<Vec> blocks, double tol) {
  const Vec flat = flatten(blocks);
  const double threshold = 1e-4 * std::max(1.0, flat.lpNorm<Eigen::Infinity>());
  bool changed = false;
  std::vector<Vec> snapped = blocks;
  for (auto& b : snapped)
    for (Eigen::Index i = 0; i < b.size(); ++i)
      if (b[i] != 0.0 && std::abs(b[i]) <= threshold) {
        b[i] = 0.0;
        changed = true;
      }
  if (changed) {
    CandidateSolution c = make_candidate(inst, snapped);
    if (c.residual_inf <= tol) return c;
  }
  return make_candidate(inst, std::move(blocks));
}

std::vector<long long> sort_key(const CandidateSolution& c) {
  const Vec flat = flatten(c.blocks);
  std::vector<long long> key(flat.size());
  for (Eigen::Index i = 0; i < flat.size(); ++i) {
    double r = std::nearbyint(flat[i] * 1e9);
    r = std::clamp(r, -9.0e17, 9.0e17);
    key[i] = static_cast<long long>(r);
  }
  return key;
}

void sort_and_dedup(std::vector<CandidateSolution>* sols, double dedup_tol) {
  std::stable_sort(sols->begin(), sols->end(),
                   [](const CandidateSolution& a, const CandidateSolution& b) {
                     return sort_key(a) < sort_key(b);
                   });
  std::vector<CandidateSolution> kept;
  for (auto& s : *sols) {
    bool fresh = true;
    for (const auto& kset : kept) {
      if ((flatten(s.blocks) - flatten(kset.blocks)).lpNorm<Eigen::Infinity>() <
          dedup_tol) {
        fresh = false;
        break;
      }
    }
    if (fresh) kept.push_back(std::move(s));
  }
  *sols = std::move(kept);
}

Vec full_residual(const EhtcpInstance& inst, const std::vector<Vec>& blocks) {
  CandidateSolution c;
  c.blocks = blocks;
  return residual_psi_d(inst, c);
}

/// Generalized Jacobian of the stacked map; each min row differentiates the
/// smaller argument, ties take the left branch.
Matrix full_jacobian(const EhtcpInstance& inst, const std::vector<Vec>& blocks) {
  const int n = inst.dim();
  const int k = inst.k();
  const Eigen::Index total = static_cast<Eigen::Index>(k + 1) * n;
  Matrix J = Matrix::Zero(total, total);
  for (int c = 0; c < n; ++c) {
    const double a = blocks[0][c];
    const double b = blocks[1][c];
    if (a <= b)
      J(c, c) = 1.0;
    else
      J(c, n + c) = 1.0;
  }
  for (int j = 1; j <= k - 1; ++j)
    for (int c = 0; c < n; ++c) {
      const double a = inst.d()[j - 1][c] - blocks[j][c];
      const double b = blocks[j + 1][c];
      const Eigen::Index row = static_cast<Eigen::Index>(j) * n + c;
      if (a <= b)
        J(row, static_cast<Eigen::Index>(j) * n + c) = -1.0;
      else
        J(row, static_cast<Eigen::Index>(j + 1) * n + c) = 1.0;
    }
  const Eigen::Index tensor_row = static_cast<Eigen::Index>(k) * n;
  for (int b = 0; b <= k; ++b) {
    Matrix jb = jacobian(inst.tuple()[b], blocks[b]);
    if (b > 0) jb = -jb;
    J.block(tensor_row, static_cast<Eigen::Index>(b) * n, n, n) = jb;
  }
  return J;
}

}  // namespace

std::vector<CandidateSolution> solve_pattern(const EhtcpInstance& inst,
                                             const Pattern& pattern,
                                             const SolveOptions& opts,
                                             PatternDiagnostics* diag) {
  PatternDiagnostics local;
  PatternDiagnostics& d = diag ? *diag : local;
  d = PatternDiagnostics{};
  d.pattern_bits = pattern.bits();

  const ReducedSystem sys = reduce_pattern(inst, pattern);
  if (sys.pin_conflict) {
    d.status = PatternDiagnostics::Status::PinConflict;
    d.complete = true;
    return {};
  }
  if (certify_empty_by_sign(sys)) {
    d.status = PatternDiagnostics::Status::CertifiedEmptyBySign;
    d.complete = true;
    return {};
  }

  NewtonOptions nopts;
  nopts.max_iters = opts.max_newton_iters;
  nopts.tol = opts.newton_tol;
  nopts.step_floor = opts.step_floor;

  const int starts = opts.multistart_factor * std::max(1, sys.num_free());
  const Rng rng = Rng(opts.seed).fork(0x9e3779b9ull ^ pattern.bits());
  const MultistartReport rep =
      solve_multistart(sys, starts, start_scale_for(inst.q(), inst.order()),
                       rng, nopts, opts.threads);

  d.status = PatternDiagnostics::Status::MultistartDone;
  d.starts = rep.starts;
  d.converged = rep.converged;
  d.stalled = rep.stalled;
  d.singular_events = rep.singular_events;
  d.newton_iters = rep.newton_iters;
  d.complete = rep.all_converged;

  std::vector<CandidateSolution> found;
  for (const auto& root : rep.roots) {
    CandidateSolution cand = snap_candidate(inst, sys.assemble(root), opts.tol);
    if (sys.bound_slack(cand.blocks) < -opts.ineq_tol) continue;
    if (!is_solution(inst, cand, opts.tol)) continue;
    found.push_back(std::move(cand));
  }
  sort_and_dedup(&found, opts.dedup_tol);
  d.solutions_found = static_cast<int>(found.size());
  return found;
}

namespace {

SolutionSet solve_without_patterns(const EhtcpInstance& inst,
                                   const SolveOptions& opts) {
  SolutionSet out;
  out.exhaustive = false;
  const int blocks = inst.k() + 1;
  const int n = inst.dim();
  const double scale = start_scale_for(inst.q(), inst.order());
  const Rng rng(opts.seed);

  std::vector<SemismoothResult> results(opts.fallback_starts);
  parallel_for(static_cast<std::size_t>(opts.fallback_starts), opts.threads,
               [&](std::size_t s) {
                 Rng stream = rng.fork(0xfa11ull + s);
                 CandidateSolution start;
                 start.blocks.assign(blocks, Vec::Zero(n));
                 for (auto& b : start.blocks)
                   for (int i = 0; i < n; ++i)
                     b[i] = std::abs(stream.normal()) * scale;
                 results[s] = semismooth_newton(inst, start, opts);
               });
  for (auto& r : results) {
    out.stats.newton_iterations += r.iters;
    if (r.converged)
      out.solutions.push_back(
          snap_candidate(inst, std::move(r.point.blocks), opts.tol));
  }
  ContinuationResult cont =
      continuation_solve(inst, opts.continuation_steps, opts);
  for (auto& s : cont.solutions) out.solutions.push_back(std::move(s));
  sort_and_dedup(&out.solutions, opts.dedup_tol);
  return out;
}

}  // namespace

SolutionSet solve_all(const EhtcpInstance& inst, const SolveOptions& opts) {
  const int n = inst.dim();
  const int k = inst.k();
  if (n * k > kMaxPatternBits) return solve_without_patterns(inst, opts);

  const PatternRange range = enumerate_patterns(n, k);
  const std::uint64_t count = range.size();

  SolutionSet out;
  out.stats.patterns_total = count;
  out.diagnostics.resize(count);
  std::vector<std::vector<CandidateSolution>> per_pattern(count);

  SolveOptions inner = opts;
  inner.threads = 1;  // patterns already run concurrently
  parallel_for(static_cast<std::size_t>(count), opts.threads,
               [&](std::size_t code) {
                 per_pattern[code] = solve_pattern(
                     inst, range.at(code), inner, &out.diagnostics[code]);
               });

  out.exhaustive = true;
  for (std::uint64_t code = 0; code < count; ++code) {
    const auto& d = out.diagnostics[code];
    out.stats.patterns_processed++;
    out.stats.newton_iterations += d.newton_iters;
    if (d.status != PatternDiagnostics::Status::MultistartDone)
      out.stats.patterns_certified_empty++;
    if (!d.complete) out.exhaustive = false;
    for (auto& s : per_pattern[code]) out.solutions.push_back(std::move(s));
  }
  sort_and_dedup(&out.solutions, opts.dedup_tol);
  return out;
}

SemismoothResult semismooth_newton(const EhtcpInstance& inst,
                                   const CandidateSolution& start,
                                   const SolveOptions& opts) {
  SemismoothResult out;
  std::vector<Vec> x = start.blocks;
  if (static_cast<int>(x.size()) != inst.k() + 1)
    throw std::invalid_argument("semismooth_newton: start block count mismatch");

  Vec f = full_residual(inst, x);
  double merit = 0.5 * f.squaredNorm();
  if (f.lpNorm<Eigen::Infinity>() <= opts.tol) {
    out.converged = true;
    out.point = make_candidate(inst, std::move(x));
    return out;
  }

  bool used_singular_fallback = false;
  for (out.iters = 1; out.iters <= opts.max_newton_iters; ++out.iters) {
    const Matrix J = full_jacobian(inst, x);
    const Vec flat = flatten(x);
    Vec dx;
    bool have_step = false;
    {
      Eigen::PartialPivLU<Matrix> lu(J);
      dx = lu.solve(-f);
      have_step = dx.allFinite() && dx.norm() <= 1e8 * (1.0 + flat.norm());
    }
    if (!have_step) {
      used_singular_fallback = true;
      const Matrix JtJ = J.transpose() * J;
      const Vec g = J.transpose() * f;
      Matrix A = JtJ;
      A.diagonal().array() += 1e-8 * std::max(1.0, JtJ.diagonal().maxCoeff());
      dx = A.partialPivLu().solve(-g);
      if (!dx.allFinite() || dx.norm() == 0.0) {
        out.failure = SemismoothResult::Failure::SingularJacobian;
        out.point = make_candidate(inst, std::move(x));
        return out;
      }
    }

    double t = 1.0;
    bool accepted = false;
    const int blocks = inst.k() + 1;
    const int n = inst.dim();
    while (t >= opts.step_floor) {
      const Vec trial_flat = flat + t * dx;
      std::vector<Vec> trial = unflatten(trial_flat, blocks, n);
      const Vec ftrial = full_residual(inst, trial);
      if (ftrial.allFinite()) {
        const double mtrial = 0.5 * ftrial.squaredNorm();
        if (mtrial <= merit * (1.0 - 1e-4 * t) || mtrial < merit - 1e-18) {
          x = std::move(trial);
          f = ftrial;
          merit = mtrial;
          accepted = true;
          break;
        }
      }
      t *= 0.5;
    }
    if (!accepted) {
      out.failure = used_singular_fallback
                        ? SemismoothResult::Failure::SingularJacobian
                        : SemismoothResult::Failure::LineSearchStall;
      out.point = make_candidate(inst, std::move(x));
      return out;
    }
    if (f.lpNorm<Eigen::Infinity>() <= opts.tol) {
      out.converged = true;
      out.point = make_candidate(inst, std::move(x));
      return out;
    }
  }
  out.failure = SemismoothResult::Failure::MaxIterations;
  out.point = make_candidate(inst, std::move(x));
  return out;
}

ContinuationResult continuation_solve(const EhtcpInstance& inst, int steps,
                                      const SolveOptions& opts) {
  if (steps < 1)
    throw std::invalid_argument("continuation_solve: steps must be >= 1");
  ContinuationResult out;
  const int n = inst.dim();
  const int blocks = inst.k() + 1;
  const Rng rng(opts.seed);

  CandidateSolution cur;
  cur.blocks.assign(blocks, Vec::Zero(n));

  for (int j = 1; j <= steps; ++j) {
    const double t = static_cast<double>(j) / steps;
    const EhtcpInstance target(inst.tuple(), inst.d(), t * inst.q(),
                               inst.label());
    SemismoothResult step = semismooth_newton(target, cur, opts);
    if (!step.converged) {
      // Retry from perturbed warm starts; the solution scales like
      // (t*||q||)^{1/(m-1)}, so perturbations escalate on that scale.
      const double base =
          1.0 + std::pow(t * inst.q().lpNorm<Eigen::Infinity>(),
                         1.0 / (inst.order() - 1));
      const double mags[] = {1e-3, 1e-2, 0.05, 0.2, 0.5, 1.0};
      for (int r = 0; r < 6 && !step.converged; ++r) {
        Rng stream = rng.fork(0xc0417ull + 16ull * j + r);
        CandidateSolution perturbed = cur;
        for (auto& b : perturbed.blocks)
          for (int i = 0; i < n; ++i)
            b[i] += std::abs(stream.normal()) * mags[r] * base;
        step = semismooth_newton(target, perturbed, opts);
      }
    }
    if (!step.converged ||
        flatten(step.point.blocks).lpNorm<Eigen::Infinity>() > 1e9) {
      out.diverged = true;
      out.last_good_t = static_cast<double>(j - 1) / steps;
      return out;
    }
    cur = std::move(step.point);
  }
  out.last_good_t = 1.0;
  out.solutions.push_back(snap_candidate(inst, std::move(cur.blocks), opts.tol));
  return out;
}

}  // namespace ehtcp
