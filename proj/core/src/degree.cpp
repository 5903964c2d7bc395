#include "ehtcp/degree.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ehtcp/reduced_system.hpp"
#include "ehtcp/util.hpp"

namespace ehtcp {

namespace {

enum class MapKind { Leading, Paired };

struct BranchContext {
  const TensorTuple* tuple;
  const std::vector<Vec>* d;  // used by Paired only
  MapKind kind;
  Vec target;                 // stacked, size (k+1)*n
};

/// Left/right variable of min row r (pair p = r / n, component c = r % n).
/// Leading rows are min(x_0, x_{p+1}); paired rows are min(x_0, x_1) for
/// p = 0 and min(d_p - x_p, x_{p+1}) for p >= 1.
struct MinRow {
  int pair;
  int comp;
  bool left_is_d_row;  // left argument is d_p[c] - x_p[c]
  int left_var;
  int right_var;
};

MinRow min_row(const BranchContext& ctx, int r) {
  const int n = ctx.tuple->dim();
  MinRow row;
  row.pair = r / n;
  row.comp = r % n;
  if (ctx.kind == MapKind::Leading) {
    row.left_is_d_row = false;
    row.left_var = row.comp;
    row.right_var = (row.pair + 1) * n + row.comp;
  } else if (row.pair == 0) {
    row.left_is_d_row = false;
    row.left_var = row.comp;
    row.right_var = n + row.comp;
  } else {
    row.left_is_d_row = true;
    row.left_var = row.pair * n + row.comp;
    row.right_var = (row.pair + 1) * n + row.comp;
  }
  return row;
}

ReducedSystem branch_system(const BranchContext& ctx, std::uint32_t bits) {
  const int n = ctx.tuple->dim();
  const int k = ctx.tuple->k();
  ReducedSystemBuilder builder(*ctx.tuple, ctx.target.segment(k * n, n));
  for (int r = 0; r < k * n; ++r) {
    const MinRow row = min_row(ctx, r);
    const double pr = ctx.target[r];
    const bool right = (bits >> r) & 1u;
    if (!right) {
      // Left argument equals the target; the right one stays above it.
      if (row.left_is_d_row)
        builder.pin(row.left_var, (*ctx.d)[row.pair - 1][row.comp] - pr);
      else
        builder.pin(row.left_var, pr);
      builder.bound_below(row.right_var, pr);
    } else {
      builder.pin(row.right_var, pr);
      if (row.left_is_d_row)
        builder.bound_above(row.left_var,
                            (*ctx.d)[row.pair - 1][row.comp] - pr);
      else
        builder.bound_below(row.left_var, pr);
    }
  }
  return builder.build();
}

/// Distance of the point to the nearest min-kink of this branch: the slack
/// of each row's non-pinned argument above the target value.
double branch_kink_gap(const BranchContext& ctx, std::uint32_t bits,
                       const std::vector<Vec>& blocks) {
  const int n = ctx.tuple->dim();
  const int k = ctx.tuple->k();
  double gap = kInf;
  auto value_of = [&](int var) { return blocks[var / n][var % n]; };
  for (int r = 0; r < k * n; ++r) {
    const MinRow row = min_row(ctx, r);
    const double pr = ctx.target[r];
    const bool right = (bits >> r) & 1u;
    double other;
    if (!right) {
      other = value_of(row.right_var);
    } else {
      other = row.left_is_d_row
                  ? (*ctx.d)[row.pair - 1][row.comp] - value_of(row.left_var)
                  : value_of(row.left_var);
    }
    gap = std::min(gap, other - pr);
  }
  return gap;
}

/// Full Jacobian of the smooth branch at a point: min rows differentiate
/// their pinned (smaller) argument, tensor rows use the block Jacobians.
Matrix branch_jacobian(const BranchContext& ctx, std::uint32_t bits,
                       const std::vector<Vec>& blocks) {
  const int n = ctx.tuple->dim();
  const int k = ctx.tuple->k();
  const Eigen::Index total = static_cast<Eigen::Index>(k + 1) * n;
  Matrix J = Matrix::Zero(total, total);
  for (int r = 0; r < k * n; ++r) {
    const MinRow row = min_row(ctx, r);
    const bool right = (bits >> r) & 1u;
    if (!right)
      J(r, row.left_var) = row.left_is_d_row ? -1.0 : 1.0;
    else
      J(r, row.right_var) = 1.0;
  }
  const Eigen::Index tensor_row = static_cast<Eigen::Index>(k) * n;
  for (int b = 0; b <= k; ++b) {
    Matrix jb = jacobian((*ctx.tuple)[b], blocks[b]);
    if (b > 0) jb = -jb;
    J.block(tensor_row, static_cast<Eigen::Index>(b) * n, n, n) = jb;
  }
  return J;
}

struct SweepOutcome {
  DegreeEstimate est;
  bool kink_trouble = false;
  bool singular_trouble = false;
};

SweepOutcome sweep_branches(const BranchContext& ctx, const DegreeOptions& opts) {
  const int n = ctx.tuple->dim();
  const int k = ctx.tuple->k();
  if (k * n > kMaxPatternBits)
    throw std::invalid_argument("degree sweep: n*k exceeds the branch budget");

  SweepOutcome out;
  out.est.target = ctx.target;
  const std::uint64_t branches = std::uint64_t{1} << (k * n);
  out.est.branches_total = branches;

  NewtonOptions nopts;
  nopts.max_iters = opts.max_newton_iters;
  nopts.tol = 1e-12;

  struct BranchResult {
    std::vector<Vec> roots;
    bool conflict = false;
    bool certified = false;
    bool complete = false;
  };
  std::vector<BranchResult> results(branches);

  const double scale =
      1.0 + std::pow(ctx.target.lpNorm<Eigen::Infinity>(),
                     1.0 / (ctx.tuple->order() - 1));
  const Rng rng(opts.seed);

  parallel_for(static_cast<std::size_t>(branches), opts.threads,
               [&](std::size_t code) {
                 BranchResult& res = results[code];
                 const ReducedSystem sys =
                     branch_system(ctx, static_cast<std::uint32_t>(code));
                 if (sys.pin_conflict) {
                   res.conflict = res.complete = true;
                   return;
                 }
                 if (certify_empty_by_sign(sys)) {
                   res.certified = res.complete = true;
                   return;
                 }
                 const int starts =
                     opts.multistart_factor * std::max(1, sys.num_free());
                 const MultistartReport rep = solve_multistart(
                     sys, starts, scale, rng.fork(0xdeull ^ code), nopts, 1);
                 res.complete = rep.saturated;
                 for (const auto& root : rep.roots)
                   res.roots.push_back(flatten(sys.assemble(root)));
               });

  std::vector<Vec> counted;
  out.est.exhaustive_sweep = true;
  for (std::uint64_t code = 0; code < branches; ++code) {
    const BranchResult& res = results[code];
    if (res.conflict) out.est.branches_conflict++;
    if (res.certified) out.est.branches_certified_empty++;
    if (res.complete) out.est.branches_complete++;
    else out.est.exhaustive_sweep = false;

    for (const auto& flat : res.roots) {
      const std::vector<Vec> blocks = unflatten(flat, k + 1, n);
      const double gap = branch_kink_gap(ctx, static_cast<std::uint32_t>(code),
                                         blocks);
      if (gap < -opts.kink_tol) continue;  // lives in another branch
      if (gap < opts.kink_tol) {
        out.kink_trouble = true;
        out.est.no_kink_proximity = false;
        continue;
      }
      bool fresh = true;
      for (const auto& seen : counted)
        if ((seen - flat).lpNorm<Eigen::Infinity>() < 1e-8) {
          fresh = false;
          break;
        }
      if (!fresh) continue;
      counted.push_back(flat);

      const Matrix J =
          branch_jacobian(ctx, static_cast<std::uint32_t>(code), blocks);
      Eigen::FullPivLU<Matrix> lu(J);
      CountedSolution sol;
      sol.blocks = blocks;
      sol.kink_gap = gap;
      sol.jac_det = lu.determinant();
      if (!lu.isInvertible() || sol.jac_det == 0.0) {
        out.singular_trouble = true;
        out.est.all_nonsingular = false;
        sol.sign = 0;
      } else {
        sol.sign = sol.jac_det > 0.0 ? 1 : -1;
      }
      out.est.value += sol.sign;
      out.est.solutions.push_back(std::move(sol));
    }
  }
  return out;
}

Vec draw_target(const TensorTuple& tuple, Rng rng, double scale_opt) {
  const int total = (tuple.k() + 1) * tuple.dim();
  double coeff_scale = 0.0;
  for (const auto& t : tuple.tensors())
    coeff_scale = std::max(coeff_scale, t.max_abs_coeff());
  const double norm_target = scale_opt * (1.0 + coeff_scale);
  Vec p(total);
  for (int i = 0; i < total; ++i) p[i] = rng.uniform(-1.0, 1.0);
  const double pn = p.lpNorm<Eigen::Infinity>();
  if (pn > 0) p *= norm_target / pn;
  return p;
}

DegreeResult run_with_gate(const TensorTuple& tuple,
                           const std::vector<Vec>* d, MapKind kind,
                           const DegreeOptions& opts,
                           std::optional<ClassVerdict> gate) {
  DegreeResult out;
  if (!gate) {
    FalsifyOptions fopts;
    fopts.restarts = opts.gate_restarts;
    fopts.tol = opts.tol;
    fopts.seed = opts.seed;
    fopts.threads = opts.threads;
    gate = falsify(ClassName::EHR0, tuple, fopts);
  }
  out.gate = gate;
  if (gate->status == VerdictStatus::Refuted) {
    out.refusal_reason =
        "degree undefined: the EHR0 premise admits a nonzero witness at "
        "budget, so the stacked map's zero set need not be isolated";
    return out;
  }

  BranchContext ctx;
  ctx.tuple = &tuple;
  ctx.d = d;
  ctx.kind = kind;

  Rng rng(opts.seed ^ 0xde60ull);
  SweepOutcome last;
  for (int attempt = 0; attempt <= opts.max_target_retries; ++attempt) {
    ctx.target = draw_target(tuple, rng.fork(attempt), opts.target_scale);
    last = sweep_branches(ctx, opts);
    last.est.target_retries = attempt;
    if (!last.kink_trouble && !last.singular_trouble) break;
  }
  out.estimate = std::move(last.est);
  return out;
}

}  // namespace

DegreeResult estimate_degree(const TensorTuple& tuple,
                             const DegreeOptions& opts) {
  return run_with_gate(tuple, nullptr, MapKind::Leading, opts, std::nullopt);
}

DegreeComparison verify_degree_equivalence(const TensorTuple& tuple,
                                           const std::vector<Vec>& d,
                                           const DegreeOptions& opts) {
  if (static_cast<int>(d.size()) != tuple.k() - 1)
    throw std::invalid_argument(
        "verify_degree_equivalence: need exactly k-1 d-vectors");
  for (const auto& dj : d) {
    if (dj.size() != tuple.dim())
      throw std::invalid_argument("verify_degree_equivalence: d dim mismatch");
    for (Eigen::Index i = 0; i < dj.size(); ++i)
      if (!(dj[i] > 0.0))
        throw std::invalid_argument(
            "verify_degree_equivalence: d must be strictly positive");
  }

  DegreeComparison out;
  out.leading = run_with_gate(tuple, nullptr, MapKind::Leading, opts,
                              std::nullopt);
  if (out.leading.refused()) {
    out.paired = out.leading;
    out.agree = false;
    return out;
  }
  out.paired = run_with_gate(tuple, &d, MapKind::Paired, opts,
                             out.leading.gate);
  out.agree = !out.paired.refused() &&
              out.leading.estimate->value == out.paired.estimate->value;
  return out;
}

}  // namespace ehtcp
