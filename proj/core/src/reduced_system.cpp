#include "ehtcp/reduced_system.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace ehtcp {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}  // namespace

ReducedSystemBuilder::ReducedSystemBuilder(const TensorTuple& tuple, Vec rhs)
    : tuple_(&tuple), rhs_(std::move(rhs)) {
  if (rhs_.size() != tuple.dim())
    throw std::invalid_argument("reduced system rhs dimension mismatch");
  const std::size_t vars = static_cast<std::size_t>(tuple.k() + 1) * tuple.dim();
  pin_.assign(vars, kNaN);
  lower_.assign(vars, -kInf);
  upper_.assign(vars, kInf);
}

void ReducedSystemBuilder::pin(int var, double value) {
  if (std::isnan(pin_[var]))
    pin_[var] = value;
  else if (pin_[var] != value)
    conflict_ = true;
}

void ReducedSystemBuilder::bound_below(int var, double bound) {
  lower_[var] = std::max(lower_[var], bound);
}

void ReducedSystemBuilder::bound_above(int var, double bound) {
  upper_[var] = std::min(upper_[var], bound);
}

ReducedSystem ReducedSystemBuilder::build() const {
  ReducedSystem sys;
  sys.tuple = tuple_;
  sys.rhs = rhs_;
  sys.pin = pin_;
  sys.lower = lower_;
  sys.upper = upper_;
  sys.pin_conflict = conflict_;
  for (std::size_t v = 0; v < sys.pin.size(); ++v) {
    if (!std::isnan(sys.pin[v])) {
      if (sys.pin[v] < sys.lower[v] || sys.pin[v] > sys.upper[v])
        sys.pin_conflict = true;
    } else {
      if (sys.lower[v] > sys.upper[v]) sys.pin_conflict = true;
      sys.free_vars.push_back(static_cast<int>(v));
    }
  }
  return sys;
}

bool ReducedSystem::is_free(int var) const { return std::isnan(pin[var]); }

std::vector<Vec> ReducedSystem::assemble(const Vec& free_values) const {
  const int nloc = n();
  std::vector<Vec> blocks(k() + 1, Vec::Zero(nloc));
  for (int b = 0; b <= k(); ++b)
    for (int c = 0; c < nloc; ++c) {
      const int v = b * nloc + c;
      blocks[b][c] = std::isnan(pin[v]) ? 0.0 : pin[v];
    }
  for (int f = 0; f < num_free(); ++f) {
    const int v = free_vars[f];
    blocks[v / nloc][v % nloc] = free_values[f];
  }
  return blocks;
}

Vec ReducedSystem::eval(const Vec& free_values) const {
  const auto blocks = assemble(free_values);
  Vec out = apply_power((*tuple)[0], blocks[0]) - rhs;
  for (int j = 1; j <= k(); ++j) out -= apply_power((*tuple)[j], blocks[j]);
  return out;
}

Matrix ReducedSystem::jac(const Vec& free_values) const {
  const auto blocks = assemble(free_values);
  const int nloc = n();
  Matrix out(nloc, num_free());
  std::vector<Matrix> block_jac(k() + 1);
  for (int b = 0; b <= k(); ++b) {
    block_jac[b] = jacobian((*tuple)[b], blocks[b]);
    if (b > 0) block_jac[b] = -block_jac[b];
  }
  for (int f = 0; f < num_free(); ++f) {
    const int v = free_vars[f];
    out.col(f) = block_jac[v / nloc].col(v % nloc);
  }
  return out;
}

double ReducedSystem::bound_slack(const std::vector<Vec>& blocks) const {
  const int nloc = n();
  double slack = kInf;
  for (int b = 0; b <= k(); ++b)
    for (int c = 0; c < nloc; ++c) {
      const int v = b * nloc + c;
      if (lower[v] > -kInf) slack = std::min(slack, blocks[b][c] - lower[v]);
      if (upper[v] < kInf) slack = std::min(slack, upper[v] - blocks[b][c]);
    }
  return slack;
}

ReducedSystem reduce_pattern(const EhtcpInstance& inst, const Pattern& pattern) {
  const int n = inst.dim();
  const int k = inst.k();
  if (pattern.n() != n || pattern.k() != k)
    throw std::invalid_argument("pattern shape does not match instance");

  ReducedSystemBuilder builder(inst.tuple(), inst.q());
  for (int i = 0; i < n; ++i) {
    // Pair 0: x_0 /\ x_1.
    if (pattern.tag(0, i) == Branch::LeftZero) {
      builder.pin(i, 0.0);
      builder.bound_below(n + i, 0.0);
    } else {
      builder.pin(n + i, 0.0);
      builder.bound_below(i, 0.0);
    }
    // Pair j: (d_j - x_j) /\ x_{j+1}.
    for (int j = 1; j <= k - 1; ++j) {
      const int left = j * n + i;
      const int right = (j + 1) * n + i;
      const double dji = inst.d()[j - 1][i];
      if (pattern.tag(j, i) == Branch::LeftZero) {
        builder.pin(left, dji);
        builder.bound_below(right, 0.0);
      } else {
        builder.pin(right, 0.0);
        builder.bound_below(left, 0.0);
        builder.bound_above(left, dji);
      }
    }
  }
  return builder.build();
}

bool certify_empty_by_sign(const ReducedSystem& sys) {
  if (sys.pin_conflict) return true;
  const int n = sys.n();
  const int m = sys.tuple->order();
  for (int row = 0; row < n; ++row) {
    double constant = -sys.rhs[row];
    bool all_nonneg = true;
    bool all_nonpos = true;
    bool undetermined = false;
    auto scan_tensor = [&](int block, double outer_sign) {
      const Tensor& t = (*sys.tuple)[block];
      for (const auto& e : t.entries()) {
        if (e.index[0] != row) continue;
        double coeff = outer_sign * e.value;
        std::map<int, int> free_exp;  // global var -> multiplicity
        for (int p = 1; p < m; ++p) {
          const int v = block * n + e.index[p];
          if (sys.is_free(v))
            free_exp[v]++;
          else
            coeff *= sys.pin[v];
        }
        if (coeff == 0.0) continue;
        if (free_exp.empty()) {
          constant += coeff;
          continue;
        }
        // Monomial sign over the bound box.
        int sign = coeff > 0.0 ? 1 : -1;
        for (const auto& [v, exp] : free_exp) {
          if (exp % 2 == 0) continue;
          if (sys.lower[v] >= 0.0) continue;       // nonnegative factor
          if (sys.upper[v] <= 0.0) sign = -sign;   // nonpositive factor
          else { undetermined = true; break; }
        }
        if (undetermined) return;
        if (sign > 0) all_nonpos = false;
        else all_nonneg = false;
      }
    };
    for (std::size_t b = 0; b < sys.tuple->size(); ++b) {
      scan_tensor(static_cast<int>(b), b == 0 ? 1.0 : -1.0);
      if (undetermined) break;
    }
    if (undetermined) continue;
    if (all_nonneg && constant > 1e-12) return true;
    if (all_nonpos && constant < -1e-12) return true;
  }
  return false;
}

namespace {

bool finite(const Vec& v) { return v.allFinite(); }

/// Levenberg-Marquardt step: (J^T J + lambda I) dx = -J^T f.
bool lm_step(const Matrix& J, const Vec& f, double lambda, Vec* dx) {
  const Matrix JtJ = J.transpose() * J;
  const Vec g = J.transpose() * f;
  Matrix A = JtJ;
  const double scale = std::max(1.0, JtJ.diagonal().maxCoeff());
  A.diagonal().array() += lambda * scale;
  *dx = A.partialPivLu().solve(-g);
  return finite(*dx);
}

}  // namespace

NewtonOutcome newton_reduced(const ReducedSystem& sys, Vec start,
                             const NewtonOptions& opts) {
  NewtonOutcome out;
  out.free_values = std::move(start);
  Vec f = sys.eval(out.free_values);
  if (!finite(f)) return out;
  double merit = 0.5 * f.squaredNorm();
  if (f.lpNorm<Eigen::Infinity>() <= opts.tol) {
    out.status = NewtonStatus::Converged;
    return out;
  }

  double lambda = 1e-8;
  for (out.iters = 1; out.iters <= opts.max_iters; ++out.iters) {
    const Matrix J = sys.jac(out.free_values);
    Vec dx;
    bool have_step = false;
    if (J.rows() == J.cols()) {
      Eigen::PartialPivLU<Matrix> lu(J);
      dx = lu.solve(-f);
      have_step = finite(dx);
      if (have_step) {
        // Reject wildly amplified steps from a near-singular factorization.
        const double limit = 1e8 * (1.0 + out.free_values.norm());
        if (dx.norm() > limit) have_step = false;
      }
    }
    if (!have_step) {
      out.hit_singular_jacobian = true;
      if (!lm_step(J, f, lambda, &dx)) {
        out.status = NewtonStatus::Stalled;
        return out;
      }
    }

    // Armijo backtracking on 0.5*||f||^2.
    double t = 1.0;
    bool accepted = false;
    while (t >= opts.step_floor) {
      const Vec trial = out.free_values + t * dx;
      const Vec ftrial = sys.eval(trial);
      if (finite(ftrial)) {
        const double mtrial = 0.5 * ftrial.squaredNorm();
        if (mtrial <= merit - opts.armijo_c * t * 2.0 * merit ||
            mtrial < merit * (1.0 - 1e-16)) {
          out.free_values = trial;
          f = ftrial;
          merit = mtrial;
          accepted = true;
          break;
        }
      }
      t *= 0.5;
    }
    if (!accepted) {
      // One escalating LM retry before declaring a stall.
      bool rescued = false;
      for (double l = lambda * 10; l <= 1e8 && !rescued; l *= 100) {
        Vec dl;
        if (!lm_step(J, f, l, &dl)) break;
        const Vec trial = out.free_values + dl;
        const Vec ftrial = sys.eval(trial);
        if (finite(ftrial) && 0.5 * ftrial.squaredNorm() < merit) {
          out.free_values = trial;
          f = ftrial;
          merit = 0.5 * ftrial.squaredNorm();
          rescued = true;
          out.hit_singular_jacobian = true;
        }
      }
      if (!rescued) {
        out.status = NewtonStatus::Stalled;
        return out;
      }
    }
    if (f.lpNorm<Eigen::Infinity>() <= opts.tol) {
      out.status = NewtonStatus::Converged;
      return out;
    }
  }
  out.status = NewtonStatus::MaxIterations;
  return out;
}

MultistartReport solve_multistart(const ReducedSystem& sys, int starts,
                                  double start_scale, Rng rng,
                                  const NewtonOptions& opts, int threads) {
  MultistartReport report;
  const int nfree = sys.num_free();
  if (nfree == 0) {
    // Fully pinned: the point either satisfies the rows or it does not.
    report.starts = 0;
    report.saturated = true;
    report.all_converged = true;
    if (sys.eval(Vec()).lpNorm<Eigen::Infinity>() <= opts.tol)
      report.roots.push_back(Vec());
    return report;
  }

  // Linear systems are solved directly; the sweep is then exhaustive.
  if (sys.tuple->order() == 2) {
    const Matrix J = sys.jac(Vec::Zero(nfree));
    const Vec f0 = sys.eval(Vec::Zero(nfree));
    Eigen::FullPivLU<Matrix> lu(J);
    if (lu.isInvertible()) {
      Vec root = lu.solve(-f0);
      if (sys.eval(root).lpNorm<Eigen::Infinity>() <= opts.tol)
        report.roots.push_back(root);
      report.starts = 1;
      report.converged = 1;
      report.saturated = true;
      report.all_converged = true;
      return report;
    }
    // Singular linear system: fall through to the multistart path, which
    // samples the affine solution set (or stalls if inconsistent).
  }

  if (starts < 2) starts = 2;
  std::vector<Vec> start_points(starts);
  for (int s = 0; s < starts; s += 2) {
    Rng stream = rng.fork(static_cast<std::uint64_t>(s));
    Vec v(nfree);
    for (int i = 0; i < nfree; ++i) v[i] = stream.normal() * start_scale;
    start_points[s] = v;
    if (s + 1 < starts) start_points[s + 1] = -v;
  }

  std::vector<NewtonOutcome> outcomes(starts);
  parallel_for(static_cast<std::size_t>(starts), threads, [&](std::size_t s) {
    outcomes[s] = newton_reduced(sys, start_points[s], opts);
  });

  report.starts = starts;
  int last_new_root_start = -1;
  for (int s = 0; s < starts; ++s) {
    const auto& oc = outcomes[s];
    report.newton_iters += oc.iters;
    if (oc.hit_singular_jacobian) report.singular_events++;
    if (oc.status == NewtonStatus::Converged) {
      report.converged++;
      bool fresh = true;
      for (const auto& r : report.roots)
        if ((r - oc.free_values).lpNorm<Eigen::Infinity>() <= 1e-7) {
          fresh = false;
          break;
        }
      if (fresh) {
        report.roots.push_back(oc.free_values);
        last_new_root_start = s;
      }
    } else {
      report.stalled++;
    }
  }
  report.all_converged = (report.converged == report.starts);
  report.saturated =
      report.all_converged &&
      (report.roots.empty() || last_new_root_start < report.starts / 2);
  return report;
}

}  // namespace ehtcp
