#include "ehtcp/classes.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>

#include "ehtcp/util.hpp"

namespace ehtcp {

const char* to_string(ClassName cls) {
  switch (cls) {
    case ClassName::EHR0: return "ehr0";
    case ClassName::EHP: return "ehp";
    case ClassName::StrongEHP: return "strong-ehp";
    case ClassName::EHE: return "ehe";
    case ClassName::EHND: return "ehnd";
    case ClassName::StrongEHND: return "strong-ehnd";
  }
  return "?";
}

std::optional<ClassName> class_from_string(const std::string& name) {
  for (ClassName cls : kAllClasses)
    if (name == to_string(cls)) return cls;
  return std::nullopt;
}

bool is_strong_class(ClassName cls) {
  return cls == ClassName::StrongEHP || cls == ClassName::StrongEHND;
}

namespace {

double pos(double v) { return v > 0.0 ? v : 0.0; }

Vec tensor_eq(const TensorTuple& tuple, const std::vector<Vec>& x) {
  Vec out = apply_power(tuple[0], x[0]);
  for (int j = 1; j <= tuple.k(); ++j) out -= apply_power(tuple[j], x[j]);
  return out;
}

/// Smooth-piece residual vector whose squared norm is premise_residual.
Vec class_terms(ClassName cls, const TensorTuple& tuple,
                const std::vector<Vec>& x, const std::vector<Vec>& xb) {
  const int n = tuple.dim();
  const int k = tuple.k();
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(n) * (k + 2));
  auto push = [&](const Vec& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) terms.push_back(v[i]);
  };

  if (!is_strong_class(cls)) {
    push(tensor_eq(tuple, x));
    switch (cls) {
      case ClassName::EHR0:
        for (int i = 1; i <= k; ++i) push(min_map(x[0], x[i]));
        break;
      case ClassName::EHP:
        for (int i = 1; i <= k; ++i)
          for (int c = 0; c < n; ++c) terms.push_back(pos(x[0][c] * x[i][c]));
        break;
      case ClassName::EHE:
        for (int i = 1; i <= k; ++i)
          for (int c = 0; c < n; ++c) {
            terms.push_back(pos(-x[i][c]));
            terms.push_back(pos(x[0][c] * x[i][c]));
          }
        break;
      case ClassName::EHND:
        for (int i = 0; i <= k; ++i)
          for (int j = i + 1; j <= k; ++j)
            for (int c = 0; c < n; ++c) terms.push_back(x[i][c] * x[j][c]);
        break;
      default:
        throw std::invalid_argument("class_terms: strong class without x_bar");
    }
  } else {
    push(tensor_eq(tuple, x) - tensor_eq(tuple, xb));
    std::vector<Vec> delta(k + 1);
    for (int i = 0; i <= k; ++i) delta[i] = x[i] - xb[i];
    if (cls == ClassName::StrongEHP) {
      for (int i = 1; i <= k; ++i)
        for (int c = 0; c < n; ++c)
          terms.push_back(pos(delta[0][c] * delta[i][c]));
    } else {
      for (int i = 0; i <= k; ++i)
        for (int j = i + 1; j <= k; ++j)
          for (int c = 0; c < n; ++c)
            terms.push_back(delta[i][c] * delta[j][c]);
    }
  }
  return Eigen::Map<Vec>(terms.data(), static_cast<Eigen::Index>(terms.size()));
}

void check_point(const TensorTuple& tuple, const std::vector<Vec>& x,
                 const char* what) {
  if (static_cast<int>(x.size()) != tuple.k() + 1)
    throw std::invalid_argument(std::string(what) + ": block count mismatch");
  for (const auto& b : x)
    if (b.size() != tuple.dim())
      throw std::invalid_argument(std::string(what) + ": block dim mismatch");
}

// ---------------------------------------------------------------------------
// Generic normalized local search shared by falsify, the componentwise
// witness probes, and the injectivity probe.

struct SearchSpec {
  int total_dim = 0;
  int norm_offset = 0;  // slice held on the unit sphere
  int norm_len = 0;
  double accept = 1e-9;  // threshold on terms.squaredNorm()
  std::function<Vec(const Vec&)> terms;
};

double objective(const SearchSpec& spec, const Vec& u) {
  return spec.terms(u).squaredNorm();
}

void renormalize(const SearchSpec& spec, Vec& u) {
  auto slice = u.segment(spec.norm_offset, spec.norm_len);
  const double norm = slice.norm();
  if (norm < 1e-12) {
    slice.setZero();
    slice[0] = 1.0;
  } else {
    slice /= norm;
  }
}

Vec fd_gradient(const SearchSpec& spec, const Vec& u) {
  Vec g(spec.total_dim);
  Vec probe = u;
  for (int i = 0; i < spec.total_dim; ++i) {
    const double h = 1e-6 * (1.0 + std::abs(u[i]));
    probe[i] = u[i] + h;
    const double fp = objective(spec, probe);
    probe[i] = u[i] - h;
    const double fm = objective(spec, probe);
    probe[i] = u[i];
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

/// Projected gradient descent on the sphere slice.
double descend(const SearchSpec& spec, Vec* u, int max_iters) {
  double f = objective(spec, *u);
  int flat_iters = 0;
  for (int it = 0; it < max_iters; ++it) {
    if (f <= spec.accept * 1e-3) break;
    Vec g = fd_gradient(spec, *u);
    auto gs = g.segment(spec.norm_offset, spec.norm_len);
    const auto us = u->segment(spec.norm_offset, spec.norm_len);
    gs -= gs.dot(us) * us;
    const double gn2 = g.squaredNorm();
    if (gn2 < 1e-28) break;
    double t = std::clamp(2.0 * f / gn2, 1e-8, 1.0);
    bool moved = false;
    for (int bt = 0; bt < 30; ++bt) {
      Vec trial = *u - t * g;
      renormalize(spec, trial);
      const double ftrial = objective(spec, trial);
      if (ftrial < f - 1e-4 * t * gn2 || ftrial < f * (1.0 - 1e-12)) {
        const double improvement = (f - ftrial) / std::max(f, 1e-300);
        *u = std::move(trial);
        f = ftrial;
        moved = true;
        flat_iters = improvement < 1e-10 ? flat_iters + 1 : 0;
        break;
      }
      t *= 0.5;
    }
    if (!moved || flat_iters > 4) break;
  }
  return f;
}

/// Gauss-Newton polish on the term vector (finite-difference Jacobian),
/// used near a candidate zero to push the residual to machine precision.
double polish(const SearchSpec& spec, Vec* u) {
  Vec t0 = spec.terms(*u);
  double f = t0.squaredNorm();
  for (int it = 0; it < 30 && f > 1e-30; ++it) {
    const Eigen::Index rows = t0.size();
    Matrix J(rows, spec.total_dim);
    Vec probe = *u;
    for (int i = 0; i < spec.total_dim; ++i) {
      const double h = 1e-7 * (1.0 + std::abs((*u)[i]));
      probe[i] = (*u)[i] + h;
      const Vec tp = spec.terms(probe);
      probe[i] = (*u)[i] - h;
      const Vec tm = spec.terms(probe);
      probe[i] = (*u)[i];
      J.col(i) = (tp - tm) / (2.0 * h);
    }
    const Matrix JtJ = J.transpose() * J;
    const Vec g = J.transpose() * t0;
    bool improved = false;
    double lambda = 1e-12 * std::max(1.0, JtJ.diagonal().maxCoeff());
    for (int attempt = 0; attempt < 4; ++attempt) {
      Matrix A = JtJ;
      A.diagonal().array() += lambda;
      Vec du = A.ldlt().solve(-g);
      Vec trial = *u + du;
      renormalize(spec, trial);
      const Vec ttrial = spec.terms(trial);
      if (ttrial.allFinite() && ttrial.squaredNorm() < f) {
        *u = std::move(trial);
        t0 = ttrial;
        f = t0.squaredNorm();
        improved = true;
        break;
      }
      lambda *= 1e4;
    }
    if (!improved) break;
  }
  return f;
}

/// Sign patterns {0,+1,-1}^dim \ {0}: support size ascending, positions
/// lexicographic, plus signs before minus per position.
std::vector<Vec> sign_patterns(int dim, int max_support) {
  std::vector<Vec> out;
  max_support = std::min(max_support, dim);
  for (int size = 1; size <= max_support; ++size) {
    std::vector<int> comb(size);
    for (int i = 0; i < size; ++i) comb[i] = i;
    while (true) {
      for (std::uint32_t signs = 0; signs < (1u << size); ++signs) {
        Vec v = Vec::Zero(dim);
        for (int b = 0; b < size; ++b)
          v[comb[b]] = (signs >> b) & 1u ? -1.0 : 1.0;
        out.push_back(std::move(v));
      }
      int i = size - 1;
      while (i >= 0 && comb[i] == dim - size + i) --i;
      if (i < 0) break;
      ++comb[i];
      for (int j = i + 1; j < size; ++j) comb[j] = comb[j - 1] + 1;
    }
  }
  return out;
}

struct SearchHit {
  Vec u;
  double value = 0.0;
  long index = -1;      // restart index, -1 for structured candidates
};

/// Evaluates structured candidates in order, then runs seeded random
/// restarts (descent + polish). Deterministic for a fixed seed regardless
/// of thread count: the lowest-index success wins.
std::optional<SearchHit> run_search(const SearchSpec& spec,
                                    const std::vector<Vec>& structured,
                                    long restarts, std::uint64_t seed,
                                    int threads, int descent_iters,
                                    long* restarts_used) {
  for (std::size_t c = 0; c < structured.size(); ++c) {
    const double f = objective(spec, structured[c]);
    if (f <= spec.accept) {
      if (restarts_used) *restarts_used = 0;
      return SearchHit{structured[c], f, -1};
    }
  }

  std::atomic<long> best_index{std::numeric_limits<long>::max()};
  std::mutex best_mutex;
  Vec best_u;
  double best_value = 0.0;

  const Rng rng(seed);
  parallel_for(static_cast<std::size_t>(std::max<long>(restarts, 0)), threads,
               [&](std::size_t r) {
                 const long idx = static_cast<long>(r);
                 if (idx > best_index.load(std::memory_order_relaxed)) return;
                 Rng stream = rng.fork(0xfa15ull + r);
                 Vec u(spec.total_dim);
                 for (int i = 0; i < spec.total_dim; ++i)
                   u[i] = stream.normal();
                 renormalize(spec, u);
                 double f = descend(spec, &u, descent_iters);
                 if (f <= spec.accept * 1e8 || f < 1e-4) f = polish(spec, &u);
                 if (f <= spec.accept) {
                   std::lock_guard<std::mutex> lock(best_mutex);
                   if (idx < best_index.load()) {
                     best_index.store(idx);
                     best_u = u;
                     best_value = f;
                   }
                 }
               });

  if (best_index.load() != std::numeric_limits<long>::max()) {
    if (restarts_used) *restarts_used = best_index.load() + 1;
    return SearchHit{best_u, best_value, best_index.load()};
  }
  if (restarts_used) *restarts_used = restarts;
  return std::nullopt;
}

}  // namespace

double premise_residual(ClassName cls, const TensorTuple& tuple,
                        const std::vector<Vec>& x,
                        const std::vector<Vec>& x_bar) {
  check_point(tuple, x, "premise_residual");
  if (is_strong_class(cls)) {
    if (x_bar.empty())
      throw std::invalid_argument("premise_residual: strong class needs x_bar");
    check_point(tuple, x_bar, "premise_residual");
  }
  return class_terms(cls, tuple, x, x_bar).squaredNorm();
}

ClassVerdict falsify(ClassName cls, const TensorTuple& tuple,
                     const FalsifyOptions& opts) {
  if (!(opts.tol > 0.0)) throw std::invalid_argument("falsify: tol must be > 0");
  const int n = tuple.dim();
  const int k = tuple.k();
  const int dim = (k + 1) * n;
  const bool strong = is_strong_class(cls);

  SearchSpec spec;
  spec.total_dim = strong ? 2 * dim : dim;
  spec.norm_offset = strong ? dim : 0;
  spec.norm_len = dim;
  spec.accept = opts.tol;
  spec.terms = [&, n, k](const Vec& u) {
    std::vector<Vec> x = unflatten(u.segment(0, dim), k + 1, n);
    if (!strong) return class_terms(cls, tuple, x, {});
    std::vector<Vec> delta = unflatten(u.segment(dim, dim), k + 1, n);
    std::vector<Vec> xb(k + 1);
    for (int i = 0; i <= k; ++i) xb[i] = x[i] - delta[i];
    return class_terms(cls, tuple, x, xb);
  };

  std::vector<Vec> structured;
  if (strong && tuple.order() % 2 == 1) {
    // Seed the exact odd-order pair x, -x.
    Vec u = Vec::Zero(2 * dim);
    u[0] = 0.5;
    u[dim] = 1.0;
    structured.push_back(std::move(u));
  }
  const int max_support = dim <= 10 ? dim : 3;
  for (const auto& s : sign_patterns(dim, max_support)) {
    const double norm = s.norm();
    if (!strong) {
      structured.push_back(s / norm);
    } else {
      Vec u1 = Vec::Zero(2 * dim);  // pair (x, -x)
      u1.segment(0, dim) = s / (2.0 * norm);
      u1.segment(dim, dim) = s / norm;
      structured.push_back(std::move(u1));
      Vec u2 = Vec::Zero(2 * dim);  // pair (x, 0)
      u2.segment(0, dim) = s / norm;
      u2.segment(dim, dim) = s / norm;
      structured.push_back(std::move(u2));
    }
  }

  ClassVerdict verdict;
  verdict.cls = cls;
  verdict.structured_candidates = static_cast<long>(structured.size());
  auto hit = run_search(spec, structured, opts.restarts, opts.seed,
                        opts.threads, opts.descent_iters,
                        &verdict.restarts_used);
  if (!hit) {
    verdict.status = VerdictStatus::NoWitnessAtBudget;
    return verdict;
  }

  Witness w;
  w.point = unflatten(hit->u.segment(0, dim), k + 1, n);
  if (strong) {
    const std::vector<Vec> delta = unflatten(hit->u.segment(dim, dim), k + 1, n);
    w.point_bar.resize(k + 1);
    for (int i = 0; i <= k; ++i) w.point_bar[i] = w.point[i] - delta[i];
    w.norm_certificate = hit->u.segment(dim, dim).norm();
  } else {
    w.norm_certificate = hit->u.norm();
  }
  w.premise_residual = premise_residual(cls, tuple, w.point, w.point_bar);
  verdict.status = VerdictStatus::Refuted;
  verdict.witness = std::move(w);
  return verdict;
}

namespace {

std::optional<Vec> componentwise_witness(const Tensor& a,
                                         const FalsifyOptions& opts,
                                         bool hadamard_form) {
  const int n = a.dim();
  SearchSpec spec;
  spec.total_dim = n;
  spec.norm_offset = 0;
  spec.norm_len = n;
  spec.accept = opts.tol * opts.tol;  // threshold is on the residual norm
  spec.terms = [&a, hadamard_form](const Vec& x) {
    const Vec fx = apply_power(a, x);
    return hadamard_form ? hadamard(x, fx) : min_map(x, fx);
  };

  std::vector<Vec> structured;
  for (const auto& s : sign_patterns(n, std::min(n, 10)))
    structured.push_back(s / s.norm());

  auto hit = run_search(spec, structured, opts.restarts, opts.seed,
                        opts.threads, opts.descent_iters, nullptr);
  if (!hit) return std::nullopt;
  return hit->u;
}

}  // namespace

std::optional<Vec> componentwise_r0_witness(const Tensor& a,
                                            const FalsifyOptions& opts) {
  return componentwise_witness(a, opts, /*hadamard_form=*/false);
}

std::optional<Vec> componentwise_nondegenerate_witness(
    const Tensor& a, const FalsifyOptions& opts) {
  return componentwise_witness(a, opts, /*hadamard_form=*/true);
}

std::optional<Witness> propagate_witness(const TensorTuple& tuple,
                                         const Witness& witness,
                                         ClassName from, ClassName to,
                                         double tol) {
  const int k = tuple.k();
  auto transfers = [&]() {
    if (from == to) return true;
    switch (from) {
      case ClassName::EHR0:
        return to == ClassName::EHE || to == ClassName::EHP ||
               (k <= 1 && to == ClassName::EHND);
      case ClassName::EHE:
        return to == ClassName::EHP;
      case ClassName::EHND:
        return to == ClassName::EHP;
      case ClassName::StrongEHND:
        return to == ClassName::StrongEHP;
      default:
        return false;
    }
  };
  if (!transfers()) return std::nullopt;
  if (is_strong_class(to) != is_strong_class(from)) return std::nullopt;

  Witness converted = witness;
  converted.premise_residual =
      premise_residual(to, tuple, witness.point, witness.point_bar);
  if (converted.premise_residual > tol) return std::nullopt;
  return converted;
}

Witness odd_order_strong_witness(const TensorTuple& tuple) {
  if (tuple.order() % 2 == 0)
    throw std::invalid_argument(
        "odd_order_strong_witness: tuple order must be odd");
  const int n = tuple.dim();
  const int k = tuple.k();
  Witness w;
  w.point.assign(k + 1, Vec::Zero(n));
  w.point_bar.assign(k + 1, Vec::Zero(n));
  w.point[0][0] = 0.5;
  w.point_bar[0][0] = -0.5;
  w.norm_certificate = 1.0;
  w.premise_residual =
      premise_residual(ClassName::StrongEHND, tuple, w.point, w.point_bar);
  return w;
}

std::optional<CollisionPair> injectivity_probe(const Tensor& a, int samples,
                                               std::uint64_t seed) {
  if (samples <= 0)
    throw std::invalid_argument("injectivity_probe: samples must be > 0");
  const int n = a.dim();
  if (a.order() % 2 == 1) {
    // Even powers make F even: F(x) = F(-x) for every x.
    Vec x = Vec::Zero(n);
    x[0] = 0.5;
    const Vec xb = -x;
    CollisionPair out;
    out.x = x;
    out.x_bar = xb;
    out.gap = (apply_power(a, x) - apply_power(a, xb)).norm();
    return out;
  }

  SearchSpec spec;
  spec.total_dim = 2 * n;
  spec.norm_offset = n;
  spec.norm_len = n;
  spec.accept = 1e-18;  // squared threshold for a 1e-9 collision gap
  spec.terms = [&a, n](const Vec& u) {
    const Vec x = u.segment(0, n);
    const Vec xb = x - u.segment(n, n);
    return (apply_power(a, x) - apply_power(a, xb)).eval();
  };

  std::vector<Vec> structured;
  for (const auto& s : sign_patterns(n, std::min(n, 10))) {
    const double norm = s.norm();
    Vec u1 = Vec::Zero(2 * n);
    u1.segment(0, n) = s / (2.0 * norm);
    u1.segment(n, n) = s / norm;
    structured.push_back(std::move(u1));
    Vec u2 = Vec::Zero(2 * n);
    u2.segment(0, n) = s / norm;
    u2.segment(n, n) = s / norm;
    structured.push_back(std::move(u2));
  }

  auto hit = run_search(spec, structured, samples, seed, 1, 120, nullptr);
  if (!hit) return std::nullopt;
  CollisionPair out;
  out.x = hit->u.segment(0, n);
  out.x_bar = out.x - hit->u.segment(n, n);
  out.gap = (apply_power(a, out.x) - apply_power(a, out.x_bar)).norm();
  return out;
}

}  // namespace ehtcp
