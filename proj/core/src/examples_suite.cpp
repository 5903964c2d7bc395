#include "ehtcp/examples_suite.hpp"

#include <cmath>
#include <sstream>

#include "ehtcp/classes.hpp"
#include "ehtcp/degree.hpp"
#include "ehtcp/fixtures.hpp"
#include "ehtcp/solvers.hpp"
#include "json.hpp"

namespace ehtcp {

namespace {

Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

std::vector<Vec> blocks2(std::initializer_list<std::pair<double, double>> bs) {
  std::vector<Vec> out;
  for (const auto& [a, b] : bs) out.push_back(vec2(a, b));
  return out;
}

std::vector<Vec> scaled(std::vector<Vec> blocks, double factor) {
  for (auto& b : blocks) b *= factor;
  return blocks;
}

/// True when `found` is a positive multiple of `target` (both normalized).
bool proportional(const std::vector<Vec>& found,
                  const std::vector<Vec>& target, double tol) {
  const Vec f = flatten(found);
  const Vec t = flatten(target);
  if (f.size() != t.size()) return false;
  const double fn = f.norm();
  const double tn = t.norm();
  if (fn == 0.0 || tn == 0.0) return false;
  return (f / fn - t / tn).lpNorm<Eigen::Infinity>() <= tol;
}

struct SuiteContext {
  SuiteOptions opts;
  SuiteReport report;

  FalsifyOptions falsify_opts(long restarts) const {
    FalsifyOptions f;
    f.restarts = restarts;
    f.tol = opts.tol;
    f.seed = opts.seed;
    f.threads = opts.threads;
    return f;
  }
  SolveOptions solve_opts() const {
    SolveOptions s;
    s.tol = opts.tol;
    s.seed = opts.seed;
    s.threads = opts.threads;
    return s;
  }
  DegreeOptions degree_opts() const {
    DegreeOptions d;
    d.seed = opts.seed;
    d.threads = opts.threads;
    d.tol = opts.tol;
    return d;
  }

  void claim(const std::string& fixture, const std::string& name, bool ok,
             const std::string& detail = {}) {
    report.claims.push_back({fixture, name, ok, detail});
  }
};

std::string residual_detail(double r) {
  std::ostringstream os;
  os << "premise residual " << r;
  return os.str();
}

// --- swap-squares: homogeneous system only kills complementary points ------

void check_swap_squares(SuiteContext& ctx) {
  const char* fx = "swap-squares";
  const TensorTuple tuple = fixtures::swap_squares_trio();

  {
    const auto verdict =
        falsify(ClassName::EHE, tuple, ctx.falsify_opts(ctx.opts.budget_restarts));
    const auto canonical = blocks2({{-1, 0}, {1, 0}, {0, 0}});
    const double canon_res =
        premise_residual(ClassName::EHE, tuple, scaled(canonical, M_SQRT1_2));
    const bool ok = verdict.status == VerdictStatus::Refuted &&
                    verdict.witness->premise_residual <= ctx.opts.tol &&
                    canon_res <= ctx.opts.tol &&
                    proportional(verdict.witness->point, canonical, 1e-6);
    ctx.claim(fx, "ehe-refuted-by-balance-point", ok,
              residual_detail(verdict.witness ? verdict.witness->premise_residual
                                              : -1.0));
  }
  {
    const auto verdict = falsify(ClassName::EHR0, tuple,
                                 ctx.falsify_opts(ctx.opts.deep_restarts));
    ctx.claim(fx, "ehr0-no-witness",
              verdict.status == VerdictStatus::NoWitnessAtBudget);
  }
  {
    const auto verdict = falsify(ClassName::EHND, tuple,
                                 ctx.falsify_opts(ctx.opts.deep_restarts));
    ctx.claim(fx, "ehnd-no-witness",
              verdict.status == VerdictStatus::NoWitnessAtBudget);
  }
  {
    const auto fo = ctx.falsify_opts(ctx.opts.budget_restarts);
    bool ok = true;
    const Vec canon0 = vec2(0, 1);
    const Vec canon12 = vec2(1, 0);
    for (int t = 0; t <= 2; ++t) {
      const auto w = componentwise_r0_witness(tuple[t], fo);
      if (!w) { ok = false; continue; }
      const Vec canon = (t == 0 ? canon0 : canon12).normalized();
      ok = ok && min_map(canon, apply_power(tuple[t], canon)).norm() <= 1e-12;
    }
    ctx.claim(fx, "parts-not-r0", ok);
  }
  {
    const auto set = solve_all(fixtures::instance_with(tuple, vec2(0, 0)),
                               ctx.solve_opts());
    const bool ok = set.solutions.size() == 1 &&
                    flatten(set.solutions[0].blocks).lpNorm<Eigen::Infinity>() <=
                        1e-9;
    ctx.claim(fx, "homogeneous-unique-zero", ok);
  }
  {
    const Witness w = odd_order_strong_witness(tuple);
    const auto verdict = falsify(ClassName::StrongEHND, tuple,
                                 ctx.falsify_opts(ctx.opts.budget_restarts));
    ctx.claim(fx, "odd-order-strong-witness",
              w.premise_residual == 0.0 &&
                  verdict.status == VerdictStatus::Refuted,
              residual_detail(w.premise_residual));
  }
  {
    std::vector<Vec> d = {vec2(5, 5)};
    const auto cmp = verify_degree_equivalence(tuple, d, ctx.degree_opts());
    ctx.claim(fx, "degree-maps-agree", cmp.agree);
  }
}

// --- nondegenerate-parts: good parts, degenerate tuple ---------------------

void check_nondegenerate_parts(SuiteContext& ctx) {
  const char* fx = "nondegenerate-parts";
  const TensorTuple tuple = fixtures::nondegenerate_parts_trio();
  const auto fo = ctx.falsify_opts(ctx.opts.budget_restarts);

  {
    bool ok = true;
    for (int t = 0; t <= 2; ++t)
      ok = ok && !componentwise_nondegenerate_witness(tuple[t], fo).has_value();
    ctx.claim(fx, "parts-nondegenerate", ok);
  }
  const auto canonical = blocks2({{1, 0}, {0, 1}, {0, 0}});
  {
    const auto verdict = falsify(ClassName::EHND, tuple, fo);
    const double canon_res = premise_residual(ClassName::EHND, tuple,
                                              scaled(canonical, M_SQRT1_2));
    ctx.claim(fx, "ehnd-refuted",
              verdict.status == VerdictStatus::Refuted &&
                  verdict.witness->premise_residual <= ctx.opts.tol &&
                  canon_res <= ctx.opts.tol &&
                  proportional(verdict.witness->point, canonical, 1e-6));
    if (verdict.witness) {
      const auto ehp = propagate_witness(tuple, *verdict.witness,
                                         ClassName::EHND, ClassName::EHP);
      ctx.claim(fx, "witness-propagates-to-ehp",
                ehp.has_value() && ehp->premise_residual <= ctx.opts.tol);
    }
  }
  {
    const auto verdict = falsify(ClassName::EHR0, tuple, fo);
    const double canon_res = premise_residual(ClassName::EHR0, tuple,
                                              scaled(canonical, M_SQRT1_2));
    ctx.claim(fx, "ehr0-refuted",
              verdict.status == VerdictStatus::Refuted &&
                  verdict.witness->premise_residual <= ctx.opts.tol &&
                  canon_res <= ctx.opts.tol);
  }
}

// --- alternating-cubes: EHND holds, EHR0 fails ------------------------------

void check_alternating_cubes(SuiteContext& ctx) {
  const char* fx = "alternating-cubes";
  const TensorTuple tuple = fixtures::alternating_cubes_trio();
  const auto fo = ctx.falsify_opts(ctx.opts.budget_restarts);

  ctx.claim(fx, "ehnd-no-witness",
            falsify(ClassName::EHND, tuple, fo).status ==
                VerdictStatus::NoWitnessAtBudget);
  ctx.claim(fx, "strong-ehnd-no-witness",
            falsify(ClassName::StrongEHND, tuple, fo).status ==
                VerdictStatus::NoWitnessAtBudget);
  {
    const auto verdict = falsify(ClassName::EHR0, tuple, fo);
    const auto canonical = blocks2({{0, 0}, {1, 1}, {1, 1}});
    const double canon_res =
        premise_residual(ClassName::EHR0, tuple, scaled(canonical, 0.5));
    const bool ok = verdict.status == VerdictStatus::Refuted &&
                    verdict.witness->premise_residual <= ctx.opts.tol &&
                    canon_res <= ctx.opts.tol;
    ctx.claim(fx, "ehr0-refuted", ok,
              residual_detail(canon_res));
    if (verdict.witness) {
      const auto ehe = propagate_witness(tuple, *verdict.witness,
                                         ClassName::EHR0, ClassName::EHE);
      const auto ehp = propagate_witness(tuple, *verdict.witness,
                                         ClassName::EHR0, ClassName::EHP);
      ctx.claim(fx, "ehr0-witness-propagates",
                ehe.has_value() && ehp.has_value());
    }
  }
  {
    bool ok = true;
    const Vec canon[3] = {vec2(1, 0), vec2(1, 0), vec2(0, 1)};
    for (int t = 0; t <= 2; ++t) {
      const auto w = componentwise_nondegenerate_witness(tuple[t], fo);
      if (!w) { ok = false; continue; }
      ok = ok && hadamard(canon[t], apply_power(tuple[t], canon[t])).norm() <=
                     1e-12;
    }
    ctx.claim(fx, "parts-degenerate", ok);
  }
}

// --- triangular-cubes: strong EHP, unique solutions -------------------------

void check_triangular_cubes(SuiteContext& ctx) {
  const char* fx = "triangular-cubes";
  const TensorTuple tuple = fixtures::triangular_cubes_pair();

  ctx.claim(fx, "strong-ehp-no-witness",
            falsify(ClassName::StrongEHP, tuple,
                    ctx.falsify_opts(ctx.opts.budget_restarts))
                    .status == VerdictStatus::NoWitnessAtBudget);
  {
    bool ok = true;
    Rng rng(ctx.opts.seed);
    for (int trial = 0; trial < 20; ++trial) {
      Rng stream = rng.fork(100 + trial);
      const Vec q = vec2(stream.uniform(-2.0, 2.0), stream.uniform(-2.0, 2.0));
      const auto set =
          solve_all(fixtures::instance_with(tuple, q), ctx.solve_opts());
      if (set.solutions.size() != 1) {
        ok = false;
        break;
      }
    }
    ctx.claim(fx, "unique-solution-for-random-q", ok);
  }
  {
    const auto deg = estimate_degree(tuple, ctx.degree_opts());
    ctx.claim(fx, "degree-nonzero",
              !deg.refused() && deg.estimate->value != 0);
  }
  ctx.claim(fx, "leading-part-injective",
            !injectivity_probe(tuple[0], 200, ctx.opts.seed).has_value());
}

// --- odd-order-gap: EHE of odd order with an unsolvable q -------------------

void check_odd_order_gap(SuiteContext& ctx) {
  const char* fx = "odd-order-gap";
  const TensorTuple tuple = fixtures::odd_order_gap_pair();
  const EhtcpInstance inst = fixtures::odd_order_gap_instance();

  ctx.claim(fx, "ehe-no-witness",
            falsify(ClassName::EHE, tuple,
                    ctx.falsify_opts(ctx.opts.budget_restarts))
                    .status == VerdictStatus::NoWitnessAtBudget);
  {
    const auto set = solve_all(inst, ctx.solve_opts());
    std::uint64_t certified = set.stats.patterns_certified_empty;
    ctx.claim(fx, "unsolvable-q-empty",
              set.solutions.empty() && set.exhaustive && certified == 4,
              "certified " + std::to_string(certified) + " of 4 patterns");
  }
  {
    Rng rng(ctx.opts.seed);
    bool any_converged = false;
    for (int s = 0; s < 50; ++s) {
      Rng stream = rng.fork(900 + s);
      CandidateSolution start;
      start.blocks = {vec2(std::abs(stream.normal()), std::abs(stream.normal())),
                      vec2(std::abs(stream.normal()), std::abs(stream.normal()))};
      if (semismooth_newton(inst, start, ctx.solve_opts()).converged)
        any_converged = true;
    }
    ctx.claim(fx, "newton-starts-all-fail", !any_converged);
  }
  {
    const auto verdict = falsify(ClassName::StrongEHND, tuple,
                                 ctx.falsify_opts(ctx.opts.budget_restarts));
    ctx.claim(fx, "strong-ehnd-refuted-odd-order",
              verdict.status == VerdictStatus::Refuted &&
                  verdict.witness->premise_residual == 0.0);
  }
}

// --- circle-family: infinitely many solutions -------------------------------

void check_circle_family(SuiteContext& ctx) {
  const char* fx = "circle-family";
  const TensorTuple tuple = fixtures::circle_family_trio();
  const EhtcpInstance inst = fixtures::circle_family_instance();

  {
    bool ok = true;
    double worst = 0.0;
    for (double theta : {0.0, M_PI / 8, M_PI / 4, 3 * M_PI / 8, M_PI / 2}) {
      Vec x0(3);
      x0 << std::cos(theta), std::sin(theta), 0.0;
      CandidateSolution member;
      member.blocks = {x0, Vec::Zero(3), Vec::Zero(3)};
      const double r = residual_psi_d(inst, member).lpNorm<Eigen::Infinity>();
      worst = std::max(worst, r);
      ok = ok && r <= 1e-12;
    }
    std::ostringstream os;
    os << "max family residual " << worst;
    ctx.claim(fx, "family-members-solve", ok, os.str());
  }
  {
    const auto set = solve_all(inst, ctx.solve_opts());
    ctx.claim(fx, "many-solutions", set.solutions.size() >= 3,
              std::to_string(set.solutions.size()) + " distinct solutions");
  }
  // The third components never enter the tensor rows here, so points like
  // ((0,0,1),0,0) satisfy the homogeneous complementarity premises; the
  // degree is therefore undefined for this tuple and the estimator refuses.
  ctx.claim(fx, "degree-refused",
            estimate_degree(tuple, ctx.degree_opts()).refused());
  {
    const auto cont = continuation_solve(inst, 20, ctx.solve_opts());
    const bool ok = !cont.solutions.empty() &&
                    cont.solutions[0].residual_inf <= 1e-9;
    ctx.claim(fx, "continuation-finds-member", ok);
  }
}

// --- mixed-cubes: finite solution set in closed form -------------------------

void check_mixed_cubes(SuiteContext& ctx) {
  const char* fx = "mixed-cubes";
  const TensorTuple tuple = fixtures::mixed_cubes_pair();

  {
    const auto verdict = falsify(ClassName::EHND, tuple,
                                 ctx.falsify_opts(ctx.opts.budget_restarts));
    const auto canonical = blocks2({{0, 0}, {1, -1}});
    const double canon_res = premise_residual(ClassName::EHND, tuple,
                                              scaled(canonical, M_SQRT1_2));
    ctx.claim(fx, "ehnd-refuted",
              verdict.status == VerdictStatus::Refuted &&
                  canon_res <= ctx.opts.tol);
  }
  {
    const auto set = solve_all(fixtures::instance_with(tuple, vec2(1, 1)),
                               ctx.solve_opts());
    bool ok = set.solutions.size() == 2;
    if (ok) {
      const auto expect_a = blocks2({{std::cbrt(2.0), 0}, {0, 1}});
      const auto expect_b = blocks2({{1, 1}, {0, 0}});
      auto matches = [&](const std::vector<Vec>& target) {
        for (const auto& s : set.solutions)
          if ((flatten(s.blocks) - flatten(target)).lpNorm<Eigen::Infinity>() <=
              1e-8)
            return true;
        return false;
      };
      ok = matches(expect_a) && matches(expect_b);
    }
    ctx.claim(fx, "two-closed-form-solutions", ok,
              std::to_string(set.solutions.size()) + " solutions");
  }
  {
    bool ok = true;
    Rng rng(ctx.opts.seed);
    for (int trial = 0; trial < 5; ++trial) {
      Rng stream = rng.fork(300 + trial);
      const Vec q = vec2(stream.uniform(-2.0, 2.0), stream.uniform(-2.0, 2.0));
      const auto set =
          solve_all(fixtures::instance_with(tuple, q), ctx.solve_opts());
      ok = ok && set.solutions.size() <= 9;
      for (const auto& s : set.solutions)
        ok = ok && s.residual_inf <= ctx.opts.tol;
    }
    ctx.claim(fx, "finite-solutions-random-q", ok);
  }
}

// --- identity-pair: the linear reduction -------------------------------------

void check_identity_pair(SuiteContext& ctx) {
  const char* fx = "identity-pair";
  const TensorTuple tuple = fixtures::identity_tuple(2, 2);

  {
    const auto deg = estimate_degree(tuple, ctx.degree_opts());
    const bool ok = !deg.refused() && deg.estimate->value == 1 &&
                    deg.estimate->exhaustive_sweep &&
                    deg.estimate->all_nonsingular &&
                    deg.estimate->no_kink_proximity;
    ctx.claim(fx, "degree-one", ok);
  }
  {
    bool ok = true;
    Rng rng(ctx.opts.seed);
    for (int trial = 0; trial < 10; ++trial) {
      Rng stream = rng.fork(500 + trial);
      const Vec q = vec2(stream.uniform(-1.0, 1.0), stream.uniform(-1.0, 1.0));
      const auto set =
          solve_all(fixtures::instance_with(tuple, q), ctx.solve_opts());
      // x_0 - x_1 = q with complementarity splits q into its +/- parts.
      Vec qp = q.cwiseMax(0.0);
      Vec qm = (-q).cwiseMax(0.0);
      ok = ok && set.solutions.size() == 1 &&
           (flatten(set.solutions[0].blocks) -
            flatten(std::vector<Vec>{qp, qm}))
                   .lpNorm<Eigen::Infinity>() <= 1e-9;
    }
    ctx.claim(fx, "positive-part-closed-form", ok);
  }
  {
    const auto cmp = verify_degree_equivalence(tuple, {}, ctx.degree_opts());
    ctx.claim(fx, "degree-maps-coincide", cmp.agree);
  }
}

}  // namespace

SuiteReport run_examples_suite(const SuiteOptions& opts) {
  SuiteContext ctx;
  ctx.opts = opts;

  check_swap_squares(ctx);
  check_nondegenerate_parts(ctx);
  check_alternating_cubes(ctx);
  check_triangular_cubes(ctx);
  check_odd_order_gap(ctx);
  check_circle_family(ctx);
  check_mixed_cubes(ctx);
  check_identity_pair(ctx);

  SuiteReport& report = ctx.report;
  report.all_passed = true;
  for (const auto& c : report.claims) {
    if (c.passed)
      report.passed_count++;
    else
      report.failed_count++;
    report.all_passed = report.all_passed && c.passed;
  }
  return report;
}

std::string SuiteReport::to_json(int indent) const {
  nlohmann::json j;
  j["all_passed"] = all_passed;
  j["passed"] = passed_count;
  j["failed"] = failed_count;
  j["claims"] = nlohmann::json::array();
  for (const auto& c : claims)
    j["claims"].push_back({{"fixture", c.fixture},
                           {"claim", c.claim},
                           {"passed", c.passed},
                           {"detail", c.detail}});
  return j.dump(indent);
}

}  // namespace ehtcp
