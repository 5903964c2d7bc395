// Command-line workbench: solve instances, falsify class membership,
// estimate degrees, generate instances, and run the built-in examples suite.

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "ehtcp/classes.hpp"
#include "ehtcp/degree.hpp"
#include "ehtcp/examples_suite.hpp"
#include "ehtcp/generator.hpp"
#include "ehtcp/instance_io.hpp"
#include "ehtcp/solvers.hpp"
#include "ehtcp/util.hpp"
#include "json.hpp"

namespace {

using ehtcp::Vec;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitClaimFailure = 1;
constexpr int kExitInputError = 2;

struct GlobalFlags {
  std::uint64_t seed = 1;
  double tol = 1e-9;
  long budget = 10;  // falsification budget units (200 restarts each)
  bool as_json = false;
  int threads = 1;
  std::string out_path;
};

long budget_restarts(const GlobalFlags& g) { return g.budget * 200; }

json blocks_to_json(const std::vector<Vec>& blocks) {
  json out = json::array();
  for (const auto& b : blocks) {
    json v = json::array();
    for (Eigen::Index i = 0; i < b.size(); ++i) v.push_back(b[i]);
    out.push_back(v);
  }
  return out;
}

json witness_to_json(const ehtcp::Witness& w) {
  json out;
  out["point"] = blocks_to_json(w.point);
  if (!w.point_bar.empty()) out["point_bar"] = blocks_to_json(w.point_bar);
  out["premise_residual"] = w.premise_residual;
  out["norm_certificate"] = w.norm_certificate;
  return out;
}

json verdict_to_json(const ehtcp::ClassVerdict& v) {
  json out;
  out["class"] = ehtcp::to_string(v.cls);
  out["status"] = v.status == ehtcp::VerdictStatus::Refuted
                      ? "refuted"
                      : "no-witness-at-budget";
  out["restarts_used"] = v.restarts_used;
  out["structured_candidates"] = v.structured_candidates;
  if (v.witness) out["witness"] = witness_to_json(*v.witness);
  return out;
}

json solutions_to_json(const std::vector<ehtcp::CandidateSolution>& sols) {
  json out = json::array();
  for (const auto& s : sols)
    out.push_back({{"blocks", blocks_to_json(s.blocks)},
                   {"residual_inf", s.residual_inf},
                   {"complementarity_inf", s.complementarity_inf}});
  return out;
}

json degree_to_json(const ehtcp::DegreeResult& r) {
  json out;
  out["refused"] = r.refused();
  if (r.refused()) {
    out["reason"] = r.refusal_reason;
    if (r.gate) out["gate"] = verdict_to_json(*r.gate);
    return out;
  }
  const auto& e = *r.estimate;
  out["value"] = e.value;
  out["exhaustive_sweep"] = e.exhaustive_sweep;
  out["all_nonsingular"] = e.all_nonsingular;
  out["no_kink_proximity"] = e.no_kink_proximity;
  out["solutions_counted"] = e.solutions.size();
  out["branches_total"] = e.branches_total;
  out["branches_certified_empty"] = e.branches_certified_empty;
  out["branches_conflict"] = e.branches_conflict;
  out["target_retries"] = e.target_retries;
  json signs = json::array();
  for (const auto& s : e.solutions) signs.push_back(s.sign);
  out["signs"] = signs;
  return out;
}

/// Emits the report: JSON body to --out when given; stdout gets either the
/// JSON envelope (--json) or a short human summary.
void emit(const GlobalFlags& g, const std::string& command, const json& body,
          double elapsed_ms, const std::string& human) {
  json envelope;
  envelope["command"] = command;
  envelope["seed"] = g.seed;
  envelope["tool_version"] = ehtcp::kToolVersion;
  envelope["result"] = body;
  envelope["timing_ms"] = elapsed_ms;
  if (!g.out_path.empty()) {
    std::ofstream out(g.out_path);
    if (!out) throw ehtcp::ParseError("cannot open --out file: " + g.out_path);
    out << envelope.dump(2) << "\n";
  }
  if (g.as_json)
    std::cout << envelope.dump(2) << "\n";
  else
    std::cout << human;
}

class Timer {
 public:
  double ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

ehtcp::SolveOptions solve_options(const GlobalFlags& g) {
  ehtcp::SolveOptions opts;
  opts.tol = g.tol;
  opts.seed = g.seed;
  opts.threads = g.threads;
  return opts;
}

ehtcp::FalsifyOptions falsify_options(const GlobalFlags& g) {
  ehtcp::FalsifyOptions opts;
  opts.restarts = budget_restarts(g);
  opts.tol = g.tol;
  opts.seed = g.seed;
  opts.threads = g.threads;
  return opts;
}

int run_solve(const GlobalFlags& g, const std::string& path,
              const std::string& method, int steps) {
  const ehtcp::EhtcpInstance inst = ehtcp::load_instance(path);
  const Timer timer;
  json body;
  std::ostringstream human;
  body["method"] = method;

  if (method == "all") {
    const auto set = ehtcp::solve_all(inst, solve_options(g));
    body["solutions"] = solutions_to_json(set.solutions);
    body["exhaustive"] = set.exhaustive;
    body["patterns_total"] = set.stats.patterns_total;
    body["patterns_certified_empty"] = set.stats.patterns_certified_empty;
    body["newton_iterations"] = set.stats.newton_iterations;
    human << "solve: " << set.solutions.size() << " solution(s), exhaustive="
          << (set.exhaustive ? "yes" : "no") << "\n";
    for (const auto& s : set.solutions)
      human << "  residual_inf=" << s.residual_inf << "  x="
            << ehtcp::flatten(s.blocks).transpose() << "\n";
  } else if (method == "continuation") {
    const auto res = ehtcp::continuation_solve(inst, steps, solve_options(g));
    body["solutions"] = solutions_to_json(res.solutions);
    body["diverged"] = res.diverged;
    body["last_good_t"] = res.last_good_t;
    human << "continuation: " << res.solutions.size() << " solution(s)"
          << (res.diverged ? " (path diverged)" : "") << "\n";
  } else if (method == "newton") {
    // Multistart semismooth Newton from seeded random nonnegative points.
    ehtcp::Rng rng(g.seed);
    std::vector<ehtcp::CandidateSolution> found;
    const auto opts = solve_options(g);
    for (int s = 0; s < 32; ++s) {
      ehtcp::Rng stream = rng.fork(s);
      ehtcp::CandidateSolution start;
      start.blocks.assign(inst.k() + 1, Vec::Zero(inst.dim()));
      for (auto& b : start.blocks)
        for (int i = 0; i < inst.dim(); ++i) b[i] = std::abs(stream.normal());
      const auto res = ehtcp::semismooth_newton(inst, start, opts);
      if (res.converged) found.push_back(res.point);
    }
    body["solutions"] = solutions_to_json(found);
    human << "newton: " << found.size() << " converged start(s)\n";
  } else {
    throw CLI::ValidationError("--method must be all|newton|continuation");
  }
  emit(g, "solve " + path, body, timer.ms(), human.str());
  return kExitOk;
}

int run_check(const GlobalFlags& g, const std::string& path,
              const std::string& cls_name, bool all_classes) {
  const ehtcp::EhtcpInstance inst = ehtcp::load_instance(path);
  const Timer timer;
  std::vector<ehtcp::ClassName> classes;
  if (all_classes) {
    classes.assign(ehtcp::kAllClasses.begin(), ehtcp::kAllClasses.end());
  } else {
    const auto cls = ehtcp::class_from_string(cls_name);
    if (!cls)
      throw CLI::ValidationError("--class must be one of ehr0, ehp, "
                                 "strong-ehp, ehe, ehnd, strong-ehnd");
    classes.push_back(*cls);
  }

  json verdicts = json::array();
  std::ostringstream human;
  for (const auto cls : classes) {
    const auto v = ehtcp::falsify(cls, inst.tuple(), falsify_options(g));
    verdicts.push_back(verdict_to_json(v));
    human << ehtcp::to_string(cls) << ": "
          << (v.status == ehtcp::VerdictStatus::Refuted
                  ? "REFUTED"
                  : "no witness at budget")
          << "\n";
  }
  json body;
  body["verdicts"] = verdicts;
  emit(g, "check " + path, body, timer.ms(), human.str());
  return kExitOk;
}

int run_hierarchy(const GlobalFlags& g, const std::string& path) {
  const ehtcp::EhtcpInstance inst = ehtcp::load_instance(path);
  const Timer timer;
  json verdicts = json::array();
  std::ostringstream human;
  std::vector<ehtcp::ClassVerdict> all;
  for (const auto cls : ehtcp::kAllClasses) {
    all.push_back(ehtcp::falsify(cls, inst.tuple(), falsify_options(g)));
    verdicts.push_back(verdict_to_json(all.back()));
    human << ehtcp::to_string(cls) << ": "
          << (all.back().status == ehtcp::VerdictStatus::Refuted
                  ? "REFUTED"
                  : "no witness at budget")
          << "\n";
  }

  // Contrapositive consistency along the premise inclusions.
  json propagation = json::array();
  auto try_propagate = [&](ehtcp::ClassName from, ehtcp::ClassName to) {
    const auto& v = all[static_cast<int>(from)];
    if (v.status != ehtcp::VerdictStatus::Refuted) return;
    const auto conv =
        ehtcp::propagate_witness(inst.tuple(), *v.witness, from, to, g.tol);
    propagation.push_back({{"from", ehtcp::to_string(from)},
                           {"to", ehtcp::to_string(to)},
                           {"converted", conv.has_value()}});
  };
  try_propagate(ehtcp::ClassName::EHR0, ehtcp::ClassName::EHE);
  try_propagate(ehtcp::ClassName::EHR0, ehtcp::ClassName::EHP);
  try_propagate(ehtcp::ClassName::EHND, ehtcp::ClassName::EHP);
  try_propagate(ehtcp::ClassName::StrongEHND, ehtcp::ClassName::StrongEHP);

  json body;
  body["verdicts"] = verdicts;
  body["propagation"] = propagation;
  emit(g, "hierarchy " + path, body, timer.ms(), human.str());
  return kExitOk;
}

int run_degree(const GlobalFlags& g, const std::string& path, bool verify_d) {
  const ehtcp::EhtcpInstance inst = ehtcp::load_instance(path);
  const Timer timer;
  ehtcp::DegreeOptions opts;
  opts.seed = g.seed;
  opts.threads = g.threads;
  opts.tol = g.tol;
  opts.gate_restarts = budget_restarts(g);

  json body;
  std::ostringstream human;
  if (verify_d && inst.k() >= 2) {
    const auto cmp =
        ehtcp::verify_degree_equivalence(inst.tuple(), inst.d(), opts);
    body["leading"] = degree_to_json(cmp.leading);
    body["paired"] = degree_to_json(cmp.paired);
    body["agree"] = cmp.agree;
    human << "degree maps agree: " << (cmp.agree ? "yes" : "no") << "\n";
  } else {
    const auto res = ehtcp::estimate_degree(inst.tuple(), opts);
    body = degree_to_json(res);
    if (res.refused())
      human << "degree: refused (" << res.refusal_reason << ")\n";
    else
      human << "degree: " << res.estimate->value
            << " (exhaustive=" << (res.estimate->exhaustive_sweep ? "yes" : "no")
            << ")\n";
  }
  emit(g, "degree " + path, body, timer.ms(), human.str());
  return kExitOk;
}

int run_examples(const GlobalFlags& g, long deep_budget) {
  const Timer timer;
  ehtcp::SuiteOptions opts;
  opts.seed = g.seed;
  opts.threads = g.threads;
  opts.tol = g.tol;
  opts.budget_restarts = budget_restarts(g);
  opts.deep_restarts = deep_budget;
  const auto report = ehtcp::run_examples_suite(opts);

  std::ostringstream human;
  for (const auto& c : report.claims)
    human << (c.passed ? "PASS" : "FAIL") << "  " << c.fixture << "/"
          << c.claim << (c.detail.empty() ? "" : "  (" + c.detail + ")")
          << "\n";
  human << report.passed_count << " passed, " << report.failed_count
        << " failed\n";

  emit(g, "examples", json::parse(report.to_json()), timer.ms(), human.str());
  return report.all_passed ? kExitOk : kExitClaimFailure;
}

int run_gen(const GlobalFlags& g, int m, int n, int k,
            const std::string& family_name, int nnz,
            const std::string& out_path) {
  const auto family = ehtcp::family_from_string(family_name);
  if (!family)
    throw CLI::ValidationError(
        "--family must be sparse-random|diagonal|identity-led");
  ehtcp::GeneratorConfig config;
  config.m = m;
  config.n = n;
  config.k = k;
  config.family = *family;
  config.seed = g.seed;
  config.nnz_per_tensor = nnz;
  const Timer timer;
  const auto inst = ehtcp::generate_instance(config);
  ehtcp::save_instance(inst, out_path);
  json body;
  body["path"] = out_path;
  body["label"] = inst.label();
  emit(g, "gen", body, timer.ms(),
       "wrote " + out_path + " (" + inst.label() + ")\n");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"EHTCP workbench: solvers and structured-class verifiers for "
               "extended horizontal tensor complementarity problems"};
  app.require_subcommand(1);

  GlobalFlags g;
  app.add_option("--seed", g.seed, "Deterministic seed");
  app.add_option("--tol", g.tol, "Feasibility / witness tolerance");
  app.add_option("--budget", g.budget,
                 "Search budget units (200 falsification restarts each)");
  app.add_flag("--json", g.as_json, "Emit the JSON report on stdout");
  app.add_option("--threads", g.threads, "Worker thread bound");
  app.add_option("--out", g.out_path, "Write the JSON report to a file");

  auto* solve = app.add_subcommand("solve", "Solve an instance file");
  std::string solve_path, solve_method = "all";
  int solve_steps = 20;
  solve->add_option("instance", solve_path, "Instance JSON file")->required();
  solve->add_option("--method", solve_method, "all|newton|continuation");
  solve->add_option("--steps", solve_steps, "Continuation steps");

  auto* check = app.add_subcommand("check", "Falsify class membership");
  std::string check_path, check_class;
  bool check_all = false;
  check->add_option("instance", check_path, "Instance JSON file")->required();
  check->add_option("--class", check_class, "Class name");
  check->add_flag("--all", check_all, "Check every class");

  auto* hierarchy =
      app.add_subcommand("hierarchy", "All classes plus witness propagation");
  std::string hierarchy_path;
  hierarchy->add_option("instance", hierarchy_path, "Instance JSON file")
      ->required();

  auto* degree = app.add_subcommand("degree", "Estimate the tuple degree");
  std::string degree_path;
  bool degree_verify_d = false;
  degree->add_option("instance", degree_path, "Instance JSON file")->required();
  degree->add_flag("--verify-d", degree_verify_d,
                   "Also count via the paired map and compare");

  auto* examples =
      app.add_subcommand("examples", "Run the built-in examples suite");
  long deep_budget = 10000;
  examples->add_option("--deep-budget", deep_budget,
                       "Restart budget for the headline no-witness claims");

  auto* gen = app.add_subcommand("gen", "Generate a random instance");
  int gen_m = 3, gen_n = 2, gen_k = 1, gen_nnz = 0;
  std::string gen_family = "sparse-random", gen_out;
  gen->add_option("--m", gen_m, "Tensor order (>= 2)");
  gen->add_option("--n", gen_n, "Dimension");
  gen->add_option("--k", gen_k, "Number of trailing tensors");
  gen->add_option("--family", gen_family,
                  "sparse-random|diagonal|identity-led");
  gen->add_option("--nnz", gen_nnz, "Nonzeros per tensor (0 = default)");
  gen->add_option("--out", gen_out, "Output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (solve->parsed())
      return run_solve(g, solve_path, solve_method, solve_steps);
    if (check->parsed()) {
      if (!check_all && check_class.empty())
        throw CLI::ValidationError("check needs --class NAME or --all");
      return run_check(g, check_path, check_class, check_all);
    }
    if (hierarchy->parsed()) return run_hierarchy(g, hierarchy_path);
    if (degree->parsed()) return run_degree(g, degree_path, degree_verify_d);
    if (examples->parsed()) return run_examples(g, deep_budget);
    if (gen->parsed())
      return run_gen(g, gen_m, gen_n, gen_k, gen_family, gen_nnz, gen_out);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const ehtcp::ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitClaimFailure;
  }
  return kExitOk;
}
