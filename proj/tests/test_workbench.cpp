#include <cmath>

#include "doctest.h"
#include "ehtcp/classes.hpp"
#include "ehtcp/examples_suite.hpp"
#include "ehtcp/fixtures.hpp"
#include "ehtcp/generator.hpp"
#include "ehtcp/instance_io.hpp"
#include "ehtcp/solvers.hpp"
#include "ehtcp/util.hpp"

using namespace ehtcp;

namespace {

const char* kSwapSquaresJson = R"({
  "m": 3, "n": 2, "k": 2,
  "tensors": [
    {"entries": [[[1,2,2], 1.0], [[2,1,1], 1.0]]},
    {"entries": [[[1,2,2], -1.0], [[2,1,1], 1.0]]},
    {"entries": [[[1,2,2], -1.0], [[2,1,1], 1.0]]}
  ],
  "d": [[1.0, 1.0]],
  "q": [1.0, 0.0]
})";

}  // namespace

TEST_CASE("parse the documented instance format") {
  const auto inst = parse_instance(kSwapSquaresJson);
  CHECK(inst.order() == 3);
  CHECK(inst.dim() == 2);
  CHECK(inst.k() == 2);
  Vec x(2);
  x << 1, 2;
  Vec expected(2);
  expected << 4, 1;
  CHECK(apply_power(inst.tuple()[0], x).isApprox(expected));
}

TEST_CASE("parser rejections carry field diagnostics") {
  // Nonpositive d component.
  std::string bad_d = kSwapSquaresJson;
  bad_d.replace(bad_d.find("[[1.0, 1.0]]"), 12, "[[0.0, 1.0]]");
  CHECK_THROWS_WITH_AS(parse_instance(bad_d),
                       doctest::Contains("d[0]"), ParseError);

  // Index out of range.
  std::string bad_idx = kSwapSquaresJson;
  bad_idx.replace(bad_idx.find("[[1,2,2], 1.0]"), 14, "[[1,3,2], 1.0]");
  CHECK_THROWS_WITH_AS(parse_instance(bad_idx),
                       doctest::Contains("out of range"), ParseError);

  // Duplicate index tuple.
  std::string dup = kSwapSquaresJson;
  dup.replace(dup.find("[[2,1,1], 1.0]"), 14, "[[1,2,2], 2.0]");
  CHECK_THROWS_WITH_AS(parse_instance(dup), doctest::Contains("duplicate"),
                       ParseError);

  // Schema violations.
  CHECK_THROWS_AS(parse_instance("not json"), ParseError);
  CHECK_THROWS_WITH_AS(parse_instance(R"({"m":3,"n":2,"k":2})"),
                       doctest::Contains("tensors"), ParseError);
  CHECK_THROWS_WITH_AS(
      parse_instance(
          R"({"m":1,"n":2,"k":1,"tensors":[{"entries":[]},{"entries":[]}]})"),
      doctest::Contains("m"), ParseError);

  // Wrong tuple arity in an entry.
  std::string short_idx = kSwapSquaresJson;
  short_idx.replace(short_idx.find("[[1,2,2], 1.0]"), 14, "[[1,2], 1.0]");
  CHECK_THROWS_WITH_AS(parse_instance(short_idx),
                       doctest::Contains("exactly m"), ParseError);
}

TEST_CASE("serialization round-trips bit-exactly") {
  Rng rng(8080);
  for (int trial = 0; trial < 10; ++trial) {
    GeneratorConfig config;
    config.m = 2 + static_cast<int>(rng.next_u64() % 3);
    config.n = 1 + static_cast<int>(rng.next_u64() % 3);
    config.k = 1 + static_cast<int>(rng.next_u64() % 2);
    config.seed = rng.next_u64();
    const auto inst = generate_instance(config);
    const std::string text = serialize_instance(inst);
    const auto back = parse_instance(text);
    CHECK(serialize_instance(back) == text);
    CHECK(flatten({back.q()}) == flatten({inst.q()}));
    REQUIRE(back.tuple().size() == inst.tuple().size());
    for (std::size_t t = 0; t < inst.tuple().size(); ++t) {
      const auto& a = inst.tuple()[t].entries();
      const auto& b = back.tuple()[t].entries();
      REQUIRE(a.size() == b.size());
      for (std::size_t e = 0; e < a.size(); ++e) {
        CHECK(a[e].index == b[e].index);
        CHECK(a[e].value == b[e].value);
      }
    }
  }
}

TEST_CASE("q defaults to zero and d may be omitted when k = 1") {
  const auto inst = parse_instance(
      R"({"m":2,"n":2,"k":1,"tensors":[{"entries":[[[1,1],1.0],[[2,2],1.0]]},
          {"entries":[[[1,1],1.0],[[2,2],1.0]]}]})");
  CHECK(inst.q().isZero());
  CHECK(inst.d().empty());
}

TEST_CASE("generator determinism and families") {
  GeneratorConfig config;
  config.m = 3;
  config.n = 3;
  config.k = 2;
  config.seed = 12345;
  const auto a = generate_instance(config);
  const auto b = generate_instance(config);
  CHECK(serialize_instance(a) == serialize_instance(b));
  config.seed = 54321;
  CHECK(serialize_instance(generate_instance(config)) !=
        serialize_instance(a));

  // Identity-led order 2 gives the linear reduction: A_0 is the identity.
  GeneratorConfig lin;
  lin.m = 2;
  lin.n = 2;
  lin.k = 1;
  lin.family = InstanceFamily::IdentityLed;
  const auto hlcp = generate_instance(lin);
  Matrix expect = Matrix::Identity(2, 2);
  Rng rng(9);
  for (int trial = 0; trial < 5; ++trial) {
    Vec x(2);
    x << rng.normal(), rng.normal();
    CHECK(apply_power(hlcp.tuple()[0], x).isApprox(expect * x));
  }

  // d components land in [0.5, 2].
  GeneratorConfig deep;
  deep.k = 3;
  deep.n = 4;
  const auto inst = generate_instance(deep);
  for (const auto& dj : inst.d())
    for (Eigen::Index i = 0; i < dj.size(); ++i) {
      CHECK(dj[i] >= 0.5);
      CHECK(dj[i] <= 2.0);
    }
}

TEST_CASE("diagonal positive pairs solve componentwise for q >= 0") {
  GeneratorConfig config;
  config.m = 4;
  config.n = 3;
  config.k = 1;
  config.family = InstanceFamily::Diagonal;
  config.seed = 777;
  const auto base = generate_instance(config);
  Rng rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    Vec q(3);
    for (int i = 0; i < 3; ++i) q[i] = std::abs(rng.normal());
    const EhtcpInstance inst(base.tuple(), {}, q);
    const auto set = solve_all(inst, SolveOptions{});
    CHECK(!set.solutions.empty());
  }
}

TEST_CASE("invalid generator shapes are rejected") {
  GeneratorConfig config;
  config.m = 1;
  CHECK_THROWS_AS(generate_instance(config), std::invalid_argument);
  config.m = 3;
  config.k = 0;
  CHECK_THROWS_AS(generate_instance(config), std::invalid_argument);
}

TEST_CASE("suite fixtures are perturbation-sensitive") {
  // Negating the third tensor of the alternating-cubes trio destroys the
  // exact balance behind its homogeneous-min witness, so the suite's
  // ehr0-refuted claim would fail on the perturbed tuple.
  Tensor a0(4, 2, {{{0, 1, 1, 1}, 1.0}, {{1, 0, 0, 0}, 1.0}});
  Tensor a1(4, 2, {{{0, 1, 1, 1}, -1.0}, {{1, 0, 0, 0}, 1.0}});
  Tensor a2_flipped(4, 2, {{{0, 1, 1, 1}, -1.0}, {{1, 0, 0, 0}, 1.0}});
  const TensorTuple perturbed({a0, a1, a2_flipped});

  FalsifyOptions opts;
  opts.restarts = 1000;
  CHECK(falsify(ClassName::EHR0, perturbed, opts).status ==
        VerdictStatus::NoWitnessAtBudget);
  // The original tuple keeps its refutation.
  CHECK(falsify(ClassName::EHR0, fixtures::alternating_cubes_trio(), opts)
            .status == VerdictStatus::Refuted);
}

TEST_CASE("examples suite passes and reports deterministically") {
  SuiteOptions opts;
  opts.budget_restarts = 300;
  opts.deep_restarts = 500;
  const auto report = run_examples_suite(opts);
  for (const auto& c : report.claims) {
    INFO(c.fixture, "/", c.claim);
    CHECK(c.passed);
  }
  CHECK(report.all_passed);
  CHECK(report.passed_count == static_cast<int>(report.claims.size()));

  const auto again = run_examples_suite(opts);
  CHECK(report.to_json() == again.to_json());
}
