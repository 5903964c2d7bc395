#include <benchmark/benchmark.h>

#include "ehtcp/classes.hpp"
#include "ehtcp/degree.hpp"
#include "ehtcp/fixtures.hpp"
#include "ehtcp/generator.hpp"
#include "ehtcp/solvers.hpp"

namespace {

using namespace ehtcp;

Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

void BM_ApplyPower(benchmark::State& state) {
  GeneratorConfig config;
  config.m = static_cast<int>(state.range(0));
  config.n = 3;
  config.seed = 5;
  const auto inst = generate_instance(config);
  Vec x(3);
  x << 0.3, -1.1, 0.7;
  for (auto _ : state)
    benchmark::DoNotOptimize(apply_power(inst.tuple()[0], x));
}
BENCHMARK(BM_ApplyPower)->Arg(2)->Arg(3)->Arg(4);

void BM_Jacobian(benchmark::State& state) {
  GeneratorConfig config;
  config.m = static_cast<int>(state.range(0));
  config.n = 3;
  config.seed = 5;
  const auto inst = generate_instance(config);
  Vec x(3);
  x << 0.3, -1.1, 0.7;
  for (auto _ : state) benchmark::DoNotOptimize(jacobian(inst.tuple()[0], x));
}
BENCHMARK(BM_Jacobian)->Arg(3)->Arg(4);

void BM_StackedResidual(benchmark::State& state) {
  const auto inst = fixtures::circle_family_instance();
  CandidateSolution x;
  x.blocks = {Vec::Constant(3, 0.4), Vec::Constant(3, 0.1),
              Vec::Constant(3, 0.2)};
  for (auto _ : state) benchmark::DoNotOptimize(residual_psi_d(inst, x));
}
BENCHMARK(BM_StackedResidual);

void BM_SolveAllFinitePair(benchmark::State& state) {
  const auto inst =
      fixtures::instance_with(fixtures::mixed_cubes_pair(), vec2(1, 1));
  SolveOptions opts;
  for (auto _ : state) benchmark::DoNotOptimize(solve_all(inst, opts));
}
BENCHMARK(BM_SolveAllFinitePair)->Unit(benchmark::kMillisecond);

void BM_FalsifyEheSwapSquares(benchmark::State& state) {
  const auto tuple = fixtures::swap_squares_trio();
  FalsifyOptions opts;
  opts.restarts = 200;
  for (auto _ : state)
    benchmark::DoNotOptimize(falsify(ClassName::EHE, tuple, opts));
}
BENCHMARK(BM_FalsifyEheSwapSquares)->Unit(benchmark::kMillisecond);

void BM_DegreeIdentityPair(benchmark::State& state) {
  const auto tuple = fixtures::identity_tuple(2, 2);
  DegreeOptions opts;
  for (auto _ : state) benchmark::DoNotOptimize(estimate_degree(tuple, opts));
}
BENCHMARK(BM_DegreeIdentityPair)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
