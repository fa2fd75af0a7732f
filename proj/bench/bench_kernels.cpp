#include <benchmark/benchmark.h>

#include "psim/kernels.hpp"
#include "psim/psim.hpp"

using namespace psim;
using kernels::Exec;

namespace {

struct Fixture {
  Fixture() : bench(make_benchmark(1)), phi(PhiKind::phi1, 2, 2) {
    trajs = kernels::simulate_many(Exec::parallel, bench.model, 4000, 10, 1);
    const Vector m0 = initial_state(trajs, phi);
    filter = Filter::stationary(
        learner_fit(LearnerConfig{}, kernels::constant_state_pairs(Exec::parallel, m0, trajs, phi)), m0, phi);
  }
  Benchmark bench;
  FeatureMap phi;
  std::vector<Trajectory> trajs;
  std::optional<Filter> filter;
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

Exec exec_of(const benchmark::State& state) { return state.range(0) == 0 ? Exec::serial : Exec::parallel; }

void BM_Simulate(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(kernels::simulate_many(exec_of(state), f.bench.model, 4000, 10, 2));
}

void BM_Rollout(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(kernels::rollout_all(exec_of(state), *f.filter, f.trajs));
}

void BM_CollectPairs(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(kernels::collect_pairs(exec_of(state), *f.filter, f.trajs, 1e6));
}

void BM_Objective(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(kernels::objective_sums(exec_of(state), *f.filter, f.trajs));
}

}  // namespace

// Argument 0 runs the serial reference, 1 the OpenMP kernel.
BENCHMARK(BM_Simulate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Rollout)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CollectPairs)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Objective)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
