#include <benchmark/benchmark.h>

#include "hems/params.hpp"
#include "hems/policy.hpp"
#include "hems/rng.hpp"
#include "hems/solver.hpp"
#include "hems/trace.hpp"

using namespace hems;

namespace {

std::vector<P2Instance> sample_instances(std::size_t n) {
  const HomeConfig cfg = default_home_config();
  Rng rng(1);
  std::vector<P2Instance> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(sample_p2_instance(rng, cfg));
  return out;
}

void BM_SolveP2(benchmark::State& state) {
  const auto instances = sample_instances(1024);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_p2(instances[i++ & 1023]));
  }
}
BENCHMARK(BM_SolveP2);

void BM_OracleP2(benchmark::State& state) {
  const auto instances = sample_instances(64);
  const int grid = static_cast<int>(state.range(0));
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(oracle_p2(instances[i++ & 63], grid));
  }
}
BENCHMARK(BM_OracleP2)->Arg(11)->Arg(21);

void BM_MonthSimulation(benchmark::State& state) {
  const HomeConfig cfg = default_home_config();
  const ValidatedConfig vcfg = validate_config(cfg);
  const Policy policy = make_policy(PolicyKind::proposed, vcfg);
  const SyntheticTrace synth = generate_synthetic_trace(31, 4, cfg);
  const auto requests = generate_ev_requests(5, 31, EvWindow{19, 6},
                                             EvEnergyDist{4, 18}, cfg,
                                             synth.bundle.n_slots())
                            .first;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        run_simulation(synth.bundle, requests, vcfg, policy, 22.5, 5.0));
  }
}
BENCHMARK(BM_MonthSimulation);

}  // namespace

BENCHMARK_MAIN();
