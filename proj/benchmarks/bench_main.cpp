#include <benchmark/benchmark.h>

#include <random>

#include "lorp/allocators.hpp"
#include "lorp/maxsum.hpp"
#include "lorp/maxsum_oracle.hpp"
#include "lorp/scenario.hpp"
#include "lorp/simulator.hpp"
#include "problems.hpp"

using namespace lorp;

namespace {

maxsum::PlaneFactorInputs factor_inputs(std::size_t n) {
  std::mt19937_64 rng(n);
  std::uniform_real_distribution<double> d(0, 1e4), nu(-1e3, 1e3);
  maxsum::PlaneFactorInputs in;
  for (std::size_t i = 0; i < n; ++i) {
    in.deltas.push_back(d(rng));
    in.incoming.push_back(nu(rng));
  }
  return in;
}

AllocationProblem dense_problem(int planes, int requests) {
  std::mt19937_64 rng(planes * 1000 + requests);
  testing::RandomProblemOptions o;
  o.max_planes = planes;
  o.max_requests = requests;
  o.extent = 10'000;
  o.candidate_p = 1.0;
  // Redraw until the sizes hit the maximum so the benchmark size is fixed.
  for (;;) {
    auto p = testing::random_problem(rng, o);
    if (static_cast<int>(p.planes.size()) == planes &&
        static_cast<int>(p.candidates.size()) == requests) {
      return p;
    }
  }
}

}  // namespace

static void BM_WorkloadMessages(benchmark::State& state) {
  const auto in = factor_inputs(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(maxsum::workload_factor_messages(in));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_WorkloadMessages)->RangeMultiplier(2)->Range(2, 512)->Complexity();

static void BM_WorkloadBruteforce(benchmark::State& state) {
  const auto in = factor_inputs(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(maxsum::workload_messages_bruteforce(in));
  }
}
BENCHMARK(BM_WorkloadBruteforce)->DenseRange(2, 14, 4);

static void BM_Allocator(benchmark::State& state, const char* name) {
  const auto problem = dense_problem(10, static_cast<int>(state.range(0)));
  const auto config = AllocatorConfig::parse(name);
  for (auto _ : state) {
    benchmark::DoNotOptimize(allocate(problem, config));
  }
}
BENCHMARK_CAPTURE(BM_Allocator, d_independent, "d-independent")->Arg(8)->Arg(32);
BENCHMARK_CAPTURE(BM_Allocator, d_workload, "d-workload")->Arg(8)->Arg(32);
BENCHMARK_CAPTURE(BM_Allocator, psi_auction, "psi-auction")->Arg(8)->Arg(32);
BENCHMARK_CAPTURE(BM_Allocator, c_hungarian, "c-hungarian")->Arg(8)->Arg(32);
BENCHMARK_CAPTURE(BM_Allocator, c_greedy, "c-greedy")->Arg(8)->Arg(32);

static void BM_SimulationHour(benchmark::State& state, const char* name) {
  auto c = scaled_config(3600);
  c.seed = 1;
  const auto scenario = generate_scenario(c);
  const auto config = make_sim_config(scenario, AllocatorConfig::parse(name));
  for (auto _ : state) {
    benchmark::DoNotOptimize(run(scenario, config, 1));
  }
}
BENCHMARK_CAPTURE(BM_SimulationHour, d_independent, "d-independent")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_SimulationHour, d_workload, "d-workload")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_SimulationHour, c_greedy, "c-greedy")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
