#include <benchmark/benchmark.h>

#include <random>

#include "tpra/oracle.hpp"
#include "tpra/solver.hpp"
#include "tpra/twophase.hpp"

using namespace tpra;

namespace {

// n states on a line, 4 inputs, up to 3 successors drawn near s + step.
struct Lattice {
  FiniteSystem system;
  std::vector<ExtCost> costs;
  std::vector<std::uint8_t> first, second;
  std::vector<ExtCost> terminal;
};

Lattice lattice(std::size_t n) {
  std::mt19937_64 rng(7);
  std::vector<std::vector<std::vector<StateId>>> succ(n);
  Lattice out;
  for (std::size_t s = 0; s < n; ++s) {
    succ[s].resize(4);
    for (std::size_t u = 0; u < 4; ++u) {
      const std::size_t k = 1 + rng() % 3;
      for (std::size_t j = 0; j < k; ++j) {
        const std::size_t t = std::min(n - 1, s + 1 + u + rng() % 4);
        succ[s][u].push_back(static_cast<StateId>(t));
      }
    }
  }
  out.system = FiniteSystem(succ);
  for (std::size_t e = 0; e < out.system.graph().successors.size(); ++e) {
    out.costs.emplace_back(0.5 * static_cast<double>(1 + rng() % 20));
  }
  out.first.assign(n, 0);
  out.second.assign(n, 0);
  for (std::size_t s = n / 2; s < n / 2 + n / 20; ++s) out.first[s] = 1;
  for (std::size_t s = n - n / 50; s < n; ++s) out.second[s] = 1;
  out.terminal.assign(n, ExtCost::zero());
  return out;
}

void BM_SolveReachAvoid(benchmark::State& state) {
  const auto l = lattice(static_cast<std::size_t>(state.range(0)));
  const EdgeCostTable g(l.system.graph(), l.costs);
  const ReachAvoidProblem p{l.system.graph(), &g, stop_cost_on(l.second, l.terminal)};
  for (auto _ : state) benchmark::DoNotOptimize(solve_reach_avoid(p));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(l.costs.size()));
}
BENCHMARK(BM_SolveReachAvoid)->Arg(10000)->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond);

void BM_ValueIteration(benchmark::State& state) {
  const auto l = lattice(static_cast<std::size_t>(state.range(0)));
  const EdgeCostTable g(l.system.graph(), l.costs);
  const ReachAvoidProblem p{l.system.graph(), &g, stop_cost_on(l.second, l.terminal)};
  for (auto _ : state) benchmark::DoNotOptimize(value_iteration(p));
}
BENCHMARK(BM_ValueIteration)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_SynthesizeTwoPhase(benchmark::State& state) {
  const auto l = lattice(static_cast<std::size_t>(state.range(0)));
  const EdgeCostTable g(l.system.graph(), l.costs);
  const TwoPhaseProblem p{l.system.graph(), &g, l.first, l.second, l.terminal};
  for (auto _ : state) benchmark::DoNotOptimize(synthesize(p));
}
BENCHMARK(BM_SynthesizeTwoPhase)->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond);

void BM_Selftest(benchmark::State& state) {
  SelftestOptions opt;
  opt.instances = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_selftest(opt));
}
BENCHMARK(BM_Selftest)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace
