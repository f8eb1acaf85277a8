#include <benchmark/benchmark.h>

#include <filesystem>

#include "tpra/abstract_costs.hpp"
#include "tpra/abstraction.hpp"
#include "tpra/scenario.hpp"

using namespace tpra;

namespace {

Scenario desk() {
  return load_scenario(std::filesystem::path(TPRA_SOURCE_DIR) / "scenarios" / "vehicle_desk.json");
}

// Desk scenario restricted to a block around the southern road.
Scenario desk_block() {
  auto sc = desk();
  sc.grid.domain = HyperRect({30, 0, sc.grid.domain.lo(2), 0}, {46, 8, sc.grid.domain.hi(2), 9});
  sc.grid.cells = {16, 8, 36, 10};
  return sc;
}

void BM_ReachBox(benchmark::State& state) {
  const auto sc = desk();
  const auto sys = build_system(sc);
  const auto grid = build_grid(sc);
  const CellId c = grid.quantize(std::vector<double>{20.5, 4.5, 0.1, 4.5});
  const auto box = grid.cell_box(c);
  for (auto _ : state) benchmark::DoNotOptimize(reach_box(sys, box, sys.inputs[7]));
}
BENCHMARK(BM_ReachBox);

void BM_AbstractSuccessors(benchmark::State& state) {
  const auto sc = desk();
  const auto sys = build_system(sc);
  const auto grid = build_grid(sc);
  const CellId c = grid.quantize(std::vector<double>{20.5, 4.5, 0.1, 4.5});
  std::vector<CellId> out;
  for (auto _ : state) {
    for (std::size_t u = 0; u < sys.inputs.size(); ++u) abstract_successors(sys, grid, c, sys.inputs[u], out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(sys.inputs.size()));
}
BENCHMARK(BM_AbstractSuccessors);

void BM_ComputeTransitionsBlock(benchmark::State& state) {
  const auto sc = desk_block();
  const auto sys = build_system(sc);
  const auto grid = build_grid(sc);
  AbstractionOptions opt;
  opt.threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(compute_transitions(sys, grid, opt));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid.cell_count() * sys.inputs.size()));
}
BENCHMARK(BM_ComputeTransitionsBlock)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_AbstractCostsDesk(benchmark::State& state) {
  const auto sc = desk();
  const auto sys = build_system(sc);
  const auto grid = build_grid(sc);
  for (auto _ : state) benchmark::DoNotOptimize(abstract_costs(sc.spec, grid, sys.inputs));
}
BENCHMARK(BM_AbstractCostsDesk)->Unit(benchmark::kMillisecond);

}  // namespace
