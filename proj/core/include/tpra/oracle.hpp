#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tpra/solver.hpp"
#include "tpra/twophase.hpp"
#include "tpra/types.hpp"

namespace tpra {

/// A finite two-phase instance with per-edge costs aligned with the
/// successor array of `system`.
struct FiniteInstance {
  FiniteSystem system;
  std::vector<ExtCost> edge_costs;
  std::vector<std::uint8_t> first_target;
  std::vector<std::uint8_t> second_target;
  std::vector<ExtCost> terminal;

  EdgeCostTable costs() const { return EdgeCostTable(system.graph(), edge_costs); }
  std::string describe() const;
};

struct InstanceLimits {
  std::size_t max_states = 200;
  std::size_t max_inputs = 5;
  std::size_t max_successors = 4;
  double infinite_edge_probability = 0.1;
};

/// Seeded generator; finite costs are multiples of 0.5 in [0.5, 10].
FiniteInstance random_instance(std::uint64_t seed, const InstanceLimits& limits = {});

/// Six states where the cheap way into A1 forces an expensive second phase.
FiniteInstance phase_coupled_gadget();

struct IterationResult {
  std::vector<ExtCost> values;
  std::size_t sweeps = 0;
  bool converged = false;
};

/// Gauss-Seidel value iteration for a reach-avoid problem, started from the
/// stopping cost and run until a sweep changes nothing.
IterationResult value_iteration(const ReachAvoidProblem& prob, std::size_t max_sweeps = 100000);

/// Two-phase value on the product (state, visited-A1 flag); entry 2 s + b.
/// Stopping is allowed at (s, 1) with s in A2, at cost G0(s).
IterationResult product_value(const TransitionGraph& graph, const RunningCost& running,
                              const std::vector<std::uint8_t>& first_target,
                              const std::vector<std::uint8_t>& second_target,
                              const std::vector<ExtCost>& terminal,
                              std::size_t max_sweeps = 100000);

/// Product value read at the initial flag: V(s, [s in A1]).
std::vector<ExtCost> product_initial_values(const IterationResult& product,
                                            const std::vector<std::uint8_t>& first_target);

/// Worst-case two-phase cost of running a two-stage PhasedController from
/// each state (phase 1, flag [s in A1]), by value iteration over
/// (state, phase, flag).
IterationResult evaluate_phased_controller(const TransitionGraph& graph, const RunningCost& running,
                                           const PhasedController& ctrl,
                                           const std::vector<std::uint8_t>& first_target,
                                           const std::vector<std::uint8_t>& second_target,
                                           const std::vector<ExtCost>& terminal,
                                           std::size_t max_sweeps = 100000);

struct SelftestOptions {
  std::size_t instances = 500;
  std::uint64_t seed = 1;
  InstanceLimits limits;
  /// Deliberately broken composition (naive stopping cost in stage 1) to
  /// show that the checks detect a wrong controller.
  bool mutate = false;
};

struct SelftestReport {
  std::size_t instances = 0;
  std::size_t passed = 0;
  std::size_t no_solution = 0;
  /// Instances where the naive controller is strictly worse somewhere.
  std::size_t naive_strictly_worse = 0;
  /// Instances where the naive controller is better somewhere (must stay 0).
  std::size_t naive_better = 0;
  std::optional<std::string> counterexample;

  bool ok() const noexcept { return passed == instances && naive_better == 0; }
};

/// Checks every instance: composed value == product oracle value at every
/// state; the composed controller realizes it; naive is never better;
/// Dijkstra == Gauss-Seidel on both stages; both value functions pass the
/// fixed-point test. Stops at the first failure.
SelftestReport run_selftest(const SelftestOptions& options);

/// Per-instance seed used by run_selftest.
std::uint64_t instance_seed(std::uint64_t base, std::size_t index);

}  // namespace tpra
