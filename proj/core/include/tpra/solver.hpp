#pragma once

#include <vector>

#include "tpra/types.hpp"

namespace tpra {

/// Quantitative reach-avoid problem on a finite system: stopping at s costs
/// stop_cost[s] (G0 on the target, +inf elsewhere), every step costs g >= 0,
/// and a run that never stops costs +inf.
struct ReachAvoidProblem {
  TransitionGraph graph;
  const RunningCost* running = nullptr;
  std::vector<ExtCost> stop_cost;

  void validate() const;
};

/// G_A: G0 on the target states, +inf elsewhere.
std::vector<ExtCost> stop_cost_on(const std::vector<std::uint8_t>& target,
                                  const std::vector<ExtCost>& terminal);

struct ReachAvoidSolution {
  ValueFunction value;
  MemorylessController controller;
  /// States in the order their values were fixed (finite values only).
  std::vector<StateId> order;
};

/// Minimax Dijkstra over hyperedges. A pair (s, u) relaxes s once every
/// successor is final, with max over s' of g(s, u, s') + V(s'). The controller
/// stops where V equals the stopping cost; otherwise it takes the input whose
/// hyperedge produced the label, the smallest index among equal labels that
/// completed before s was fixed.
ReachAvoidSolution solve_reach_avoid(const ReachAvoidProblem& prob);

/// Checks V(s) = min(G_A(s), min_u max_s' [g(s, u, s') + V(s')]) at every state,
/// with relative tolerance `tol` (infinities must match exactly).
bool verify_fixed_point(const ReachAvoidProblem& prob, const ValueFunction& v, double tol = 1e-9);

/// Worst-case cost of a memoryless controller, evaluated backwards along
/// `order` (each chosen input's successors must come earlier). States that
/// are undefined or not in `order` evaluate to +inf.
ValueFunction evaluate_controller(const ReachAvoidProblem& prob, const MemorylessController& mu,
                                  const std::vector<StateId>& order);

}  // namespace tpra
