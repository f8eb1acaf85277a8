#include "tpra/solver.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <string>

namespace tpra {

void ReachAvoidProblem::validate() const {
  if (running == nullptr) throw std::invalid_argument("ReachAvoidProblem: missing running cost");
  if (stop_cost.size() != graph.state_count) {
    throw std::invalid_argument("ReachAvoidProblem: stop cost size " + std::to_string(stop_cost.size()) +
                                " != state count " + std::to_string(graph.state_count));
  }
  if (graph.input_count == 0) throw std::invalid_argument("ReachAvoidProblem: no inputs");
  if (graph.offsets.size() != graph.state_count * graph.input_count + 1) {
    throw std::invalid_argument("ReachAvoidProblem: offset table size mismatch");
  }
  if (graph.state_count * graph.input_count > std::numeric_limits<std::uint32_t>::max()) {
    throw std::invalid_argument("ReachAvoidProblem: more than 2^32 state-input pairs");
  }
}

std::vector<ExtCost> stop_cost_on(const std::vector<std::uint8_t>& target,
                                  const std::vector<ExtCost>& terminal) {
  if (target.size() != terminal.size()) throw std::invalid_argument("stop_cost_on: size mismatch");
  std::vector<ExtCost> out(target.size(), ExtCost::infinity());
  for (std::size_t s = 0; s < target.size(); ++s) {
    if (target[s]) out[s] = terminal[s];
  }
  return out;
}

ReachAvoidSolution solve_reach_avoid(const ReachAvoidProblem& prob) {
  prob.validate();
  const auto& G = prob.graph;
  const RunningCost& g = *prob.running;
  const std::size_t n = G.state_count;
  const std::size_t m = G.input_count;
  const std::size_t pairs = n * m;

  // A pair can only ever complete with a finite label if every edge is finite.
  std::vector<std::uint8_t> live(pairs, 0);
  std::vector<std::uint64_t> rev_offsets(n + 1, 0);
  for (StateId s = 0; s < n; ++s) {
    for (InputId u = 0; u < m; ++u) {
      bool ok = true;
      for (StateId t : G.successors_of(s, u)) {
        if (g(s, u, t).is_infinite()) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      live[G.pair_index(s, u)] = 1;
      for (StateId t : G.successors_of(s, u)) ++rev_offsets[t + 1];
    }
  }
  for (std::size_t s = 0; s < n; ++s) rev_offsets[s + 1] += rev_offsets[s];
  std::vector<std::uint32_t> rev(rev_offsets.back());
  {
    std::vector<std::uint64_t> fill(rev_offsets.begin(), rev_offsets.end() - 1);
    for (std::size_t p = 0; p < pairs; ++p) {
      if (!live[p]) continue;
      const auto s = static_cast<StateId>(p / m);
      const auto u = static_cast<InputId>(p % m);
      for (StateId t : G.successors_of(s, u)) rev[fill[t]++] = static_cast<std::uint32_t>(p);
    }
  }

  std::vector<std::uint32_t> remaining(pairs, 0);
  for (std::size_t p = 0; p < pairs; ++p) {
    if (live[p]) remaining[p] = static_cast<std::uint32_t>(G.offsets[p + 1] - G.offsets[p]);
  }
  live.clear();
  live.shrink_to_fit();
  std::vector<double> running_max(pairs, 0.0);

  ReachAvoidSolution sol;
  sol.value.values = prob.stop_cost;
  auto& V = sol.value.values;
  sol.controller = MemorylessController(n);
  std::vector<std::uint8_t> final_flag(n, 0);

  using Entry = std::pair<double, StateId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  for (StateId s = 0; s < n; ++s) {
    if (V[s].is_finite()) {
      sol.controller.set_stop(s);
      heap.emplace(V[s].value(), s);
    }
  }

  while (!heap.empty()) {
    const auto [v, s] = heap.top();
    heap.pop();
    if (final_flag[s] || v != V[s].value()) continue;
    final_flag[s] = 1;
    sol.order.push_back(s);
    for (std::uint64_t k = rev_offsets[s]; k < rev_offsets[s + 1]; ++k) {
      const std::uint32_t p = rev[k];
      const auto src = static_cast<StateId>(p / m);
      const auto u = static_cast<InputId>(p % m);
      const double c = (g(src, u, s) + V[s]).value();
      if (c > running_max[p]) running_max[p] = c;
      if (--remaining[p] != 0 || final_flag[src]) continue;
      const ExtCost label(running_max[p]);
      if (label < V[src]) {
        V[src] = label;
        sol.controller.set_input(src, u);
        heap.emplace(label.value(), src);
      } else if (label == V[src] && !sol.controller.is_stop(src) && u < sol.controller.input(src)) {
        sol.controller.set_input(src, u);
      }
    }
  }
  return sol;
}

namespace {

ExtCost bellman_rhs(const ReachAvoidProblem& prob, const std::vector<ExtCost>& V, StateId s) {
  const auto& G = prob.graph;
  ExtCost best = prob.stop_cost[s];
  for (InputId u = 0; u < G.input_count; ++u) {
    ExtCost worst = ExtCost::zero();
    for (StateId t : G.successors_of(s, u)) {
      worst = max(worst, (*prob.running)(s, u, t) + V[t]);
      if (worst >= best) break;
    }
    best = min(best, worst);
  }
  return best;
}

}  // namespace

bool verify_fixed_point(const ReachAvoidProblem& prob, const ValueFunction& v, double tol) {
  prob.validate();
  if (v.size() != prob.graph.state_count) return false;
  for (StateId s = 0; s < prob.graph.state_count; ++s) {
    const ExtCost rhs = bellman_rhs(prob, v.values, s);
    const ExtCost lhs = v.values[s];
    if (lhs.is_infinite() || rhs.is_infinite()) {
      if (lhs != rhs) return false;
      continue;
    }
    const double scale = std::max(1.0, std::max(std::abs(lhs.value()), std::abs(rhs.value())));
    if (std::abs(lhs.value() - rhs.value()) > tol * scale) return false;
  }
  return true;
}

ValueFunction evaluate_controller(const ReachAvoidProblem& prob, const MemorylessController& mu,
                                  const std::vector<StateId>& order) {
  prob.validate();
  const auto& G = prob.graph;
  ValueFunction out;
  out.values.assign(G.state_count, ExtCost::infinity());
  std::vector<std::uint8_t> done(G.state_count, 0);
  for (StateId s : order) {
    if (!mu.is_defined(s)) {
      done[s] = 1;
      continue;
    }
    if (mu.is_stop(s)) {
      out.values[s] = prob.stop_cost[s];
    } else {
      const InputId u = mu.input(s);
      ExtCost worst = ExtCost::zero();
      for (StateId t : G.successors_of(s, u)) {
        // A successor that is not yet evaluated means the closed loop may cycle.
        worst = max(worst, done[t] ? (*prob.running)(s, u, t) + out.values[t] : ExtCost::infinity());
      }
      out.values[s] = worst;
    }
    done[s] = 1;
  }
  return out;
}

}  // namespace tpra
