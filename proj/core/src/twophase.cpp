#include "tpra/twophase.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

namespace tpra {

PhasedController::PhasedController(std::vector<MemorylessController> stages,
                                   std::vector<ValueFunction> values)
    : stages_(std::move(stages)), values_(std::move(values)) {
  if (stages_.empty()) throw std::invalid_argument("PhasedController: no stages");
  if (values_.size() != stages_.size()) {
    throw std::invalid_argument("PhasedController: one value function per stage required");
  }
  for (std::size_t k = 0; k < stages_.size(); ++k) {
    if (stages_[k].size() != stages_[0].size() || values_[k].size() != stages_[0].size()) {
      throw std::invalid_argument("PhasedController: stage tables differ in size");
    }
  }
}

PhasedController::Step PhasedController::step(CellId cell) {
  if (is_off()) throw std::logic_error("PhasedController::step: controller is off");
  if (cell >= stages_[0].size()) return {Kind::Fault, 0, phase_};
  for (;;) {
    const auto& mu = stages_[phase_];
    if (!mu.is_defined(cell)) return {Kind::Fault, 0, phase_};
    if (!mu.is_stop(cell)) return {Kind::Input, mu.input(cell), phase_};
    ++phase_;
    if (is_off()) return {Kind::Stop, 0, phase_};
  }
}

PhasedController::Step PhasedController::step(const Grid& grid, std::span<const double> x) {
  return step(grid.quantize(x));
}

SynthesisResult synthesize_chain(const TransitionGraph& graph, const RunningCost& running,
                                 const std::vector<Stage>& stages, Composition mode) {
  if (stages.empty()) throw std::invalid_argument("synthesize_chain: no stages");
  const std::size_t n = graph.state_count;
  for (const auto& st : stages) {
    if (st.target.size() != n) throw std::invalid_argument("synthesize_chain: target size mismatch");
  }
  if (stages.back().terminal.size() != n) {
    throw std::invalid_argument("synthesize_chain: terminal cost size mismatch");
  }

  SynthesisResult result;
  const std::size_t N = stages.size();
  result.stages.resize(N);
  result.orders.resize(N);
  std::vector<MemorylessController> mus(N);
  std::vector<ValueFunction> values(N);

  for (std::size_t i = N; i-- > 0;) {
    const auto& st = stages[i];
    auto& rep = result.stages[i];
    rep.target_states = static_cast<std::size_t>(std::count(st.target.begin(), st.target.end(), std::uint8_t{1}));
    if (rep.target_states == 0) {
      result.message = "stage " + std::to_string(i + 1) + " target is empty";
      return result;
    }
    const auto t0 = std::chrono::steady_clock::now();
    ReachAvoidProblem prob{graph, &running, {}};
    if (i + 1 == N) {
      prob.stop_cost = stop_cost_on(st.target, st.terminal);
    } else {
      const auto& next = values[i + 1].values;
      prob.stop_cost.assign(n, ExtCost::infinity());
      for (std::size_t s = 0; s < n; ++s) {
        if (!st.target[s] || next[s].is_infinite()) continue;
        ++rep.target_covered;
        prob.stop_cost[s] = mode == Composition::Optimal ? next[s] : ExtCost::zero();
      }
      if (rep.target_covered == 0) {
        result.message = "stage " + std::to_string(i + 2) + " value is infinite on every stage " +
                         std::to_string(i + 1) + " target state";
        return result;
      }
    }
    auto sol = solve_reach_avoid(prob);
    rep.finite_values = sol.value.finite_count();
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    mus[i] = std::move(sol.controller);
    values[i] = std::move(sol.value);
    result.orders[i] = std::move(sol.order);
  }
  std::vector<ValueFunction> realized = values;
  if (mode == Composition::Naive) {
    // The naive stopping cost ignores what the next stage costs; charge it.
    for (std::size_t i = N - 1; i-- > 0;) {
      ReachAvoidProblem prob{graph, &running, std::vector<ExtCost>(n, ExtCost::infinity())};
      for (std::size_t s = 0; s < n; ++s) {
        if (stages[i].target[s]) prob.stop_cost[s] = realized[i + 1][s];
      }
      realized[i] = evaluate_controller(prob, mus[i], result.orders[i]);
    }
  }
  result.stage_values = std::move(values);
  result.controller.emplace(std::move(mus), std::move(realized));
  return result;
}

namespace {

std::vector<Stage> two_stages(const TwoPhaseProblem& prob) {
  if (prob.running == nullptr) throw std::invalid_argument("TwoPhaseProblem: missing running cost");
  return {Stage{prob.first_target, {}}, Stage{prob.second_target, prob.terminal}};
}

}  // namespace

SynthesisResult synthesize(const TwoPhaseProblem& prob) {
  return synthesize_chain(prob.graph, *prob.running, two_stages(prob), Composition::Optimal);
}

SynthesisResult synthesize_naive(const TwoPhaseProblem& prob) {
  return synthesize_chain(prob.graph, *prob.running, two_stages(prob), Composition::Naive);
}

}  // namespace tpra
