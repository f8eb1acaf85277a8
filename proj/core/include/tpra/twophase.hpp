#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tpra/grid.hpp"
#include "tpra/solver.hpp"
#include "tpra/types.hpp"

namespace tpra {

/// Controller that runs memoryless stage controllers in order. The active
/// stage advances when its controller signals stop; the last stage's stop
/// ends the run. Phases only move forward.
class PhasedController {
 public:
  enum class Kind { Input, Stop, Fault };
  struct Step {
    Kind kind = Kind::Fault;
    InputId input = 0;
    /// Active stage after the step; equals stage_count() once the run is over.
    std::size_t phase = 0;
  };

  PhasedController() = default;
  PhasedController(std::vector<MemorylessController> stages, std::vector<ValueFunction> values);

  std::size_t stage_count() const noexcept { return stages_.size(); }
  const MemorylessController& stage(std::size_t k) const { return stages_.at(k); }
  const ValueFunction& value(std::size_t k) const { return values_.at(k); }
  const std::vector<MemorylessController>& stages() const noexcept { return stages_; }
  const std::vector<ValueFunction>& values() const noexcept { return values_; }

  std::size_t phase() const noexcept { return phase_; }
  bool is_off() const noexcept { return phase_ >= stages_.size(); }
  void reset() noexcept { phase_ = 0; }

  /// One decision at abstract state `cell`. A stop of a non-final stage hands
  /// over to the next stage at the same cell. Fault: no table entry.
  Step step(CellId cell);
  /// Refined controller: quantize x, then step.
  Step step(const Grid& grid, std::span<const double> x);

  friend bool operator==(const PhasedController&, const PhasedController&) = default;

 private:
  std::vector<MemorylessController> stages_;
  std::vector<ValueFunction> values_;
  std::size_t phase_ = 0;
};

using TwoPhaseController = PhasedController;

/// One stage of a chain: reach `target`; the last stage stops at `terminal`.
struct Stage {
  std::vector<std::uint8_t> target;
  std::vector<ExtCost> terminal;  // used by the last stage only
};

enum class Composition {
  Optimal,  // stage k stops at V_{k+1}
  Naive,    // stage k stops at 0 where V_{k+1} < inf
};

struct StageReport {
  std::size_t target_states = 0;
  std::size_t finite_values = 0;
  /// Target states of this stage with finite next-stage value.
  std::size_t target_covered = 0;
  double seconds = 0.0;
};

struct SynthesisResult {
  /// Empty: no non-trivial solution. value(k) is the worst-case cost of
  /// running stages k, k + 1, ... from each state; for the naive mode this
  /// differs from the stage solutions below.
  std::optional<PhasedController> controller;
  std::vector<StageReport> stages;
  /// Value functions of the stage reach-avoid problems as solved.
  std::vector<ValueFunction> stage_values;
  std::vector<std::vector<StateId>> orders;
  std::string message;

  bool ok() const noexcept { return controller.has_value(); }
};

/// Solves the stages back to front; stage k's stopping cost is built from
/// stage k + 1's value function on stage k's target.
SynthesisResult synthesize_chain(const TransitionGraph& graph, const RunningCost& running,
                                 const std::vector<Stage>& stages,
                                 Composition mode = Composition::Optimal);

/// Finite two-phase problem: visit A1, then stop in A2 at cost G0.
struct TwoPhaseProblem {
  TransitionGraph graph;
  const RunningCost* running = nullptr;
  std::vector<std::uint8_t> first_target;
  std::vector<std::uint8_t> second_target;
  std::vector<ExtCost> terminal;
};

SynthesisResult synthesize(const TwoPhaseProblem& prob);
SynthesisResult synthesize_naive(const TwoPhaseProblem& prob);

}  // namespace tpra
