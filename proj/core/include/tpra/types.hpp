#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tpra/ext_cost.hpp"

namespace tpra {

using StateId = std::uint32_t;
using InputId = std::uint32_t;
using Point = std::vector<double>;

/// Axis-aligned closed box [lo, hi] in plant units.
class HyperRect {
 public:
  HyperRect() = default;
  HyperRect(std::vector<double> lo, std::vector<double> hi);

  std::size_t dim() const noexcept { return lo_.size(); }
  const std::vector<double>& lo() const noexcept { return lo_; }
  const std::vector<double>& hi() const noexcept { return hi_; }
  double lo(std::size_t i) const { return lo_[i]; }
  double hi(std::size_t i) const { return hi_[i]; }

  bool contains(std::span<const double> p) const;
  bool contains(const HyperRect& other) const;
  /// Non-empty intersection of the two closed boxes.
  bool intersects(const HyperRect& other) const;

  std::vector<double> center() const;
  std::vector<double> half_widths() const;

  friend bool operator==(const HyperRect&, const HyperRect&) = default;

 private:
  std::vector<double> lo_;
  std::vector<double> hi_;
};

/// True iff the closed box is contained in the union of the closed boxes.
bool covered_by_union(const HyperRect& box, std::span<const HyperRect> regions);

/// Read-only view of a finite transition system in compressed adjacency form.
/// Pair (s, u) has index s * input_count + u; its successors are
/// successors[offsets[pair] .. offsets[pair + 1]), sorted and duplicate-free.
struct TransitionGraph {
  std::size_t state_count = 0;
  std::size_t input_count = 0;
  std::span<const std::uint64_t> offsets;
  std::span<const StateId> successors;

  std::size_t pair_index(StateId s, InputId u) const noexcept {
    return static_cast<std::size_t>(s) * input_count + u;
  }
  std::span<const StateId> successors_of(StateId s, InputId u) const noexcept {
    const std::size_t p = pair_index(s, u);
    return successors.subspan(offsets[p], offsets[p + 1] - offsets[p]);
  }
};

/// Finite system (X, U, F) with a strict transition function.
class FiniteSystem {
 public:
  FiniteSystem() = default;
  /// successors[s][u] lists F(s, u); each list is sorted and deduplicated.
  explicit FiniteSystem(const std::vector<std::vector<std::vector<StateId>>>& successors);

  std::size_t state_count() const noexcept { return state_count_; }
  std::size_t input_count() const noexcept { return input_count_; }
  TransitionGraph graph() const noexcept;
  std::span<const StateId> successors_of(StateId s, InputId u) const noexcept {
    return graph().successors_of(s, u);
  }

 private:
  std::size_t state_count_ = 0;
  std::size_t input_count_ = 0;
  std::vector<std::uint64_t> offsets_;
  std::vector<StateId> successors_;
};

/// Running cost g(s, s', u) on a finite system.
class RunningCost {
 public:
  virtual ~RunningCost() = default;
  virtual ExtCost operator()(StateId state, InputId input, StateId successor) const = 0;
};

/// Running cost stored per transition entry, aligned with a graph's successor array.
class EdgeCostTable final : public RunningCost {
 public:
  EdgeCostTable(TransitionGraph graph, std::vector<ExtCost> costs);
  ExtCost operator()(StateId state, InputId input, StateId successor) const override;
  const std::vector<ExtCost>& costs() const noexcept { return costs_; }

 private:
  TransitionGraph graph_;
  std::vector<ExtCost> costs_;
};

/// Memoryless controller table: state -> input index, stop, or undefined.
class MemorylessController {
 public:
  static constexpr std::int32_t kUndefined = -1;
  static constexpr std::int32_t kStop = -2;

  MemorylessController() = default;
  explicit MemorylessController(std::size_t state_count)
      : table_(state_count, kUndefined) {}
  explicit MemorylessController(std::vector<std::int32_t> table);

  std::size_t size() const noexcept { return table_.size(); }
  void set_input(StateId s, InputId u) { table_.at(s) = static_cast<std::int32_t>(u); }
  void set_stop(StateId s) { table_.at(s) = kStop; }
  void clear(StateId s) { table_.at(s) = kUndefined; }

  bool is_defined(StateId s) const { return table_.at(s) != kUndefined; }
  bool is_stop(StateId s) const { return table_.at(s) == kStop; }
  InputId input(StateId s) const;
  std::int32_t entry(StateId s) const { return table_.at(s); }
  std::span<const std::int32_t> table() const noexcept { return table_; }

  friend bool operator==(const MemorylessController&, const MemorylessController&) = default;

 private:
  std::vector<std::int32_t> table_;
};

/// Per-state optimal worst-case cost.
struct ValueFunction {
  std::vector<ExtCost> values;

  std::size_t size() const noexcept { return values.size(); }
  ExtCost operator[](std::size_t i) const { return values[i]; }
  std::size_t finite_count() const noexcept;
  /// Largest finite value, or 0 when no value is finite.
  double max_finite() const noexcept;

  friend bool operator==(const ValueFunction&, const ValueFunction&) = default;
};

/// Closed-loop run record. stop_time is empty for a run that never stopped.
struct Trajectory {
  std::vector<Point> states;
  std::vector<Point> inputs;
  std::optional<std::size_t> stop_time;
  ExtCost accumulated_cost;
  /// Cached "first target visited at or before the last state" predicate.
  bool first_target_visited = false;

  /// len(states) = T + 1 and len(inputs) = T for a stopped run.
  void check_invariants() const;
};

/// Concrete running cost g(x, x', u) with declared arity.
struct ConcreteRunningCost {
  std::size_t state_dim = 0;
  std::size_t input_dim = 0;
  std::function<ExtCost(std::span<const double>, std::span<const double>,
                        std::span<const double>)>
      eval;
};

/// Trajectory cost G(x|[0;T]).
using TrajectoryCost = std::function<ExtCost(std::span<const Point>)>;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Sum of running costs up to the stop time plus the trajectory cost of the
/// stopped prefix; infinite for a run that never stops.
ExtCost total_cost(const Trajectory& traj, const ConcreteRunningCost& g,
                   const TrajectoryCost& trajectory_cost);

}  // namespace tpra
