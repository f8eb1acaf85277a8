#include "tpra/types.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace tpra {

HyperRect::HyperRect(std::vector<double> lo, std::vector<double> hi)
    : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (lo_.size() != hi_.size() || lo_.empty()) {
    throw DimensionError("HyperRect: lo and hi must have equal, non-zero dimension");
  }
  for (std::size_t i = 0; i < lo_.size(); ++i) {
    if (!(lo_[i] <= hi_[i])) {
      throw std::invalid_argument("HyperRect: lo[" + std::to_string(i) + "] > hi[" +
                                  std::to_string(i) + "]");
    }
  }
}

bool HyperRect::contains(std::span<const double> p) const {
  if (p.size() != dim()) throw DimensionError("HyperRect::contains: dimension mismatch");
  for (std::size_t i = 0; i < dim(); ++i) {
    if (p[i] < lo_[i] || p[i] > hi_[i]) return false;
  }
  return true;
}

bool HyperRect::contains(const HyperRect& other) const {
  if (other.dim() != dim()) throw DimensionError("HyperRect::contains: dimension mismatch");
  for (std::size_t i = 0; i < dim(); ++i) {
    if (other.lo_[i] < lo_[i] || other.hi_[i] > hi_[i]) return false;
  }
  return true;
}

bool HyperRect::intersects(const HyperRect& other) const {
  if (other.dim() != dim()) throw DimensionError("HyperRect::intersects: dimension mismatch");
  for (std::size_t i = 0; i < dim(); ++i) {
    if (other.hi_[i] < lo_[i] || other.lo_[i] > hi_[i]) return false;
  }
  return true;
}

std::vector<double> HyperRect::center() const {
  std::vector<double> c(dim());
  for (std::size_t i = 0; i < dim(); ++i) c[i] = 0.5 * (lo_[i] + hi_[i]);
  return c;
}

std::vector<double> HyperRect::half_widths() const {
  std::vector<double> h(dim());
  for (std::size_t i = 0; i < dim(); ++i) h[i] = 0.5 * (hi_[i] - lo_[i]);
  return h;
}

namespace {

bool covered_recursive(const HyperRect& box, std::span<const HyperRect> regions, int depth) {
  // Each split happens on a region face strictly inside the box, so the
  // recursion depth is bounded by the number of distinct faces.
  if (depth > 4096) return false;
  const HyperRect* cutter = nullptr;
  for (const auto& r : regions) {
    if (r.contains(box)) return true;
    bool interior_overlap = true;
    for (std::size_t i = 0; i < box.dim(); ++i) {
      if (!(r.lo(i) < box.hi(i) && r.hi(i) > box.lo(i))) {
        // Degenerate (flat) boxes overlap on a closed face.
        if (!(box.lo(i) == box.hi(i) && r.lo(i) <= box.lo(i) && box.lo(i) <= r.hi(i))) {
          interior_overlap = false;
          break;
        }
      }
    }
    if (interior_overlap && cutter == nullptr) cutter = &r;
  }
  if (cutter == nullptr) return false;
  for (std::size_t i = 0; i < box.dim(); ++i) {
    for (double face : {cutter->lo(i), cutter->hi(i)}) {
      if (box.lo(i) < face && face < box.hi(i)) {
        auto lower_hi = box.hi();
        lower_hi[i] = face;
        auto upper_lo = box.lo();
        upper_lo[i] = face;
        return covered_recursive(HyperRect(box.lo(), lower_hi), regions, depth + 1) &&
               covered_recursive(HyperRect(upper_lo, box.hi()), regions, depth + 1);
      }
    }
  }
  return false;
}

}  // namespace

bool covered_by_union(const HyperRect& box, std::span<const HyperRect> regions) {
  return covered_recursive(box, regions, 0);
}

FiniteSystem::FiniteSystem(const std::vector<std::vector<std::vector<StateId>>>& successors) {
  state_count_ = successors.size();
  if (state_count_ == 0) throw std::invalid_argument("FiniteSystem: no states");
  input_count_ = successors.front().size();
  if (input_count_ == 0) throw std::invalid_argument("FiniteSystem: no inputs");
  offsets_.reserve(state_count_ * input_count_ + 1);
  offsets_.push_back(0);
  for (std::size_t s = 0; s < state_count_; ++s) {
    if (successors[s].size() != input_count_) {
      throw std::invalid_argument("FiniteSystem: state " + std::to_string(s) +
                                  " has a different input count");
    }
    for (std::size_t u = 0; u < input_count_; ++u) {
      auto list = successors[s][u];
      if (list.empty()) {
        throw std::invalid_argument("FiniteSystem: transition function not strict at (" +
                                    std::to_string(s) + ", " + std::to_string(u) + ")");
      }
      std::sort(list.begin(), list.end());
      list.erase(std::unique(list.begin(), list.end()), list.end());
      for (StateId t : list) {
        if (t >= state_count_) throw std::out_of_range("FiniteSystem: successor out of range");
        successors_.push_back(t);
      }
      offsets_.push_back(successors_.size());
    }
  }
}

TransitionGraph FiniteSystem::graph() const noexcept {
  return TransitionGraph{state_count_, input_count_, offsets_, successors_};
}

EdgeCostTable::EdgeCostTable(TransitionGraph graph, std::vector<ExtCost> costs)
    : graph_(graph), costs_(std::move(costs)) {
  if (costs_.size() != graph_.successors.size()) {
    throw DimensionError("EdgeCostTable: one cost per transition entry required");
  }
}

ExtCost EdgeCostTable::operator()(StateId state, InputId input, StateId successor) const {
  const std::size_t p = graph_.pair_index(state, input);
  const auto first = graph_.successors.begin() + static_cast<std::ptrdiff_t>(graph_.offsets[p]);
  const auto last = graph_.successors.begin() + static_cast<std::ptrdiff_t>(graph_.offsets[p + 1]);
  const auto it = std::lower_bound(first, last, successor);
  if (it == last || *it != successor) return ExtCost::infinity();
  return costs_[static_cast<std::size_t>(it - graph_.successors.begin())];
}

MemorylessController::MemorylessController(std::vector<std::int32_t> table)
    : table_(std::move(table)) {
  for (std::int32_t e : table_) {
    if (e < kStop) throw std::invalid_argument("MemorylessController: invalid table entry");
  }
}

InputId MemorylessController::input(StateId s) const {
  const std::int32_t e = table_.at(s);
  if (e < 0) throw std::logic_error("MemorylessController: no input at state " + std::to_string(s));
  return static_cast<InputId>(e);
}

std::size_t ValueFunction::finite_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(values.begin(), values.end(), [](ExtCost c) { return c.is_finite(); }));
}

double ValueFunction::max_finite() const noexcept {
  double m = 0.0;
  for (ExtCost c : values) {
    if (c.is_finite()) m = std::max(m, c.value());
  }
  return m;
}

void Trajectory::check_invariants() const {
  if (states.empty()) throw std::invalid_argument("Trajectory: no states");
  if (inputs.size() + 1 != states.size()) {
    throw std::invalid_argument("Trajectory: expected len(states) = len(inputs) + 1");
  }
  if (stop_time && *stop_time + 1 != states.size()) {
    throw std::invalid_argument("Trajectory: stop_time inconsistent with recorded states");
  }
}

ExtCost total_cost(const Trajectory& traj, const ConcreteRunningCost& g,
                   const TrajectoryCost& trajectory_cost) {
  traj.check_invariants();
  for (const auto& x : traj.states) {
    if (x.size() != g.state_dim) throw DimensionError("total_cost: state dimension mismatch");
  }
  for (const auto& u : traj.inputs) {
    if (u.size() != g.input_dim) throw DimensionError("total_cost: input dimension mismatch");
  }
  if (!traj.stop_time) return ExtCost::infinity();
  const std::size_t T = *traj.stop_time;
  ExtCost sum;
  for (std::size_t t = 0; t < T; ++t) {
    sum += g.eval(traj.states[t], traj.states[t + 1], traj.inputs[t]);
  }
  return sum + trajectory_cost(std::span<const Point>(traj.states).first(T + 1));
}

}  // namespace tpra
