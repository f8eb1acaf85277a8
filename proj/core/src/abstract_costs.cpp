#include "tpra/abstract_costs.hpp"

#include <algorithm>
#include <limits>

namespace tpra {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool meets_any(const HyperRect& cell, const std::vector<HyperRect>& boxes) {
  return std::any_of(boxes.begin(), boxes.end(),
                     [&](const HyperRect& b) { return b.intersects(cell); });
}

bool overlaps_domain(const Grid& grid, const std::vector<HyperRect>& boxes) {
  return std::any_of(boxes.begin(), boxes.end(),
                     [&](const HyperRect& b) { return b.intersects(grid.domain()); });
}

double sup_segment_distance(const HyperRect& cell, const std::vector<Segment2>& segments,
                            std::array<std::size_t, 2> axes) {
  return sup_distance_over_box({cell.lo(axes[0]), cell.lo(axes[1])},
                               {cell.hi(axes[0]), cell.hi(axes[1])}, segments);
}

}  // namespace

CellRunningCost::CellRunningCost(std::vector<std::uint8_t> blocked, std::vector<double> input_base,
                                 std::vector<double> successor_term)
    : blocked_(std::move(blocked)),
      input_base_(std::move(input_base)),
      successor_term_(std::move(successor_term)) {
  if (blocked_.size() != successor_term_.size()) {
    throw std::invalid_argument("CellRunningCost: per-state tables differ in size");
  }
  for (double v : input_base_) {
    if (!(v >= 0.0)) throw std::invalid_argument("CellRunningCost: negative input cost");
  }
  for (double v : successor_term_) {
    if (!(v >= 0.0)) throw std::invalid_argument("CellRunningCost: negative successor cost");
  }
}

ExtCost CellRunningCost::operator()(StateId state, InputId input, StateId successor) const {
  if (blocked_[state]) return ExtCost::infinity();
  const double t = successor_term_[successor];
  if (t == kInf) return ExtCost::infinity();
  return ExtCost(input_base_[input] + t);
}

std::size_t CellRunningCost::blocked_count() const noexcept {
  return static_cast<std::size_t>(std::count(blocked_.begin(), blocked_.end(), std::uint8_t{1}));
}

std::size_t AbstractCosts::first_count() const noexcept {
  return static_cast<std::size_t>(std::count(first_target.begin(), first_target.end(), std::uint8_t{1}));
}

std::size_t AbstractCosts::second_count() const noexcept {
  return static_cast<std::size_t>(std::count(second_target.begin(), second_target.end(), std::uint8_t{1}));
}

std::vector<std::uint8_t> inner_cells(const Grid& grid, const std::vector<HyperRect>& boxes) {
  std::vector<std::uint8_t> out(grid.state_count(), 0);
  for (CellId c = 0; c < grid.cell_count(); ++c) {
    const HyperRect box = grid.cell_box(c);
    if (!meets_any(box, boxes)) continue;
    out[c] = covered_by_union(box, boxes) ? 1 : 0;
  }
  return out;
}

AbstractCosts abstract_costs(const TwoPhaseSpec& spec, const Grid& grid,
                             const std::vector<Point>& inputs) {
  spec.validate(grid.dim());
  AbstractCosts out;
  out.first_target = inner_cells(grid, spec.first_target);
  out.second_target = inner_cells(grid, spec.second_target);

  auto report = [&](const std::vector<HyperRect>& boxes, std::size_t count, const char* name) {
    if (count > 0) return;
    out.warnings.push_back(std::string(name) +
                           (overlaps_domain(grid, boxes)
                                ? "' is empty: no cell lies entirely inside the target"
                                : "' is empty: the target lies outside the grid domain"));
  };
  report(spec.first_target, out.first_count(), "A1");
  report(spec.second_target, out.second_count(), "A2");

  const auto& rc = spec.running;
  const auto& tc = spec.terminal;
  const std::size_t states = grid.state_count();
  std::vector<std::uint8_t> blocked(states, 1);
  std::vector<double> succ_term(states, kInf);
  out.terminal.assign(states, ExtCost::infinity());

  for (CellId c = 0; c < grid.cell_count(); ++c) {
    const HyperRect box = grid.cell_box(c);
    const bool bad = (rc.admissible && !rc.admissible->contains(box)) ||
                     meets_any(box, rc.obstacles) ||
                     (!rc.legality.empty() && !covered_by_union(box, rc.legality));
    blocked[c] = bad ? 1 : 0;
    succ_term[c] = rc.segments.empty()
                       ? 0.0
                       : rc.segment_weight * sup_segment_distance(box, rc.segments, rc.segment_axes);
    double g0 = tc.constant;
    if (!tc.segments.empty() && tc.segment_weight != 0.0) {
      g0 += tc.segment_weight * sup_segment_distance(box, tc.segments, tc.segment_axes);
    }
    out.terminal[c] = ExtCost(g0);
  }

  std::vector<double> base(inputs.size());
  for (std::size_t u = 0; u < inputs.size(); ++u) {
    base[u] = rc.constant + rc.input_term(inputs[u]);
  }
  out.running = CellRunningCost(std::move(blocked), std::move(base), std::move(succ_term));
  return out;
}

}  // namespace tpra
