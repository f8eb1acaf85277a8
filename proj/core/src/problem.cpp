#include "tpra/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace tpra {

double distance_to_segment(std::array<double, 2> p, const Segment2& s) {
  const double dx = s.b[0] - s.a[0];
  const double dy = s.b[1] - s.a[1];
  const double len2 = dx * dx + dy * dy;
  double t = 0.0;
  if (len2 > 0.0) {
    t = ((p[0] - s.a[0]) * dx + (p[1] - s.a[1]) * dy) / len2;
    t = std::clamp(t, 0.0, 1.0);
  }
  return std::hypot(p[0] - (s.a[0] + t * dx), p[1] - (s.a[1] + t * dy));
}

double distance_to_segments(std::array<double, 2> p, std::span<const Segment2> segments) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& s : segments) best = std::min(best, distance_to_segment(p, s));
  return best;
}

double sup_distance_over_box(std::array<double, 2> lo, std::array<double, 2> hi,
                             std::span<const Segment2> segments) {
  const std::array<std::array<double, 2>, 4> corners{{{lo[0], lo[1]},
                                                      {hi[0], lo[1]},
                                                      {lo[0], hi[1]},
                                                      {hi[0], hi[1]}}};
  double best = std::numeric_limits<double>::infinity();
  for (const auto& s : segments) {
    double worst = 0.0;
    for (const auto& c : corners) worst = std::max(worst, distance_to_segment(c, s));
    best = std::min(best, worst);
  }
  return best;
}

bool in_union(std::span<const HyperRect> boxes, std::span<const double> x) {
  return std::any_of(boxes.begin(), boxes.end(), [&](const HyperRect& b) { return b.contains(x); });
}

bool RunningCostModel::admissible_state(std::span<const double> x) const {
  if (admissible && !admissible->contains(x)) return false;
  if (in_union(obstacles, x)) return false;
  if (!legality.empty() && !in_union(legality, x)) return false;
  return true;
}

double RunningCostModel::input_term(std::span<const double> u) const {
  double acc = 0.0;
  for (std::size_t k = 0; k < input_weights.size() && k < u.size(); ++k) {
    acc += input_weights[k] * u[k] * u[k];
  }
  return acc;
}

ExtCost RunningCostModel::operator()(std::span<const double> x, std::span<const double> y,
                                     std::span<const double> u) const {
  if (!admissible_state(x)) return ExtCost::infinity();
  double c = constant + input_term(u);
  if (!segments.empty()) {
    c += segment_weight *
         distance_to_segments({y[segment_axes[0]], y[segment_axes[1]]}, segments);
  }
  return ExtCost(c);
}

ExtCost TerminalCostModel::operator()(std::span<const double> x) const {
  double c = constant;
  if (!segments.empty() && segment_weight != 0.0) {
    c += segment_weight *
         distance_to_segments({x[segment_axes[0]], x[segment_axes[1]]}, segments);
  }
  return ExtCost(c);
}

void TwoPhaseSpec::validate(std::size_t dim) const {
  if (first_target.empty() || second_target.empty()) {
    throw std::invalid_argument("TwoPhaseSpec: both target sets must be non-empty");
  }
  auto check = [dim](const std::vector<HyperRect>& boxes, const char* what) {
    for (const auto& b : boxes) {
      if (b.dim() != dim) throw DimensionError(std::string("TwoPhaseSpec: ") + what + " dimension mismatch");
    }
  };
  check(first_target, "A1");
  check(second_target, "A2");
  check(running.obstacles, "obstacle");
  check(running.legality, "legality region");
  if (running.admissible && running.admissible->dim() != dim) {
    throw DimensionError("TwoPhaseSpec: admissible set dimension mismatch");
  }
  if (running.constant < 0.0 || terminal.constant < 0.0 || running.segment_weight < 0.0 ||
      terminal.segment_weight < 0.0) {
    throw std::invalid_argument("TwoPhaseSpec: cost coefficients must be non-negative");
  }
  for (double w : running.input_weights) {
    if (w < 0.0) throw std::invalid_argument("TwoPhaseSpec: input weights must be non-negative");
  }
  for (std::size_t a : running.segment_axes) {
    if (!running.segments.empty() && a >= dim) throw std::out_of_range("TwoPhaseSpec: segment axis out of range");
  }
  for (std::size_t a : terminal.segment_axes) {
    if (!terminal.segments.empty() && a >= dim) throw std::out_of_range("TwoPhaseSpec: segment axis out of range");
  }
}

bool TwoPhaseSpec::in_first(std::span<const double> x) const { return in_union(first_target, x); }
bool TwoPhaseSpec::in_second(std::span<const double> x) const { return in_union(second_target, x); }

ExtCost TwoPhaseSpec::trajectory_cost(std::span<const Point> states) const {
  if (states.empty()) return ExtCost::infinity();
  const bool visited = std::any_of(states.begin(), states.end(),
                                   [this](const Point& x) { return in_first(x); });
  if (!visited || !in_second(states.back())) return ExtCost::infinity();
  return terminal(states.back());
}

ConcreteRunningCost TwoPhaseSpec::running_cost(std::size_t state_dim, std::size_t input_dim) const {
  return ConcreteRunningCost{
      state_dim, input_dim,
      [model = running](std::span<const double> x, std::span<const double> y,
                        std::span<const double> u) { return model(x, y, u); }};
}

}  // namespace tpra
