#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "tpra/types.hpp"

namespace tpra {

/// Planar segment between two points, used for roadway axes.
struct Segment2 {
  std::array<double, 2> a{};
  std::array<double, 2> b{};
};

double distance_to_segment(std::array<double, 2> p, const Segment2& s);
/// min over segments; +inf for an empty set.
double distance_to_segments(std::array<double, 2> p, std::span<const Segment2> segments);
/// Upper bound of sup_{p in box} min_m dist(p, m) over a planar box; exact for
/// a single segment (distance to a segment is convex, so the sup sits at a vertex).
double sup_distance_over_box(std::array<double, 2> lo, std::array<double, 2> hi,
                             std::span<const Segment2> segments);

/// Running cost family
///   g(x, y, u) = inf                                    if x is not admissible
///              = constant + sum_k w_k u_k^2 + weight * dist((y_a, y_b), M)   otherwise.
/// x is admissible iff it lies in `admissible`, in no obstacle and, when
/// legality regions are given, in their union.
struct RunningCostModel {
  double constant = 0.0;
  std::vector<double> input_weights;
  std::vector<Segment2> segments;
  double segment_weight = 1.0;
  std::array<std::size_t, 2> segment_axes{0, 1};
  std::optional<HyperRect> admissible;
  std::vector<HyperRect> obstacles;
  std::vector<HyperRect> legality;

  bool admissible_state(std::span<const double> x) const;
  double input_term(std::span<const double> u) const;
  ExtCost operator()(std::span<const double> x, std::span<const double> y,
                     std::span<const double> u) const;
};

/// Final cost G0(x) = constant + weight * dist((x_a, x_b), segments).
struct TerminalCostModel {
  double constant = 0.0;
  std::vector<Segment2> segments;
  double segment_weight = 0.0;
  std::array<std::size_t, 2> segment_axes{0, 1};

  ExtCost operator()(std::span<const double> x) const;
};

/// Quantitative two-phase reach-avoid problem: visit A1, then stop in A2.
/// Membership tests expect periodic coordinates already wrapped.
struct TwoPhaseSpec {
  std::vector<HyperRect> first_target;   // A1
  std::vector<HyperRect> second_target;  // A2
  RunningCostModel running;
  TerminalCostModel terminal;

  void validate(std::size_t dim) const;
  bool in_first(std::span<const double> x) const;
  bool in_second(std::span<const double> x) const;

  /// Trajectory cost: G0(x(T)) if A1 was visited at some s <= T and x(T) is in A2.
  ExtCost trajectory_cost(std::span<const Point> states) const;
  ConcreteRunningCost running_cost(std::size_t state_dim, std::size_t input_dim) const;
};

bool in_union(std::span<const HyperRect> boxes, std::span<const double> x);

}  // namespace tpra
