#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "tpra/problem.hpp"
#include "tpra/scenario.hpp"

using namespace tpra;

namespace {

constexpr double kPi = std::numbers::pi;

// Road-map running cost: 0.1 per step, steering penalty, distance to the lane axis.
RunningCostModel road_cost() {
  RunningCostModel g;
  g.constant = 0.1;
  g.input_weights = {0.0, 1.0};
  g.segments = {Segment2{{12, 2}, {62, 2}}};
  g.admissible = HyperRect({0, 0, -kPi, 0}, {64, 30, kPi, 18});
  g.obstacles = {HyperRect({0, 0, -kPi, 0}, {10, 11, kPi, 18})};
  return g;
}

}  // namespace

TEST(SegmentDistance, PointsAndEnds) {
  const Segment2 s{{0, 0}, {4, 0}};
  EXPECT_DOUBLE_EQ(distance_to_segment({2, 3}, s), 3.0);
  EXPECT_DOUBLE_EQ(distance_to_segment({7, 4}, s), 5.0);
  EXPECT_DOUBLE_EQ(distance_to_segment({-3, -4}, s), 5.0);
  EXPECT_DOUBLE_EQ(distance_to_segment({1, 0}, Segment2{{1, 0}, {1, 0}}), 0.0);
  EXPECT_TRUE(std::isinf(distance_to_segments({0, 0}, {})));
}

TEST(SegmentDistance, BoxBoundIsAnUpperBound) {
  const std::vector<Segment2> m{{{0, 0}, {4, 0}}, {{0, 5}, {4, 5}}};
  const double bound = sup_distance_over_box({1, 1}, {3, 4}, m);
  for (double x = 1; x <= 3; x += 0.25) {
    for (double y = 1; y <= 4; y += 0.25) EXPECT_LE(distance_to_segments({x, y}, m), bound + 1e-12);
  }
  EXPECT_DOUBLE_EQ(sup_distance_over_box({1, 1}, {3, 2}, std::span(m).first(1)), 2.0);
}

TEST(RunningCostModel, ObstacleIsInfinite) {
  const auto g = road_cost();
  const std::vector<double> x{5, 5, 0, 3}, y{5.5, 5, 0, 3}, u{0, 0};
  EXPECT_TRUE(g(x, y, u).is_infinite());
}

TEST(RunningCostModel, OnTheAxis) {
  const auto g = road_cost();
  const std::vector<double> x{20, 2, 0, 3}, y{21, 2, 0, 3}, u{1, 0};
  EXPECT_DOUBLE_EQ(g(x, y, u).value(), 0.1);
}

TEST(RunningCostModel, SteeringAndDistance) {
  const auto g = road_cost();
  const std::vector<double> x{11, 3, 0, 3}, y{12, 3, 0, 3}, u{0, 0.5};
  EXPECT_DOUBLE_EQ(g(x, y, u).value(), 0.1 + 0.25 + 1.0);
}

TEST(RunningCostModel, LegalityRegions) {
  auto g = road_cost();
  g.legality = {HyperRect({10, 0, -3 * kPi / 8, 0}, {64, 4, 3 * kPi / 8, 18})};
  const std::vector<double> y{21, 2, 0, 3}, u{0, 0};
  EXPECT_TRUE(g(std::vector<double>{20, 2, 0, 3}, y, u).is_finite());
  EXPECT_TRUE(g(std::vector<double>{20, 2, kPi, 3}, y, u).is_infinite());
  EXPECT_TRUE(g(std::vector<double>{20, 6, 0, 3}, y, u).is_infinite());
}

TEST(TwoPhaseSpec, TrajectoryCost) {
  TwoPhaseSpec spec;
  spec.first_target = {HyperRect({1.0}, {2.0})};
  spec.second_target = {HyperRect({3.0}, {4.0})};
  spec.terminal.constant = 0.5;
  const std::vector<Point> visits{{0.0}, {1.5}, {3.5}};
  const std::vector<Point> skips{{0.0}, {2.5}, {3.5}};
  const std::vector<Point> misses{{0.0}, {1.5}, {2.5}};
  EXPECT_EQ(spec.trajectory_cost(visits), ExtCost(0.5));
  EXPECT_TRUE(spec.trajectory_cost(skips).is_infinite());
  EXPECT_TRUE(spec.trajectory_cost(misses).is_infinite());
  // Visiting A1 at the stopping time itself counts.
  spec.first_target.push_back(HyperRect({3.0}, {3.6}));
  EXPECT_EQ(spec.trajectory_cost(std::vector<Point>{{3.5}}), ExtCost(0.5));
}

TEST(TwoPhaseSpec, Validation) {
  TwoPhaseSpec spec;
  spec.first_target = {HyperRect({0.0, 0.0}, {1.0, 1.0})};
  spec.second_target = spec.first_target;
  EXPECT_NO_THROW(spec.validate(2));
  EXPECT_THROW(spec.validate(3), std::exception);
  spec.running.input_weights = {-1.0};
  EXPECT_THROW(spec.validate(2), std::invalid_argument);
}
