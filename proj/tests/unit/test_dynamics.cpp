#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fixtures.hpp"
#include "tpra/dynamics.hpp"
#include "tpra/scenario.hpp"
#include "tpra/sim.hpp"

using namespace tpra;
using fixtures::make_system;

namespace {

std::vector<double> field_at(std::vector<double> x, std::vector<double> u) {
  std::vector<double> dx(4);
  vehicle_field(x, u, dx);
  return dx;
}

}  // namespace

TEST(Integrate, ZeroFieldKeepsState) {
  const auto sys = make_system(2, 1, fixtures::zero_field, {0, 0, 0, 0}, 0.1, {{0.0}});
  const std::vector<double> x0{1.5, -2.0};
  EXPECT_EQ(integrate_nominal(sys, x0, std::vector<double>{3.0}), x0);
}

TEST(Integrate, IntegratorIsExact) {
  const auto sys = make_system(1, 1, fixtures::input_field, {0}, 0.1, {{1.0}});
  const auto x = integrate_nominal(sys, std::vector<double>{0.0}, std::vector<double>{1.0});
  EXPECT_NEAR(x[0], 0.1, 1e-15);
}

TEST(Integrate, VehicleStraightLine) {
  const auto sys = make_system(4, 2, vehicle_field, std::vector<double>(16, 0.0), 0.1, {{0.0, 0.0}});
  const auto x = integrate_nominal(sys, std::vector<double>{0, 0, 0, 5}, std::vector<double>{0, 0});
  EXPECT_NEAR(x[0], 0.5, 1e-14);
  EXPECT_EQ(x[1], 0.0);
  EXPECT_EQ(x[2], 0.0);
  EXPECT_EQ(x[3], 5.0);
}

TEST(Integrate, NonFiniteStateIsReported) {
  auto blowup = [](std::span<const double> x, std::span<const double>, std::span<double> dx) {
    dx[0] = x[0] * x[0];
  };
  const auto sys = make_system(1, 1, blowup, {0}, 1.0, {{0.0}});
  EXPECT_THROW(integrate_nominal(sys, std::vector<double>{1e200}, std::vector<double>{0.0}),
               IntegrationFailure);
}

TEST(Integrate, DisturbanceIsHeldPerSubstep) {
  auto sys = make_system(1, 1, fixtures::zero_field, {0}, 1.0, {{0.0}}, {1.0});
  std::vector<int> seen;
  std::vector<double> d{0.5};
  const auto x = integrate_disturbed(sys, std::vector<double>{0.0}, std::vector<double>{0.0}, [&](int k) {
    seen.push_back(k);
    return std::span<const double>(d);
  });
  EXPECT_EQ(seen, (std::vector<int>{0, 1, 2, 3, 4}));
  EXPECT_NEAR(x[0], 0.5, 1e-15);
}

TEST(VehicleField, StraightAhead) {
  EXPECT_EQ(field_at({0, 0, 0, 5}, {0, 0}), (std::vector<double>{5, 0, 0, 0}));
}

TEST(VehicleField, HeadingNorth) {
  const auto dx = field_at({0, 0, std::numbers::pi / 2, 5}, {2, 0});
  EXPECT_NEAR(dx[0], 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(dx[1], 5.0);
  EXPECT_EQ(dx[2], 0.0);
  EXPECT_EQ(dx[3], 2.0);
}

TEST(VehicleField, SteeringGolden) {
  // 40-digit evaluation of the closed form: 4 cos(a) b = 4, 4 tan(a) = 2 tan(0.5), 4 tan(0.5).
  const auto dx = field_at({0, 0, 0, 4}, {0, 0.5});
  EXPECT_NEAR(dx[0], 4.0, 4e-15);
  EXPECT_NEAR(dx[1], 1.092604979687581026510358931560570766595, 4e-15);
  EXPECT_NEAR(dx[2], 2.18520995937516205302071786312114153319, 4e-15);
  EXPECT_EQ(dx[3], 0.0);
}

TEST(ReachBox, StaticSystemPreservesBox) {
  const auto sys = make_system(2, 1, fixtures::zero_field, {0, 0, 0, 0}, 0.1, {{0.0}});
  const HyperRect cell({0.0, 1.0}, {0.2, 1.6});
  const auto rb = reach_box(sys, cell, std::vector<double>{0.0});
  EXPECT_EQ(rb.center, cell.center());
  EXPECT_NEAR(rb.radius[0], 0.1, 1e-15);
  EXPECT_NEAR(rb.radius[1], 0.3, 1e-15);
}

TEST(ReachBox, DisturbanceInflatesLinearly) {
  const auto sys = make_system(2, 1, fixtures::zero_field, {0, 0, 0, 0}, 0.1, {{0.0}}, {1.0, 0.0});
  const HyperRect cell({0.0, 0.0}, {0.2, 0.2});
  const auto rb = reach_box(sys, cell, std::vector<double>{0.0});
  EXPECT_NEAR(rb.radius[0], 0.1 + 0.1, 1e-15);
  EXPECT_NEAR(rb.radius[1], 0.1, 1e-15);
}

TEST(ReachBox, ExponentialGrowth) {
  auto decay = [](std::span<const double> x, std::span<const double>, std::span<double> dx) { dx[0] = -x[0]; };
  const auto sys = make_system(1, 1, decay, {1.0}, 0.1, {{0.0}});
  const auto rb = reach_box(sys, HyperRect({0.9}, {1.1}), std::vector<double>{0.0});
  EXPECT_NEAR(rb.radius[0], 0.1 * std::exp(0.1), 1e-9);
  EXPECT_NEAR(rb.center[0], std::exp(-0.1), 1e-9);
}

TEST(ReachBox, MonotoneInCellSize) {
  const auto sc = load_scenario(fixtures::scenario("vehicle_desk.json"));
  const auto sys = build_system(sc);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    std::vector<double> lo{10 + 40 * unit(rng), 2 + 20 * unit(rng), -3 + 6 * unit(rng), 8 * unit(rng)};
    std::vector<double> hi(4), big_lo(4), big_hi(4);
    for (int k = 0; k < 4; ++k) {
      hi[k] = lo[k] + 0.5 * unit(rng) + 0.01;
      big_lo[k] = lo[k] - 0.3 * unit(rng);
      big_hi[k] = hi[k] + 0.3 * unit(rng);
    }
    big_lo[3] = std::max(0.0, big_lo[3]);
    const auto& u = sys.inputs[rng() % sys.inputs.size()];
    const auto small = reach_box(sys, HyperRect(lo, hi), u);
    const auto large = reach_box(sys, HyperRect(big_lo, big_hi), u);
    for (int k = 0; k < 4; ++k) EXPECT_GE(large.radius[k], small.radius[k]) << "sample " << i;
  }
}

TEST(ReachBox, VehicleEnclosesSampledEndpoints) {
  const auto sc = load_scenario(fixtures::scenario("vehicle_desk.json"));
  const auto sys = build_system(sc);
  const auto grid = build_grid(sc);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (auto kind : {DisturbanceKind::Uniform, DisturbanceKind::Corners}) {
    DisturbanceStrategy dist(kind, sys.disturbance_halfwidth, 17);
    for (int i = 0; i < 10000; ++i) {
      const CellId c = static_cast<CellId>(rng() % grid.cell_count());
      const HyperRect cell = grid.cell_box(c);
      std::vector<double> x(4);
      for (int k = 0; k < 4; ++k) x[k] = cell.lo(k) + unit(rng) * (cell.hi(k) - cell.lo(k));
      const auto& u = sys.inputs[rng() % sys.inputs.size()];
      const auto box = reach_box(sys, cell, u).box();
      const auto y = integrate_disturbed(sys, x, u, [&](int) { return std::span<const double>(dist.next()); });
      ASSERT_TRUE(box.contains(y)) << "cell " << c << " sample " << i;
    }
  }
}

TEST(ReachBox, Deterministic) {
  const auto sc = load_scenario(fixtures::scenario("vehicle_desk.json"));
  const auto sys = build_system(sc);
  const auto grid = build_grid(sc);
  for (CellId c : {0u, 12345u, 400000u}) {
    const auto a = reach_box(sys, grid.cell_box(c), sys.inputs[7]);
    const auto b = reach_box(sys, grid.cell_box(c), sys.inputs[7]);
    EXPECT_EQ(a.center, b.center);
    EXPECT_EQ(a.radius, b.radius);
  }
}

TEST(SampledSystem, Validation) {
  auto sys = make_system(1, 1, fixtures::zero_field, {0}, 0.1, {{0.0}});
  sys.sampling_time = 0.0;
  EXPECT_THROW(sys.validate(), std::invalid_argument);
  EXPECT_THROW(constant_growth_bound(2, {0, -1, 0, 0}), std::invalid_argument);
  EXPECT_THROW(constant_growth_bound(2, {0, 0, 0}), DimensionError);
}

TEST(Models, Registry) {
  EXPECT_EQ(make_model("vehicle", {}).dim, 4u);
  EXPECT_EQ(make_model("integrator2d", {}).input_dim, 2u);
  ModelParameters p;
  p.values = {{"n", {1}}, {"m", {1}}, {"A", {-2}}, {"B", {1}}};
  const auto lin = make_model("linear", p);
  std::vector<double> dx(1);
  lin.field(std::vector<double>{1.0}, std::vector<double>{3.0}, dx);
  EXPECT_EQ(dx[0], 1.0);
  EXPECT_THROW(make_model("aircraft", {}), std::invalid_argument);
}
