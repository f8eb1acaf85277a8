#include <gtest/gtest.h>

#include <memory>
#include <random>

#include "tpra/oracle.hpp"
#include "tpra/solver.hpp"

using namespace tpra;

namespace {

const ExtCost kInf = ExtCost::infinity();

struct Instance {
  Instance(const std::vector<std::vector<std::vector<StateId>>>& succ, std::vector<ExtCost> c,
           std::vector<ExtCost> stop)
      : sys(succ), costs(sys.graph(), std::move(c)), prob{sys.graph(), &costs, std::move(stop)} {}
  FiniteSystem sys;
  EdgeCostTable costs;
  ReachAvoidProblem prob;
};

std::unique_ptr<Instance> make(const std::vector<std::vector<std::vector<StateId>>>& succ,
                               const std::vector<double>& edge_costs, std::vector<ExtCost> stop) {
  std::vector<ExtCost> c;
  for (double v : edge_costs) c.push_back(v == -1 ? kInf : ExtCost(v));
  return std::make_unique<Instance>(succ, std::move(c), std::move(stop));
}

std::vector<ExtCost> values(std::initializer_list<double> v) {
  std::vector<ExtCost> out;
  for (double x : v) out.push_back(x == -1 ? kInf : ExtCost(x));
  return out;
}

ReachAvoidProblem stage_two(const FiniteInstance& inst, const EdgeCostTable& g) {
  return {inst.system.graph(), &g, stop_cost_on(inst.second_target, inst.terminal)};
}

}  // namespace

TEST(Solver, StopOnZeroCostTarget) {
  auto in = make({{{0}}}, {1}, values({0}));
  const auto sol = solve_reach_avoid(in->prob);
  EXPECT_EQ(sol.value[0], ExtCost::zero());
  EXPECT_TRUE(sol.controller.is_stop(0));
}

TEST(Solver, ThreeStateChain) {
  auto in = make({{{1}}, {{2}}, {{2}}}, {1, 1, 1}, values({-1, -1, 0}));
  const auto sol = solve_reach_avoid(in->prob);
  EXPECT_EQ(sol.value.values, values({2, 1, 0}));
  EXPECT_EQ(sol.controller.input(0), 0u);
  EXPECT_TRUE(sol.controller.is_stop(2));
  EXPECT_EQ(sol.order, (std::vector<StateId>{2, 1, 0}));
}

TEST(Solver, NondeterministicLoopNeverCompletes) {
  // s0: u0 -> {s1} cost 5; u1 -> {s0, s1} cost 1. s1 is the target.
  auto in = make({{{1}, {0, 1}}, {{1}, {1}}}, {5, 1, 1, 1, 1}, values({-1, 0}));
  const auto sol = solve_reach_avoid(in->prob);
  EXPECT_EQ(sol.value[0], ExtCost(5));
  EXPECT_EQ(sol.controller.input(0), 0u);
  const auto vi = value_iteration(in->prob);
  EXPECT_EQ(vi.values, sol.value.values);
}

TEST(Solver, UnreachableStatesAreInfinite) {
  auto in = make({{{0}}, {{1}}, {{1}}}, {1, 1, 1}, values({0, -1, -1}));
  const auto sol = solve_reach_avoid(in->prob);
  EXPECT_TRUE(sol.value[1].is_infinite());
  EXPECT_TRUE(sol.value[2].is_infinite());
  EXPECT_FALSE(sol.controller.is_defined(1));
  EXPECT_FALSE(sol.controller.is_defined(2));
}

TEST(Solver, InfiniteEdgeIsNeverTaken) {
  auto in = make({{{1}, {1}}, {{1}, {1}}}, {-1, 3, 0, 0}, values({-1, 0}));
  const auto sol = solve_reach_avoid(in->prob);
  EXPECT_EQ(sol.value[0], ExtCost(3));
  EXPECT_EQ(sol.controller.input(0), 1u);
}

TEST(Solver, TieBreaksOnSmallestInput) {
  auto in = make({{{1}, {1}, {1}}, {{1}, {1}, {1}}}, {2, 2, 2, 0, 0, 0}, values({-1, 0}));
  EXPECT_EQ(solve_reach_avoid(in->prob).controller.input(0), 0u);
}

TEST(Solver, StopsWhenStoppingIsOptimal) {
  // Stopping at s0 costs 3, moving on to s1 costs 1 + 2.
  auto in = make({{{1}}, {{1}}}, {1, 0}, values({3, 2}));
  const auto sol = solve_reach_avoid(in->prob);
  EXPECT_EQ(sol.value[0], ExtCost(3));
  EXPECT_TRUE(sol.controller.is_stop(0));
}

TEST(Solver, ZeroCostCyclesAreFine) {
  auto in = make({{{1}, {1}}, {{0}, {2}}, {{2}, {2}}}, {0, 0, 0, 0, 0, 0}, values({-1, -1, 0}));
  const auto sol = solve_reach_avoid(in->prob);
  EXPECT_EQ(sol.value.values, values({0, 0, 0}));
  EXPECT_TRUE(verify_fixed_point(in->prob, sol.value));
}

TEST(Solver, RejectsNegativeCost) {
  struct Negative : RunningCost {
    ExtCost operator()(StateId, InputId, StateId) const override { return ExtCost(-1.0); }
  };
  EXPECT_THROW(Negative{}(0, 0, 0), std::invalid_argument);
}

TEST(Solver, RejectsMalformedProblem) {
  const FiniteSystem sys(std::vector<std::vector<std::vector<StateId>>>{{{0}}});
  ReachAvoidProblem p{sys.graph(), nullptr, values({0})};
  EXPECT_THROW(solve_reach_avoid(p), std::invalid_argument);
  EdgeCostTable g(sys.graph(), values({1}));
  ReachAvoidProblem q{sys.graph(), &g, values({0, 0})};
  EXPECT_THROW(solve_reach_avoid(q), std::invalid_argument);
}

TEST(FixedPoint, AcceptsSolverOutputAndRejectsPerturbation) {
  auto in = make({{{1}}, {{2}}, {{2}}}, {1, 1, 1}, values({-1, -1, 0}));
  auto sol = solve_reach_avoid(in->prob);
  EXPECT_TRUE(verify_fixed_point(in->prob, sol.value));
  sol.value.values[1] = ExtCost(2);
  EXPECT_FALSE(verify_fixed_point(in->prob, sol.value));
}

TEST(FixedPoint, HandBuiltFiveStates) {
  // s0 -u0-> {s1, s2} (1, 2); s0 -u1-> {s3} (4); s1 -> s4 (3); s2 -> s4 (1); s3 -> s4 (0); s4 target G0 = 1.
  auto in = make({{{1, 2}, {3}}, {{4}, {4}}, {{4}, {4}}, {{4}, {4}}, {{4}, {4}}},
                 {1, 2, 4, 3, 3, 1, 1, 0, 0, 0, 0}, values({-1, -1, -1, -1, 1}));
  // u0: max(1 + 4, 2 + 2) = 5; u1: 4 + 1 = 5 -> tie, input 0.
  const auto expected = values({5, 4, 2, 1, 1});
  EXPECT_TRUE(verify_fixed_point(in->prob, ValueFunction{expected}));
  const auto sol = solve_reach_avoid(in->prob);
  EXPECT_EQ(sol.value.values, expected);
  EXPECT_EQ(value_iteration(in->prob).values, expected);
  auto wrong = expected;
  wrong[0] = ExtCost(4);
  EXPECT_FALSE(verify_fixed_point(in->prob, ValueFunction{wrong}));
}

TEST(FixedPoint, ToleranceIsRelative) {
  auto in = make({{{1}}, {{1}}}, {1e9, 0}, values({-1, 0}));
  EXPECT_TRUE(verify_fixed_point(in->prob, ValueFunction{values({1e9 + 0.5, 0})}, 1e-9));
  EXPECT_FALSE(verify_fixed_point(in->prob, ValueFunction{values({1e9 + 5, 0})}, 1e-9));
  EXPECT_FALSE(verify_fixed_point(in->prob, ValueFunction{values({-1, 0})}, 1e-9));
}

TEST(SolverOracle, MatchesGaussSeidelOnRandomInstances) {
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    const auto inst = random_instance(seed);
    const auto g = inst.costs();
    const auto prob = stage_two(inst, g);
    const auto sol = solve_reach_avoid(prob);
    const auto vi = value_iteration(prob);
    ASSERT_TRUE(vi.converged);
    ASSERT_EQ(sol.value.values, vi.values) << inst.describe();
    ASSERT_TRUE(verify_fixed_point(prob, sol.value));
  }
}

TEST(SolverOracle, ControllerRealizesValue) {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const auto inst = random_instance(seed);
    const auto g = inst.costs();
    const auto prob = stage_two(inst, g);
    const auto sol = solve_reach_avoid(prob);
    ASSERT_EQ(evaluate_controller(prob, sol.controller, sol.order).values, sol.value.values);
    for (StateId s = 0; s < sol.value.size(); ++s) {
      ASSERT_EQ(sol.controller.is_defined(s), sol.value[s].is_finite());
      if (sol.controller.is_stop(s)) ASSERT_EQ(sol.value[s], prob.stop_cost[s]);
    }
  }
}

TEST(SolverOracle, MonotoneInCosts) {
  std::mt19937_64 rng(4);
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto inst = random_instance(seed);
    const auto g = inst.costs();
    const auto base = solve_reach_avoid(stage_two(inst, g)).value;
    auto raised = inst.edge_costs;
    for (auto& c : raised) {
      if (rng() % 3 == 0) c = c + ExtCost(0.5 * static_cast<double>(rng() % 4));
      if (rng() % 50 == 0) c = kInf;
    }
    EdgeCostTable g2(inst.system.graph(), raised);
    auto stop = stop_cost_on(inst.second_target, inst.terminal);
    for (auto& c : stop) c = c + ExtCost(0.5 * static_cast<double>(rng() % 2));
    const auto higher = solve_reach_avoid({inst.system.graph(), &g2, stop}).value;
    for (std::size_t s = 0; s < base.size(); ++s) ASSERT_LE(base[s], higher[s]);
  }
}
