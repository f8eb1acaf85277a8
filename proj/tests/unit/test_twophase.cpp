#include <gtest/gtest.h>

#include "tpra/oracle.hpp"
#include "tpra/twophase.hpp"

using namespace tpra;

namespace {

const ExtCost kInf = ExtCost::infinity();
using Lists = std::vector<std::vector<std::vector<StateId>>>;

std::vector<ExtCost> values(std::initializer_list<double> v) {
  std::vector<ExtCost> out;
  for (double x : v) out.push_back(x == -1 ? kInf : ExtCost(x));
  return out;
}

TwoPhaseProblem problem(const FiniteInstance& inst, const EdgeCostTable& g) {
  return {inst.system.graph(), &g, inst.first_target, inst.second_target, inst.terminal};
}

// s0 -> s1 -> s2 -> s3 -> s3, unit costs; A1 = {s1}, A2 = {s3}.
FiniteInstance line() {
  FiniteInstance inst;
  inst.system = FiniteSystem(Lists{{{1}}, {{2}}, {{3}}, {{3}}});
  inst.edge_costs = values({1, 1, 1, 1});
  inst.first_target = {0, 1, 0, 0};
  inst.second_target = {0, 0, 0, 1};
  inst.terminal.assign(4, ExtCost::zero());
  return inst;
}

}  // namespace

TEST(TwoPhase, CoincidentTargetsStopImmediately) {
  FiniteInstance inst;
  inst.system = FiniteSystem(Lists{{{0}, {1}}, {{1}, {1}}});
  inst.edge_costs = values({1, 1, 1, 1});
  inst.first_target = {1, 0};
  inst.second_target = {1, 0};
  inst.terminal = values({2.5, 0});
  const auto g = inst.costs();
  auto res = synthesize(problem(inst, g));
  ASSERT_TRUE(res.ok());
  EXPECT_EQ(res.controller->value(0)[0], ExtCost(2.5));
  auto& ctrl = *res.controller;
  const auto step = ctrl.step(CellId{0});
  EXPECT_EQ(step.kind, PhasedController::Kind::Stop);
  EXPECT_TRUE(ctrl.is_off());
  EXPECT_THROW(ctrl.step(CellId{0}), std::logic_error);
}

TEST(TwoPhase, LineValues) {
  const auto inst = line();
  const auto g = inst.costs();
  const auto res = synthesize(problem(inst, g));
  ASSERT_TRUE(res.ok());
  EXPECT_EQ(res.controller->value(1).values, values({3, 2, 1, 0}));
  EXPECT_EQ(res.controller->value(0).values, values({3, 2, -1, -1}));
  const auto naive = synthesize_naive(problem(inst, g));
  ASSERT_TRUE(naive.ok());
  EXPECT_EQ(naive.controller->value(0).values, res.controller->value(0).values);
  EXPECT_EQ(naive.controller->stages(), res.controller->stages());
}

TEST(TwoPhase, GadgetSeparatesNaiveFromComposed) {
  const auto inst = phase_coupled_gadget();
  const auto g = inst.costs();
  const auto res = synthesize(problem(inst, g));
  const auto naive = synthesize_naive(problem(inst, g));
  ASSERT_TRUE(res.ok());
  ASSERT_TRUE(naive.ok());
  EXPECT_EQ(res.controller->value(0)[0], ExtCost(4));
  EXPECT_EQ(res.controller->stage(0).input(0), 1u);
  EXPECT_EQ(naive.controller->stage(0).input(0), 0u);
  EXPECT_EQ(naive.controller->value(0)[0], ExtCost(21));
  // The naive stage problem itself only sees the cost to reach A1.
  EXPECT_EQ(naive.stage_values[0][0], ExtCost(1));
  EXPECT_EQ(res.stage_values[0], res.controller->value(0));
}

TEST(TwoPhase, NaiveWorstCaseMatchesOracle) {
  for (std::uint64_t seed = 1; seed <= 150; ++seed) {
    const auto inst = random_instance(seed);
    const auto g = inst.costs();
    const auto naive = synthesize_naive(problem(inst, g));
    if (!naive.ok()) continue;
    const auto eval = evaluate_phased_controller(inst.system.graph(), g, *naive.controller,
                                                 inst.first_target, inst.second_target, inst.terminal);
    ASSERT_TRUE(eval.converged);
    ASSERT_EQ(eval.values, naive.controller->value(0).values) << inst.describe();
  }
}

TEST(TwoPhase, StepSemantics) {
  const auto inst = line();
  const auto g = inst.costs();
  auto ctrl = *synthesize(problem(inst, g)).controller;
  auto st = ctrl.step(CellId{0});
  EXPECT_EQ(st.kind, PhasedController::Kind::Input);
  EXPECT_EQ(st.phase, 0u);
  st = ctrl.step(CellId{1});
  EXPECT_EQ(st.kind, PhasedController::Kind::Input);
  EXPECT_EQ(st.phase, 1u);
  // Back in a phase-1-only state: the controller does not return to phase 0.
  st = ctrl.step(CellId{0});
  EXPECT_EQ(st.phase, 1u);
  st = ctrl.step(CellId{2});
  EXPECT_EQ(st.phase, 1u);
  st = ctrl.step(CellId{3});
  EXPECT_EQ(st.kind, PhasedController::Kind::Stop);
  EXPECT_EQ(st.phase, 2u);
  ctrl.reset();
  EXPECT_EQ(ctrl.phase(), 0u);
  EXPECT_EQ(ctrl.step(CellId{2}).kind, PhasedController::Kind::Fault);
  EXPECT_EQ(ctrl.step(CellId{99}).kind, PhasedController::Kind::Fault);
}

TEST(TwoPhase, EmptyTargetIsNoSolution) {
  auto inst = line();
  inst.first_target.assign(4, 0);
  const auto g = inst.costs();
  const auto res = synthesize(problem(inst, g));
  EXPECT_FALSE(res.ok());
  EXPECT_NE(res.message.find("target is empty"), std::string::npos);
}

TEST(TwoPhase, UnreachableSecondTargetIsNoSolution) {
  auto inst = line();
  // From A1 = {s3} the A2 state s0 is never reached.
  inst.first_target = {0, 0, 0, 1};
  inst.second_target = {1, 0, 0, 0};
  const auto g = inst.costs();
  const auto res = synthesize(problem(inst, g));
  EXPECT_FALSE(res.ok());
  EXPECT_NE(res.message.find("infinite"), std::string::npos);
}

TEST(TwoPhase, ThreeStageChain) {
  // Ring of four states, unit costs; visit s1, then s3, then stop at s0.
  FiniteInstance inst;
  inst.system = FiniteSystem(Lists{{{1}}, {{2}}, {{3}}, {{0}}});
  inst.edge_costs = values({1, 1, 1, 1});
  const auto g = inst.costs();
  std::vector<Stage> stages{{{0, 1, 0, 0}, {}}, {{0, 0, 0, 1}, {}}, {{1, 0, 0, 0}, values({0, 0, 0, 0})}};
  const auto res = synthesize_chain(inst.system.graph(), g, stages);
  ASSERT_TRUE(res.ok());
  EXPECT_EQ(res.controller->stage_count(), 3u);
  EXPECT_EQ(res.controller->value(2).values, values({0, 3, 2, 1}));
  EXPECT_EQ(res.controller->value(1).values, values({4, 3, 2, 1}));
  EXPECT_EQ(res.controller->value(0).values, values({4, 3, 6, 5}));
  auto ctrl = *res.controller;
  std::size_t s = 0, steps = 0;
  for (;;) {
    const auto st = ctrl.step(CellId(s));
    if (st.kind == PhasedController::Kind::Stop) break;
    ASSERT_EQ(st.kind, PhasedController::Kind::Input);
    s = (s + 1) % 4;
    ASSERT_LT(++steps, 20u);
  }
  EXPECT_EQ(steps, 4u);
}

TEST(TwoPhase, RejectsMismatchedStages) {
  const auto inst = line();
  const auto g = inst.costs();
  EXPECT_THROW(synthesize_chain(inst.system.graph(), g, {}), std::invalid_argument);
  EXPECT_THROW(synthesize_chain(inst.system.graph(), g, {{{1, 0}, values({0, 0})}}), std::invalid_argument);
  TwoPhaseProblem p{inst.system.graph(), nullptr, inst.first_target, inst.second_target, inst.terminal};
  EXPECT_THROW(synthesize(p), std::invalid_argument);
}
