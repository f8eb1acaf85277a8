#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "fixtures.hpp"
#include "pipeline.hpp"
#include "tpra/artifacts.hpp"
#include "tpra/binary_io.hpp"
#include "tpra/export.hpp"
#include "tpra/scenario.hpp"

using namespace tpra;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

std::string read_text(const fs::path& p) {
  std::ifstream is(p);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

const fixtures::Pipeline& detour() {
  static const fixtures::Pipeline p(load_scenario(fixtures::scenario("integrator_detour.json")), 1, false);
  return p;
}

const char* kTiny = R"({
  "dynamics": {"model": "integrator2d", "sampling_time": 1, "disturbance": [0, 0],
               "growth_matrix": [0, 0, 0, 0]},
  "grid": {"lo": [0, 0], "hi": [4, 4], "cells": [4, 4]},
  "inputs": {"lo": [-1, -1], "hi": [1, 1], "samples": [3, 3]},
  "spec": {
    "A1": [{"lo": [0, 0], "hi": [1, 1]}],
    "A2": [{"lo": [3, 3], "hi": [4, 4]}],
    "running": {"constant": 1},
    "terminal": {"constant": 0}
  }
})";

}  // namespace

TEST(Scenario, ShippedScenariosParse) {
  for (const char* name : {"vehicle_desk.json", "integrator_detour.json", "vehicle_paper.json"}) {
    const auto sc = load_scenario(fixtures::scenario(name));
    EXPECT_FALSE(sc.name.empty()) << name;
    EXPECT_TRUE(sc.warnings.empty()) << name;
  }
}

TEST(Scenario, AnglesAndDefaults) {
  const auto sc = load_scenario(fixtures::scenario("vehicle_desk.json"));
  EXPECT_DOUBLE_EQ(sc.grid.domain.lo(2), -kPi);
  EXPECT_DOUBLE_EQ(sc.spec.running.legality[0].lo(2), -3 * kPi / 8);
  EXPECT_EQ(sc.grid.periodic, (std::vector<std::size_t>{2}));
  const auto tiny = parse_scenario(kTiny);
  EXPECT_EQ(tiny.dynamics.substeps, 5);
  EXPECT_EQ(tiny.sim.episodes, 100u);
  EXPECT_FALSE(tiny.sim.x0.has_value());
}

TEST(Scenario, RoundTripThroughCanonicalJson) {
  for (const char* name : {"vehicle_desk.json", "integrator_detour.json"}) {
    const auto sc = load_scenario(fixtures::scenario(name));
    const auto again = parse_scenario(scenario_to_json(sc));
    EXPECT_TRUE(again == sc) << name;
    EXPECT_EQ(scenario_key(again), scenario_key(sc));
  }
}

TEST(Scenario, KeyIgnoresCommentsAndSpec) {
  const auto a = parse_scenario(kTiny);
  std::string text = std::string("// leading comment\n") + kTiny;
  text.replace(text.find("\"grid\""), 6, "/* grid */   \"grid\"");
  const auto b = parse_scenario(text);
  EXPECT_EQ(scenario_key(a), scenario_key(b));
  auto c = a;
  c.spec.running.constant = 3;
  EXPECT_EQ(scenario_key(a), scenario_key(c));
  c.dynamics.sampling_time = 0.5;
  EXPECT_NE(scenario_key(a), scenario_key(c));
  EXPECT_EQ(key_hex(0x1f).size(), 16u);
}

TEST(Scenario, InputTableIncludesEndpoints) {
  const auto sc = parse_scenario(kTiny);
  const auto u = input_table(sc.inputs);
  ASSERT_EQ(u.size(), 9u);
  EXPECT_EQ(u.front(), (Point{-1, -1}));
  EXPECT_EQ(u[1], (Point{0, -1}));
  EXPECT_EQ(u.back(), (Point{1, 1}));
  InputSection one{{-2}, {4}, {1}};
  EXPECT_EQ(input_table(one), (std::vector<Point>{{1.0}}));
}

TEST(Scenario, Errors) {
  EXPECT_THROW(parse_scenario("{"), ScenarioError);
  EXPECT_THROW(parse_scenario("{}"), ScenarioError);
  std::string bad = kTiny;
  bad.replace(bad.find("integrator2d"), 12, "unicycle");
  EXPECT_THROW(build_system(parse_scenario(bad)), std::invalid_argument);
  bad = kTiny;
  bad.replace(bad.find("\"sampling_time\": 1"), 18, "\"sampling_time\": 0");
  EXPECT_THROW(parse_scenario(bad), ScenarioError);
  bad = kTiny;
  bad.replace(bad.find("[4, 4]}"), 6, "[4]}");
  EXPECT_THROW(parse_scenario(bad), ScenarioError);
  bad = kTiny;
  bad.replace(bad.find("[0, 0],"), 6, "[\"tau\", 0]");
  EXPECT_THROW(parse_scenario(bad), ScenarioError);
  EXPECT_THROW(load_scenario("/nonexistent/scenario.json"), std::exception);
}

TEST(Scenario, TargetOutsideTheDomainWarns) {
  const auto sc = load_scenario(fixtures::data("a2_outside.json"));
  ASSERT_FALSE(sc.warnings.empty());
  EXPECT_NE(sc.warnings.front().find("A2"), std::string::npos);
}

TEST(Artifacts, AbstractionRoundTrip) {
  const auto& p = detour();
  std::stringstream ss;
  save_abstraction(ss, p.abstraction, 42);
  std::uint64_t key = 0;
  const auto back = load_abstraction(ss, &key);
  EXPECT_EQ(key, 42u);
  EXPECT_TRUE(back.grid() == p.abstraction.grid());
  EXPECT_EQ(back.offsets(), p.abstraction.offsets());
  EXPECT_EQ(back.successors(), p.abstraction.successors());
  EXPECT_EQ(back.unsafe_flags(), p.abstraction.unsafe_flags());
  EXPECT_EQ(abstraction_digest(back, 42), abstraction_digest(p.abstraction, 42));
  EXPECT_NE(abstraction_digest(back, 42), abstraction_digest(back, 43));
}

TEST(Artifacts, ControllerRoundTrip) {
  const auto& p = detour();
  const auto dir = fs::temp_directory_path() / "tpra_io_test";
  fs::create_directories(dir);
  save_controller_file(dir / "c.tpra", *p.composed.controller, p.grid, 7);
  const auto back = load_controller_file(dir / "c.tpra");
  EXPECT_EQ(back.key, 7u);
  EXPECT_TRUE(back.grid == p.grid);
  EXPECT_TRUE(back.controller == *p.composed.controller);
  std::ifstream is(dir / "c.tpra", std::ios::binary);
  EXPECT_EQ(read_header(is).kind, ArtifactKind::Controller);
  fs::remove_all(dir);
}

TEST(Artifacts, CorruptInputIsRejected) {
  const auto& p = detour();
  std::stringstream ss;
  save_controller(ss, *p.composed.controller, p.grid, 1);
  const std::string bytes = ss.str();

  std::string bad = bytes;
  bad[0] = 'X';
  std::istringstream m(bad);
  EXPECT_THROW(load_controller(m), FormatError);

  bad = bytes;
  bad[4] = 9;
  std::istringstream v(bad);
  EXPECT_THROW(load_controller(v), FormatError);

  std::istringstream kind(bytes);
  EXPECT_THROW(load_abstraction(kind), FormatError);

  std::istringstream cut(bytes.substr(0, bytes.size() / 2));
  EXPECT_THROW(load_controller(cut), FormatError);
}

TEST(Artifacts, ValueFiles) {
  const auto& p = detour();
  const auto dir = fs::temp_directory_path() / "tpra_value_test";
  fs::create_directories(dir);
  const auto& v = p.composed.controller->value(0);
  save_value_files(dir / "V1", p.grid, v, "V1");
  EXPECT_EQ(fs::file_size(dir / "V1.f64"), 8 * p.grid.state_count());
  const auto back = load_value_files(dir / "V1");
  EXPECT_TRUE(back.value == v);
  EXPECT_TRUE(back.grid == p.grid);
  EXPECT_TRUE(back.value[p.grid.out_cell()].is_infinite());
  const auto meta = read_text(dir / "V1.json");
  EXPECT_NE(meta.find("\"out_index\": 400"), std::string::npos);
  fs::remove_all(dir);
}

TEST(Export, ConstantSlice) {
  const Grid g(HyperRect({0, 0, 0}, {2, 3, 1}), {2, 3, 4});
  ValueFunction v{std::vector<ExtCost>(g.state_count(), ExtCost(1.5))};
  v.values[g.cell_at(std::vector<std::uint32_t>{1, 2, 3})] = ExtCost::infinity();
  std::ostringstream os;
  write_value_slice(os, g, v, SliceSpec{0, 1, {{2, 3}}});
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "i0,i1,x0,x1,value");
  std::getline(is, line);
  EXPECT_EQ(line, "0,0,0.5,0.5,1.5");
  std::vector<std::string> rows;
  while (std::getline(is, line)) rows.push_back(line);
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows.back(), "1,2,1.5,2.5,inf");
}

TEST(Export, SliceValidation) {
  const Grid g(HyperRect({0, 0, 0}, {2, 3, 1}), {2, 3, 4});
  EXPECT_THROW(slice_cells(g, SliceSpec{0, 1, {{2, 4}}}), std::out_of_range);
  EXPECT_THROW(slice_cells(g, SliceSpec{0, 3, {{2, 0}}}), std::out_of_range);
  EXPECT_THROW(slice_cells(g, SliceSpec{0, 0, {{2, 0}}}), std::invalid_argument);
  EXPECT_THROW(slice_cells(g, SliceSpec{0, 1, {}}), std::invalid_argument);
  EXPECT_THROW(slice_cells(g, SliceSpec{0, 1, {{1, 0}, {2, 0}}}), std::invalid_argument);
  EXPECT_EQ(slice_cells(g, SliceSpec{1, 2, {{0, 1}}}).size(), 12u);
}

TEST(Export, ControllerSlice) {
  const Grid g(HyperRect({0, 0}, {2, 1}), {2, 1});
  MemorylessController mu(g.state_count());
  mu.set_stop(0);
  std::ostringstream os;
  write_controller_slice(os, g, mu, SliceSpec{0, 1, {}});
  EXPECT_EQ(os.str(), "i0,i1,x0,x1,value\n0,0,0.5,0.5,stop\n1,0,1.5,0.5,\n");
}

TEST(Export, ParseArguments) {
  EXPECT_EQ(parse_axes("0,1"), (std::pair<std::size_t, std::size_t>{0, 1}));
  EXPECT_EQ(parse_axes(" 2 , 3 "), (std::pair<std::size_t, std::size_t>{2, 3}));
  EXPECT_THROW(parse_axes("0;1"), std::invalid_argument);
  EXPECT_THROW(parse_axes("0,1,2"), std::invalid_argument);
  const auto f = parse_fixed("2=18,3=5");
  EXPECT_EQ(f.at(2), 18u);
  EXPECT_EQ(f.at(3), 5u);
  EXPECT_TRUE(parse_fixed("").empty());
  EXPECT_THROW(parse_fixed("2:18"), std::invalid_argument);
  EXPECT_THROW(parse_fixed("2=-1"), std::invalid_argument);
}
