#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tpra/dynamics.hpp"
#include "tpra/grid.hpp"
#include "tpra/problem.hpp"
#include "tpra/sim.hpp"

namespace tpra {

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DynamicsSection {
  std::string model;
  ModelParameters params;
  double sampling_time = 0.1;
  int substeps = 5;
  std::vector<double> disturbance;
  /// "local" (model-provided cell-local bound) or "constant" (matrix below).
  std::string growth = "constant";
  std::vector<double> growth_matrix;
};

struct GridSection {
  HyperRect domain;
  std::vector<std::uint32_t> cells;
  std::vector<std::size_t> periodic;
};

/// Uniform samples per axis over [lo, hi], endpoints included; a single
/// sample sits at the midpoint.
struct InputSection {
  std::vector<double> lo;
  std::vector<double> hi;
  std::vector<std::uint32_t> samples;
};

struct SimSection {
  std::size_t episodes = 100;
  std::uint64_t seed = 1;
  DisturbanceKind strategy = DisturbanceKind::Uniform;
  std::size_t max_steps = 0;
  std::optional<Point> x0;
};

struct Scenario {
  std::string name;
  DynamicsSection dynamics;
  GridSection grid;
  InputSection inputs;
  TwoPhaseSpec spec;
  SimSection sim;
  /// Non-fatal findings, e.g. a target box reaching outside the domain.
  std::vector<std::string> warnings;
};

/// JSON with // and /* */ comments. Angles may be written as strings such as
/// "pi", "-pi/2" or "3*pi/8".
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::filesystem::path& path);
/// Canonical JSON (sorted keys, numbers only); parse(to_json(s)) == s.
std::string scenario_to_json(const Scenario& sc);

/// Cache key: FNV-1a of the canonical dynamics, grid and inputs sections.
std::uint64_t scenario_key(const Scenario& sc);
std::string key_hex(std::uint64_t key);

std::vector<Point> input_table(const InputSection& in);
Grid build_grid(const Scenario& sc);
SampledSystem build_system(const Scenario& sc);

bool operator==(const Scenario& a, const Scenario& b);

}  // namespace tpra
