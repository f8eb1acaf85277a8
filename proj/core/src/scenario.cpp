#include "tpra/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <regex>
#include <sstream>

#include <json.hpp>

#include "tpra/binary_io.hpp"

namespace tpra {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ScenarioError(where + ": " + what);
}

double number(const json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    // [-][a*]pi[/b]
    static const std::regex re(R"(^\s*(-)?\s*(?:([0-9]*\.?[0-9]+)\s*\*\s*)?pi\s*(?:/\s*([0-9]*\.?[0-9]+))?\s*$)");
    std::smatch m;
    const auto s = j.get<std::string>();
    if (std::regex_match(s, m, re)) {
      double v = std::numbers::pi;
      if (m[2].matched) v = std::stod(m[2].str()) * v;
      if (m[3].matched) v = v / std::stod(m[3].str());
      return m[1].matched ? -v : v;
    }
    fail(where, "cannot read '" + s + "' as a number");
  }
  fail(where, "expected a number");
}

std::vector<double> numbers(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

template <typename T>
std::vector<T> counts(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of integers");
  std::vector<T> out;
  for (const auto& v : j) {
    if (!v.is_number_integer() || v.get<long long>() < 0) fail(where, "expected non-negative integers");
    out.push_back(v.get<T>());
  }
  return out;
}

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) fail(where, std::string("missing '") + key + "'");
  return j.at(key);
}

HyperRect box(const json& j, const std::string& where) {
  try {
    return HyperRect(numbers(field(j, "lo", where), where + ".lo"), numbers(field(j, "hi", where), where + ".hi"));
  } catch (const std::invalid_argument& e) {
    fail(where, e.what());
  }
}

std::vector<HyperRect> boxes(const json& j, const char* key, const std::string& where) {
  std::vector<HyperRect> out;
  if (!j.contains(key)) return out;
  const auto& arr = j.at(key);
  if (!arr.is_array()) fail(where + "." + key, "expected an array of boxes");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    out.push_back(box(arr[i], where + "." + key + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::vector<Segment2> segments(const json& j, const std::string& where) {
  std::vector<Segment2> out;
  if (!j.is_array()) fail(where, "expected an array of [ax, ay, bx, by]");
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto v = numbers(j[i], where + "[" + std::to_string(i) + "]");
    if (v.size() != 4) fail(where, "segments need four numbers");
    out.push_back({{v[0], v[1]}, {v[2], v[3]}});
  }
  return out;
}

std::array<std::size_t, 2> axes(const json& j, const std::string& where) {
  const auto v = counts<std::size_t>(j, where);
  if (v.size() != 2) fail(where, "expected two axis indices");
  return {v[0], v[1]};
}

json box_json(const HyperRect& b) { return {{"lo", b.lo()}, {"hi", b.hi()}}; }

json boxes_json(const std::vector<HyperRect>& bs) {
  json arr = json::array();
  for (const auto& b : bs) arr.push_back(box_json(b));
  return arr;
}

json segments_json(const std::vector<Segment2>& ss) {
  json arr = json::array();
  for (const auto& s : ss) arr.push_back({s.a[0], s.a[1], s.b[0], s.b[1]});
  return arr;
}

json dynamics_json(const DynamicsSection& d) {
  json params = json::object();
  for (const auto& [k, v] : d.params.values) params[k] = v;
  json j{{"model", d.model},
         {"params", params},
         {"sampling_time", d.sampling_time},
         {"substeps", d.substeps},
         {"disturbance", d.disturbance},
         {"growth", d.growth}};
  if (d.growth == "constant") j["growth_matrix"] = d.growth_matrix;
  return j;
}

json grid_json(const GridSection& g) {
  return {{"lo", g.domain.lo()}, {"hi", g.domain.hi()}, {"cells", g.cells}, {"periodic", g.periodic}};
}

json inputs_json(const InputSection& in) {
  return {{"lo", in.lo}, {"hi", in.hi}, {"samples", in.samples}};
}

DynamicsSection parse_dynamics(const json& j) {
  const std::string w = "dynamics";
  DynamicsSection d;
  d.model = field(j, "model", w).get<std::string>();
  if (j.contains("params")) {
    const auto& p = j.at("params");
    if (!p.is_object()) fail(w + ".params", "expected an object");
    for (auto it = p.begin(); it != p.end(); ++it) {
      d.params.values[it.key()] = it.value().is_array() ? numbers(it.value(), w + ".params." + it.key())
                                                        : std::vector<double>{number(it.value(), w + ".params." + it.key())};
    }
  }
  d.sampling_time = number(field(j, "sampling_time", w), w + ".sampling_time");
  if (!(d.sampling_time > 0.0)) fail(w + ".sampling_time", "must be positive");
  if (j.contains("substeps")) d.substeps = j.at("substeps").get<int>();
  if (d.substeps <= 0) fail(w + ".substeps", "must be positive");
  d.disturbance = numbers(field(j, "disturbance", w), w + ".disturbance");
  for (double v : d.disturbance) {
    if (!(v >= 0.0)) fail(w + ".disturbance", "half-widths must be non-negative");
  }
  d.growth = j.value("growth", std::string("constant"));
  if (d.growth == "constant") {
    d.growth_matrix = numbers(field(j, "growth_matrix", w), w + ".growth_matrix");
  } else if (d.growth != "local") {
    fail(w + ".growth", "expected 'local' or 'constant'");
  }
  return d;
}

GridSection parse_grid(const json& j) {
  const std::string w = "grid";
  GridSection g;
  g.domain = box(j, w);
  g.cells = counts<std::uint32_t>(field(j, "cells", w), w + ".cells");
  if (g.cells.size() != g.domain.dim()) fail(w + ".cells", "one count per axis required");
  for (auto c : g.cells) {
    if (c == 0) fail(w + ".cells", "counts must be positive");
  }
  if (j.contains("periodic")) g.periodic = counts<std::size_t>(j.at("periodic"), w + ".periodic");
  for (auto a : g.periodic) {
    if (a >= g.cells.size()) fail(w + ".periodic", "axis out of range");
  }
  return g;
}

InputSection parse_inputs(const json& j) {
  const std::string w = "inputs";
  InputSection in;
  in.lo = numbers(field(j, "lo", w), w + ".lo");
  in.hi = numbers(field(j, "hi", w), w + ".hi");
  in.samples = counts<std::uint32_t>(field(j, "samples", w), w + ".samples");
  if (in.lo.size() != in.hi.size() || in.lo.size() != in.samples.size() || in.lo.empty()) {
    fail(w, "lo, hi and samples must have the same non-zero length");
  }
  for (std::size_t i = 0; i < in.lo.size(); ++i) {
    if (!(in.lo[i] <= in.hi[i])) fail(w, "lo must not exceed hi");
    if (in.samples[i] == 0) fail(w + ".samples", "counts must be positive");
  }
  return in;
}

TwoPhaseSpec parse_spec(const json& j) {
  const std::string w = "spec";
  TwoPhaseSpec s;
  s.first_target = boxes(j, "A1", w);
  s.second_target = boxes(j, "A2", w);
  s.running.obstacles = boxes(j, "obstacles", w);
  s.running.legality = boxes(j, "legality", w);
  if (j.contains("admissible") && !j.at("admissible").is_null()) {
    s.running.admissible = box(j.at("admissible"), w + ".admissible");
  }
  if (j.contains("running")) {
    const auto& r = j.at("running");
    const std::string rw = w + ".running";
    s.running.constant = number(r.value("constant", json(0.0)), rw + ".constant");
    if (r.contains("input_weights")) s.running.input_weights = numbers(r.at("input_weights"), rw + ".input_weights");
    if (r.contains("segments")) s.running.segments = segments(r.at("segments"), rw + ".segments");
    s.running.segment_weight = number(r.value("segment_weight", json(1.0)), rw + ".segment_weight");
    if (r.contains("segment_axes")) s.running.segment_axes = axes(r.at("segment_axes"), rw + ".segment_axes");
  }
  if (j.contains("terminal")) {
    const auto& t = j.at("terminal");
    const std::string tw = w + ".terminal";
    s.terminal.constant = number(t.value("constant", json(0.0)), tw + ".constant");
    if (t.contains("segments")) s.terminal.segments = segments(t.at("segments"), tw + ".segments");
    s.terminal.segment_weight = number(t.value("segment_weight", json(0.0)), tw + ".segment_weight");
    if (t.contains("segment_axes")) s.terminal.segment_axes = axes(t.at("segment_axes"), tw + ".segment_axes");
  }
  return s;
}

SimSection parse_sim(const json& j) {
  SimSection s;
  s.episodes = j.value("episodes", std::size_t{100});
  s.seed = j.value("seed", std::uint64_t{1});
  s.strategy = parse_disturbance_kind(j.value("strategy", std::string("uniform")));
  s.max_steps = j.value("max_steps", std::size_t{0});
  if (j.contains("x0") && !j.at("x0").is_null()) s.x0 = numbers(j.at("x0"), "sim.x0");
  return s;
}

void check_consistency(Scenario& sc) {
  const std::size_t n = sc.grid.domain.dim();
  if (sc.dynamics.disturbance.size() != n) fail("dynamics.disturbance", "one half-width per state axis required");
  if (sc.dynamics.growth == "constant" && sc.dynamics.growth_matrix.size() != n * n) {
    fail("dynamics.growth_matrix", "expected " + std::to_string(n * n) + " entries");
  }
  try {
    sc.spec.validate(n);
  } catch (const std::exception& e) {
    fail("spec", e.what());
  }
  if (sc.sim.x0 && sc.sim.x0->size() != n) fail("sim.x0", "dimension mismatch");
  const HyperRect& dom = sc.grid.domain;
  auto flag = [&](const std::vector<HyperRect>& bs, const char* what) {
    for (std::size_t i = 0; i < bs.size(); ++i) {
      if (!dom.contains(bs[i])) {
        sc.warnings.push_back(std::string(what) + "[" + std::to_string(i) + "] is not inside the grid domain");
      }
    }
  };
  flag(sc.spec.first_target, "A1");
  flag(sc.spec.second_target, "A2");
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
  json j;
  try {
    j = json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ScenarioError(std::string("scenario is not valid JSON: ") + e.what());
  }
  try {
    Scenario sc;
    sc.name = j.value("name", std::string());
    sc.dynamics = parse_dynamics(field(j, "dynamics", "scenario"));
    sc.grid = parse_grid(field(j, "grid", "scenario"));
    sc.inputs = parse_inputs(field(j, "inputs", "scenario"));
    sc.spec = parse_spec(field(j, "spec", "scenario"));
    if (j.contains("sim")) sc.sim = parse_sim(j.at("sim"));
    check_consistency(sc);
    return sc;
  } catch (const json::exception& e) {
    throw ScenarioError(std::string("scenario: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(std::string("scenario: ") + e.what());
  }
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ScenarioError("cannot read scenario " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_scenario(ss.str());
}

std::string scenario_to_json(const Scenario& sc) {
  const auto& s = sc.spec;
  json spec{{"A1", boxes_json(s.first_target)},
            {"A2", boxes_json(s.second_target)},
            {"obstacles", boxes_json(s.running.obstacles)},
            {"legality", boxes_json(s.running.legality)},
            {"admissible", s.running.admissible ? box_json(*s.running.admissible) : json()},
            {"running",
             {{"constant", s.running.constant},
              {"input_weights", s.running.input_weights},
              {"segments", segments_json(s.running.segments)},
              {"segment_weight", s.running.segment_weight},
              {"segment_axes", s.running.segment_axes}}},
            {"terminal",
             {{"constant", s.terminal.constant},
              {"segments", segments_json(s.terminal.segments)},
              {"segment_weight", s.terminal.segment_weight},
              {"segment_axes", s.terminal.segment_axes}}}};
  json sim{{"episodes", sc.sim.episodes},
           {"seed", sc.sim.seed},
           {"strategy", to_string(sc.sim.strategy)},
           {"max_steps", sc.sim.max_steps},
           {"x0", sc.sim.x0 ? json(*sc.sim.x0) : json()}};
  json j{{"name", sc.name},
         {"dynamics", dynamics_json(sc.dynamics)},
         {"grid", grid_json(sc.grid)},
         {"inputs", inputs_json(sc.inputs)},
         {"spec", spec},
         {"sim", sim}};
  return j.dump(2) + "\n";
}

std::uint64_t scenario_key(const Scenario& sc) {
  const json j{{"dynamics", dynamics_json(sc.dynamics)},
               {"grid", grid_json(sc.grid)},
               {"inputs", inputs_json(sc.inputs)}};
  return fnv1a64(j.dump());
}

std::string key_hex(std::uint64_t key) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(key));
  return buf;
}

std::vector<Point> input_table(const InputSection& in) {
  const std::size_t m = in.lo.size();
  std::size_t total = 1;
  for (auto k : in.samples) total *= k;
  std::vector<Point> out;
  out.reserve(total);
  std::vector<std::uint32_t> idx(m, 0);
  for (std::size_t n = 0; n < total; ++n) {
    Point u(m);
    for (std::size_t i = 0; i < m; ++i) {
      const auto k = in.samples[i];
      u[i] = k == 1 ? 0.5 * (in.lo[i] + in.hi[i])
                    : in.lo[i] + (in.hi[i] - in.lo[i]) * static_cast<double>(idx[i]) / (k - 1);
    }
    out.push_back(std::move(u));
    for (std::size_t i = 0; i < m && ++idx[i] == in.samples[i]; ++i) idx[i] = 0;
  }
  return out;
}

Grid build_grid(const Scenario& sc) { return Grid(sc.grid.domain, sc.grid.cells, sc.grid.periodic); }

SampledSystem build_system(const Scenario& sc) {
  const auto info = make_model(sc.dynamics.model, sc.dynamics.params);
  if (info.dim != sc.grid.domain.dim()) {
    throw ScenarioError("model '" + sc.dynamics.model + "' has state dimension " + std::to_string(info.dim) +
                        " but the grid has " + std::to_string(sc.grid.domain.dim()));
  }
  if (info.input_dim != sc.inputs.lo.size()) {
    throw ScenarioError("model '" + sc.dynamics.model + "' takes " + std::to_string(info.input_dim) + " inputs");
  }
  SampledSystem sys;
  sys.dim = info.dim;
  sys.input_dim = info.input_dim;
  sys.field = info.field;
  sys.disturbance_halfwidth = sc.dynamics.disturbance;
  sys.sampling_time = sc.dynamics.sampling_time;
  sys.substeps = sc.dynamics.substeps;
  sys.inputs = input_table(sc.inputs);
  if (sc.dynamics.growth == "local") {
    if (!info.has_local_growth) {
      throw ScenarioError("growth 'local' is only available for the vehicle model");
    }
    sys.growth = vehicle_local_growth_bound(sys.sampling_time, sys.disturbance_halfwidth);
  } else {
    sys.growth = constant_growth_bound(sys.dim, sc.dynamics.growth_matrix);
  }
  sys.validate();
  return sys;
}

bool operator==(const Scenario& a, const Scenario& b) {
  return scenario_to_json(a) == scenario_to_json(b);
}

}  // namespace tpra
