// tpra: synthesis, simulation, self-test and export front end.
//
// Exit codes: 0 success, 1 error (or violations found by `sim`),
// 2 no non-trivial solution.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tpra/abstract_costs.hpp"
#include "tpra/abstraction.hpp"
#include "tpra/artifacts.hpp"
#include "tpra/export.hpp"
#include "tpra/oracle.hpp"
#include "tpra/scenario.hpp"
#include "tpra/sim.hpp"
#include "tpra/solver.hpp"
#include "tpra/twophase.hpp"

namespace fs = std::filesystem;
using namespace tpra;

namespace {

constexpr int kOk = 0;
constexpr int kError = 1;
constexpr int kNoSolution = 2;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct SynthArgs {
  std::string scenario;
  std::string out;
  unsigned threads = 1;
  std::string cache;
  bool naive = false;
};

AbstractSystem obtain_abstraction(const SampledSystem& sys, const Grid& grid, std::uint64_t key,
                                  const SynthArgs& args, bool& from_cache) {
  fs::path cached;
  if (!args.cache.empty()) {
    fs::create_directories(args.cache);
    cached = fs::path(args.cache) / ("abstraction_" + key_hex(key) + ".tpra");
    if (fs::exists(cached)) {
      std::uint64_t stored = 0;
      auto abs = load_abstraction_file(cached, &stored);
      if (stored == key && abs.grid() == grid && abs.input_count() == sys.inputs.size()) {
        from_cache = true;
        return abs;
      }
      std::cerr << "cache entry " << cached << " does not match; rebuilding\n";
    }
  }
  AbstractionOptions opts;
  opts.threads = args.threads;
  auto abs = compute_transitions(sys, grid, opts);
  if (!cached.empty()) {
    // Write then rename so an interrupted run never leaves a truncated entry.
    fs::path tmp = cached;
    tmp += ".tmp";
    save_abstraction_file(tmp, abs, key);
    fs::rename(tmp, cached);
  }
  return abs;
}

int cmd_synth(const SynthArgs& args) {
  const auto t_all = Clock::now();
  const Scenario sc = load_scenario(args.scenario);
  for (const auto& w : sc.warnings) std::cerr << "warning: " << w << "\n";
  const SampledSystem sys = build_system(sc);
  const Grid grid = build_grid(sc);
  const std::uint64_t key = scenario_key(sc);
  std::cerr << "scenario " << (sc.name.empty() ? args.scenario : sc.name) << " (key " << key_hex(key)
            << "): " << grid.cell_count() << " cells, " << sys.inputs.size() << " inputs\n";

  auto t0 = Clock::now();
  bool from_cache = false;
  const AbstractSystem abs = obtain_abstraction(sys, grid, key, args, from_cache);
  const double t_abs = seconds_since(t0);
  std::cerr << "abstraction: " << abs.transition_count() << " transitions, " << abs.unsafe_count()
            << " unsafe pairs, " << t_abs << " s" << (from_cache ? " (cached)" : "") << "\n";

  t0 = Clock::now();
  const AbstractCosts costs = abstract_costs(sc.spec, grid, sys.inputs);
  for (const auto& w : costs.warnings) std::cerr << "warning: " << w << "\n";
  std::cerr << "targets: A1' " << costs.first_count() << " cells, A2' " << costs.second_count()
            << " cells; " << costs.running.blocked_count() - 1 << " blocked cells\n";
  if (costs.first_count() == 0 || costs.second_count() == 0) {
    std::cerr << "no non-trivial solution: empty target after inner approximation\n";
    return kNoSolution;
  }
  const TwoPhaseProblem prob{abs.graph(), &costs.running, costs.first_target, costs.second_target,
                             costs.terminal};
  const auto result = args.naive ? synthesize_naive(prob) : synthesize(prob);
  const double t_solve = seconds_since(t0);
  if (!result.ok()) {
    std::cerr << "no non-trivial solution: " << result.message << "\n";
    return kNoSolution;
  }
  const auto& ctrl = *result.controller;
  for (std::size_t k = 0; k < ctrl.stage_count(); ++k) {
    const auto& r = result.stages[k];
    std::cerr << "stage " << k + 1 << ": " << r.finite_values << " finite values, " << r.seconds << " s";
    if (k + 1 < ctrl.stage_count()) {
      std::cerr << "; " << r.target_covered << "/" << r.target_states << " target cells with finite V"
                << k + 2;
    }
    std::cerr << "\n";
  }

  fs::create_directories(args.out);
  save_controller_file(fs::path(args.out) / "controller.tpra", ctrl, grid, key);
  for (std::size_t k = 0; k < ctrl.stage_count(); ++k) {
    const std::string name = "V" + std::to_string(k + 1);
    save_value_files(fs::path(args.out) / name, grid, ctrl.value(k), name);
  }

  nlohmann::json m;
  m["format_version"] = kFormatVersion;
  m["scenario"] = sc.name;
  m["scenario_key"] = key_hex(key);
  m["composition"] = args.naive ? "naive" : "optimal";
  m["grid"] = {{"lo", grid.domain().lo()},
               {"hi", grid.domain().hi()},
               {"cells", grid.cells_per_axis()},
               {"periodic", grid.periodic_axes()}};
  m["cells"] = grid.cell_count();
  m["inputs"] = sys.inputs;
  m["transitions"] = abs.transition_count();
  m["unsafe_pairs"] = abs.unsafe_count();
  m["first_target_cells"] = costs.first_count();
  m["second_target_cells"] = costs.second_count();
  m["abstraction_seconds"] = t_abs;
  m["abstraction_cached"] = from_cache;
  m["solve_seconds"] = t_solve;
  m["total_seconds"] = seconds_since(t_all);
  auto& stages = m["stages"] = nlohmann::json::array();
  for (std::size_t k = 0; k < ctrl.stage_count(); ++k) {
    const auto& v = ctrl.value(k);
    stages.push_back({{"finite_values", v.finite_count()},
                      {"max_finite", v.max_finite()},
                      {"target_cells", result.stages[k].target_states},
                      {"target_cells_covered", result.stages[k].target_covered},
                      {"seconds", result.stages[k].seconds}});
  }
  std::ofstream(fs::path(args.out) / "manifest.json") << m.dump(2) << "\n";
  std::cerr << "wrote " << (fs::path(args.out) / "controller.tpra").string() << "\n";
  return kOk;
}

struct SimArgs {
  std::string controller;
  std::string scenario;
  std::size_t seeds = 0;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::vector<double> x0;
  std::string strategy;
  std::string out;
  unsigned threads = 1;
  std::size_t max_steps = 0;
};

int cmd_sim(const SimArgs& args) {
  const Scenario sc = load_scenario(args.scenario);
  const SampledSystem sys = build_system(sc);
  const Grid grid = build_grid(sc);
  const TwoPhaseSpec& spec = sc.spec;
  const auto loaded = load_controller_file(args.controller);
  if (!(loaded.grid == grid)) {
    std::cerr << "error: controller grid does not match the scenario grid\n";
    return kError;
  }
  if (loaded.key != scenario_key(sc)) {
    std::cerr << "warning: controller was synthesized for scenario key " << key_hex(loaded.key)
              << ", this scenario has " << key_hex(scenario_key(sc)) << "\n";
  }

  BatchOptions opts;
  opts.episodes = args.seeds ? args.seeds : sc.sim.episodes;
  opts.seed = args.seed_given ? args.seed : sc.sim.seed;
  opts.kind = args.strategy.empty() ? sc.sim.strategy : parse_disturbance_kind(args.strategy);
  if (!args.x0.empty()) {
    opts.x0 = args.x0;
  } else {
    opts.x0 = sc.sim.x0;
  }
  if (opts.x0 && opts.x0->size() != grid.dim()) {
    std::cerr << "error: --x0 needs " << grid.dim() << " coordinates\n";
    return kError;
  }
  opts.threads = args.threads;
  EpisodeSetup setup{&sys, &grid, &spec, args.max_steps ? args.max_steps : sc.sim.max_steps};

  const auto t0 = Clock::now();
  const auto report = run_batch(setup, loaded.controller, opts);
  const double elapsed = seconds_since(t0);

  fs::create_directories(args.out);
  std::ofstream(fs::path(args.out) / "episodes.json") << [&] {
    std::ostringstream os;
    write_batch_json(os, report, opts);
    return os.str();
  }();
  if (!report.episodes.empty()) {
    std::ofstream csv(fs::path(args.out) / ("trajectory_" + std::to_string(report.seeds[0]) + ".csv"));
    write_trajectory_csv(csv, report.episodes[0]);
  }

  std::size_t finished = 0;
  double worst_ratio = 0.0;
  for (const auto& e : report.episodes) {
    if (e.stop_time) ++finished;
    if (e.cost.is_finite() && e.bound.is_finite() && e.bound.value() > 0) {
      worst_ratio = std::max(worst_ratio, e.cost.value() / e.bound.value());
    }
  }
  std::cout << report.episodes.size() << " episodes (" << to_string(opts.kind) << "), " << finished
            << " finished, " << report.bound_violations() << " bound violations, "
            << report.spec_violations() << " spec violations, " << report.faults()
            << " controller faults; max cost/bound " << worst_ratio << "; " << elapsed << " s\n";
  if (!report.episodes.empty()) {
    const auto& e = report.episodes[0];
    std::cout << "seed " << report.seeds[0] << ": cost " << e.cost << ", bound " << e.bound << "\n";
  }
  const bool bad = report.bound_violations() || report.spec_violations() || report.faults();
  return bad ? kError : kOk;
}

int cmd_selftest(std::size_t instances, std::uint64_t seed, bool mutate) {
  SelftestOptions opts;
  opts.instances = instances;
  opts.seed = seed;
  opts.mutate = mutate;
  const auto t0 = Clock::now();
  const auto rep = run_selftest(opts);
  std::cout << rep.passed << "/" << rep.instances << " instances passed (" << rep.no_solution
            << " without solution); naive strictly worse on " << rep.naive_strictly_worse << "; "
            << seconds_since(t0) << " s\n";
  if (rep.counterexample) {
    std::cout << "counterexample:\n" << *rep.counterexample;
    return kError;
  }
  return rep.ok() ? kOk : kError;
}

struct ExportArgs {
  std::string input;
  std::string axes = "0,1";
  std::string fixed;
  std::string out;
  std::size_t stage = 1;
  bool values = false;
};

int cmd_export(const ExportArgs& args) {
  SliceSpec slice;
  std::tie(slice.axis_a, slice.axis_b) = parse_axes(args.axes);
  slice.fixed = parse_fixed(args.fixed);

  std::ostringstream csv;
  const fs::path in(args.input);
  if (in.extension() == ".tpra") {
    const auto loaded = load_controller_file(in);
    if (args.stage == 0 || args.stage > loaded.controller.stage_count()) {
      std::cerr << "error: --stage must be between 1 and " << loaded.controller.stage_count() << "\n";
      return kError;
    }
    if (args.values) {
      write_value_slice(csv, loaded.grid, loaded.controller.value(args.stage - 1), slice);
    } else {
      write_controller_slice(csv, loaded.grid, loaded.controller.stage(args.stage - 1), slice);
    }
  } else {
    fs::path stem = in;
    if (stem.extension() == ".f64" || stem.extension() == ".json") stem.replace_extension();
    const auto loaded = load_value_files(stem);
    write_value_slice(csv, loaded.grid, loaded.value, slice);
  }
  if (args.out.empty() || args.out == "-") {
    std::cout << csv.str();
  } else {
    std::ofstream os(args.out);
    if (!os) throw std::runtime_error("cannot write " + args.out);
    os << csv.str();
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-phase reach-avoid controller synthesis"};
  app.require_subcommand(0, 1);
  bool version = false;
  app.add_flag("--version", version, "Print version and file format numbers");

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "Build the abstraction and synthesize a controller");
  synth_cmd->add_option("scenario", synth.scenario, "Scenario file")->required()->check(CLI::ExistingFile);
  synth_cmd->add_option("out", synth.out, "Output directory")->required();
  synth_cmd->add_option("--threads", synth.threads, "Worker threads for the abstraction")
      ->check(CLI::Range(1u, 1024u));
  synth_cmd->add_option("--cache", synth.cache, "Directory for cached abstractions");
  synth_cmd->add_flag("--naive", synth.naive, "Naive composition (zero stage-1 stopping cost)");

  SimArgs sim;
  auto* sim_cmd = app.add_subcommand("sim", "Simulate the closed loop");
  sim_cmd->add_option("controller", sim.controller, "Controller file")->required()->check(CLI::ExistingFile);
  sim_cmd->add_option("scenario", sim.scenario, "Scenario file")->required()->check(CLI::ExistingFile);
  sim_cmd->add_option("--seeds", sim.seeds, "Number of episodes (default: scenario)");
  auto* seed_opt = sim_cmd->add_option("--seed", sim.seed, "First seed (default: scenario)");
  sim_cmd->add_option("--x0", sim.x0, "Initial state, comma separated")->delimiter(',');
  sim_cmd->add_option("--strategy", sim.strategy, "Disturbance: none, uniform or corners");
  sim_cmd->add_option("--out", sim.out, "Output directory")->default_val("sim_out");
  sim_cmd->add_option("--threads", sim.threads, "Worker threads")->check(CLI::Range(1u, 1024u));
  sim_cmd->add_option("--max-steps", sim.max_steps, "Step limit (default: 4 V1 / tau)");

  std::size_t instances = 500;
  std::uint64_t st_seed = 1;
  bool mutate = false;
  auto* st_cmd = app.add_subcommand("selftest", "Check composition against the product oracle");
  st_cmd->add_option("--instances", instances, "Number of random instances")->default_val(500);
  st_cmd->add_option("--seed", st_seed, "Corpus seed")->default_val(1);
  st_cmd->add_flag("--mutate", mutate, "Use a deliberately wrong composition");

  ExportArgs ex;
  auto* ex_cmd = app.add_subcommand("export", "Write a 2-D CSV slice of a value function or controller");
  ex_cmd->add_option("input", ex.input, "controller.tpra, or a value file (.f64/.json)")
      ->required()
      ->check(CLI::ExistingFile);
  ex_cmd->add_option("--axes", ex.axes, "Free axes, e.g. 0,1")->default_val("0,1");
  ex_cmd->add_option("--fix", ex.fixed, "Fixed indices of the other axes, e.g. 2=0,3=5");
  ex_cmd->add_option("--out", ex.out, "Output CSV (default: stdout)");
  ex_cmd->add_option("--stage", ex.stage, "Stage of a controller file (1-based)")->default_val(1);
  ex_cmd->add_flag("--values", ex.values, "Export the stage value function instead of the inputs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kError;
  }
  sim.seed_given = seed_opt->count() > 0;

  if (version) {
    std::cout << "tpra " << TPRA_VERSION << " (artifact format " << kFormatVersion << ", value format "
              << kValueFormatVersion << ")\n";
    return kOk;
  }
  try {
    if (*synth_cmd) return cmd_synth(synth);
    if (*sim_cmd) return cmd_sim(sim);
    if (*st_cmd) return cmd_selftest(instances, st_seed, mutate);
    if (*ex_cmd) return cmd_export(ex);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  std::cout << app.help();
  return kOk;
}
