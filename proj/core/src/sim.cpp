#include "tpra/sim.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "tpra/abstraction.hpp"

namespace tpra {

DisturbanceKind parse_disturbance_kind(const std::string& name) {
  if (name == "none") return DisturbanceKind::None;
  if (name == "uniform") return DisturbanceKind::Uniform;
  if (name == "corners") return DisturbanceKind::Corners;
  throw std::invalid_argument("unknown disturbance strategy '" + name +
                              "' (expected none, uniform or corners)");
}

std::string to_string(DisturbanceKind kind) {
  switch (kind) {
    case DisturbanceKind::None: return "none";
    case DisturbanceKind::Uniform: return "uniform";
    case DisturbanceKind::Corners: return "corners";
  }
  return "?";
}

DisturbanceStrategy::DisturbanceStrategy(DisturbanceKind kind, std::vector<double> halfwidth,
                                         std::uint64_t seed)
    : kind_(kind), w_(std::move(halfwidth)), current_(w_.size(), 0.0), rng_(seed) {
  for (double w : w_) {
    if (!(w >= 0.0)) throw std::invalid_argument("DisturbanceStrategy: negative half-width");
  }
}

const std::vector<double>& DisturbanceStrategy::next() {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (std::size_t i = 0; i < w_.size(); ++i) {
    switch (kind_) {
      case DisturbanceKind::None: current_[i] = 0.0; break;
      case DisturbanceKind::Uniform: current_[i] = std::clamp(unit(rng_), -1.0, 1.0) * w_[i]; break;
      case DisturbanceKind::Corners: current_[i] = (rng_() & 1) ? w_[i] : -w_[i]; break;
    }
  }
  return current_;
}

EpisodeReport run_episode(const EpisodeSetup& setup, const PhasedController& controller,
                          std::span<const double> x0, DisturbanceStrategy& dist) {
  if (!setup.system || !setup.grid || !setup.spec) throw std::invalid_argument("run_episode: incomplete setup");
  const auto& sys = *setup.system;
  const auto& grid = *setup.grid;
  const auto& spec = *setup.spec;
  if (x0.size() != sys.dim) throw DimensionError("run_episode: initial state dimension mismatch");

  PhasedController ctrl = controller;
  ctrl.reset();
  EpisodeReport rep;
  Point x(x0.begin(), x0.end());
  grid.wrap(x);

  const CellId start = grid.quantize(x);
  if (start < grid.cell_count()) rep.bound = ctrl.value(0)[start];
  std::size_t max_steps = setup.max_steps;
  if (max_steps == 0 && rep.bound.is_finite()) {
    max_steps = static_cast<std::size_t>(std::ceil(4.0 * rep.bound.value() / sys.sampling_time));
  }

  auto& traj = rep.trajectory;
  traj.states.push_back(x);
  bool visited = spec.in_first(x);
  ExtCost running = ExtCost::zero();

  for (std::size_t t = 0;; ++t) {
    const std::size_t before = ctrl.phase();
    const auto step = ctrl.step(grid, x);
    if (ctrl.phase() != before && !rep.phase_switch_time && before == 0) rep.phase_switch_time = t;
    if (step.kind == PhasedController::Kind::Fault) {
      rep.domain_fault = true;
      break;
    }
    if (step.kind == PhasedController::Kind::Stop) {
      rep.stop_time = t;
      break;
    }
    if (t >= max_steps) break;
    rep.phases.push_back(step.phase);
    const Point& u = sys.inputs.at(step.input);
    Point y;
    try {
      y = integrate_disturbed(sys, x, u, [&](int) { return std::span<const double>(dist.next()); });
    } catch (const IntegrationFailure&) {
      rep.domain_fault = true;
      break;
    }
    grid.wrap(y);
    const ExtCost c = spec.running(x, y, u);
    rep.step_costs.push_back(c.value());
    running += c;
    traj.inputs.push_back(u);
    traj.states.push_back(y);
    visited = visited || spec.in_first(y);
    x = std::move(y);
  }

  traj.first_target_visited = visited;
  if (rep.stop_time) {
    traj.stop_time = rep.stop_time;
    rep.spec_satisfied = visited && spec.in_second(traj.states.back());
    rep.cost = running + spec.trajectory_cost(traj.states);
  }
  traj.accumulated_cost = rep.cost;
  rep.bound_satisfied = rep.cost <= rep.bound;
  return rep;
}

std::size_t BatchReport::bound_violations() const {
  return static_cast<std::size_t>(std::count_if(episodes.begin(), episodes.end(),
                                                [](const EpisodeReport& e) { return !e.bound_satisfied; }));
}

std::size_t BatchReport::spec_violations() const {
  return static_cast<std::size_t>(std::count_if(episodes.begin(), episodes.end(), [](const EpisodeReport& e) {
    return e.stop_time.has_value() && !e.spec_satisfied;
  }));
}

std::size_t BatchReport::faults() const {
  return static_cast<std::size_t>(std::count_if(episodes.begin(), episodes.end(),
                                                [](const EpisodeReport& e) { return e.domain_fault; }));
}

std::vector<CellId> finite_cells(const Grid& grid, const ValueFunction& v) {
  std::vector<CellId> out;
  for (CellId c = 0; c < grid.cell_count(); ++c) {
    if (v[c].is_finite()) out.push_back(c);
  }
  return out;
}

Point random_start(const Grid& grid, const std::vector<CellId>& cells, std::mt19937_64& rng) {
  if (cells.empty()) throw std::invalid_argument("random_start: no cell to start from");
  const CellId cell = cells[rng() % cells.size()];
  const HyperRect box = grid.cell_box(cell);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Point p(grid.dim());
  for (;;) {
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = box.lo(i) + unit(rng) * (box.hi(i) - box.lo(i));
    if (grid.quantize(p) == cell) return p;
  }
}

BatchReport run_batch(const EpisodeSetup& setup, const PhasedController& ctrl,
                      const BatchOptions& options) {
  BatchReport report;
  report.seeds.resize(options.episodes);
  report.episodes.resize(options.episodes);
  std::vector<CellId> starts;
  if (!options.x0) starts = finite_cells(*setup.grid, ctrl.value(0));
  parallel_for(options.episodes, options.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const std::uint64_t seed = options.seed + i;
      report.seeds[i] = seed;
      Point x0;
      if (options.x0) {
        x0 = *options.x0;
      } else {
        std::mt19937_64 rng(seed ^ 0x5851f42d4c957f2dULL);
        x0 = random_start(*setup.grid, starts, rng);
      }
      DisturbanceStrategy dist(options.kind, setup.system->disturbance_halfwidth, seed);
      report.episodes[i] = run_episode(setup, ctrl, x0, dist);
    }
  });
  return report;
}

void write_trajectory_csv(std::ostream& os, const EpisodeReport& rep) {
  const auto& tr = rep.trajectory;
  const std::size_t n = tr.states.empty() ? 0 : tr.states.front().size();
  const std::size_t m = tr.inputs.empty() ? 0 : tr.inputs.front().size();
  os << "t";
  for (std::size_t i = 0; i < n; ++i) os << ",x" << i + 1;
  for (std::size_t i = 0; i < m; ++i) os << ",u" << i + 1;
  os << ",phase,cost\n";
  os.precision(17);
  double acc = 0.0;
  for (std::size_t t = 0; t < tr.states.size(); ++t) {
    os << t;
    for (double v : tr.states[t]) os << "," << v;
    for (std::size_t i = 0; i < m; ++i) {
      os << ",";
      if (t < tr.inputs.size()) os << tr.inputs[t][i];
    }
    os << ",";
    if (t < rep.phases.size()) os << rep.phases[t] + 1;
    os << "," << acc << "\n";
    if (t < rep.step_costs.size()) acc += rep.step_costs[t];
  }
}

namespace {

nlohmann::json cost_json(ExtCost c) {
  if (c.is_infinite()) return "inf";
  return c.value();
}

}  // namespace

void write_batch_json(std::ostream& os, const BatchReport& report, const BatchOptions& options) {
  nlohmann::json j;
  j["strategy"] = to_string(options.kind);
  j["episodes"] = report.episodes.size();
  j["bound_violations"] = report.bound_violations();
  j["spec_violations"] = report.spec_violations();
  j["faults"] = report.faults();
  auto& list = j["runs"] = nlohmann::json::array();
  for (std::size_t i = 0; i < report.episodes.size(); ++i) {
    const auto& e = report.episodes[i];
    nlohmann::json r;
    r["seed"] = report.seeds[i];
    r["x0"] = e.trajectory.states.front();
    r["cost"] = cost_json(e.cost);
    r["bound"] = cost_json(e.bound);
    r["bound_satisfied"] = e.bound_satisfied;
    r["spec_satisfied"] = e.spec_satisfied;
    r["domain_fault"] = e.domain_fault;
    r["switch_time"] = e.phase_switch_time ? nlohmann::json(*e.phase_switch_time) : nlohmann::json();
    r["stop_time"] = e.stop_time ? nlohmann::json(*e.stop_time) : nlohmann::json();
    list.push_back(std::move(r));
  }
  os << j.dump(2) << "\n";
}

}  // namespace tpra
