#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "tpra/dynamics.hpp"
#include "tpra/grid.hpp"
#include "tpra/problem.hpp"
#include "tpra/twophase.hpp"
#include "tpra/types.hpp"

namespace tpra {

enum class DisturbanceKind { None, Uniform, Corners };

DisturbanceKind parse_disturbance_kind(const std::string& name);
std::string to_string(DisturbanceKind kind);

/// Per-sub-step disturbance realization inside the box W = [-w, w].
class DisturbanceStrategy {
 public:
  DisturbanceStrategy(DisturbanceKind kind, std::vector<double> halfwidth, std::uint64_t seed);

  DisturbanceKind kind() const noexcept { return kind_; }
  /// Next realization; every component satisfies |d_i| <= w_i.
  const std::vector<double>& next();

 private:
  DisturbanceKind kind_;
  std::vector<double> w_;
  std::vector<double> current_;
  std::mt19937_64 rng_;
};

struct EpisodeReport {
  Trajectory trajectory;
  std::vector<std::size_t> phases;  // active stage at each decision
  std::vector<double> step_costs;   // g(x(t), x(t+1), u(t))
  std::optional<std::size_t> phase_switch_time;
  std::optional<std::size_t> stop_time;
  ExtCost cost = ExtCost::infinity();
  ExtCost bound = ExtCost::infinity();
  bool bound_satisfied = false;
  /// The quantized state had no controller entry.
  bool domain_fault = false;
  /// A finished run visited A1 and then stopped in A2 (checked on the plant state).
  bool spec_satisfied = false;
};

struct EpisodeSetup {
  const SampledSystem* system = nullptr;
  const Grid* grid = nullptr;
  const TwoPhaseSpec* spec = nullptr;
  /// 0 selects ceil(4 V1(x0) / tau).
  std::size_t max_steps = 0;
};

/// Closed loop of the plant with the quantized phased controller. The
/// controller is copied and reset, so one instance can serve many episodes.
EpisodeReport run_episode(const EpisodeSetup& setup, const PhasedController& ctrl,
                          std::span<const double> x0, DisturbanceStrategy& dist);

struct BatchOptions {
  std::size_t episodes = 100;
  std::uint64_t seed = 1;
  DisturbanceKind kind = DisturbanceKind::Uniform;
  /// Fixed initial state; otherwise each episode draws a random point from a
  /// random cell with finite V1.
  std::optional<Point> x0;
  unsigned threads = 1;
};

struct BatchReport {
  std::vector<std::uint64_t> seeds;
  std::vector<EpisodeReport> episodes;

  std::size_t bound_violations() const;
  std::size_t spec_violations() const;
  std::size_t faults() const;
};

/// Independent episodes, merged in seed order.
BatchReport run_batch(const EpisodeSetup& setup, const PhasedController& ctrl,
                      const BatchOptions& options);

/// In-domain cells with finite value.
std::vector<CellId> finite_cells(const Grid& grid, const ValueFunction& v);
/// Uniform point in the half-open box of a cell drawn uniformly from `cells`.
Point random_start(const Grid& grid, const std::vector<CellId>& cells, std::mt19937_64& rng);

void write_trajectory_csv(std::ostream& os, const EpisodeReport& report);
void write_batch_json(std::ostream& os, const BatchReport& report, const BatchOptions& options);

}  // namespace tpra
