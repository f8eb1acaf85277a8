#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tpra/grid.hpp"
#include "tpra/problem.hpp"
#include "tpra/types.hpp"

namespace tpra {

/// Abstract running cost
///   g'(O, O', u) = inf                          if O is blocked or O' = OUT
///                = base(u) + weight * D(O')     otherwise,
/// where O is blocked when its closed box meets an obstacle, leaves the
/// admissible box or is not covered by the legality regions, base(u) is the
/// input-dependent part and D(O') bounds the segment distance over O' from above.
class CellRunningCost final : public RunningCost {
 public:
  CellRunningCost() = default;
  CellRunningCost(std::vector<std::uint8_t> blocked, std::vector<double> input_base,
                  std::vector<double> successor_term);

  ExtCost operator()(StateId state, InputId input, StateId successor) const override;

  bool blocked(StateId s) const { return blocked_.at(s) != 0; }
  std::size_t blocked_count() const noexcept;
  const std::vector<double>& input_base() const noexcept { return input_base_; }

 private:
  std::vector<std::uint8_t> blocked_;     // per state, OUT included
  std::vector<double> input_base_;        // per input
  std::vector<double> successor_term_;    // per state, +inf for OUT
};

struct AbstractCosts {
  std::vector<std::uint8_t> first_target;   // A1', per state
  std::vector<std::uint8_t> second_target;  // A2', per state
  std::vector<ExtCost> terminal;            // G0', per state
  CellRunningCost running;                  // g'
  std::vector<std::string> warnings;

  std::size_t first_count() const noexcept;
  std::size_t second_count() const noexcept;
};

/// Inner approximations of A1 and A2, and upper bounds G0' >= G0, g' >= g over cells.
/// `inputs` is the physical input table U'.
AbstractCosts abstract_costs(const TwoPhaseSpec& spec, const Grid& grid,
                             const std::vector<Point>& inputs);

/// Cells whose closed box lies in the union of `boxes`.
std::vector<std::uint8_t> inner_cells(const Grid& grid, const std::vector<HyperRect>& boxes);

}  // namespace tpra
