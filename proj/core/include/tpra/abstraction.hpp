#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

#include "tpra/dynamics.hpp"
#include "tpra/grid.hpp"
#include "tpra/types.hpp"

namespace tpra {

/// Finite abstraction (X', U', F') over a Grid. States are the grid cells plus
/// OUT; OUT is absorbing under every input. A pair whose reach box leaves the
/// non-periodic domain (or whose integration failed) is unsafe and has the
/// single successor OUT.
class AbstractSystem {
 public:
  AbstractSystem() = default;
  AbstractSystem(Grid grid, std::size_t input_count, std::vector<std::uint64_t> offsets,
                 std::vector<CellId> successors, std::vector<std::uint8_t> unsafe);

  const Grid& grid() const noexcept { return grid_; }
  std::size_t input_count() const noexcept { return input_count_; }
  std::size_t state_count() const noexcept { return grid_.state_count(); }
  TransitionGraph graph() const noexcept;

  std::span<const CellId> successors_of(CellId cell, InputId input) const noexcept {
    return graph().successors_of(cell, input);
  }
  bool is_unsafe(CellId cell, InputId input) const;
  std::uint64_t transition_count() const noexcept { return successors_.size(); }
  std::uint64_t unsafe_count() const noexcept;

  const std::vector<std::uint64_t>& offsets() const noexcept { return offsets_; }
  const std::vector<CellId>& successors() const noexcept { return successors_; }
  const std::vector<std::uint8_t>& unsafe_flags() const noexcept { return unsafe_; }

 private:
  Grid grid_;
  std::size_t input_count_ = 0;
  std::vector<std::uint64_t> offsets_;
  std::vector<CellId> successors_;
  std::vector<std::uint8_t> unsafe_;
};

class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AbstractionOptions {
  unsigned threads = 1;
  /// Upper bound on stored successor entries; exceeded -> CapacityError.
  std::uint64_t max_transitions = std::uint64_t{1} << 32;
  /// Called with the number of finished cells (from worker threads).
  std::function<void(std::size_t done, std::size_t total)> progress;
};

/// Successors of one (cell, input) pair: every cell whose closed box meets the
/// reach box, or {OUT} when the pair is unsafe. Returns true iff safe.
bool abstract_successors(const SampledSystem& sys, const Grid& grid, CellId cell,
                         std::span<const double> input, std::vector<CellId>& out);

/// Builds the transition relation in two passes (count, fill), data-parallel
/// over cells. The result does not depend on the thread count.
AbstractSystem compute_transitions(const SampledSystem& sys, const Grid& grid,
                                   const AbstractionOptions& options = {});

/// Runs fn(begin, end) over [0, n) split into contiguous chunks on `threads` workers.
void parallel_for(std::size_t n, unsigned threads,
                  const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace tpra
