#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "tpra/grid.hpp"
#include "tpra/types.hpp"

namespace tpra {

/// A 2-D slice: two free axes, every other axis fixed at a cell index.
struct SliceSpec {
  std::size_t axis_a = 0;
  std::size_t axis_b = 1;
  std::map<std::size_t, std::uint32_t> fixed;

  /// Throws std::out_of_range for bad axes or indices, and std::invalid_argument
  /// when a non-free axis has no fixed index.
  void validate(const Grid& grid) const;
};

/// Parses "0,1" into the free axes.
std::pair<std::size_t, std::size_t> parse_axes(const std::string& text);
/// Parses "2=18,3=5" into fixed indices.
std::map<std::size_t, std::uint32_t> parse_fixed(const std::string& text);

/// Cells of the slice in row-major (b outer, a inner) order.
std::vector<CellId> slice_cells(const Grid& grid, const SliceSpec& slice);

/// CSV rows "ia,ib,xa,xb,value" with cell-centre coordinates; +inf is written as "inf".
void write_value_slice(std::ostream& os, const Grid& grid, const ValueFunction& v,
                       const SliceSpec& slice);
/// Same layout; value is the input index, "stop", or empty when undefined.
void write_controller_slice(std::ostream& os, const Grid& grid, const MemorylessController& mu,
                            const SliceSpec& slice);

}  // namespace tpra
