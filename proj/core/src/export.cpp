#include "tpra/export.hpp"

#include <ostream>
#include <sstream>
#include <stdexcept>

namespace tpra {

void SliceSpec::validate(const Grid& grid) const {
  const std::size_t n = grid.dim();
  if (axis_a >= n || axis_b >= n) throw std::out_of_range("slice axis out of range");
  if (axis_a == axis_b) throw std::invalid_argument("slice axes must differ");
  for (const auto& [axis, index] : fixed) {
    if (axis >= n) throw std::out_of_range("fixed axis " + std::to_string(axis) + " out of range");
    if (axis == axis_a || axis == axis_b) throw std::invalid_argument("a free axis cannot be fixed");
    if (index >= grid.cells_per_axis()[axis]) {
      throw std::out_of_range("index " + std::to_string(index) + " out of range on axis " +
                              std::to_string(axis) + " (" + std::to_string(grid.cells_per_axis()[axis]) +
                              " cells)");
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (i != axis_a && i != axis_b && !fixed.count(i)) {
      throw std::invalid_argument("axis " + std::to_string(i) + " needs a fixed index");
    }
  }
}

std::pair<std::size_t, std::size_t> parse_axes(const std::string& text) {
  std::size_t a = 0, b = 0;
  char comma = 0;
  std::istringstream is(text);
  if (!(is >> a >> comma >> b) || comma != ',' || !(is >> std::ws).eof()) {
    throw std::invalid_argument("axes must look like '0,1', got '" + text + "'");
  }
  return {a, b};
}

std::map<std::size_t, std::uint32_t> parse_fixed(const std::string& text) {
  std::map<std::size_t, std::uint32_t> out;
  std::istringstream is(text);
  std::string item;
  while (std::getline(is, item, ',')) {
    if (item.empty()) continue;
    std::istringstream one(item);
    std::size_t axis = 0;
    long long index = 0;
    char eq = 0;
    if (!(one >> axis >> eq >> index) || eq != '=' || index < 0 || !(one >> std::ws).eof()) {
      throw std::invalid_argument("fixed indices must look like '2=18,3=5', got '" + text + "'");
    }
    out[axis] = static_cast<std::uint32_t>(index);
  }
  return out;
}

std::vector<CellId> slice_cells(const Grid& grid, const SliceSpec& slice) {
  slice.validate(grid);
  std::vector<std::uint32_t> coords(grid.dim(), 0);
  for (const auto& [axis, index] : slice.fixed) coords[axis] = index;
  std::vector<CellId> out;
  const auto na = grid.cells_per_axis()[slice.axis_a];
  const auto nb = grid.cells_per_axis()[slice.axis_b];
  out.reserve(static_cast<std::size_t>(na) * nb);
  for (std::uint32_t j = 0; j < nb; ++j) {
    for (std::uint32_t i = 0; i < na; ++i) {
      coords[slice.axis_a] = i;
      coords[slice.axis_b] = j;
      out.push_back(grid.cell_at(coords));
    }
  }
  return out;
}

namespace {

template <typename Emit>
void write_slice(std::ostream& os, const Grid& grid, const SliceSpec& slice, Emit emit) {
  const auto cells = slice_cells(grid, slice);
  os << "i" << slice.axis_a << ",i" << slice.axis_b << ",x" << slice.axis_a << ",x" << slice.axis_b
     << ",value\n";
  os.precision(17);
  for (CellId c : cells) {
    const auto coords = grid.coords(c);
    const auto center = grid.cell_center(c);
    os << coords[slice.axis_a] << "," << coords[slice.axis_b] << "," << center[slice.axis_a] << ","
       << center[slice.axis_b] << ",";
    emit(c);
    os << "\n";
  }
}

}  // namespace

void write_value_slice(std::ostream& os, const Grid& grid, const ValueFunction& v,
                       const SliceSpec& slice) {
  if (v.size() != grid.state_count()) throw std::invalid_argument("value function does not match the grid");
  write_slice(os, grid, slice, [&](CellId c) { os << v[c]; });
}

void write_controller_slice(std::ostream& os, const Grid& grid, const MemorylessController& mu,
                            const SliceSpec& slice) {
  if (mu.size() != grid.state_count()) throw std::invalid_argument("controller does not match the grid");
  write_slice(os, grid, slice, [&](CellId c) {
    if (mu.is_stop(c)) {
      os << "stop";
    } else if (mu.is_defined(c)) {
      os << mu.input(c);
    }
  });
}

}  // namespace tpra
