#include "tpra/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace tpra {

namespace {

double wrap_coordinate(double x, double lo, double hi) {
  if (x >= lo && x < hi) return x;
  const double period = hi - lo;
  x = lo + std::fmod(x - lo, period);
  if (x < lo) x += period;
  if (x >= hi) x = lo;
  return x;
}

}  // namespace

Grid::Grid(HyperRect domain, std::vector<std::uint32_t> cells_per_axis,
           std::vector<std::size_t> periodic_axes)
    : domain_(std::move(domain)), cells_(std::move(cells_per_axis)) {
  if (cells_.size() != domain_.dim()) throw DimensionError("Grid: cells_per_axis dimension mismatch");
  periodic_.assign(cells_.size(), 0);
  for (std::size_t a : periodic_axes) {
    if (a >= cells_.size()) throw std::out_of_range("Grid: periodic axis out of range");
    periodic_[a] = 1;
  }
  widths_.resize(cells_.size());
  strides_.resize(cells_.size());
  std::size_t count = 1;
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    if (cells_[i] == 0) throw std::invalid_argument("Grid: cells per axis must be positive");
    widths_[i] = (domain_.hi(i) - domain_.lo(i)) / cells_[i];
    if (!(widths_[i] > 0.0)) throw std::invalid_argument("Grid: cell widths must be positive");
    strides_[i] = count;
    if (count > (std::numeric_limits<CellId>::max() - 1) / cells_[i]) {
      throw std::invalid_argument("Grid: too many cells for 32-bit cell ids");
    }
    count *= cells_[i];
  }
  cell_count_ = count;
}

std::vector<std::size_t> Grid::periodic_axes() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < periodic_.size(); ++i) {
    if (periodic_[i]) out.push_back(i);
  }
  return out;
}

double Grid::face(std::size_t axis, std::int64_t k) const noexcept {
  if (k >= static_cast<std::int64_t>(cells_[axis])) return domain_.hi(axis);
  return domain_.lo(axis) + static_cast<double>(k) * widths_[axis];
}

std::uint32_t Grid::slab_of(std::size_t axis, double x) const noexcept {
  // x is in [lo, hi); the correction loops make the result agree with face().
  const std::int64_t n = cells_[axis];
  std::int64_t k = static_cast<std::int64_t>(std::floor((x - domain_.lo(axis)) / widths_[axis]));
  k = std::clamp<std::int64_t>(k, 0, n - 1);
  while (k > 0 && x < face(axis, k)) --k;
  while (k < n - 1 && x >= face(axis, k + 1)) ++k;
  return static_cast<std::uint32_t>(k);
}

void Grid::wrap(std::span<double> p) const {
  for (std::size_t i = 0; i < dim(); ++i) {
    if (periodic_[i]) p[i] = wrap_coordinate(p[i], domain_.lo(i), domain_.hi(i));
  }
}

CellId Grid::quantize(std::span<const double> p) const {
  if (p.size() != dim()) throw DimensionError("Grid::quantize: dimension mismatch");
  std::size_t id = 0;
  for (std::size_t i = 0; i < dim(); ++i) {
    double x = p[i];
    if (!std::isfinite(x)) return out_cell();
    if (periodic_[i]) {
      x = wrap_coordinate(x, domain_.lo(i), domain_.hi(i));
    } else if (x < domain_.lo(i) || x >= domain_.hi(i)) {
      return out_cell();
    }
    id += slab_of(i, x) * strides_[i];
  }
  return static_cast<CellId>(id);
}

std::vector<std::uint32_t> Grid::coords(CellId cell) const {
  if (cell >= cell_count_) throw std::out_of_range("Grid::coords: cell out of range");
  std::vector<std::uint32_t> c(dim());
  std::size_t rest = cell;
  for (std::size_t i = 0; i < dim(); ++i) {
    c[i] = static_cast<std::uint32_t>(rest % cells_[i]);
    rest /= cells_[i];
  }
  return c;
}

CellId Grid::cell_at(std::span<const std::uint32_t> coords) const {
  if (coords.size() != dim()) throw DimensionError("Grid::cell_at: dimension mismatch");
  std::size_t id = 0;
  for (std::size_t i = 0; i < dim(); ++i) {
    if (coords[i] >= cells_[i]) throw std::out_of_range("Grid::cell_at: index out of range");
    id += coords[i] * strides_[i];
  }
  return static_cast<CellId>(id);
}

HyperRect Grid::cell_box(CellId cell) const {
  const auto c = coords(cell);
  std::vector<double> lo(dim()), hi(dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    lo[i] = face(i, c[i]);
    hi[i] = face(i, static_cast<std::int64_t>(c[i]) + 1);
  }
  return HyperRect(std::move(lo), std::move(hi));
}

Point Grid::cell_center(CellId cell) const { return cell_box(cell).center(); }

std::pair<std::uint32_t, std::uint32_t> Grid::closed_range(std::size_t axis, double a,
                                                           double b) const {
  const std::int64_t n = cells_[axis];
  const double lo = domain_.lo(axis);
  const double w = widths_[axis];
  // first: smallest k whose upper face reaches a
  std::int64_t first = std::clamp<std::int64_t>(static_cast<std::int64_t>(std::floor((a - lo) / w)), 0, n - 1);
  while (first > 0 && face(axis, first) >= a) --first;
  while (first < n - 1 && face(axis, first + 1) < a) ++first;
  // last: largest k whose lower face does not exceed b
  std::int64_t last = std::clamp<std::int64_t>(static_cast<std::int64_t>(std::floor((b - lo) / w)), 0, n - 1);
  while (last < n - 1 && face(axis, last + 1) <= b) ++last;
  while (last > 0 && face(axis, last) > b) --last;
  if (last < first) last = first;
  return {static_cast<std::uint32_t>(first), static_cast<std::uint32_t>(last - first + 1)};
}

std::vector<std::uint32_t> Grid::periodic_range(std::size_t axis, double a, double b) const {
  const std::uint32_t n = cells_[axis];
  const double lo = domain_.lo(axis);
  const double hi = domain_.hi(axis);
  const double period = hi - lo;
  std::vector<std::uint32_t> out;
  if (!(b - a < period)) {
    out.resize(n);
    for (std::uint32_t k = 0; k < n; ++k) out[k] = k;
    return out;
  }
  // Shift a into [lo, hi) and carry b along.
  const double shift = std::floor((a - lo) / period) * period;
  double a0 = a - shift;
  double b0 = b - shift;
  if (a0 >= hi) {
    a0 -= period;
    b0 -= period;
  }
  if (a0 < lo) {
    a0 += period;
    b0 += period;
  }
  const auto [first, first_count] = closed_range(axis, a0, std::min(b0, std::nextafter(hi, lo)));
  std::int64_t last_unwrapped = static_cast<std::int64_t>(first) + first_count - 1;
  if (b0 >= hi) {
    // The interval runs across the seam; the upper face of slab n - 1
    // coincides with the lower face of slab 0.
    const double b1 = b0 - period;
    const auto [f2, c2] = closed_range(axis, lo, b1);
    last_unwrapped = static_cast<std::int64_t>(n) + f2 + c2 - 1;
  }
  const std::int64_t count =
      std::min<std::int64_t>(last_unwrapped - static_cast<std::int64_t>(first) + 1, n);
  out.reserve(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i) {
    out.push_back(static_cast<std::uint32_t>((first + i) % n));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace tpra
