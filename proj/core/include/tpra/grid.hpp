#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tpra/types.hpp"

namespace tpra {

using CellId = StateId;

/// Uniform partition of a bounded domain into half-open cells
/// [lo + k w, lo + (k + 1) w), plus one OUT cell for everything outside.
/// Cell ids are mixed-radix with axis 0 varying fastest; OUT = cell_count().
class Grid {
 public:
  Grid() = default;
  Grid(HyperRect domain, std::vector<std::uint32_t> cells_per_axis,
       std::vector<std::size_t> periodic_axes = {});

  std::size_t dim() const noexcept { return cells_.size(); }
  const HyperRect& domain() const noexcept { return domain_; }
  const std::vector<std::uint32_t>& cells_per_axis() const noexcept { return cells_; }
  const std::vector<double>& widths() const noexcept { return widths_; }
  bool is_periodic(std::size_t axis) const { return periodic_.at(axis) != 0; }
  std::vector<std::size_t> periodic_axes() const;

  /// Number of in-domain cells.
  std::size_t cell_count() const noexcept { return cell_count_; }
  CellId out_cell() const noexcept { return static_cast<CellId>(cell_count_); }
  /// In-domain cells plus OUT.
  std::size_t state_count() const noexcept { return cell_count_ + 1; }

  /// Lower face of slab k on `axis` (k = n gives the domain's upper bound).
  double face(std::size_t axis, std::int64_t k) const noexcept;

  /// Quantizer: periodic coordinates are wrapped first; points outside the
  /// domain map to OUT.
  CellId quantize(std::span<const double> p) const;
  /// Maps periodic coordinates into [lo, hi).
  void wrap(std::span<double> p) const;

  std::vector<std::uint32_t> coords(CellId cell) const;
  CellId cell_at(std::span<const std::uint32_t> coords) const;
  HyperRect cell_box(CellId cell) const;
  Point cell_center(CellId cell) const;

  /// Slab indices whose closed slabs meet the closed interval [a, b] on a
  /// non-periodic axis, as (first, count); the interval must lie in the domain.
  std::pair<std::uint32_t, std::uint32_t> closed_range(std::size_t axis, double a, double b) const;
  /// Same for a periodic axis; indices wrap modulo the slab count and the
  /// result is the full axis when b - a spans a whole period.
  std::vector<std::uint32_t> periodic_range(std::size_t axis, double a, double b) const;

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.domain_ == b.domain_ && a.cells_ == b.cells_ && a.periodic_ == b.periodic_;
  }

 private:
  std::uint32_t slab_of(std::size_t axis, double x) const noexcept;

  HyperRect domain_;
  std::vector<std::uint32_t> cells_;
  std::vector<std::uint8_t> periodic_;
  std::vector<double> widths_;
  std::vector<std::size_t> strides_;
  std::size_t cell_count_ = 0;
};

}  // namespace tpra
