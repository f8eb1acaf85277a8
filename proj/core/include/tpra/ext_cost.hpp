#pragma once

#include <compare>
#include <iosfwd>
#include <limits>

namespace tpra {

/// Non-negative extended real, i.e. an element of [0, +inf].
///
/// Infinity is stored as the IEEE +inf sentinel. Construction rejects
/// negative values and NaN, so every value is ordered and addition never
/// produces NaN (inf + c = inf).
class ExtCost {
 public:
  constexpr ExtCost() noexcept = default;
  explicit ExtCost(double value);

  static constexpr ExtCost infinity() noexcept {
    return ExtCost(kInf, Unchecked{});
  }
  static constexpr ExtCost zero() noexcept { return ExtCost(); }

  constexpr bool is_finite() const noexcept { return value_ != kInf; }
  constexpr bool is_infinite() const noexcept { return value_ == kInf; }
  constexpr double value() const noexcept { return value_; }

  friend constexpr ExtCost operator+(ExtCost a, ExtCost b) noexcept {
    return ExtCost(a.value_ + b.value_, Unchecked{});
  }
  ExtCost& operator+=(ExtCost other) noexcept {
    value_ += other.value_;
    return *this;
  }

  friend constexpr bool operator==(ExtCost a, ExtCost b) noexcept {
    return a.value_ == b.value_;
  }
  friend constexpr std::strong_ordering operator<=>(ExtCost a, ExtCost b) noexcept {
    if (a.value_ < b.value_) return std::strong_ordering::less;
    if (a.value_ > b.value_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  friend constexpr ExtCost min(ExtCost a, ExtCost b) noexcept { return b < a ? b : a; }
  friend constexpr ExtCost max(ExtCost a, ExtCost b) noexcept { return a < b ? b : a; }

 private:
  struct Unchecked {};
  static constexpr double kInf = std::numeric_limits<double>::infinity();
  constexpr ExtCost(double value, Unchecked) noexcept : value_(value) {}

  double value_ = 0.0;
};

std::ostream& operator<<(std::ostream& os, ExtCost c);

}  // namespace tpra
