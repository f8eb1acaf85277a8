#include "tpra/ext_cost.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

namespace tpra {

ExtCost::ExtCost(double value) : value_(value) {
  if (std::isnan(value) || value < 0.0) {
    throw std::invalid_argument("ExtCost: value must be non-negative, got " +
                                std::to_string(value));
  }
}

std::ostream& operator<<(std::ostream& os, ExtCost c) {
  if (c.is_infinite()) return os << "inf";
  return os << c.value();
}

}  // namespace tpra
