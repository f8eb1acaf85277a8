#pragma once

#include <filesystem>
#include <string>

#include "tpra/dynamics.hpp"

namespace fixtures {

inline std::filesystem::path scenario(const std::string& name) {
  return std::filesystem::path(TPRA_SOURCE_DIR) / "scenarios" / name;
}

inline std::filesystem::path data(const std::string& name) {
  return std::filesystem::path(TPRA_SOURCE_DIR) / "tests" / "data" / name;
}

/// x' = f(x, u) with a constant growth matrix and no disturbance.
inline tpra::SampledSystem make_system(std::size_t n, std::size_t m, tpra::VectorField f,
                                       std::vector<double> L, double tau,
                                       std::vector<tpra::Point> inputs,
                                       std::vector<double> w = {}) {
  tpra::SampledSystem sys;
  sys.dim = n;
  sys.input_dim = m;
  sys.field = std::move(f);
  sys.disturbance_halfwidth = w.empty() ? std::vector<double>(n, 0.0) : std::move(w);
  sys.sampling_time = tau;
  sys.growth = tpra::constant_growth_bound(n, std::move(L));
  sys.inputs = std::move(inputs);
  return sys;
}

inline void zero_field(std::span<const double>, std::span<const double>, std::span<double> dx) {
  for (double& d : dx) d = 0.0;
}

inline void input_field(std::span<const double>, std::span<const double> u, std::span<double> dx) {
  for (std::size_t i = 0; i < dx.size(); ++i) dx[i] = u[i];
}

}  // namespace fixtures
