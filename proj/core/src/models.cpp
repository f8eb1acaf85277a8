#include <cmath>
#include <stdexcept>

#include "tpra/dynamics.hpp"

namespace tpra {

namespace {

const std::vector<double>& require(const ModelParameters& p, const std::string& key) {
  auto it = p.values.find(key);
  if (it == p.values.end()) throw std::invalid_argument("model parameter '" + key + "' missing");
  return it->second;
}

std::size_t require_count(const ModelParameters& p, const std::string& key) {
  const auto& v = require(p, key);
  if (v.size() != 1 || !(v[0] >= 1.0) || v[0] != std::floor(v[0])) {
    throw std::invalid_argument("model parameter '" + key + "' must be a positive integer");
  }
  return static_cast<std::size_t>(v[0]);
}

}  // namespace

ModelInfo make_model(const std::string& name, const ModelParameters& params) {
  if (name == "vehicle") {
    return ModelInfo{4, 2, vehicle_field, true};
  }
  if (name == "integrator2d") {
    return ModelInfo{2, 2,
                     [](std::span<const double>, std::span<const double> u, std::span<double> dx) {
                       dx[0] = u[0];
                       dx[1] = u[1];
                     },
                     false};
  }
  if (name == "linear") {
    const std::size_t n = require_count(params, "n");
    const std::size_t m = require_count(params, "m");
    auto A = require(params, "A");
    auto B = require(params, "B");
    if (A.size() != n * n) throw DimensionError("linear model: A must be n x n");
    if (B.size() != n * m) throw DimensionError("linear model: B must be n x m");
    return ModelInfo{n, m,
                     [n, m, A = std::move(A), B = std::move(B)](
                         std::span<const double> x, std::span<const double> u, std::span<double> dx) {
                       for (std::size_t i = 0; i < n; ++i) {
                         double acc = 0.0;
                         for (std::size_t j = 0; j < n; ++j) acc += A[i * n + j] * x[j];
                         for (std::size_t j = 0; j < m; ++j) acc += B[i * m + j] * u[j];
                         dx[i] = acc;
                       }
                     },
                     false};
  }
  throw std::invalid_argument("unknown model '" + name + "'");
}

std::vector<std::string> model_names() { return {"vehicle", "integrator2d", "linear"}; }

}  // namespace tpra
