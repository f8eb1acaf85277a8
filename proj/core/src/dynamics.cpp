#include "tpra/dynamics.hpp"

#include <array>
#include <cmath>
#include <string>

namespace tpra {

namespace {

constexpr std::size_t kMaxDim = 16;
using Buffer = std::array<double, kMaxDim>;

bool all_finite(std::span<const double> v) {
  for (double d : v) {
    if (!std::isfinite(d)) return false;
  }
  return true;
}

// One classical RK4 step of x' = rhs(x) in place.
template <class Rhs>
void rk4_step(std::span<double> x, double h, Rhs&& rhs) {
  const std::size_t n = x.size();
  Buffer k1{}, k2{}, k3{}, k4{}, tmp{};
  auto as_span = [n](Buffer& b) { return std::span<double>(b.data(), n); };
  rhs(std::span<const double>(x), as_span(k1));
  for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k1[i];
  rhs(std::span<const double>(tmp.data(), n), as_span(k2));
  for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k2[i];
  rhs(std::span<const double>(tmp.data(), n), as_span(k3));
  for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + h * k3[i];
  rhs(std::span<const double>(tmp.data(), n), as_span(k4));
  for (std::size_t i = 0; i < n; ++i) {
    x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
}

void check_arity(const SampledSystem& sys, std::span<const double> x, std::span<const double> u) {
  if (x.size() != sys.dim) throw DimensionError("state dimension mismatch");
  if (u.size() != sys.input_dim) throw DimensionError("input dimension mismatch");
}

}  // namespace

void SampledSystem::validate() const {
  if (dim == 0 || dim > kMaxDim) {
    throw std::invalid_argument("SampledSystem: dimension must be in [1, " +
                                std::to_string(kMaxDim) + "]");
  }
  if (!(sampling_time > 0.0) || !std::isfinite(sampling_time)) {
    throw std::invalid_argument("SampledSystem: sampling time must be positive");
  }
  if (substeps < 1) throw std::invalid_argument("SampledSystem: substeps must be >= 1");
  if (disturbance_halfwidth.size() != dim) {
    throw DimensionError("SampledSystem: disturbance half-width dimension mismatch");
  }
  for (double w : disturbance_halfwidth) {
    if (!(w >= 0.0)) throw std::invalid_argument("SampledSystem: disturbance half-width < 0");
  }
  if (!field) throw std::invalid_argument("SampledSystem: missing vector field");
  if (!growth) throw std::invalid_argument("SampledSystem: missing growth bound");
  if (inputs.empty()) throw std::invalid_argument("SampledSystem: empty input table");
  for (const auto& u : inputs) {
    if (u.size() != input_dim) throw DimensionError("SampledSystem: input table arity mismatch");
  }
}

GrowthBound constant_growth_bound(std::size_t dim, std::vector<double> matrix) {
  if (matrix.size() != dim * dim) throw DimensionError("growth matrix must be n x n");
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      const double v = matrix[i * dim + j];
      if (!std::isfinite(v)) throw std::invalid_argument("growth matrix entry not finite");
      if (i != j && v < 0.0) {
        throw std::invalid_argument("growth matrix off-diagonal entries must be non-negative");
      }
    }
  }
  return [matrix = std::move(matrix)](const HyperRect&, std::span<const double>,
                                      std::span<double> out) {
    std::copy(matrix.begin(), matrix.end(), out.begin());
  };
}

HyperRect ReachBox::box() const {
  std::vector<double> lo(center.size()), hi(center.size());
  for (std::size_t i = 0; i < center.size(); ++i) {
    lo[i] = center[i] - radius[i];
    hi[i] = center[i] + radius[i];
  }
  return HyperRect(std::move(lo), std::move(hi));
}

Point integrate_nominal(const SampledSystem& sys, std::span<const double> x0,
                        std::span<const double> u) {
  check_arity(sys, x0, u);
  Point x(x0.begin(), x0.end());
  const double h = sys.sampling_time / sys.substeps;
  auto rhs = [&](std::span<const double> s, std::span<double> dx) { sys.field(s, u, dx); };
  for (int k = 0; k < sys.substeps; ++k) rk4_step(x, h, rhs);
  if (!all_finite(x)) throw IntegrationFailure("integrate_nominal: non-finite state");
  return x;
}

Point integrate_disturbed(const SampledSystem& sys, std::span<const double> x0,
                          std::span<const double> u,
                          const std::function<std::span<const double>(int)>& disturbance) {
  check_arity(sys, x0, u);
  Point x(x0.begin(), x0.end());
  const double h = sys.sampling_time / sys.substeps;
  for (int k = 0; k < sys.substeps; ++k) {
    const auto w = disturbance(k);
    if (w.size() != sys.dim) throw DimensionError("disturbance dimension mismatch");
    auto rhs = [&](std::span<const double> s, std::span<double> dx) {
      sys.field(s, u, dx);
      for (std::size_t i = 0; i < dx.size(); ++i) dx[i] += w[i];
    };
    rk4_step(x, h, rhs);
  }
  if (!all_finite(x)) throw IntegrationFailure("integrate_disturbed: non-finite state");
  return x;
}

ReachBox reach_box(const SampledSystem& sys, const HyperRect& cell, std::span<const double> u) {
  if (cell.dim() != sys.dim) throw DimensionError("reach_box: cell dimension mismatch");
  const std::size_t n = sys.dim;
  ReachBox out;
  out.center = integrate_nominal(sys, cell.center(), u);

  std::array<double, kMaxDim * kMaxDim> L{};
  sys.growth(cell, u, std::span<double>(L.data(), n * n));
  const auto& w = sys.disturbance_halfwidth;
  auto rhs = [&](std::span<const double> r, std::span<double> dr) {
    for (std::size_t i = 0; i < n; ++i) {
      double acc = w[i];
      for (std::size_t j = 0; j < n; ++j) acc += L[i * n + j] * r[j];
      dr[i] = acc;
    }
  };
  out.radius = cell.half_widths();
  const double h = sys.sampling_time / sys.substeps;
  for (int k = 0; k < sys.substeps; ++k) rk4_step(out.radius, h, rhs);
  if (!all_finite(out.radius)) throw IntegrationFailure("reach_box: radius overflow");
  for (double& r : out.radius) r = std::max(r, 0.0);
  return out;
}

void vehicle_field(std::span<const double> x, std::span<const double> u, std::span<double> dx) {
  const double alpha = std::atan(std::tan(u[1]) / 2.0);
  const double beta = 1.0 / std::cos(alpha);
  dx[0] = x[3] * std::cos(alpha + x[2]) * beta;
  dx[1] = x[3] * std::sin(alpha + x[2]) * beta;
  dx[2] = x[3] * std::tan(u[1]);
  dx[3] = u[0];
}

GrowthBound vehicle_local_growth_bound(double sampling_time, std::vector<double> disturbance) {
  if (disturbance.size() != 4) throw DimensionError("vehicle growth bound: W must be 4-D");
  return [tau = sampling_time, w4 = disturbance[3]](const HyperRect& cell,
                                                    std::span<const double> u,
                                                    std::span<double> L) {
    std::fill(L.begin(), L.end(), 0.0);
    // x4' = u1 + w4 does not depend on the state, so this enclosure is exact.
    const double v_lo = cell.lo(3) + std::min(0.0, (u[0] - w4) * tau);
    const double v_hi = cell.hi(3) + std::max(0.0, (u[0] + w4) * tau);
    const double v_max = std::max(std::abs(v_lo), std::abs(v_hi));
    const double alpha = std::atan(std::tan(u[1]) / 2.0);
    const double beta = 1.0 / std::cos(alpha);
    L[0 * 4 + 2] = v_max * beta;
    L[0 * 4 + 3] = beta;
    L[1 * 4 + 2] = v_max * beta;
    L[1 * 4 + 3] = beta;
    L[2 * 4 + 3] = std::abs(std::tan(u[1]));
  };
}

}  // namespace tpra
