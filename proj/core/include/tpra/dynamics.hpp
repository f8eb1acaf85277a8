#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tpra/types.hpp"

namespace tpra {

/// dx = f(x, u)
using VectorField =
    std::function<void(std::span<const double> x, std::span<const double> u, std::span<double> dx)>;

/// Writes a row-major n x n growth matrix valid for all trajectories that
/// start in `cell` under input `u` over one sampling period.
using GrowthBound =
    std::function<void(const HyperRect& cell, std::span<const double> u, std::span<double> matrix)>;

/// Sampled-data plant  xi' in f(xi, u) + W,  W = [-w, w]  (a box).
struct SampledSystem {
  std::size_t dim = 0;
  std::size_t input_dim = 0;
  VectorField field;
  std::vector<double> disturbance_halfwidth;
  double sampling_time = 0.0;
  int substeps = 5;
  GrowthBound growth;
  /// Finite input set U' as physical input vectors.
  std::vector<Point> inputs;

  void validate() const;
};

/// Growth bound from a fixed, user-certified matrix (off-diagonals >= 0).
GrowthBound constant_growth_bound(std::size_t dim, std::vector<double> matrix);

struct ReachBox {
  Point center;
  std::vector<double> radius;

  HyperRect box() const;
};

class IntegrationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Classical RK4 with `sys.substeps` equal steps over [0, tau], zero disturbance.
Point integrate_nominal(const SampledSystem& sys, std::span<const double> x0,
                        std::span<const double> u);

/// Same stepping with a disturbance held constant over each sub-step.
/// `disturbance(k)` returns the disturbance for sub-step k.
Point integrate_disturbed(const SampledSystem& sys, std::span<const double> x0,
                          std::span<const double> u,
                          const std::function<std::span<const double>(int)>& disturbance);

/// Over-approximation of the time-tau reachable set of `cell` under `u`:
/// nominal flow of the midpoint plus r(tau), where r' = L r + w and r(0) is
/// the cell's half-widths.
ReachBox reach_box(const SampledSystem& sys, const HyperRect& cell, std::span<const double> u);

// Built-in models -----------------------------------------------------------

/// Kinematic vehicle: (x4 cos(a + x3) b, x4 sin(a + x3) b, x4 tan(u2), u1),
/// a = atan(tan(u2) / 2), b = 1 / cos(a).
void vehicle_field(std::span<const double> x, std::span<const double> u, std::span<double> dx);

/// Cell-local growth bound for the vehicle: Jacobian bounds evaluated over the
/// exact velocity enclosure of the cell over one sampling period.
GrowthBound vehicle_local_growth_bound(double sampling_time, std::vector<double> disturbance);

struct ModelParameters {
  std::map<std::string, std::vector<double>> values;
};

struct ModelInfo {
  std::size_t dim = 0;
  std::size_t input_dim = 0;
  VectorField field;
  bool has_local_growth = false;
};

/// Registry lookup: "vehicle", "integrator2d", "linear" (params "A" n x n, "B" n x m, "n", "m").
ModelInfo make_model(const std::string& name, const ModelParameters& params);

/// Names of the built-in vector fields.
std::vector<std::string> model_names();

}  // namespace tpra
