#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "wlab/model.hpp"

namespace wlab {

/// Monotone optimal map in the radial coordinate, sampled on the source grid.
struct TransportMap {
  Grid source_grid;
  std::vector<double> map_values;      // T(x_j)
  std::vector<double> map_derivative;  // T'(x_j), from the change-of-variables relation
  Support core;                        // nodes whose mass level lies inside the tail clamp
};

/// Time-sampled Wasserstein geodesic. Densities are taken w.r.t. mu; the
/// jacobians array holds the Riemannian-volume Jacobian along the map at the
/// source nodes. theta is the constant geodesic speed, equal to
/// W2(endpoints) divided by the window length.
struct GeodesicPath {
  std::shared_ptr<const ManifoldModel> model;
  BakryEmeryParams params;
  std::vector<double> times;
  std::vector<ScalarField> densities;
  std::vector<ScalarField> phases;
  std::vector<std::vector<double>> jacobians;
  std::optional<TransportMap> map;
  double theta = 0.0;

  double window_length() const { return times.back() - times.front(); }
  double normalized(std::size_t k) const {
    return (times[k] - times.front()) / window_length();
  }
  std::size_t steps() const { return times.size(); }
};

/// Quantile coupling: T = G1^{-1} o G0 with cumulative masses of rho * mu.
/// Tail levels outside [1e-9, 1-1e-9] take the nearest core slope.
TransportMap monotone_map(const ManifoldModel& model, const ScalarField& rho0,
                          const ScalarField& rho1);

/// Displacement interpolation along the map; times may be an affine window
/// [t0, t1] (normalized internally to [0, 1]).
GeodesicPath interpolate_path(const std::shared_ptr<const ManifoldModel>& model,
                              const TransportMap& map, const ScalarField& rho0,
                              const std::vector<double>& times, const BakryEmeryParams& params);

/// Phase whose gradient reproduces the transport velocity at normalized time
/// s, fixed by phi(left boundary) = 0. window_length rescales the velocity
/// for non-unit windows.
ScalarField recover_phase(const ManifoldModel& model, const TransportMap& map, double s,
                          double window_length = 1.0);

/// Hopf-Lax evolution of (phi0, rho0) from times[0]: phases by inf-convolution
/// over grid nodes with 3-point quadratic refinement, densities along
/// characteristics. Throws on caustic formation (reports the crossing time).
GeodesicPath hopf_lax_evolve(const std::shared_ptr<const ManifoldModel>& model,
                             const ScalarField& phi0, const ScalarField& rho0,
                             const std::vector<double>& times, const BakryEmeryParams& params);

struct SpeedReport {
  double theta = 0.0;
  std::vector<double> energy;
  double max_relative_deviation = 0.0;
  bool constant = true;  // false when the deviation exceeds 1e-3
};
SpeedReport wasserstein_speed(const GeodesicPath& path);

/// Exact self-similar Gaussian solution of the geodesic equations on the
/// line (n = 1 restriction): variance 2t^2, phase x^2/(2t).
GeodesicPath model_gaussian_path(int n, const std::vector<double>& times, const Grid& grid);

/// Mass of rho against mu (should be 1 for path densities).
double density_mass(const ManifoldModel& model, const ScalarField& rho);

/// Normalize rho to unit mu-mass in place; returns the original mass.
double normalize_density(const ManifoldModel& model, ScalarField& rho);

}  // namespace wlab
