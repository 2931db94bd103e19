#pragma once

#include "wlab/transport.hpp"

namespace wlab {

/// Closed-form geodesic between two Gaussians on a line model, sampled
/// exactly (densities, phases, map, Jacobians). Covers dilations
/// (mean0 == mean1), translations (sd0 == sd1) and the general affine case.
GeodesicPath analytic_gaussian_path(const std::shared_ptr<const ManifoldModel>& model,
                                    double mean0, double sd0, double mean1, double sd1,
                                    const std::vector<double>& times,
                                    const BakryEmeryParams& params);

/// Closed-form geodesic between uniform laws on [a0,b0] and [a1,b1] (line
/// models), realized by the global affine map.
GeodesicPath analytic_uniform_path(const std::shared_ptr<const ManifoldModel>& model, double a0,
                                   double b0, double a1, double b1,
                                   const std::vector<double>& times,
                                   const BakryEmeryParams& params);

/// Sample a Gaussian density w.r.t. mu on the model grid (unit mu-mass).
ScalarField gaussian_density(const ManifoldModel& model, double mean, double sd);

/// Sample a uniform density on [a,b] w.r.t. mu (edges inclusive, unit mass).
ScalarField uniform_density(const ManifoldModel& model, double a, double b);

/// Compactly supported smooth bump centered at c with half-width w.
ScalarField bump_density(const ManifoldModel& model, double center, double halfwidth);

}  // namespace wlab
