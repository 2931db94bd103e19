#include "wlab/analytic.hpp"

#include <cmath>

namespace wlab {

namespace {

void require_line(const ManifoldModel& model, const char* where) {
  if (model.kind != ModelKind::line)
    throw Error(std::string(where) + " requires a flat line model");
}

void require_window(const std::vector<double>& times) {
  if (times.size() < 2) throw Error("analytic path: need at least two times");
  for (std::size_t k = 1; k < times.size(); ++k)
    if (!(times[k] > times[k - 1])) throw Error("analytic path: times must increase");
}

}  // namespace

ScalarField gaussian_density(const ManifoldModel& model, double mean, double sd) {
  if (!(sd > 0.0)) throw Error("gaussian preset needs sd > 0");
  ScalarField rho(model.size());
  double norm = 1.0 / (sd * std::sqrt(2.0 * M_PI));
  for (std::size_t j = 0; j < model.size(); ++j) {
    double z = (model.x[j] - mean) / sd;
    // coordinate-mass density, converted to a density w.r.t. mu
    rho[j] = norm * std::exp(-0.5 * z * z) / model.mu_weight[j];
  }
  normalize_density(model, rho);
  return rho;
}

ScalarField uniform_density(const ManifoldModel& model, double a, double b) {
  if (!(b > a)) throw Error("uniform preset needs b > a");
  ScalarField rho(model.size(), 0.0);
  double v = 1.0 / (b - a);
  for (std::size_t j = 0; j < model.size(); ++j)
    if (model.x[j] >= a - 1e-12 && model.x[j] <= b + 1e-12) rho[j] = v / model.mu_weight[j];
  normalize_density(model, rho);
  return rho;
}

ScalarField bump_density(const ManifoldModel& model, double center, double halfwidth) {
  if (!(halfwidth > 0.0)) throw Error("bump preset needs halfwidth > 0");
  ScalarField rho(model.size(), 0.0);
  for (std::size_t j = 0; j < model.size(); ++j) {
    double u = (model.x[j] - center) / halfwidth;
    if (std::abs(u) < 1.0) rho[j] = std::exp(-1.0 / (1.0 - u * u)) / model.mu_weight[j];
  }
  normalize_density(model, rho);
  return rho;
}

GeodesicPath analytic_gaussian_path(const std::shared_ptr<const ManifoldModel>& model,
                                    double mean0, double sd0, double mean1, double sd1,
                                    const std::vector<double>& times,
                                    const BakryEmeryParams& params) {
  require_line(*model, "analytic_gaussian_path");
  require_window(times);
  if (!(sd0 > 0.0) || !(sd1 > 0.0)) throw Error("analytic_gaussian_path: sd must be positive");

  const ManifoldModel& M = *model;
  const std::size_t G = M.size();
  const double c = times.back() - times.front();
  const double dmean = mean1 - mean0;
  const double dsd = sd1 - sd0;

  GeodesicPath path;
  path.model = model;
  path.params = params;
  path.times = times;
  path.theta = std::sqrt(dmean * dmean + dsd * dsd) / c;

  TransportMap map;
  map.source_grid = M.grid;
  map.map_values.resize(G);
  map.map_derivative.assign(G, sd1 / sd0);
  for (std::size_t j = 0; j < G; ++j)
    map.map_values[j] = mean1 + (sd1 / sd0) * (M.x[j] - mean0);
  map.core.lo = 0;
  map.core.hi = static_cast<std::ptrdiff_t>(G) - 1;
  path.map = map;

  for (std::size_t k = 0; k < times.size(); ++k) {
    double s = (times[k] - times.front()) / c;
    double mean_s = mean0 + s * dmean;
    double sd_s = sd0 + s * dsd;
    ScalarField rho(G), phi(G);
    double norm = 1.0 / (sd_s * std::sqrt(2.0 * M_PI));
    for (std::size_t j = 0; j < G; ++j) {
      double y = M.x[j];
      double z = (y - mean_s) / sd_s;
      rho[j] = norm * std::exp(-0.5 * z * z);
      // velocity field u(y) = dmean + dsd (y - mean_s)/sd_s, integrated in y
      phi[j] = (dmean * y + 0.5 * dsd * (y - mean_s) * (y - mean_s) / sd_s) / c;
    }
    normalize_density(M, rho);
    path.densities.push_back(std::move(rho));
    path.phases.push_back(std::move(phi));
    path.jacobians.push_back(std::vector<double>(G, sd_s / sd0));
  }
  return path;
}

GeodesicPath analytic_uniform_path(const std::shared_ptr<const ManifoldModel>& model, double a0,
                                   double b0, double a1, double b1,
                                   const std::vector<double>& times,
                                   const BakryEmeryParams& params) {
  require_line(*model, "analytic_uniform_path");
  require_window(times);
  if (!(b0 > a0) || !(b1 > a1)) throw Error("analytic_uniform_path: need b > a");

  const ManifoldModel& M = *model;
  const std::size_t G = M.size();
  const double c = times.back() - times.front();
  const double lambda = (b1 - a1) / (b0 - a0);

  GeodesicPath path;
  path.model = model;
  path.params = params;
  path.times = times;

  TransportMap map;
  map.source_grid = M.grid;
  map.map_values.resize(G);
  map.map_derivative.assign(G, lambda);
  for (std::size_t j = 0; j < G; ++j) map.map_values[j] = a1 + lambda * (M.x[j] - a0);
  map.core = find_support(uniform_density(M, a0, b0));
  path.map = map;

  // W2^2 between the uniforms via the map
  {
    double acc = 0.0;
    // int_{a0}^{b0} (T(x)-x)^2 /(b0-a0) dx with T-x affine: exact by Simpson
    auto disp = [&](double x) {
      double d = a1 + lambda * (x - a0) - x;
      return d * d;
    };
    double mid = 0.5 * (a0 + b0);
    acc = (disp(a0) + 4.0 * disp(mid) + disp(b0)) / 6.0;
    path.theta = std::sqrt(acc) / c;
  }

  for (std::size_t k = 0; k < times.size(); ++k) {
    double s = (times[k] - times.front()) / c;
    double as = a0 + s * (a1 - a0);
    double bs = b0 + s * (b1 - b0);
    double slope = 1.0 + s * (lambda - 1.0);
    ScalarField rho(G, 0.0), phi(G);
    for (std::size_t j = 0; j < G; ++j) {
      double y = M.x[j];
      if (y >= as - 1e-12 && y <= bs + 1e-12) rho[j] = 1.0 / (bs - as);
    }
    // velocity of the global affine flow, u(y) = (T - id)(F_s^{-1}(y)),
    // is affine in y; its exact integral from the grid edge gives the phase
    double shift = s * (a1 - lambda * a0);
    double xa = (M.grid.a - shift) / slope;
    double u_at_a = (a1 + lambda * (xa - a0)) - xa;
    double du = (lambda - 1.0) / slope;
    for (std::size_t j = 0; j < G; ++j) {
      double dy = M.x[j] - M.grid.a;
      phi[j] = (u_at_a * dy + 0.5 * du * dy * dy) / c;
    }
    normalize_density(M, rho);
    path.densities.push_back(std::move(rho));
    path.phases.push_back(std::move(phi));
    path.jacobians.push_back(std::vector<double>(G, slope));
  }
  return path;
}

}  // namespace wlab
