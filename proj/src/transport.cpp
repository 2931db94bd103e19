#include "wlab/transport.hpp"

#include <algorithm>
#include <cmath>

#include "wlab/numerics.hpp"

namespace wlab {

namespace {

constexpr double kTailLevel = 1e-9;
constexpr double kDensityFloor = 1e-300;

/// Coordinate mass density f = rho * omega * exp(-V): the 1D density of the
/// measure rho d(mu) in the radial coordinate.
ScalarField mass_density(const ManifoldModel& model, const ScalarField& rho) {
  ScalarField f(rho.size());
  for (std::size_t j = 0; j < rho.size(); ++j) f[j] = rho[j] * model.mu_weight[j];
  return f;
}

void check_normalized(const ManifoldModel& model, const ScalarField& rho, const char* which) {
  double mass = density_mass(model, rho);
  if (std::abs(mass - 1.0) > 1e-4)
    throw Error(std::string("endpoint density ") + which + " is not mu-normalized (mass " +
                std::to_string(mass) + ")");
  for (double v : rho)
    if (v < 0.0) throw Error(std::string("endpoint density ") + which + " is negative somewhere");
}

/// Resample scattered strictly-monotone (y_j, v_j) samples onto the grid.
/// Nodes outside the sampled range get zero. Duplicated abscissae (dead map
/// tails) are dropped before fitting.
ScalarField resample_to_grid(const ManifoldModel& model, const std::vector<double>& y,
                             const std::vector<double>& v) {
  std::vector<double> ys, vs;
  ys.reserve(y.size());
  vs.reserve(y.size());
  const double span = model.grid.b - model.grid.a;
  for (std::size_t j = 0; j < y.size(); ++j) {
    if (!ys.empty() && !(y[j] > ys.back() + 1e-14 * span)) continue;
    ys.push_back(y[j]);
    vs.push_back(v[j]);
  }
  if (ys.size() < 4) throw Error("resample: degenerate mapped sample set");
  Pchip interp(ys, vs);
  ScalarField out(model.size(), 0.0);
  for (std::size_t i = 0; i < model.size(); ++i) {
    double xi = model.x[i];
    if (xi < ys.front() || xi > ys.back()) continue;
    out[i] = std::max(0.0, interp(xi));
  }
  return out;
}

Pchip omega_interpolant(const ManifoldModel& model) {
  return Pchip(model.x, model.omega);
}

}  // namespace

double density_mass(const ManifoldModel& model, const ScalarField& rho) {
  ScalarField f = mass_density(model, rho);
  return trapezoid(f, model.h(), find_support(f));
}

double normalize_density(const ManifoldModel& model, ScalarField& rho) {
  double mass = density_mass(model, rho);
  if (!(mass > 0.0)) throw Error("cannot normalize a density with nonpositive mass");
  for (double& v : rho) v /= mass;
  return mass;
}

TransportMap monotone_map(const ManifoldModel& model, const ScalarField& rho0,
                          const ScalarField& rho1) {
  if (rho0.size() != model.size() || rho1.size() != model.size())
    throw Error("monotone_map: density length does not match grid");
  check_normalized(model, rho0, "rho0");
  check_normalized(model, rho1, "rho1");

  const std::size_t G = model.size();
  const double h = model.h();
  ScalarField f0 = mass_density(model, rho0);
  ScalarField f1 = mass_density(model, rho1);

  // jump-aware cumulative masses: support-edge nodes carry half weight, so
  // the trapezoid CDF of an inclusive-edge sampled indicator is exact at
  // interior nodes
  auto cdf_of = [&](const ScalarField& f) {
    ScalarField fh = f;
    Support s = find_support(f);
    if (!s.empty()) {
      fh[static_cast<std::size_t>(s.lo)] *= 0.5;
      fh[static_cast<std::size_t>(s.hi)] *= 0.5;
    }
    ScalarField cdf = cumulative_trapezoid(fh, h);
    // snap the support-edge nodes to their one-sided limits: no mass sits
    // strictly below (above) the edge
    if (!s.empty()) {
      if (s.lo > 0) cdf[static_cast<std::size_t>(s.lo)] = cdf[static_cast<std::size_t>(s.lo) - 1];
      cdf[static_cast<std::size_t>(s.hi)] = cdf.back();
    }
    return cdf;
  };
  ScalarField G0 = cdf_of(f0);
  ScalarField G1 = cdf_of(f1);
  double total0 = G0.back(), total1 = G1.back();
  for (double& v : G0) v /= total0;
  for (double& v : G1) v /= total1;

  // boundary-touching support is not displacement-admissible on these models
  auto check_boundary = [&](const ScalarField& f, const char* which) {
    double mx = *std::max_element(f.begin(), f.end());
    if (f.front() > 1e-6 * mx || f.back() > 1e-6 * mx)
      throw Error(std::string("monotone_map: support of ") + which +
                  " touches the domain boundary");
  };
  check_boundary(f0, "rho0");
  check_boundary(f1, "rho1");

  TransportMap map;
  map.source_grid = model.grid;
  map.map_values.resize(G);
  map.map_derivative.assign(G, 1.0);

  Pchip f1_interp(model.x, f1);
  std::ptrdiff_t lo = -1, hi = -1;
  for (std::size_t j = 0; j < G; ++j) {
    double level = G0[j];
    if (level < kTailLevel || level > 1.0 - kTailLevel) continue;
    double T = invert_monotone_pl(model.x, G1, level);
    double fs = f0[j];
    double ft = f1_interp(T);
    if (fs > kDensityFloor && ft > kDensityFloor) {
      map.map_values[j] = T;
      map.map_derivative[j] = (fs / ft) * (total1 / total0);
      if (lo < 0) lo = static_cast<std::ptrdiff_t>(j);
      hi = static_cast<std::ptrdiff_t>(j);
    }
  }
  if (lo < 0) throw Error("monotone_map: source density has no resolvable core");
  map.core.lo = lo;
  map.core.hi = hi;

  // affine continuation with the edge slope outside the clamped core,
  // held inside the domain
  {
    auto l = static_cast<std::size_t>(lo);
    auto r = static_cast<std::size_t>(hi);
    for (std::ptrdiff_t j = lo - 1; j >= 0; --j) {
      auto u = static_cast<std::size_t>(j);
      map.map_derivative[u] = map.map_derivative[l];
      map.map_values[u] = std::max(
          model.grid.a, map.map_values[l] + map.map_derivative[l] * (model.x[u] - model.x[l]));
    }
    for (std::ptrdiff_t j = hi + 1; j < static_cast<std::ptrdiff_t>(G); ++j) {
      auto u = static_cast<std::size_t>(j);
      map.map_derivative[u] = map.map_derivative[r];
      map.map_values[u] = std::min(
          model.grid.b, map.map_values[r] + map.map_derivative[r] * (model.x[u] - model.x[r]));
    }
  }

  for (std::size_t j = 0; j < G; ++j) {
    if (map.map_derivative[j] < 0.0) throw Error("monotone_map: negative map derivative");
    if (map.map_values[j] < model.grid.a - 1e-9 || map.map_values[j] > model.grid.b + 1e-9)
      throw Error("monotone_map: map exits the model domain");
  }
  return map;
}

ScalarField recover_phase(const ManifoldModel& model, const TransportMap& map, double s,
                          double window_length) {
  const std::size_t G = model.size();
  if (!(window_length > 0.0)) throw Error("recover_phase: window length must be positive");

  // forward positions and velocities at the source nodes; outside the core
  // the velocity holds the nearest core value (no mass lives there)
  std::vector<double> y(G), u(G);
  auto cl = static_cast<std::size_t>(map.core.lo);
  auto cr = static_cast<std::size_t>(map.core.hi);
  for (std::size_t j = 0; j < G; ++j) {
    y[j] = model.x[j] + s * (map.map_values[j] - model.x[j]);
    std::size_t jc = std::min(std::max(j, cl), cr);
    u[j] = (map.map_values[jc] - model.x[jc]) / window_length;
  }
  // velocity on the grid via the inverse map; dead tails keep the edge value
  std::vector<double> ys, us;
  ys.reserve(G);
  us.reserve(G);
  const double span = model.grid.b - model.grid.a;
  for (std::size_t j = 0; j < G; ++j) {
    if (!ys.empty() && !(y[j] > ys.back() + 1e-14 * span)) continue;
    ys.push_back(y[j]);
    us.push_back(u[j]);
  }
  Pchip u_interp(ys, us);
  ScalarField u_grid(G);
  for (std::size_t i = 0; i < G; ++i) u_grid[i] = u_interp(model.x[i]);
  return cumulative_integral(u_grid, model.h());
}

GeodesicPath interpolate_path(const std::shared_ptr<const ManifoldModel>& model,
                              const TransportMap& map, const ScalarField& rho0,
                              const std::vector<double>& times, const BakryEmeryParams& params) {
  if (times.size() < 2) throw Error("interpolate_path: need at least two times");
  for (std::size_t k = 1; k < times.size(); ++k)
    if (!(times[k] > times[k - 1])) throw Error("interpolate_path: times must increase");

  const ManifoldModel& M = *model;
  const std::size_t G = M.size();
  const double c = times.back() - times.front();

  GeodesicPath path;
  path.model = model;
  path.params = params;
  path.times = times;
  path.map = map;

  ScalarField f0 = mass_density(M, rho0);
  Pchip omega_i = omega_interpolant(M);

  // theta: endpoint W2 from the map, divided by the window length
  {
    ScalarField integrand(G);
    for (std::size_t j = 0; j < G; ++j) {
      double d = map.map_values[j] - M.x[j];
      integrand[j] = d * d * f0[j];
    }
    path.theta = std::sqrt(trapezoid(integrand, M.h(), find_support(f0))) / c;
  }

  for (std::size_t k = 0; k < times.size(); ++k) {
    double s = (times[k] - times.front()) / c;
    std::vector<double> y(G), Fp(G), jac(G);
    for (std::size_t j = 0; j < G; ++j) {
      y[j] = M.x[j] + s * (map.map_values[j] - M.x[j]);
      Fp[j] = 1.0 + s * (map.map_derivative[j] - 1.0);
      jac[j] = Fp[j] * (M.omega[j] > 0.0 ? omega_i(y[j]) / M.omega[j] : 1.0);
    }
    for (std::ptrdiff_t j = map.core.lo; j <= map.core.hi; ++j)
      if (!(Fp[static_cast<std::size_t>(j)] > 0.0))
        throw Error("interpolate_path: nonpositive Jacobian at t = " + std::to_string(times[k]));

    ScalarField rho;
    if (s == 0.0) {
      rho = rho0;
    } else {
      // resample over the mapped source support only, so densities with
      // sharp edges stay exactly zero beyond the transported mass
      Support sup = find_support(f0);
      std::vector<double> ys(y.begin() + sup.lo, y.begin() + sup.hi + 1);
      std::vector<double> fvals(ys.size());
      for (std::size_t j = 0; j < ys.size(); ++j) {
        auto u = static_cast<std::size_t>(sup.lo) + j;
        fvals[j] = f0[u] / Fp[u];
      }
      ScalarField f_grid = resample_to_grid(M, ys, fvals);
      rho.assign(G, 0.0);
      for (std::size_t i = 0; i < G; ++i) rho[i] = f_grid[i] / M.mu_weight[i];
      normalize_density(M, rho);
    }
    path.densities.push_back(std::move(rho));
    path.phases.push_back(recover_phase(M, map, s, c));
    path.jacobians.push_back(std::move(jac));
  }
  return path;
}

GeodesicPath hopf_lax_evolve(const std::shared_ptr<const ManifoldModel>& model,
                             const ScalarField& phi0, const ScalarField& rho0,
                             const std::vector<double>& times, const BakryEmeryParams& params) {
  const ManifoldModel& M = *model;
  const std::size_t G = M.size();
  if (phi0.size() != G || rho0.size() != G) throw Error("hopf_lax_evolve: field length mismatch");
  if (times.size() < 2) throw Error("hopf_lax_evolve: need at least two times");
  for (std::size_t k = 1; k < times.size(); ++k)
    if (!(times[k] > times[k - 1])) throw Error("hopf_lax_evolve: times must increase");
  check_normalized(M, rho0, "rho0");

  const double t0 = times.front();
  ScalarField f0 = mass_density(M, rho0);
  ScalarField dphi0 = derivative1(phi0, M.h());
  ScalarField ddphi0 = derivative2(phi0, M.h());
  Support core = find_support(f0, 1e-12);
  Pchip omega_i = omega_interpolant(M);

  GeodesicPath path;
  path.model = model;
  path.params = params;
  path.times = times;

  for (std::size_t k = 0; k < times.size(); ++k) {
    double dt = times[k] - t0;
    if (dt == 0.0) {
      path.densities.push_back(rho0);
      path.phases.push_back(phi0);
      path.jacobians.push_back(std::vector<double>(G, 1.0));
      continue;
    }

    // Hopf-Lax inf-convolution with 3-point quadratic refinement
    ScalarField phi(G);
    for (std::size_t i = 0; i < G; ++i) {
      double xi = M.x[i];
      double best = std::numeric_limits<double>::infinity();
      std::size_t bj = 0;
      for (std::size_t j = 0; j < G; ++j) {
        double dy = xi - M.x[j];
        double v = phi0[j] + dy * dy / (2.0 * dt);
        if (v < best) {
          best = v;
          bj = j;
        }
      }
      if (bj > 0 && bj + 1 < G) {
        auto g = [&](std::size_t j) {
          double dy = xi - M.x[j];
          return phi0[j] + dy * dy / (2.0 * dt);
        };
        double gm = g(bj - 1), g0 = g(bj), gp = g(bj + 1);
        double curv = gm - 2.0 * g0 + gp;
        if (curv > 0.0) best = g0 - (gm - gp) * (gm - gp) / (8.0 * curv);
      }
      phi[i] = best;
    }
    path.phases.push_back(std::move(phi));

    // characteristics carry the density
    std::vector<double> y(G), Xp(G), jac(G);
    for (std::size_t j = 0; j < G; ++j) {
      y[j] = M.x[j] + dt * dphi0[j];
      Xp[j] = 1.0 + dt * ddphi0[j];
      jac[j] = Xp[j];
    }
    for (std::ptrdiff_t j = core.lo; j <= core.hi; ++j) {
      if (!(Xp[static_cast<std::size_t>(j)] > 0.0))
        throw Error("hopf_lax_evolve: caustic (characteristic crossing) at t = " +
                    std::to_string(times[k]));
    }
    for (std::size_t j = 0; j < G; ++j) {
      double yj = std::clamp(y[j], M.grid.a, M.grid.b);
      jac[j] = Xp[j] * (M.omega[j] > 0.0 ? omega_i(yj) / M.omega[j] : 1.0);
    }

    Support sup = find_support(f0);
    std::vector<double> ys(y.begin() + sup.lo, y.begin() + sup.hi + 1);
    std::vector<double> fvals(ys.size());
    for (std::size_t j = 0; j < ys.size(); ++j) {
      auto u = static_cast<std::size_t>(sup.lo) + j;
      fvals[j] = Xp[u] > 0.0 ? f0[u] / Xp[u] : 0.0;
    }
    ScalarField f_grid = resample_to_grid(M, ys, fvals);
    ScalarField rho(G, 0.0);
    for (std::size_t i = 0; i < G; ++i) rho[i] = f_grid[i] / M.mu_weight[i];
    normalize_density(M, rho);
    path.densities.push_back(std::move(rho));
    path.jacobians.push_back(std::move(jac));
  }

  // the map to the window end
  TransportMap map;
  map.source_grid = M.grid;
  map.map_values.resize(G);
  map.map_derivative.resize(G);
  double dt = times.back() - t0;
  for (std::size_t j = 0; j < G; ++j) {
    map.map_values[j] = M.x[j] + dt * dphi0[j];
    map.map_derivative[j] = 1.0 + dt * ddphi0[j];
  }
  map.core = core;
  path.map = map;

  SpeedReport sr = wasserstein_speed(path);
  path.theta = sr.theta;
  return path;
}

SpeedReport wasserstein_speed(const GeodesicPath& path) {
  const ManifoldModel& M = *path.model;
  SpeedReport out;
  if (path.steps() < 2) throw Error("wasserstein_speed: need at least two time samples");
  for (std::size_t k = 0; k < path.steps(); ++k) {
    ScalarField grad = derivative1(path.phases[k], M.h());
    ScalarField integrand(M.size());
    for (std::size_t j = 0; j < M.size(); ++j)
      integrand[j] = grad[j] * grad[j] * path.densities[k][j];
    out.energy.push_back(integrate_mu(M, integrand, find_support(path.densities[k])));
  }
  double mean = 0.0;
  for (double e : out.energy) mean += e;
  mean /= static_cast<double>(out.energy.size());
  out.theta = std::sqrt(std::max(0.0, mean));
  for (double e : out.energy)
    out.max_relative_deviation =
        std::max(out.max_relative_deviation, std::abs(e - mean) / (mean > 0 ? mean : 1.0));
  out.constant = out.max_relative_deviation <= 1e-3;
  return out;
}

GeodesicPath model_gaussian_path(int n, const std::vector<double>& times, const Grid& grid) {
  if (n != 1) throw Error("model_gaussian_path: only the n = 1 line restriction is supported");
  if (times.front() <= 0.0) throw Error("model_gaussian_path: times must be strictly positive");

  ModelSpec spec;
  spec.kind = ModelKind::line;
  spec.n = 1;
  spec.grid = grid;
  auto model = std::make_shared<const ManifoldModel>(build_model(spec));
  const std::size_t G = model->size();

  // grid must hold all but 1e-8 of the mass at the widest time
  double sd = std::sqrt(2.0) * times.back();
  double reach = 5.8 * sd;  // Phi(-5.73) ~ 5e-9 per tail
  if (grid.a > -reach || grid.b < reach)
    throw Error("model_gaussian_path: grid too narrow for the requested times");

  GeodesicPath path;
  path.model = model;
  path.times = times;
  path.theta = std::sqrt(2.0);

  double t0 = times.front(), t1 = times.back();
  TransportMap map;
  map.source_grid = grid;
  map.map_values.resize(G);
  map.map_derivative.assign(G, t1 / t0);
  for (std::size_t j = 0; j < G; ++j) map.map_values[j] = model->x[j] * (t1 / t0);
  map.core.lo = 0;
  map.core.hi = static_cast<std::ptrdiff_t>(G) - 1;
  path.map = map;

  for (double t : times) {
    ScalarField rho(G), phi(G);
    double norm = std::sqrt(4.0 * M_PI * t * t);
    for (std::size_t j = 0; j < G; ++j) {
      double x = model->x[j];
      rho[j] = std::exp(-x * x / (4.0 * t * t)) / norm;
      phi[j] = x * x / (2.0 * t);
    }
    path.densities.push_back(std::move(rho));
    path.phases.push_back(std::move(phi));
    path.jacobians.push_back(std::vector<double>(G, t / t0));
  }
  return path;
}

}  // namespace wlab
