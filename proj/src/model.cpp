#include "wlab/model.hpp"

#include <cmath>

#include "wlab/numerics.hpp"

namespace wlab {

namespace {
constexpr double kPoleMargin = 0.05;  // sphere domains must stay this far from 0 and pi
}

std::string to_string(ModelKind k) {
  switch (k) {
    case ModelKind::line: return "line";
    case ModelKind::weighted_line: return "weighted_line";
    case ModelKind::sphere_radial: return "sphere_radial";
    case ModelKind::hyperbolic_radial: return "hyperbolic_radial";
  }
  return "?";
}

ModelKind model_kind_from_string(const std::string& s) {
  if (s == "line") return ModelKind::line;
  if (s == "weighted_line") return ModelKind::weighted_line;
  if (s == "sphere_radial") return ModelKind::sphere_radial;
  if (s == "hyperbolic_radial") return ModelKind::hyperbolic_radial;
  throw Error("unknown model kind: " + s);
}

static void sample_potential(const PotentialSpec& spec, const std::vector<double>& x,
                             ScalarField& V, ScalarField& Vp, ScalarField& Vpp, double h) {
  const std::size_t n = x.size();
  V.assign(n, 0.0);
  Vp.assign(n, 0.0);
  Vpp.assign(n, 0.0);
  switch (spec.preset) {
    case PotentialSpec::Preset::zero:
      return;
    case PotentialSpec::Preset::quadratic:
      for (std::size_t j = 0; j < n; ++j) {
        V[j] = spec.coeff * x[j] * x[j];
        Vp[j] = 2.0 * spec.coeff * x[j];
        Vpp[j] = 2.0 * spec.coeff;
      }
      return;
    case PotentialSpec::Preset::quartic:
      for (std::size_t j = 0; j < n; ++j) {
        V[j] = spec.coeff * std::pow(x[j], 4);
        Vp[j] = 4.0 * spec.coeff * std::pow(x[j], 3);
        Vpp[j] = 12.0 * spec.coeff * x[j] * x[j];
      }
      return;
    case PotentialSpec::Preset::cosine:
      for (std::size_t j = 0; j < n; ++j) {
        V[j] = spec.coeff * std::cos(spec.freq * x[j]);
        Vp[j] = -spec.coeff * spec.freq * std::sin(spec.freq * x[j]);
        Vpp[j] = -spec.coeff * spec.freq * spec.freq * std::cos(spec.freq * x[j]);
      }
      return;
    case PotentialSpec::Preset::table:
      if (spec.table.size() != n) throw Error("potential table length does not match grid size");
      V = spec.table;
      require_finite(V, "potential table");
      Vp = derivative1(V, h);
      Vpp = derivative2(V, h);
      return;
  }
}

ManifoldModel build_model(const ModelSpec& spec) {
  spec.grid.validate();
  if (spec.n < 1) throw Error("dimension n must be >= 1");

  ManifoldModel m;
  m.kind = spec.kind;
  m.n = spec.n;
  m.grid = spec.grid;
  m.x = spec.grid.nodes();
  const std::size_t G = m.x.size();
  m.omega.assign(G, 1.0);
  m.angular.assign(G, 0.0);

  switch (spec.kind) {
    case ModelKind::line:
    case ModelKind::weighted_line:
      if (spec.n != 1) throw Error("line models are one-dimensional");
      m.ric_radial = 0.0;
      break;
    case ModelKind::sphere_radial:
      if (spec.grid.a < kPoleMargin || spec.grid.b > M_PI - kPoleMargin)
        throw Error("sphere_radial domain must lie inside (0.05, pi-0.05)");
      if (spec.n < 2) throw Error("sphere_radial needs n >= 2");
      for (std::size_t j = 0; j < G; ++j) {
        m.omega[j] = std::pow(std::sin(m.x[j]), spec.n - 1);
        m.angular[j] = 1.0 / std::tan(m.x[j]);
      }
      m.ric_radial = spec.n - 1;
      break;
    case ModelKind::hyperbolic_radial:
      if (spec.grid.a <= 0.0) throw Error("hyperbolic_radial domain must lie inside (0, inf)");
      if (spec.n < 2) throw Error("hyperbolic_radial needs n >= 2");
      for (std::size_t j = 0; j < G; ++j) {
        m.omega[j] = std::pow(std::sinh(m.x[j]), spec.n - 1);
        m.angular[j] = 1.0 / std::tanh(m.x[j]);
      }
      m.ric_radial = -(spec.n - 1);
      break;
  }

  if (spec.kind != ModelKind::weighted_line &&
      spec.potential.preset != PotentialSpec::Preset::zero)
    throw Error("only weighted_line models carry a potential");
  sample_potential(spec.potential, m.x, m.V, m.Vp, m.Vpp, m.grid.spacing());
  require_finite(m.V, "potential");

  m.mu_weight.assign(G, 0.0);
  for (std::size_t j = 0; j < G; ++j) {
    m.mu_weight[j] = m.omega[j] * std::exp(-m.V[j]);
    if (!(m.omega[j] > 0.0)) throw Error("volume density must be positive on the grid");
  }
  return m;
}

void validate_params(const ManifoldModel& model, const BakryEmeryParams& params) {
  if (params.m_infinite()) return;
  if (params.m < model.n) throw Error("parameter m must satisfy m >= n");
  if (params.m == static_cast<double>(model.n) && model.weighted())
    throw Error("m = n requires a constant potential");
}

CurvatureProfile curvature_profile(const ManifoldModel& model, const BakryEmeryParams& params) {
  validate_params(model, params);
  const std::size_t G = model.size();
  CurvatureProfile c;
  c.ric.assign(G, model.ric_radial);
  c.ric_mn = c.ric;
  if (!model.weighted()) return c;
  for (std::size_t j = 0; j < G; ++j) {
    c.ric_mn[j] += model.Vpp[j];
    if (!params.m_infinite())
      c.ric_mn[j] -= model.Vp[j] * model.Vp[j] / (params.m - model.n);
  }
  return c;
}

ScalarField field_derivative(const ManifoldModel& model, const ScalarField& f) {
  return derivative1(f, model.h());
}

ScalarField field_second_derivative(const ManifoldModel& model, const ScalarField& f) {
  return derivative2(f, model.h());
}

ScalarField apply_witten_laplacian(const ManifoldModel& model, const ScalarField& f) {
  if (f.size() != model.size()) throw Error("field length does not match grid");
  ScalarField d1 = derivative1(f, model.h());
  ScalarField d2 = derivative2(f, model.h());
  const std::size_t G = model.size();
  ScalarField out(G);
  const double nm1 = model.n - 1;
  for (std::size_t j = 0; j < G; ++j) {
    out[j] = d2[j] + (nm1 * model.angular[j] - model.Vp[j]) * d1[j];
    if (!std::isfinite(out[j])) throw Error("non-finite value in Witten Laplacian");
  }
  return out;
}

ScalarField gamma2_field(const ManifoldModel& model, const ScalarField& phi) {
  ScalarField d1 = derivative1(phi, model.h());
  ScalarField d2 = derivative2(phi, model.h());
  const std::size_t G = model.size();
  const double nm1 = model.n - 1;
  ScalarField out(G);
  for (std::size_t j = 0; j < G; ++j) {
    double ang = model.angular[j] * d1[j];
    double hess2 = d2[j] * d2[j] + nm1 * ang * ang;
    double ricL = model.ric_radial + model.Vpp[j];
    out[j] = hess2 + ricL * d1[j] * d1[j];
    if (!std::isfinite(out[j])) throw Error("non-finite value in Gamma_2 field");
  }
  return out;
}

HessianDecomposition hessian_decomposition(const ManifoldModel& model, const ScalarField& phi,
                                           double t, const BakryEmeryParams& params) {
  if (!(t > 0.0)) throw Error("hessian_decomposition requires t > 0");
  if (params.m_infinite()) throw Error("hessian_decomposition requires finite m");
  validate_params(model, params);

  ScalarField d1 = derivative1(phi, model.h());
  ScalarField d2 = derivative2(phi, model.h());
  const std::size_t G = model.size();
  const double n = model.n;
  const double m = params.m;
  const double nm1 = n - 1.0;

  HessianDecomposition out;
  out.hess_minus_g_over_t2.resize(G);
  out.laplace.resize(G);
  out.witten.resize(G);
  out.drift.resize(G);
  out.traceless2.resize(G);
  out.cross2.resize(G);
  out.identity_residual.resize(G);

  for (std::size_t j = 0; j < G; ++j) {
    double ang = model.angular[j] * d1[j];  // angular Hessian eigenvalue
    double lap = d2[j] + nm1 * model.angular[j] * d1[j];
    double drift = model.Vp[j] * d1[j];
    double wit = lap - drift;
    double gt = 1.0 / t;
    double hmg = (d2[j] - gt) * (d2[j] - gt) + nm1 * (ang - gt) * (ang - gt);
    double trl = (d2[j] - lap / n) * (d2[j] - lap / n) + nm1 * (ang - lap / n) * (ang - lap / n);

    double cross = 0.0;
    double rhs;
    if (m > n) {
      double cr = wit + (m / (m - n)) * drift;
      cross = cr * cr;
      double dv = drift + (m - n) / t;
      rhs = (wit - m / t) * (wit - m / t) / m - dv * dv / (m - n) + ((m - n) / (m * n)) * cross +
            trl;
    } else {
      rhs = (lap - n / t) * (lap - n / t) / n + trl;
    }

    out.hess_minus_g_over_t2[j] = hmg;
    out.laplace[j] = lap;
    out.witten[j] = wit;
    out.drift[j] = drift;
    out.traceless2[j] = trl;
    out.cross2[j] = cross;
    out.identity_residual[j] = hmg - rhs;
  }
  return out;
}

double integrate_mu(const ManifoldModel& model, const ScalarField& integrand, const Support& s) {
  if (integrand.size() != model.size()) throw Error("integrand length does not match grid");
  if (s.empty()) return 0.0;
  ScalarField weighted(integrand.size(), 0.0);
  for (std::ptrdiff_t j = s.lo; j <= s.hi; ++j) {
    auto u = static_cast<std::size_t>(j);
    weighted[u] = integrand[u] * model.mu_weight[u];
  }
  return trapezoid(weighted, model.h(), s);
}

double integrate_mu(const ManifoldModel& model, const ScalarField& integrand) {
  Support s;
  s.lo = 0;
  s.hi = static_cast<std::ptrdiff_t>(model.size()) - 1;
  return integrate_mu(model, integrand, s);
}

}  // namespace wlab
