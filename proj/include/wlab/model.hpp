#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "wlab/grid.hpp"

namespace wlab {

enum class ModelKind { line, weighted_line, sphere_radial, hyperbolic_radial };

std::string to_string(ModelKind k);
ModelKind model_kind_from_string(const std::string& s);

/// Potential V for weighted models: a named preset with parameters, or a
/// sample table aligned with the grid.
struct PotentialSpec {
  enum class Preset { zero, quadratic, quartic, cosine, table };
  Preset preset = Preset::zero;
  double coeff = 0.5;    // quadratic: coeff*x^2; quartic: coeff*x^4; cosine: coeff*cos(freq*x)
  double freq = 1.0;     // cosine only
  ScalarField table;     // table preset only
};

struct ModelSpec {
  ModelKind kind = ModelKind::line;
  int n = 1;
  Grid grid;
  PotentialSpec potential;
};

/// A 1D-reducible weighted Riemannian model. Radial models store 1D profiles;
/// every integral carries the weight omega(r)*exp(-V(r)).
struct ManifoldModel {
  ModelKind kind = ModelKind::line;
  int n = 1;
  Grid grid;
  std::vector<double> x;        // node coordinates
  ScalarField omega;            // volume density: 1, sin^{n-1} r, sinh^{n-1} r
  ScalarField angular;          // c(r): 0 (line), cot r (sphere), coth r (hyperbolic)
  ScalarField V, Vp, Vpp;       // potential and its first two derivatives
  ScalarField mu_weight;        // omega * exp(-V) at each node
  double ric_radial = 0.0;      // Ricci on the unit radial direction (constant per kind)

  double h() const { return grid.spacing(); }
  std::size_t size() const { return grid.size; }
  bool weighted() const { return kind == ModelKind::weighted_line; }
};

/// Bakry-Emery parameter bundle. m may be +infinity (CD(K,inf) checks); the
/// convention m == n requires a constant potential.
struct BakryEmeryParams {
  double m = 1.0;                 // dimension parameter, in [n, +inf]
  double K = 0.0;                 // curvature lower bound hypothesis
  double p = 2.0;                 // Renyi exponent
  double N = 2.0;                 // Sturm dimension parameter
  bool m_infinite() const { return std::isinf(m); }
};

void validate_params(const ManifoldModel& model, const BakryEmeryParams& params);

ManifoldModel build_model(const ModelSpec& spec);

/// Radial Ricci profile and the m-dimensional Bakry-Emery profile
/// ric + V'' - (V')^2/(m-n); the quotient term is dropped at m = +inf and
/// both V-terms vanish on unweighted models.
struct CurvatureProfile {
  ScalarField ric;
  ScalarField ric_mn;
};
CurvatureProfile curvature_profile(const ManifoldModel& model, const BakryEmeryParams& params);

/// L f = f'' + (omega'/omega) f' - V' f' with 4th-order interior stencils.
ScalarField apply_witten_laplacian(const ManifoldModel& model, const ScalarField& f);

/// Gamma_2(phi,phi) assembled from the Bochner right-hand side:
/// |Hess phi|^2 + Ric(L)(grad phi, grad phi) with the radial Hessian
/// (phi'')^2 + (n-1)(c(r) phi')^2.
ScalarField gamma2_field(const ManifoldModel& model, const ScalarField& phi);

/// Pointwise fields entering the Hessian-vs-g/t decomposition at time t > 0.
struct HessianDecomposition {
  ScalarField hess_minus_g_over_t2;   // |Hess phi - g/t|^2
  ScalarField laplace;                // Laplace-Beltrami of phi
  ScalarField witten;                 // L phi
  ScalarField drift;                  // grad V . grad phi
  ScalarField traceless2;             // |Hess phi - (Lap phi / n) g|^2
  ScalarField cross2;                 // (L phi + m/(m-n) grad V . grad phi)^2
  ScalarField identity_residual;      // pointwise defect of the decomposition
};
HessianDecomposition hessian_decomposition(const ManifoldModel& model, const ScalarField& phi,
                                           double t, const BakryEmeryParams& params);

/// First and second spatial derivatives of a field with the model stencils.
ScalarField field_derivative(const ManifoldModel& model, const ScalarField& f);
ScalarField field_second_derivative(const ManifoldModel& model, const ScalarField& f);

/// Trapezoid quadrature against mu = omega * exp(-V) dr over a support range.
double integrate_mu(const ManifoldModel& model, const ScalarField& integrand, const Support& s);
double integrate_mu(const ManifoldModel& model, const ScalarField& integrand);

}  // namespace wlab
