#include <cmath>

#include <doctest.h>

#include "oracles.hpp"
#include "wlab/analytic.hpp"
#include "wlab/checks.hpp"
#include "wlab/numerics.hpp"

using namespace wlab;

namespace {

std::shared_ptr<const ManifoldModel> line_model(double a, double b, std::size_t size) {
  ModelSpec s;
  s.kind = ModelKind::line;
  s.n = 1;
  s.grid = {a, b, size, false};
  return std::make_shared<const ManifoldModel>(build_model(s));
}

std::shared_ptr<const ManifoldModel> radial_model(ModelKind kind, int n, double a, double b,
                                                  std::size_t size) {
  ModelSpec s;
  s.kind = kind;
  s.n = n;
  s.grid = {a, b, size, false};
  return std::make_shared<const ManifoldModel>(build_model(s));
}

std::shared_ptr<const ManifoldModel> weighted_model(double a, double b, std::size_t size) {
  ModelSpec s;
  s.kind = ModelKind::weighted_line;
  s.n = 1;
  s.grid = {a, b, size, false};
  s.potential.preset = PotentialSpec::Preset::quadratic;
  s.potential.coeff = 0.5;
  return std::make_shared<const ManifoldModel>(build_model(s));
}

struct Lab {
  std::shared_ptr<const ManifoldModel> model;
  GeodesicPath path;
  EntropySeries series;
  BakryEmeryParams params;
};

Lab dilation_lab(double sd0 = 1.0, double sd1 = 2.0, double t0 = 0.0, double t1 = 1.0) {
  Lab lab;
  lab.model = line_model(-20.0, 20.0, 4096);
  lab.params.m = 1.0;
  lab.params.K = 0.0;
  lab.params.p = 2.0;
  lab.params.N = 2.0;
  lab.path = analytic_gaussian_path(lab.model, 0.0, sd0, 0.0, sd1,
                                    oracle::uniform_times(t0, t1, 65), lab.params);
  lab.series = build_series(*lab.model, lab.path, lab.params);
  return lab;
}

Lab translation_lab() {
  Lab lab;
  lab.model = line_model(-16.0, 16.0, 2048);
  lab.params.m = 1.0;
  lab.params.K = 0.0;
  lab.params.p = 2.0;
  lab.params.N = 2.0;
  lab.path = analytic_gaussian_path(lab.model, -1.0, 1.0, 1.0, 1.0,
                                    oracle::uniform_times(0.0, 1.0, 65), lab.params);
  lab.series = build_series(*lab.model, lab.path, lab.params);
  return lab;
}

Lab uniform_lab() {
  Lab lab;
  lab.model = line_model(-2.0, 3.0, 2561);
  lab.params.m = 1.0;
  lab.params.K = 0.0;
  lab.params.p = 2.0;
  lab.params.N = 1.0;
  lab.path = analytic_uniform_path(lab.model, 0.0, 1.0, 0.0, 2.0,
                                   oracle::uniform_times(0.0, 1.0, 65), lab.params);
  lab.series = build_series(*lab.model, lab.path, lab.params);
  return lab;
}

Lab sphere_lab() {
  Lab lab;
  lab.model = radial_model(ModelKind::sphere_radial, 2, 0.2, 2.6, 1024);
  lab.params.m = 2.0;
  lab.params.K = 1.0;
  lab.params.p = 2.0;
  lab.params.N = 2.0;
  ScalarField rho0 = bump_density(*lab.model, 0.9, 0.45);
  ScalarField rho1 = bump_density(*lab.model, 1.5, 0.55);
  TransportMap map = monotone_map(*lab.model, rho0, rho1);
  lab.path = interpolate_path(lab.model, map, rho0,
                              oracle::uniform_times(0.0, 1.0, 65), lab.params);
  lab.series = build_series(*lab.model, lab.path, lab.params);
  return lab;
}

}  // namespace

TEST_CASE("edi/epdi: gaussian dilation is the equality case at K = 0") {
  Lab lab = dilation_lab();
  CheckPair pr = check_edi_epdi(lab.series, lab.params, 1e-6);
  CHECK(pr.first.verdict == Verdict::equality);
  CHECK(pr.first.max_abs_margin() < 1e-6);
  // refined margin also vanishes: L phi is spatially constant
  for (double v : pr.first.extra.at("refined_margin")) CHECK(std::abs(v) < 1e-6);
  CHECK(pr.second.verdict == Verdict::equality);
  CHECK(pr.second.max_abs_margin() < 1e-6);
}

TEST_CASE("edi/epdi: translation margins vanish with all terms zero") {
  Lab lab = translation_lab();
  CheckPair pr = check_edi_epdi(lab.series, lab.params, 1e-8);
  CHECK(pr.first.verdict == Verdict::equality);
  CHECK(pr.first.max_abs_margin() < 1e-8);
  CHECK(pr.second.max_abs_margin() < 1e-8);
  // every first/second entropy derivative is below 1e-8
  for (std::size_t k = 0; k < lab.series.times.size(); ++k) {
    CHECK(std::abs(lab.series.dH[k]) < 1e-8);
    CHECK(std::abs(lab.series.d2H[k]) < 1e-8);
    CHECK(std::abs(lab.series.dSN[k]) < 1e-8);
    CHECK(std::abs(lab.series.d2SN[k]) < 1e-8);
    CHECK(std::abs(lab.series.dHp[k]) < 1e-8);
    CHECK(std::abs(lab.series.d2Hp[k]) < 1e-8);
  }
}

TEST_CASE("edi: sphere scenario passes with a strictly positive margin somewhere") {
  Lab lab = sphere_lab();
  CheckPair pr = check_edi_epdi(lab.series, lab.params, 2e-3);
  CHECK(pr.first.verdict == Verdict::pass);
  CHECK(pr.first.min_margin() > -2e-3);
  double mx = 0.0;
  for (double v : pr.first.margin) mx = std::max(mx, v);
  CHECK(mx > 0.01);  // strictly positive somewhere
  CHECK(pr.second.verdict == Verdict::pass);
}

TEST_CASE("equivalence chain: EDI margin equals m/N_m times the EPDI analytic margin") {
  for (Lab lab : {dilation_lab(), sphere_lab()}) {
    CheckPair pr = check_edi_epdi(lab.series, lab.params, 2e-3);
    const auto& epdi_an = pr.second.extra.at("margin_analytic");
    for (std::size_t k = 0; k < lab.series.times.size(); ++k) {
      double lhs = pr.first.margin[k];
      double rhs = lab.params.m / lab.series.Nm[k] * epdi_an[k];
      CHECK(std::abs(lhs - rhs) < 1e-6 * (1.0 + std::abs(lhs)));
    }
  }
}

TEST_CASE("power_bound: dilation at K = 0 reduces to the affine chord (equality)") {
  Lab lab = dilation_lab();
  CheckReport rep = check_power_bound(lab.series, lab.params, 1e-6);
  CHECK(rep.verdict == Verdict::equality);
  CHECK(rep.diagnostics.at("sigma_ode_gap") < 1e-8);
  // Riccati bound holds with near-zero slack on the equality path
  CHECK(rep.diagnostics.at("riccati_min_margin") > -1e-6);
}

TEST_CASE("power_bound: constant path gives equality") {
  Lab lab = translation_lab();
  CheckReport rep = check_power_bound(lab.series, lab.params, 1e-6);
  CHECK(rep.verdict == Verdict::equality);
}

TEST_CASE("power_bound: hyperbolic model with K = -1 passes with sinh coefficients") {
  Lab lab;
  lab.model = radial_model(ModelKind::hyperbolic_radial, 2, 0.2, 3.4, 1024);
  lab.params.m = 2.0;
  lab.params.K = -1.0;
  lab.params.p = 2.0;
  lab.params.N = 2.0;
  ScalarField rho0 = bump_density(*lab.model, 1.2, 0.5);
  ScalarField rho1 = bump_density(*lab.model, 2.0, 0.6);
  TransportMap map = monotone_map(*lab.model, rho0, rho1);
  lab.path = interpolate_path(lab.model, map, rho0,
                              oracle::uniform_times(0.0, 1.0, 65), lab.params);
  lab.series = build_series(*lab.model, lab.path, lab.params);
  CheckReport rep = check_power_bound(lab.series, lab.params, 2e-3);
  CHECK((rep.verdict == Verdict::pass || rep.verdict == Verdict::equality));
  CHECK(rep.diagnostics.at("riccati_min_margin") > -2e-3);
}

TEST_CASE("renyi: dilation with p = 2, m = 1 is the equality case") {
  Lab lab = dilation_lab();
  CheckPair pr = check_renyi(*lab.model, lab.path, lab.series, lab.params, 1e-6);
  CHECK(pr.first.verdict == Verdict::equality);
  CHECK(pr.second.verdict == Verdict::equality);
  CHECK(pr.second.diagnostics.at("np2_max_residual") < 1e-6);
}

TEST_CASE("renyi: weighted line with m = 3 passes against the auto curvature bound") {
  Lab lab;
  lab.model = weighted_model(-9.0, 9.0, 2048);
  lab.params.m = 3.0;
  lab.params.p = 2.0;
  lab.params.N = 3.0;
  ScalarField rho0 = gaussian_density(*lab.model, -0.7, 0.5);
  ScalarField rho1 = gaussian_density(*lab.model, 0.8, 0.7);
  TransportMap map = monotone_map(*lab.model, rho0, rho1);
  lab.path = interpolate_path(lab.model, map, rho0,
                              oracle::uniform_times(0.0, 1.0, 65), lab.params);
  lab.params.K = infer_curvature_bound(*lab.model, lab.path, lab.params);
  CHECK(lab.params.K < 1.0);  // ric_mn = 1 - x^2/2 dips negative on the support
  lab.series = build_series(*lab.model, lab.path, lab.params);
  CheckPair pr = check_renyi(*lab.model, lab.path, lab.series, lab.params, 2e-3);
  CHECK(pr.first.verdict == Verdict::pass);
  CHECK(pr.second.verdict == Verdict::pass);
  // precondition p >= 1 - 1/m enforced
  BakryEmeryParams bad = lab.params;
  bad.p = 0.5;
  CHECK_THROWS_AS(check_renyi(*lab.model, lab.path, lab.series, bad, 2e-3), Error);
}

TEST_CASE("sn: dilation full form is an equality; uniform weak form is convex") {
  Lab lab = dilation_lab();
  CheckReport rep = check_sn(lab.series, lab.params, 1e-6);
  CHECK(rep.verdict == Verdict::equality);

  Lab ulab = uniform_lab();
  ulab.params.N = 2.0;
  ulab.series = build_series(*ulab.model, ulab.path, ulab.params);
  CheckReport urep = check_sn(ulab.series, ulab.params, 1e-6);
  // S_2(t) = -(1+t)^{1/2}: S'' = (1/4)(1+t)^{-3/2} > 0, K = 0
  const auto& weak = urep.extra.at("weak_margin");
  for (std::size_t k = 0; k < urep.times.size(); ++k) {
    double t = urep.times[k];
    CHECK(weak[k] == doctest::Approx(0.25 * std::pow(1.0 + t, -1.5)).epsilon(1e-6));
  }
  BakryEmeryParams bad = lab.params;
  bad.N = 0.5;
  CHECK_THROWS_AS(check_sn(lab.series, bad, 1e-6), Error);
}

TEST_CASE("sturm: uniform dilation equality at N' = 1 and the frozen margin at N' = 2") {
  Lab lab = uniform_lab();
  CheckReport r1 = check_sturm(*lab.model, lab.path, lab.params, 1.0, 1e-8);
  CHECK(r1.verdict == Verdict::equality);
  CHECK(r1.max_abs_margin() < 1e-8);
  // S(t) = -(1+t), RHS = -[(1-t) + 2t]: exact equality

  CheckReport r2 = check_sturm(*lab.model, lab.path, lab.params, 2.0, 1e-6);
  CHECK((r2.verdict == Verdict::pass));
  // frozen oracle at t = 1/2: sqrt(1.5) - (0.5 + 0.5 sqrt(2)) = 0.017638...
  double expect = std::sqrt(1.5) - (0.5 + 0.5 * std::sqrt(2.0));
  CHECK(expect == doctest::Approx(0.0176380602050391).epsilon(1e-10));
  CHECK(r2.margin[32] == doctest::Approx(expect).epsilon(1e-6));
}

TEST_CASE("sturm: identity coupling is an equality for any N'") {
  auto model = line_model(-16.0, 16.0, 2048);
  BakryEmeryParams prm;
  prm.m = 1.0;
  prm.K = 0.0;
  prm.N = 1.0;
  GeodesicPath path = analytic_gaussian_path(model, 0.0, 1.0, 0.0, 1.0,
                                             oracle::uniform_times(0.0, 1.0, 17), prm);
  for (double np : {1.0, 2.0, 3.0}) {
    CheckReport rep = check_sturm(*model, path, prm, np, 1e-6);
    CHECK(rep.verdict == Verdict::equality);
  }
}

TEST_CASE("sturm: sphere K = 1 passes for N' in {2, 3, 5}") {
  Lab lab = sphere_lab();
  for (double np : {2.0, 3.0, 5.0}) {
    CheckReport rep = check_sturm(*lab.model, lab.path, lab.params, np, 2e-3);
    CHECK((rep.verdict == Verdict::pass || rep.verdict == Verdict::equality));
  }
}

TEST_CASE("sn implies sturm at N' = N (joint verdict)") {
  for (Lab lab : {sphere_lab(), uniform_lab()}) {
    if (lab.params.N < lab.params.m) continue;
    CheckReport sn = check_sn(lab.series, lab.params, 2e-3);
    CheckReport st = check_sturm(*lab.model, lab.path, lab.params, lab.params.N, 2e-3);
    if (sn.verdict != Verdict::fail) CHECK(st.verdict != Verdict::fail);
  }
}

TEST_CASE("jacobian concavity: flat line is exact, sphere passes (JNK)") {
  auto model = line_model(-16.0, 16.0, 2048);
  BakryEmeryParams prm;
  prm.m = 1.0;
  prm.K = 0.0;
  prm.p = 2.0;
  ScalarField rho0 = gaussian_density(*model, 0.0, 1.0);
  ScalarField rho1 = gaussian_density(*model, 0.3, 1.6);
  TransportMap map = monotone_map(*model, rho0, rho1);
  GeodesicPath path =
      interpolate_path(model, map, rho0, oracle::uniform_times(0.0, 1.0, 65), prm);
  for (double N : {1.0, 2.0, 5.0}) {
    prm.N = N;
    CheckReport rep = check_jacobian(*model, path, prm, N, 1e-9);
    // (J^{1/N})'' <= 1e-9 at every node and time on the flat line
    CHECK(rep.min_margin() > -1e-9);
    CHECK(rep.diagnostics.at("pushforward_l1_residual") < 1e-6);
  }

  Lab lab = sphere_lab();
  CheckReport rep = check_jacobian(*lab.model, lab.path, lab.params, 2.0, 2e-3);
  CHECK(rep.min_margin() > -2e-3);
  const auto& rho4 = rep.extra.at("rho4_margin");
  double worst = 0.0;
  for (std::size_t k = 1; k + 1 < rho4.size(); ++k) worst = std::min(worst, rho4[k]);
  CHECK(worst > -0.05);  // transported-density variant, noisier route
}

TEST_CASE("identity_ij: both quadrature routes agree") {
  Lab lab = dilation_lab();
  CheckReport rep = identity_ij(*lab.model, lab.path, lab.params, 2.0, 1e-5);
  CHECK(rep.verdict == Verdict::equality);
  for (double r : rep.residual) CHECK(std::abs(r) < 1e-5);

  // identity path: both sides vanish
  Lab tlab = translation_lab();
  GeodesicPath idp = analytic_gaussian_path(tlab.model, 0.0, 1.0, 0.0, 1.0,
                                            oracle::uniform_times(0.0, 1.0, 17), tlab.params);
  CheckReport rid = identity_ij(*tlab.model, idp, tlab.params, 2.0, 1e-8);
  CHECK(rid.verdict == Verdict::equality);

  // uniform dilation: closed-form integrals on the aligned grid
  Lab ulab = uniform_lab();
  CheckReport rep2 = identity_ij(*ulab.model, ulab.path, ulab.params, 2.0, 1e-8);
  CHECK(rep2.max_abs_margin() < 1e-8);
}

TEST_CASE("ent_infty: weighted line V = x^2/2 has the CD(K=1, inf) convexity") {
  Lab lab;
  lab.model = weighted_model(-9.0, 9.0, 2048);
  lab.params.m = std::numeric_limits<double>::infinity();
  lab.params.K = 1.0;  // Ric(L) = V'' = 1 exactly
  lab.params.p = 2.0;
  lab.params.N = 2.0;
  ScalarField rho0 = gaussian_density(*lab.model, -1.0, 0.6);
  ScalarField rho1 = gaussian_density(*lab.model, 1.0, 0.9);
  TransportMap map = monotone_map(*lab.model, rho0, rho1);
  lab.path = interpolate_path(lab.model, map, rho0,
                              oracle::uniform_times(0.0, 1.0, 65), lab.params);
  lab.series = build_series(*lab.model, lab.path, lab.params);
  CheckReport rep = check_ent_infty(*lab.model, lab.path, lab.series, lab.params, 1e-6);
  CHECK(rep.min_margin() > -1e-6);
  CHECK(rep.diagnostics.at("integrated_min_margin") > -1e-6);
  CHECK(rep.diagnostics.at("ut2_min_margin") > -1e-4);
}

TEST_CASE("ent_infty: flat-line dilation has Ent'' = 1/(1+t)^2 > 0 at K = 0") {
  Lab lab = dilation_lab();
  CheckReport rep = check_ent_infty(*lab.model, lab.path, lab.series, lab.params, 1e-6);
  for (std::size_t k = 0; k < rep.times.size(); ++k) {
    double t = rep.times[k];
    CHECK(rep.margin[k] == doctest::Approx(1.0 / ((1.0 + t) * (1.0 + t))).epsilon(1e-6));
  }
}

TEST_CASE("ent_infty: constant path sits at equality") {
  Lab lab = translation_lab();
  GeodesicPath idp = analytic_gaussian_path(lab.model, 0.0, 1.0, 0.0, 1.0,
                                            oracle::uniform_times(0.0, 1.0, 17), lab.params);
  EntropySeries s = build_series(*lab.model, idp, lab.params);
  CheckReport rep = check_ent_infty(*lab.model, idp, s, lab.params, 1e-8);
  CHECK(rep.verdict == Verdict::equality);
}

TEST_CASE("w_entropy: the model gaussian path has W_1 identically zero") {
  Grid grid{-16.0, 16.0, 2048, false};
  auto times = oracle::uniform_times(0.5, 1.5, 65);
  GeodesicPath path = model_gaussian_path(1, times, grid);
  BakryEmeryParams prm;
  prm.m = 1.0;
  prm.K = 0.0;
  prm.p = 1.0;
  prm.N = 2.0;
  path.params = prm;
  EntropySeries series = build_series(*path.model, path, prm);
  WEntropyResult wr = w_entropy_profile(*path.model, path, series, prm, true, 1e-6);
  for (double w : wr.series.Wm) CHECK(std::abs(w) < 1e-6);
  for (double w : wr.series.Wmp) CHECK(std::abs(w) < 1e-6);
  CHECK(wr.report.verdict == Verdict::equality);

  // NIW: all three terms vanish coherently
  CheckReport niw = check_niw(series, wr.series, prm, 1e-6);
  CHECK(niw.verdict == Verdict::equality);
  for (double r : niw.residual) CHECK(std::abs(r) < 1e-6);
}

TEST_CASE("w_entropy: dilation window reproduces dW1/dt(1) = -1/4") {
  // std 1.5 -> 2.5 on window [1/2, 3/2] gives rho(t) = N(0, (1+t)^2)
  Lab lab = dilation_lab(1.5, 2.5, 0.5, 1.5);
  WEntropyResult wr = w_entropy_profile(*lab.model, lab.path, lab.series, lab.params, true,
                                        2e-3);
  // closed-form oracle: W = log((1+t)/t) - (1/2)log 2 - 1/(1+t)
  for (std::size_t k = 2; k + 2 < wr.series.times.size(); ++k) {
    double t = wr.series.times[k];
    double expect = std::log((1.0 + t) / t) - 0.5 * std::log(2.0) - 1.0 / (1.0 + t);
    CHECK(std::abs(wr.series.Wm[k] - expect) < 1e-4);
  }
  // spot value at t = 1 (sample 32), FD and analytic routes
  double dW_exact = -0.25;
  CHECK(std::abs(wr.series.dWm[32] - dW_exact) < 1e-4);
  CHECK(std::abs(wr.series.dWm_formula[32] - dW_exact) < 1e-6);
  // monotone under ric = 0
  CHECK(wr.report.verdict != Verdict::fail);

  // NIW residual vanishes on the window
  CheckReport niw = check_niw(lab.series, wr.series, lab.params, 3e-3);
  CHECK(niw.verdict != Verdict::fail);
  for (std::size_t k = 2; k + 2 < niw.times.size(); ++k)
    CHECK(std::abs(niw.residual[k]) <= 3e-3 * (1.0 + std::abs(lab.series.d2Nm_an[k])));
}

TEST_CASE("w_entropy: constant path formula residual stays at FD level") {
  auto model = line_model(-16.0, 16.0, 2048);
  BakryEmeryParams prm;
  prm.m = 1.0;
  prm.K = 0.0;
  prm.p = 2.0;
  prm.N = 2.0;
  GeodesicPath path = analytic_gaussian_path(model, 0.0, 1.0, 0.0, 1.0,
                                             oracle::uniform_times(0.5, 1.5, 65), prm);
  EntropySeries series = build_series(*model, path, prm);
  WEntropyResult wr = w_entropy_profile(*model, path, series, prm, true, 2e-3);
  // dW/dt = -m/t^2 from the correction term; the formula absorbs it exactly
  for (std::size_t k = 2; k + 2 < wr.series.times.size(); ++k) {
    double t = wr.series.times[k];
    CHECK(std::abs(wr.series.dWm[k] + prm.m / (t * t)) < 2e-3);
    CHECK(std::abs(wr.series.dWm[k] - wr.series.dWm_formula[k]) < 2e-3);
  }
}

TEST_CASE("niw: the drift-term sign is pinned by the weighted m > n scenario") {
  auto model = weighted_model(-9.0, 9.0, 2048);
  BakryEmeryParams prm;
  prm.m = 3.0;
  prm.K = 0.0;
  prm.p = 2.0;
  prm.N = 3.0;
  ScalarField rho0 = gaussian_density(*model, -0.6, 0.5);
  ScalarField rho1 = gaussian_density(*model, 0.7, 0.65);
  TransportMap map = monotone_map(*model, rho0, rho1);
  GeodesicPath path =
      interpolate_path(model, map, rho0, oracle::uniform_times(0.5, 1.5, 65), prm);
  prm.K = infer_curvature_bound(*model, path, prm);
  EntropySeries series = build_series(*model, path, prm);

  auto residual_with = [&](bool plus) {
    WEntropyResult wr = w_entropy_profile(*model, path, series, prm, plus, 2e-3);
    double worst = 0.0;
    for (std::size_t k = 2; k + 2 < series.times.size(); ++k) {
      double t = series.times[k];
      double di = series.I[k] - prm.m / t;
      double res = series.d2Nm_an[k] -
                   (series.Nm[k] / prm.m) *
                       (di * di / prm.m + wr.series.dWm_formula[k] / t);
      worst = std::max(worst, std::abs(res) / (1.0 + std::abs(series.d2Nm_an[k])));
    }
    return worst;
  };
  double res_plus = residual_with(true);
  double res_minus = residual_with(false);
  CHECK(res_plus <= 3e-3);
  CHECK(res_minus > 10.0 * res_plus);  // exactly one sign is consistent
}

TEST_CASE("rigidity probe: dilation equality diagnostics vanish") {
  Lab lab = dilation_lab();
  CheckPair pr = check_edi_epdi(lab.series, lab.params, 1e-6);
  auto diag = rigidity_probe(*lab.model, lab.path, lab.series, lab.params, pr.first);
  CHECK(diag.at("applicable") == 1.0);
  CHECK(diag.at("hessian_soliton_defect") < 1e-6);
  CHECK(diag.at("curvature_pinch") < 1e-6);
  CHECK(diag.at("riccati_residual") < 1e-4);
  CHECK(diag.at("weighted_cross_term") < 1e-6);
}

TEST_CASE("rigidity probe warns on a non-equality report") {
  Lab lab = sphere_lab();
  CheckPair pr = check_edi_epdi(lab.series, lab.params, 2e-3);
  auto diag = rigidity_probe(*lab.model, lab.path, lab.series, lab.params, pr.first);
  CHECK(diag.at("applicable") == 0.0);
  CHECK(diag.count("warning_not_equality") == 1);
}

TEST_CASE("rigidity probe: uniform Sturm equality has constant map derivative") {
  Lab lab = uniform_lab();
  CheckReport rep = check_sturm(*lab.model, lab.path, lab.params, 1.0, 1e-8);
  REQUIRE(rep.verdict == Verdict::equality);
  // Jacobian-level equality: T' is constant on the support
  const TransportMap& map = *lab.path.map;
  Support sup = find_support(lab.path.densities.front(), 1e-300);
  for (std::ptrdiff_t j = sup.lo; j <= sup.hi; ++j)
    CHECK(map.map_derivative[static_cast<std::size_t>(j)] ==
          doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("falsification: under-curved hyperbolic scenario fails the EDI at K = 0") {
  auto model = radial_model(ModelKind::hyperbolic_radial, 2, 0.2, 3.4, 1024);
  BakryEmeryParams prm;
  prm.m = 2.0;
  prm.K = 0.0;  // deliberately above the true curvature -1
  prm.p = 2.0;
  prm.N = 2.0;
  ScalarField rho0 = bump_density(*model, 1.5, 0.18);
  ScalarField rho1 = bump_density(*model, 1.8, 0.18);
  TransportMap map = monotone_map(*model, rho0, rho1);
  GeodesicPath path =
      interpolate_path(model, map, rho0, oracle::uniform_times(0.0, 1.0, 65), prm);
  EntropySeries series = build_series(*model, path, prm);
  CheckPair pr = check_edi_epdi(series, prm, 2e-3);
  CHECK(pr.first.verdict == Verdict::fail);
  CHECK(pr.first.min_margin() < -2e-3);
}

TEST_CASE("limit bridge: N-weighted S_N margins approach the ent_infty margin") {
  Lab lab = dilation_lab();
  CheckReport einf = check_ent_infty(*lab.model, lab.path, lab.series, lab.params, 1e-6);
  std::size_t k = 32;
  double target = einf.margin[k];
  double prev = std::numeric_limits<double>::infinity();
  for (double N : {1e2, 1e3, 1e4}) {
    BakryEmeryParams prm = lab.params;
    prm.N = N;
    EntropySeries s = build_series(*lab.model, lab.path, prm);
    CheckReport sn = check_sn(s, prm, 1e-6);
    double err = std::abs(N * sn.extra.at("weak_margin")[k] - target);
    CHECK(err < prev / 2.0);
    prev = err;
  }
}
