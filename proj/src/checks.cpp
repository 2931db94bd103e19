#include "wlab/checks.hpp"

#include <algorithm>
#include <cmath>

#include "wlab/numerics.hpp"

namespace wlab {

namespace {
constexpr double kRhoFloor = 1e-300;
constexpr double kSupportFloor = 1e-12;
}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::equality: return "equality";
  }
  return "?";
}

double CheckReport::min_margin() const {
  double m = std::numeric_limits<double>::infinity();
  for (double v : margin) m = std::min(m, v);
  return margin.empty() ? 0.0 : m;
}

double CheckReport::max_abs_margin() const {
  double m = 0.0;
  for (double v : margin) m = std::max(m, std::abs(v));
  return m;
}

void finalize_report(CheckReport& report) {
  if (report.margin.empty()) {
    report.verdict = Verdict::equality;
    return;
  }
  if (report.max_abs_margin() <= report.tolerance) {
    report.verdict = Verdict::equality;
  } else if (report.min_margin() >= -report.tolerance) {
    report.verdict = Verdict::pass;
  } else {
    report.verdict = Verdict::fail;
  }
}

double infer_curvature_bound(const ManifoldModel& model, const GeodesicPath& path,
                             const BakryEmeryParams& params) {
  CurvatureProfile prof = curvature_profile(model, params);
  double K = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < model.size(); ++j) {
    bool in_support = false;
    for (const auto& rho : path.densities)
      if (rho[j] > kSupportFloor) {
        in_support = true;
        break;
      }
    if (in_support) K = std::min(K, prof.ric_mn[j]);
  }
  if (!std::isfinite(K)) throw Error("infer_curvature_bound: empty path support");
  return K;
}

CheckPair check_edi_epdi(const EntropySeries& series, const BakryEmeryParams& params,
                         double tolerance) {
  const std::size_t T = series.times.size();
  const bool finite_m = !params.m_infinite();
  const double m = params.m;
  const double K = params.K;

  CheckReport edi;
  edi.check_id = "edi";
  edi.statement = "-H'' >= H'^2/m + K int |grad phi|^2 rho dmu";
  edi.times = series.times;
  edi.tolerance = tolerance;
  std::vector<double> refined(T);
  for (std::size_t k = 0; k < T; ++k) {
    double lhs = -series.d2H_an[k];
    double rhs = (finite_m ? series.I[k] * series.I[k] / m : 0.0) + K * series.energy[k];
    edi.margin.push_back(lhs - rhs);
    refined[k] = lhs - K * series.energy[k] - (finite_m ? series.lphi_sq[k] / m : 0.0);
  }
  edi.extra["refined_margin"] = refined;
  double rmin = *std::min_element(refined.begin(), refined.end());
  edi.diagnostics["refined_min_margin"] = rmin;
  finalize_report(edi);

  CheckReport epdi;
  epdi.check_id = "epdi";
  epdi.statement = "d2/dt2 N_m <= -(K N_m/m) int |grad phi|^2 rho dmu";
  epdi.times = series.times;
  epdi.tolerance = tolerance;
  if (finite_m) {
    std::vector<double> analytic(T);
    for (std::size_t k = 0; k < T; ++k) {
      double rhs = -(K / m) * series.Nm[k] * series.energy[k];
      epdi.margin.push_back(rhs - series.d2Nm[k]);
      analytic[k] = rhs - series.d2Nm_an[k];
    }
    epdi.extra["margin_analytic"] = analytic;
  } else {
    epdi.margin.assign(T, 0.0);
    epdi.diagnostics["vacuous_m_infinite"] = 1.0;
  }
  finalize_report(epdi);
  return {edi, epdi};
}

CheckReport check_power_bound(const EntropySeries& series, const BakryEmeryParams& params,
                              double tolerance) {
  const std::size_t T = series.times.size();
  const double span = series.times.back() - series.times.front();
  const double theta_ep = series.theta * span;  // endpoint W2

  CheckReport rep;
  rep.check_id = "power_bound";
  rep.statement = "N_m(t) >= sigma_{K,m,theta}(1-s) N_m(0) + sigma_{K,m,theta}(s) N_m(1)";
  rep.times = series.times;
  rep.tolerance = tolerance;

  // profiles on normalized time; Riccati compares dH/ds = I * span
  ComparisonProfiles prof =
      comparison_profiles(params.K, params.m, theta_ep, series.Nm.front(), series.Nm.back(),
                          series.I.front() * span, series.times);
  std::vector<double> riccati(T);
  for (std::size_t k = 0; k < T; ++k) {
    rep.margin.push_back(series.Nm[k] - prof.NmK[k]);
    riccati[k] = std::isfinite(prof.HprimeK[k])
                     ? prof.HprimeK[k] - series.I[k] * span
                     : 0.0;  // past Riccati blow-up the bound is vacuous
  }
  rep.extra["riccati_margin"] = riccati;
  rep.extra["NmK"] = prof.NmK;
  rep.diagnostics["riccati_min_margin"] = *std::min_element(riccati.begin(), riccati.end());
  rep.diagnostics["sigma_ode_gap"] = prof.max_sigma_ode_gap;
  rep.diagnostics["riccati_blowup"] = prof.riccati_blowup ? 1.0 : 0.0;
  finalize_report(rep);
  return rep;
}

CheckPair check_renyi(const ManifoldModel& model, const GeodesicPath& path,
                      const EntropySeries& series, const BakryEmeryParams& params,
                      double tolerance) {
  const bool finite_m = !params.m_infinite();
  const double m = params.m;
  if (finite_m && params.p < 1.0 - 1.0 / m)
    throw Error("check_renyi: requires p >= 1 - 1/m");
  const std::size_t T = series.times.size();
  const double K = params.K;

  CheckReport redi;
  redi.check_id = "renyi_edi";
  redi.statement = "Hp'' + Hp'^2/m <= -K int |grad phi|^2 dgamma";
  redi.times = series.times;
  redi.tolerance = tolerance;
  for (std::size_t k = 0; k < T; ++k) {
    double lhs = series.d2Hp_an[k] + (finite_m ? series.Ip[k] * series.Ip[k] / m : 0.0);
    double rhs = -K * series.grad2_gamma[k];
    redi.margin.push_back(rhs - lhs);
  }
  finalize_report(redi);

  CheckReport repdi;
  repdi.check_id = "renyi_epdi";
  repdi.statement = "d2/dt2 N_{m,p} <= -(K/m) int |grad phi|^2 dgamma N_{m,p}";
  repdi.times = series.times;
  repdi.tolerance = tolerance;
  if (finite_m) {
    std::vector<double> analytic(T), np2_residual(T);
    for (std::size_t k = 0; k < T; ++k) {
      double rhs = -(K / m) * series.grad2_gamma[k] * series.Nmp[k];
      repdi.margin.push_back(rhs - series.d2Nmp[k]);
      analytic[k] = rhs - series.d2Nmp_an[k];
    }
    repdi.extra["margin_analytic"] = analytic;

    // refined variance decomposition of d2 N_{m,p}
    CurvatureProfile prof = curvature_profile(model, params);
    for (std::size_t k = 0; k < T; ++k) {
      const ScalarField& rho = path.densities[k];
      const ScalarField& phi = path.phases[k];
      ScalarField grad = derivative1(phi, model.h());
      ScalarField d2phi = derivative2(phi, model.h());
      ScalarField lphi = apply_witten_laplacian(model, phi);
      Support sup = find_support(rho, kRhoFloor);
      ScalarField rho_p(model.size(), 0.0);
      for (std::size_t j = 0; j < model.size(); ++j)
        if (rho[j] > kRhoFloor) rho_p[j] = std::pow(rho[j], params.p);
      double Z = integrate_mu(model, rho_p, sup);

      const double n = model.n;
      ScalarField ric_term(model.size(), 0.0), struct_term(model.size(), 0.0);
      for (std::size_t j = 0; j < model.size(); ++j) {
        double lap = d2phi[j] + (n - 1.0) * model.angular[j] * grad[j];
        double ang = model.angular[j] * grad[j];
        double trl =
            (d2phi[j] - lap / n) * (d2phi[j] - lap / n) +
            (n - 1.0) * (ang - lap / n) * (ang - lap / n);
        double cross = 0.0;
        if (m > n) {
          double cr = lphi[j] + (m / (m - n)) * model.Vp[j] * grad[j];
          cross = ((m - n) / (m * n)) * cr * cr;
        }
        ric_term[j] = prof.ric_mn[j] * grad[j] * grad[j] * rho_p[j];
        struct_term[j] = (cross + trl) * rho_p[j];
      }
      double sigma = params.p - 1.0 + 1.0 / m;
      double rhs_np2 = -sigma * (series.Nmp[k] / m) * series.var_gamma[k] -
                       (series.Nmp[k] / m) * (integrate_mu(model, ric_term, sup) / Z) -
                       (series.Nmp[k] / m) * (integrate_mu(model, struct_term, sup) / Z);
      np2_residual[k] = series.d2Nmp_an[k] - rhs_np2;
    }
    repdi.extra["np2_residual"] = np2_residual;
    double mx = 0.0;
    for (double v : np2_residual) mx = std::max(mx, std::abs(v));
    repdi.diagnostics["np2_max_residual"] = mx;
  } else {
    repdi.margin.assign(T, 0.0);
    repdi.diagnostics["vacuous_m_infinite"] = 1.0;
  }
  finalize_report(repdi);
  return {redi, repdi};
}

CheckReport check_sn(const EntropySeries& series, const BakryEmeryParams& params,
                     double tolerance) {
  if (!params.m_infinite() && params.N < params.m)
    throw Error("check_sn: requires N >= m");
  const std::size_t T = series.times.size();
  const double K = params.K;
  const double N = params.N;
  const double m = params.m;
  const bool finite_m = !params.m_infinite();

  CheckReport rep;
  rep.check_id = "sn";
  rep.statement =
      "S_N'' + ((N-m)/m) S_N^{-1} (S_N')^2 >= (K/N) int |grad phi|^2 rho^{1-1/N} dmu";
  rep.times = series.times;
  rep.tolerance = tolerance;
  std::vector<double> weak(T);
  for (std::size_t k = 0; k < T; ++k) {
    double corr = finite_m ? ((N - m) / m) / series.SN[k] * series.dSN_an[k] * series.dSN_an[k]
                           : 0.0;
    double lhs = series.d2SN_an[k] + corr;
    double rhs = (K / N) * series.grad2_sn[k];
    rep.margin.push_back(lhs - rhs);
    weak[k] = series.d2SN_an[k] - rhs;
  }
  rep.extra["weak_margin"] = weak;
  rep.diagnostics["weak_min_margin"] = *std::min_element(weak.begin(), weak.end());
  finalize_report(rep);
  return rep;
}

namespace {

/// Density w.r.t. mu evaluated off-grid.
Pchip density_interpolant(const ManifoldModel& model, const ScalarField& rho) {
  return Pchip(model.x, rho);
}

double sn_power(double rho, double N) {
  if (!(rho > kRhoFloor)) return 0.0;
  double q = 1.0 - 1.0 / N;
  return q == 0.0 ? 1.0 : std::pow(rho, q);
}

}  // namespace

CheckReport check_sturm(const ManifoldModel& model, const GeodesicPath& path,
                        const BakryEmeryParams& params, double Nprime, double tolerance) {
  if (!path.map) throw Error("check_sturm: path carries no transport map");
  if (!params.m_infinite() && Nprime < params.N - 1e-12)
    throw Error("check_sturm: requires N' >= N");
  const TransportMap& map = *path.map;
  const std::size_t G = model.size();
  const std::size_t T = path.steps();
  const double K = params.K;

  CheckReport rep;
  rep.check_id = "sturm(" + std::to_string(Nprime) + ")";
  rep.statement = "S_N'(rho_t) <= -int [tau^{(1-s)} rho0^{-1/N'} + tau^{(s)} rho1^{-1/N'}] dq";
  rep.times = path.times;
  rep.tolerance = tolerance;

  const ScalarField& rho0 = path.densities.front();
  Support sup = find_support(rho0, kRhoFloor);
  // rho1 along the coupling, via the pushforward relation rho1(T(x)) =
  // rho0(x) / J^mu_1(x); interpolating rho1 near its support fringe and
  // raising to a negative power is not stable
  Pchip v_interp(model.x, model.V);
  const std::size_t last = T - 1;
  ScalarField rho1_at_T(G, 0.0);
  for (std::ptrdiff_t jj = sup.lo; jj <= sup.hi; ++jj) {
    auto j = static_cast<std::size_t>(jj);
    // jacobians holds the Riemannian J = T' omega(T)/omega; the mu-Jacobian
    // adds the potential ratio
    double jac_mu =
        path.jacobians[last][j] * std::exp(model.V[j] - v_interp(map.map_values[j]));
    if (jac_mu > 0.0) rho1_at_T[j] = rho0[j] / jac_mu;
  }

  for (std::size_t k = 0; k < T; ++k) {
    double s = path.normalized(k);
    ScalarField integrand(G, 0.0);
    for (std::ptrdiff_t jj = sup.lo; jj <= sup.hi; ++jj) {
      auto j = static_cast<std::size_t>(jj);
      double d = std::abs(map.map_values[j] - model.x[j]);
      DistortionQuery q0{K, Nprime, d, 1.0 - s};
      DistortionQuery q1{K, Nprime, d, s};
      DistortionPair c0 = distortion_coefficients(q0);
      DistortionPair c1 = distortion_coefficients(q1);
      if (c0.conjugate || c1.conjugate)
        throw Error("check_sturm: conjugate regime (tau infinite)");
      double t0 = rho0[j] > kRhoFloor ? c0.tau * std::pow(rho0[j], -1.0 / Nprime) : 0.0;
      double t1 =
          rho1_at_T[j] > kRhoFloor ? c1.tau * std::pow(rho1_at_T[j], -1.0 / Nprime) : 0.0;
      integrand[j] = -(t0 + t1) * rho0[j];
    }
    double rhs = integrate_mu(model, integrand, sup);
    double lhs = sn_functional(model, path.densities[k], Nprime);
    rep.margin.push_back(rhs - lhs);
  }
  finalize_report(rep);
  return rep;
}

CheckReport check_jacobian(const ManifoldModel& model, const GeodesicPath& path,
                           const BakryEmeryParams& params, double N, double tolerance) {
  if (!path.map) throw Error("check_jacobian: path carries no transport map");
  if (N < model.n) throw Error("check_jacobian: requires N >= n");
  const TransportMap& map = *path.map;
  const std::size_t T = path.steps();
  const double K = params.K;
  const double dt = (path.times.back() - path.times.front()) / static_cast<double>(T - 1);

  CheckReport rep;
  rep.check_id = "jacobian";
  rep.statement = "d2/dt2 J^{1/N} <= -(K/N) J^{1/N} d^2(x, F_1(x))";
  rep.times = path.times;
  rep.tolerance = tolerance;

  const ScalarField& rho0 = path.densities.front();
  Support sup = find_support(rho0, kSupportFloor);
  std::ptrdiff_t lo = std::max(sup.lo, map.core.lo);
  std::ptrdiff_t hi = std::min(sup.hi, map.core.hi);
  if (hi < lo) throw Error("check_jacobian: empty support core");

  // second time differences of J^{1/N} per source node
  std::vector<std::vector<double>> margins(T, std::vector<double>());
  std::vector<double> rho4(T, std::numeric_limits<double>::infinity());

  // transported-density fields for the (rho4) variant
  std::vector<Pchip> rho_v_interp;
  rho_v_interp.reserve(T);
  for (std::size_t k = 0; k < T; ++k) {
    ScalarField rv(model.size());
    for (std::size_t i = 0; i < model.size(); ++i)
      rv[i] = path.densities[k][i] * std::exp(-model.V[i]);
    rho_v_interp.emplace_back(model.x, rv);
  }

  double rho0_max = 0.0;
  for (double v : rho0) rho0_max = std::max(rho0_max, v);

  for (std::ptrdiff_t jj = lo; jj <= hi; ++jj) {
    auto j = static_cast<std::size_t>(jj);
    if (!(path.jacobians.front()[j] > 0.0)) continue;
    double d = std::abs(map.map_values[j] - model.x[j]);
    // rho^{-1/N} amplifies interpolation noise; probe it where mass lives
    bool track_rho4 = rho0[j] >= 1e-4 * rho0_max;
    std::vector<double> jp(T), rp(T);
    bool ok = true;
    for (std::size_t k = 0; k < T; ++k) {
      double J = path.jacobians[k][j];
      if (!(J > 0.0)) {
        ok = false;
        break;
      }
      jp[k] = std::pow(J, 1.0 / N);
      double s = path.normalized(k);
      double y = model.x[j] + s * (map.map_values[j] - model.x[j]);
      double rv = track_rho4 ? rho_v_interp[k](y) : 0.0;
      rp[k] = rv > kRhoFloor ? std::pow(rv, -1.0 / N) : 0.0;
    }
    if (!ok) throw Error("check_jacobian: nonpositive Jacobian on the support core");
    std::vector<double> d2jp = fd_second(jp, dt);
    std::vector<double> d2rp = fd_second(rp, dt);
    for (std::size_t k = 0; k < T; ++k) {
      margins[k].push_back(-d2jp[k] - (K / N) * jp[k] * d * d);
      if (track_rho4 && rp[k] > 0.0)
        rho4[k] = std::min(rho4[k], (K * d * d / N) * rp[k] - d2rp[k]);
    }
  }

  std::vector<double> rho4_margin(T, 0.0);
  for (std::size_t k = 0; k < T; ++k) {
    rep.margin.push_back(*std::min_element(margins[k].begin(), margins[k].end()));
    rho4_margin[k] = std::isfinite(rho4[k]) ? rho4[k] : 0.0;
  }
  rep.extra["rho4_margin"] = rho4_margin;

  // pushforward identity residual in weighted L1
  double push = 0.0;
  for (std::size_t k = 0; k < T; ++k) {
    double s = path.normalized(k);
    double acc = 0.0;
    for (std::ptrdiff_t jj = lo; jj <= hi; ++jj) {
      auto j = static_cast<std::size_t>(jj);
      double y = model.x[j] + s * (map.map_values[j] - model.x[j]);
      double lhs = rho0[j] * std::exp(-model.V[j]) * model.omega[j];
      double rhs = rho_v_interp[k](y) * path.jacobians[k][j] * model.omega[j];
      acc += std::abs(lhs - rhs) * model.h();
    }
    push = std::max(push, acc);
  }
  rep.diagnostics["pushforward_l1_residual"] = push;
  finalize_report(rep);
  return rep;
}

CheckReport identity_ij(const ManifoldModel& model, const GeodesicPath& path,
                        const BakryEmeryParams& params, double N, double tolerance) {
  (void)params;
  if (!path.map) throw Error("identity_ij: path carries no transport map");
  const TransportMap& map = *path.map;
  const std::size_t G = model.size();
  const std::size_t T = path.steps();

  CheckReport rep;
  rep.check_id = "identity_ij";
  rep.statement =
      "int |grad phi|^2 rho^{1-1/N} dmu == int d^2(x,F_1 x) rho^{1-1/N}(F_t x) J^mu_t dmu";
  rep.times = path.times;
  rep.tolerance = tolerance;

  const ScalarField& rho0 = path.densities.front();
  Support sup0 = find_support(rho0, kRhoFloor);
  Pchip v_interp(model.x, model.V);

  for (std::size_t k = 0; k < T; ++k) {
    const ScalarField& rho = path.densities[k];
    ScalarField grad = derivative1(path.phases[k], model.h());
    ScalarField lhs_f(G, 0.0);
    Support sup = find_support(rho, kRhoFloor);
    for (std::size_t j = 0; j < G; ++j)
      lhs_f[j] = grad[j] * grad[j] * sn_power(rho[j], N);
    double lhs = integrate_mu(model, lhs_f, sup);

    Pchip rho_interp = density_interpolant(model, rho);
    double s = path.normalized(k);
    double span = path.window_length();
    ScalarField rhs_f(G, 0.0);
    for (std::ptrdiff_t jj = sup0.lo; jj <= sup0.hi; ++jj) {
      auto j = static_cast<std::size_t>(jj);
      double disp = map.map_values[j] - model.x[j];
      double y = model.x[j] + s * disp;
      double jac_mu = path.jacobians[k][j] * std::exp(model.V[j] - v_interp(y));
      double d = std::abs(disp) / span;  // velocity magnitude in the window clock
      rhs_f[j] = d * d * sn_power(std::max(0.0, rho_interp(y)), N) * jac_mu;
    }
    double rhs = integrate_mu(model, rhs_f, sup0);
    rep.residual.push_back(lhs - rhs);
    rep.margin.push_back(-std::abs(lhs - rhs));
  }
  finalize_report(rep);
  return rep;
}

CheckReport check_ent_infty(const ManifoldModel& model, const GeodesicPath& path,
                            const EntropySeries& series, const BakryEmeryParams& params,
                            double tolerance) {
  const std::size_t T = series.times.size();
  const double K = params.K;
  const double span = series.times.back() - series.times.front();
  const double theta_ep2 = series.theta * series.theta * span * span;

  CheckReport rep;
  rep.check_id = "ent_infty";
  rep.statement = "d2/dt2 Ent >= K int |grad phi|^2 rho dmu; integrated K-convexity; (Ut2)";
  rep.times = series.times;
  rep.tolerance = tolerance;

  std::vector<double> integrated(T), ut2(T, 0.0);
  for (std::size_t k = 0; k < T; ++k) {
    rep.margin.push_back(series.gamma2_rho[k] - K * series.energy[k]);
    double s = (series.times[k] - series.times.front()) / span;
    double chord = (1.0 - s) * series.Ent.front() + s * series.Ent.back() -
                   0.5 * K * s * (1.0 - s) * theta_ep2;
    integrated[k] = chord - series.Ent[k];
  }
  rep.extra["integrated_margin"] = integrated;
  rep.diagnostics["integrated_min_margin"] =
      *std::min_element(integrated.begin(), integrated.end());

  // (Ut2) with the xlogx generator: K_{N,U} = K inf r / r^{1-1/N}
  {
    EntropyGenerator gen = make_xlogx_generator();
    DcnClassification cls = dcn_classify(gen, params.N);
    double knu = K * cls.k_ratio;
    for (std::size_t k = 0; k < T; ++k) {
      DissipationPair dp = generalized_dissipation(model, path, gen, k);
      ut2[k] = dp.U2 - knu * series.grad2_sn[k];
    }
    rep.extra["ut2_margin"] = ut2;
    rep.diagnostics["ut2_min_margin"] = *std::min_element(ut2.begin(), ut2.end());
    rep.diagnostics["k_nu"] = knu;
  }
  finalize_report(rep);
  return rep;
}

namespace {

/// Renyi entropy of the self-similar Gaussian reference solution, the m-form
/// of the normalization (see README on the n/m print discrepancy).
double model_renyi_entropy(double t, double m, double p) {
  double base = 0.5 * m * std::log(4.0 * M_PI * M_E * t * t) - 0.5 * m;
  if (p == 1.0) return base + 0.5 * m;
  return base + 0.5 * m * std::log(p) / (p - 1.0);
}

}  // namespace

WEntropyResult w_entropy_profile(const ManifoldModel& model, const GeodesicPath& path,
                                 const EntropySeries& series, const BakryEmeryParams& params,
                                 bool drift_sign_plus, double tolerance) {
  if (params.m_infinite()) throw Error("w_entropy_profile: requires finite m");
  if (series.times.front() <= 0.0)
    throw Error("w_entropy_profile: window must have strictly positive times");
  const std::size_t T = series.times.size();
  const double m = params.m;
  const double n = model.n;
  const double p = params.p;
  const double drift_sign = drift_sign_plus ? 1.0 : -1.0;

  WEntropyResult out;
  WEntropySeries& w = out.series;
  w.times = series.times;

  std::vector<double> tHm(T), tHmp(T);
  for (std::size_t k = 0; k < T; ++k) {
    double t = series.times[k];
    w.Hm.push_back(series.H[k] - 0.5 * m * (1.0 + std::log(4.0 * M_PI * t * t)));
    w.Hmp.push_back(series.Hp[k] - model_renyi_entropy(t, m, p));
    tHm[k] = series.times[k] * w.Hm[k];
    tHmp[k] = series.times[k] * w.Hmp[k];
  }
  w.Wm = fd_first(tHm, series.dt);
  w.Wmp = fd_first(tHmp, series.dt);
  w.dWm = fd_first(w.Wm, series.dt);
  w.dWmp = fd_first(w.Wmp, series.dt);

  CurvatureProfile prof = curvature_profile(model, params);
  for (std::size_t k = 0; k < T; ++k) {
    double t = series.times[k];
    const ScalarField& rho = path.densities[k];
    const ScalarField& phi = path.phases[k];
    Support sup = find_support(rho, kRhoFloor);
    HessianDecomposition hd = hessian_decomposition(model, phi, t, params);
    ScalarField grad = derivative1(phi, model.h());

    ScalarField rho_p(model.size(), 0.0);
    for (std::size_t j = 0; j < model.size(); ++j)
      if (rho[j] > kRhoFloor) rho_p[j] = std::pow(rho[j], p);
    double Z = integrate_mu(model, rho_p, sup);

    ScalarField f_rho(model.size(), 0.0), f_gamma(model.size(), 0.0);
    for (std::size_t j = 0; j < model.size(); ++j) {
      double core = hd.hess_minus_g_over_t2[j] + prof.ric_mn[j] * grad[j] * grad[j];
      if (m > n) {
        double dv = hd.drift[j] + drift_sign * (m - n) / t;
        core += dv * dv / (m - n);
      }
      f_rho[j] = core * rho[j];
      f_gamma[j] = core * rho_p[j];
    }
    double rhs_rho = -integrate_mu(model, f_rho, sup);
    double rhs_gamma = -integrate_mu(model, f_gamma, sup) / Z - (p - 1.0) * series.var_gamma[k];
    w.dWm_formula.push_back(t * rhs_rho);
    w.dWmp_formula.push_back(t * rhs_gamma);
  }

  CheckReport rep;
  rep.check_id = "w_entropy";
  rep.times = series.times;
  rep.tolerance = tolerance;

  double ric_min = *std::min_element(prof.ric_mn.begin(), prof.ric_mn.end());
  bool monotone_applicable = ric_min >= -1e-12;
  rep.diagnostics["ric_mn_min"] = ric_min;
  rep.diagnostics["monotonicity_applicable"] = monotone_applicable ? 1.0 : 0.0;

  double max_res = 0.0;
  for (std::size_t k = 0; k < T; ++k) {
    double res = (k >= 2 && k + 2 < T) ? w.dWm[k] - w.dWm_formula[k] : 0.0;
    rep.residual.push_back(res);
    max_res = std::max(max_res, std::abs(res));
  }
  rep.diagnostics["formula_max_residual"] = max_res;
  if (monotone_applicable) {
    rep.statement = "W_m nonincreasing under ric_mn >= 0 (margin = -dW_m/dt, interior)";
    for (std::size_t k = 0; k < T; ++k)
      rep.margin.push_back((k >= 1 && k + 1 < T) ? -w.dWm[k] : 0.0);
  } else {
    rep.statement = "W-entropy formula residual (monotonicity not applicable, ric_mn < 0)";
    rep.margin = rep.residual;
    for (double& v : rep.margin) v = -std::abs(v);
  }
  finalize_report(rep);
  out.report = rep;
  return out;
}

CheckReport check_niw(const EntropySeries& series, const WEntropySeries& w,
                      const BakryEmeryParams& params, double tolerance) {
  if (params.m_infinite()) throw Error("check_niw: requires finite m");
  if (series.times.front() <= 0.0) throw Error("check_niw: requires a positive-time window");
  const std::size_t T = series.times.size();
  const double m = params.m;
  const double K = params.K;

  CheckReport rep;
  rep.check_id = "niw";
  rep.statement = "d2N_m/dt2 == (N_m/m)[ (I - m/t)^2/m + (1/t) dW_m/dt ]";
  rep.times = series.times;
  rep.tolerance = tolerance;

  std::vector<double> wineq(T, 0.0), renyi_res(T, 0.0);
  for (std::size_t k = 0; k < T; ++k) {
    double t = series.times[k];
    bool interior = k >= 2 && k + 2 < T;
    double res = 0.0, res_p = 0.0;
    if (interior) {
      double di = series.I[k] - m / t;
      res = series.d2Nm_an[k] - (series.Nm[k] / m) * (di * di / m + w.dWm[k] / t);
      double dip = series.Ip[k] - m / t;
      res_p = series.d2Nmp_an[k] - (series.Nmp[k] / m) * (dip * dip / m + w.dWmp[k] / t);
      // W-inequality (valid when ric_mn >= K): dW/dt <= -t K energy - (t/m)(I-m/t)^2
      wineq[k] = (-K * series.energy[k] - di * di / m) - w.dWm[k] / t;
    }
    rep.residual.push_back(res);
    rep.margin.push_back(-std::abs(res));
    renyi_res[k] = res_p;
  }
  rep.extra["w_inequality_margin"] = wineq;
  rep.extra["renyi_niw_residual"] = renyi_res;
  double mx = 0.0;
  for (double v : renyi_res) mx = std::max(mx, std::abs(v));
  rep.diagnostics["renyi_niw_max_residual"] = mx;
  finalize_report(rep);
  return rep;
}

std::map<std::string, double> rigidity_probe(const ManifoldModel& model,
                                             const GeodesicPath& path,
                                             const EntropySeries& series,
                                             const BakryEmeryParams& params,
                                             const CheckReport& report) {
  std::map<std::string, double> diag;
  diag["applicable"] = report.verdict == Verdict::equality ? 1.0 : 0.0;
  if (report.verdict != Verdict::equality) {
    diag["warning_not_equality"] = 1.0;
    return diag;
  }
  const double m = params.m;
  const bool finite_m = !params.m_infinite();
  const double n = model.n;
  const std::size_t T = path.steps();

  double soliton = 0.0, cross_term = 0.0;
  for (std::size_t k = 0; k < T; ++k) {
    const ScalarField& rho = path.densities[k];
    const ScalarField& phi = path.phases[k];
    Support sup = find_support(rho, kRhoFloor);
    ScalarField grad = derivative1(phi, model.h());
    ScalarField d2phi = derivative2(phi, model.h());
    ScalarField lphi = apply_witten_laplacian(model, phi);
    double a = finite_m ? series.I[k] / m : 0.0;
    ScalarField f(model.size(), 0.0), g(model.size(), 0.0);
    for (std::size_t j = 0; j < model.size(); ++j) {
      double ang = model.angular[j] * grad[j];
      f[j] = ((d2phi[j] - a) * (d2phi[j] - a) + (n - 1.0) * (ang - a) * (ang - a)) * rho[j];
      if (finite_m && m > n) {
        double cr = lphi[j] + (m / (m - n)) * model.Vp[j] * grad[j];
        g[j] = ((m - n) / (m * n)) * cr * cr * rho[j];
      }
    }
    soliton = std::max(soliton, std::sqrt(std::max(0.0, integrate_mu(model, f, sup))));
    cross_term = std::max(cross_term, integrate_mu(model, g, sup));
  }
  diag["hessian_soliton_defect"] = soliton;
  diag["weighted_cross_term"] = cross_term;

  CurvatureProfile prof = curvature_profile(model, params);
  double pinch = 0.0;
  for (std::size_t j = 0; j < model.size(); ++j) {
    bool in_support = false;
    for (const auto& rho : path.densities)
      if (rho[j] > kSupportFloor) {
        in_support = true;
        break;
      }
    if (in_support) pinch = std::max(pinch, std::abs(prof.ric_mn[j] - params.K));
  }
  diag["curvature_pinch"] = pinch;

  std::vector<double> dI = fd_first(series.I, series.dt);
  double ricc = 0.0;
  for (std::size_t k = 1; k + 1 < T; ++k) {
    double r = dI[k] + (finite_m ? series.I[k] * series.I[k] / m : 0.0) +
               params.K * series.energy[k];
    ricc = std::max(ricc, std::abs(r));
  }
  diag["riccati_residual"] = ricc;
  return diag;
}

}  // namespace wlab
