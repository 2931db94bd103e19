#include "wlab/entropy.hpp"

#include <algorithm>
#include <cmath>

#include "wlab/numerics.hpp"

namespace wlab {

namespace {
constexpr double kRhoFloor = 1e-300;
}

EntropyGenerator make_xlogx_generator() {
  EntropyGenerator g;
  g.name = "xlogx";
  g.e = [](double r) { return r > kRhoFloor ? r * std::log(r) : 0.0; };
  g.p1 = [](double r) { return r; };
  g.p2 = [](double) { return 0.0; };
  return g;
}

EntropyGenerator make_power_generator(double p) {
  if (p == 1.0) return make_xlogx_generator();
  EntropyGenerator g;
  g.name = "power(" + std::to_string(p) + ")";
  g.e = [p](double r) { return r > 0.0 ? std::pow(r, p) / (p - 1.0) : 0.0; };
  g.p1 = [p](double r) { return r > 0.0 ? std::pow(r, p) : 0.0; };
  g.p2 = [p](double r) { return r > 0.0 ? (p - 1.0) * std::pow(r, p) : 0.0; };
  return g;
}

EntropyGenerator make_sturm_generator(double N) {
  if (!(N >= 1.0)) throw Error("sturm generator needs N >= 1");
  EntropyGenerator g;
  g.name = "sturm(" + std::to_string(N) + ")";
  double q = 1.0 - 1.0 / N;
  g.e = [N, q](double r) { return r > 0.0 ? -N * std::pow(r, q) : 0.0; };
  g.p1 = [q](double r) { return r > 0.0 ? std::pow(r, q) : 0.0; };
  g.p2 = [N, q](double r) { return r > 0.0 ? -std::pow(r, q) / N : 0.0; };
  return g;
}

void validate_generator(const EntropyGenerator& gen) {
  auto deriv5 = [](const std::function<double(double)>& f, double r, double h) {
    return (f(r - 2 * h) - 8.0 * f(r - h) + 8.0 * f(r + h) - f(r + 2 * h)) / (12.0 * h);
  };
  for (int k = -12; k <= 12; ++k) {
    double r = std::pow(10.0, k / 2.0);
    double h = 1e-3 * r;
    double p1_num = r * deriv5(gen.e, r, h) - gen.e(r);
    if (std::abs(p1_num - gen.p1(r)) > 1e-8 * (1.0 + std::abs(gen.p1(r))))
      throw Error("generator " + gen.name + " has inconsistent p1 at r = " + std::to_string(r));
    double p2_num = r * deriv5(gen.p1, r, h) - gen.p1(r);
    if (std::abs(p2_num - gen.p2(r)) > 1e-8 * (1.0 + std::abs(gen.p2(r))))
      throw Error("generator " + gen.name + " has inconsistent p2 at r = " + std::to_string(r));
  }
}

double shannon_entropy(const ManifoldModel& model, const ScalarField& rho) {
  double mass = density_mass(model, rho);
  if (std::abs(mass - 1.0) > 1e-4)
    throw Error("shannon_entropy: density not normalized (mass " + std::to_string(mass) + ")");
  ScalarField integrand(rho.size(), 0.0);
  for (std::size_t j = 0; j < rho.size(); ++j)
    integrand[j] = rho[j] > kRhoFloor ? -rho[j] * std::log(rho[j]) : 0.0;
  return integrate_mu(model, integrand, find_support(rho, kRhoFloor));
}

double renyi_entropy(const ManifoldModel& model, const ScalarField& rho, double p) {
  if (p == 1.0) throw Error("renyi_entropy: p = 1 is the Shannon case");
  // max-factored form keeps rho^p in range for peaked densities
  double rmax = *std::max_element(rho.begin(), rho.end());
  if (!(rmax > 0.0)) throw Error("renyi_entropy: zero density");
  ScalarField integrand(rho.size(), 0.0);
  for (std::size_t j = 0; j < rho.size(); ++j)
    integrand[j] = rho[j] > kRhoFloor ? std::pow(rho[j] / rmax, p) : 0.0;
  double integral = integrate_mu(model, integrand, find_support(rho, kRhoFloor));
  if (!(integral > 0.0) || !std::isfinite(integral))
    throw Error("renyi_entropy: divergent or vanishing integral");
  return (p * std::log(rmax) + std::log(integral)) / (1.0 - p);
}

double sn_functional(const ManifoldModel& model, const ScalarField& rho, double N) {
  if (!(N >= 1.0)) throw Error("sn_functional: N must be >= 1");
  ScalarField integrand(rho.size(), 0.0);
  double q = 1.0 - 1.0 / N;
  for (std::size_t j = 0; j < rho.size(); ++j)
    if (rho[j] > kRhoFloor) integrand[j] = q == 0.0 ? 1.0 : std::pow(rho[j], q);
  double integral = integrate_mu(model, integrand, find_support(rho, kRhoFloor));
  if (!std::isfinite(integral)) throw Error("sn_functional: divergent integral");
  return -integral;
}

namespace {

/// gamma-weights rho^p * mu; returns the normalizing integral of rho^p.
double gamma_normalizer(const ManifoldModel& model, const ScalarField& rho, double p,
                        ScalarField& rho_p) {
  rho_p.assign(rho.size(), 0.0);
  for (std::size_t j = 0; j < rho.size(); ++j)
    if (rho[j] > kRhoFloor) rho_p[j] = std::pow(rho[j], p);
  double Z = integrate_mu(model, rho_p, find_support(rho, kRhoFloor));
  if (!(Z > 0.0)) throw Error("gamma weights: vanishing normalizer");
  return Z;
}

}  // namespace

FisherPair fisher_information(const ManifoldModel& model, const ScalarField& rho,
                              const ScalarField& phi, double p) {
  ScalarField lphi = apply_witten_laplacian(model, phi);
  Support s = find_support(rho, kRhoFloor);
  ScalarField integrand(rho.size(), 0.0);
  for (std::size_t j = 0; j < rho.size(); ++j) integrand[j] = lphi[j] * rho[j];
  FisherPair out;
  out.I = integrate_mu(model, integrand, s);

  ScalarField rho_p;
  double Z = gamma_normalizer(model, rho, p, rho_p);
  for (std::size_t j = 0; j < rho.size(); ++j) integrand[j] = lphi[j] * rho_p[j];
  out.Ip = integrate_mu(model, integrand, s) / Z;
  return out;
}

DissipationPair generalized_dissipation(const ManifoldModel& model, const GeodesicPath& path,
                                        const EntropyGenerator& gen, std::size_t k) {
  const ScalarField& rho = path.densities.at(k);
  const ScalarField& phi = path.phases.at(k);
  ScalarField lphi = apply_witten_laplacian(model, phi);
  ScalarField g2 = gamma2_field(model, phi);
  Support s = find_support(rho, kRhoFloor);

  ScalarField i1(rho.size(), 0.0), i2(rho.size(), 0.0);
  for (std::ptrdiff_t j = s.lo; j >= 0 && j <= s.hi; ++j) {
    auto u = static_cast<std::size_t>(j);
    double p1 = gen.p1(rho[u]);
    double p2 = gen.p2(rho[u]);
    if (!std::isfinite(p1) || !std::isfinite(p2))
      throw Error("generator " + gen.name + " undefined at rho = " + std::to_string(rho[u]));
    i1[u] = -lphi[u] * p1;
    i2[u] = g2[u] * p1 + lphi[u] * lphi[u] * p2;
  }
  DissipationPair out;
  out.U1 = integrate_mu(model, i1, s);
  out.U2 = integrate_mu(model, i2, s);
  return out;
}

EntropySeries build_series(const ManifoldModel& model, const GeodesicPath& path,
                           const BakryEmeryParams& params,
                           const std::vector<EntropyGenerator>& generators) {
  if (path.steps() < 5) throw Error("build_series: need at least 5 time samples");
  const std::size_t T = path.steps();
  const std::size_t G = model.size();

  EntropySeries s;
  s.times = path.times;
  s.dt = (path.times.back() - path.times.front()) / static_cast<double>(T - 1);
  for (std::size_t k = 1; k < T; ++k)
    if (std::abs(path.times[k] - path.times[k - 1] - s.dt) > 1e-9 * s.dt)
      throw Error("build_series: time grid must be uniform");
  s.theta = path.theta;

  const double p = params.p;
  const double N = params.N;
  const bool finite_m = !params.m_infinite();
  const double m = params.m;

  for (std::size_t k = 0; k < T; ++k) {
    const ScalarField& rho = path.densities[k];
    const ScalarField& phi = path.phases[k];
    Support sup = find_support(rho, kRhoFloor);

    double H = shannon_entropy(model, rho);
    s.H.push_back(H);
    s.Ent.push_back(-H);
    double Hp = (p == 1.0) ? H : renyi_entropy(model, rho, p);
    s.Hp.push_back(Hp);
    s.SN.push_back(sn_functional(model, rho, N));
    s.Nm.push_back(finite_m ? std::exp(H / m) : 1.0);
    s.Nmp.push_back(finite_m ? std::exp(Hp / m) : 1.0);

    ScalarField lphi = apply_witten_laplacian(model, phi);
    ScalarField grad = derivative1(phi, model.h());
    ScalarField g2 = gamma2_field(model, phi);

    FisherPair fp = fisher_information(model, rho, phi, p);
    s.I.push_back(fp.I);
    s.Ip.push_back(fp.Ip);

    ScalarField rho_p;
    double Z = gamma_normalizer(model, rho, p, rho_p);

    ScalarField tmp(G, 0.0);
    auto integ = [&](auto f) {
      for (std::size_t j = 0; j < G; ++j) tmp[j] = f(j);
      return integrate_mu(model, tmp, sup);
    };

    s.var_gamma.push_back(
        integ([&](std::size_t j) { return (lphi[j] - fp.Ip) * (lphi[j] - fp.Ip) * rho_p[j]; }) /
        Z);
    s.energy.push_back(integ([&](std::size_t j) { return grad[j] * grad[j] * rho[j]; }));
    s.grad2_gamma.push_back(integ([&](std::size_t j) { return grad[j] * grad[j] * rho_p[j]; }) /
                            Z);
    double q = 1.0 - 1.0 / N;
    s.grad2_sn.push_back(integ([&](std::size_t j) {
      return rho[j] > kRhoFloor ? grad[j] * grad[j] * (q == 0.0 ? 1.0 : std::pow(rho[j], q))
                                : 0.0;
    }));
    s.lphi_sq.push_back(integ([&](std::size_t j) { return lphi[j] * lphi[j] * rho[j]; }));
    s.gamma2_rho.push_back(integ([&](std::size_t j) { return g2[j] * rho[j]; }));

    // analytic first/second derivatives of H (dissipation formulas)
    s.dH_an.push_back(fp.I);
    s.d2H_an.push_back(-s.gamma2_rho.back());

    // Renyi analytic derivatives through the power dissipation route
    if (p != 1.0) {
      EntropyGenerator pg = make_power_generator(p);
      DissipationPair dp = generalized_dissipation(model, path, pg, k);
      // Hp'' = -U''/int(rho^p) + (p-1) Ip^2 for U = (1/(p-1)) int rho^p
      double hp2 = -dp.U2 / Z + (p - 1.0) * fp.Ip * fp.Ip;
      s.dHp_an.push_back(fp.Ip);
      s.d2Hp_an.push_back(hp2);
    } else {
      s.dHp_an.push_back(fp.I);
      s.d2Hp_an.push_back(-s.gamma2_rho.back());
    }

    // S_N analytic derivatives via the sturm generator, U = N S_N
    {
      EntropyGenerator sg = make_sturm_generator(N);
      DissipationPair dp = generalized_dissipation(model, path, sg, k);
      s.dSN_an.push_back(dp.U1 / N);
      s.d2SN_an.push_back(dp.U2 / N);
    }

    if (finite_m) {
      double h2 = s.d2H_an.back() + fp.I * fp.I / m;
      s.d2Nm_an.push_back(s.Nm.back() / m * h2);
      double hp2 = s.d2Hp_an.back() + fp.Ip * fp.Ip / m;
      s.d2Nmp_an.push_back(s.Nmp.back() / m * hp2);
    } else {
      s.d2Nm_an.push_back(0.0);
      s.d2Nmp_an.push_back(0.0);
    }
  }

  s.dH = fd_first(s.H, s.dt);
  s.d2H = fd_second(s.H, s.dt);
  s.dHp = fd_first(s.Hp, s.dt);
  s.d2Hp = fd_second(s.Hp, s.dt);
  s.dSN = fd_first(s.SN, s.dt);
  s.d2SN = fd_second(s.SN, s.dt);
  s.dNm = fd_first(s.Nm, s.dt);
  s.d2Nm = fd_second(s.Nm, s.dt);
  s.dNmp = fd_first(s.Nmp, s.dt);
  s.d2Nmp = fd_second(s.Nmp, s.dt);

  for (const auto& gen : generators) {
    validate_generator(gen);
    GeneratorSeries gs;
    for (std::size_t k = 0; k < T; ++k) {
      const ScalarField& rho = path.densities[k];
      Support sup = find_support(rho, kRhoFloor);
      ScalarField ev(G, 0.0);
      for (std::ptrdiff_t j = sup.lo; j >= 0 && j <= sup.hi; ++j) {
        auto u = static_cast<std::size_t>(j);
        ev[u] = gen.e(rho[u]);
      }
      gs.U.push_back(integrate_mu(model, ev, sup));
      DissipationPair dp = generalized_dissipation(model, path, gen, k);
      gs.U1.push_back(dp.U1);
      gs.U2.push_back(dp.U2);
    }
    gs.dU = fd_first(gs.U, s.dt);
    gs.d2U = fd_second(gs.U, s.dt);
    s.generators[gen.name] = std::move(gs);
  }
  return s;
}

}  // namespace wlab
