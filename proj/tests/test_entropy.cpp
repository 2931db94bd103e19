#include <cmath>

#include <doctest.h>

#include "oracles.hpp"
#include "wlab/analytic.hpp"
#include "wlab/entropy.hpp"
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

std::shared_ptr<const ManifoldModel> aligned_model() {
  return line_model(-2.0, 3.0, 2561);
}

GeodesicPath dilation_path(const std::shared_ptr<const ManifoldModel>& model,
                           std::size_t samples = 65) {
  return analytic_gaussian_path(model, 0.0, 1.0, 0.0, 2.0,
                                oracle::uniform_times(0.0, 1.0, samples), {});
}

}  // namespace

TEST_CASE("shannon_entropy closed forms") {
  auto model = line_model(-12.0, 12.0, 2048);
  ScalarField rho = gaussian_density(*model, 0.0, 1.0);
  // oracle: (1/2) log(2 pi e) = 1.4189385332046727
  CHECK(shannon_entropy(*model, rho) ==
        doctest::Approx(oracle::gaussian_shannon_entropy(1.0)).epsilon(1e-10));
  CHECK(oracle::gaussian_shannon_entropy(1.0) == doctest::Approx(1.4189385332046727));

  auto am = aligned_model();
  ScalarField uni = uniform_density(*am, 0.0, 1.0);
  CHECK(std::abs(shannon_entropy(*am, uni)) < 1e-12);

  // model gaussian at t: H = (1/2) log(4 pi e t^2)
  Grid grid{-16.0, 16.0, 2048, false};
  GeodesicPath mp = model_gaussian_path(1, oracle::uniform_times(0.5, 1.5, 9), grid);
  for (std::size_t k : {std::size_t(0), std::size_t(8)}) {
    double t = mp.times[k];
    CHECK(shannon_entropy(*mp.model, mp.densities[k]) ==
          doctest::Approx(0.5 * std::log(4.0 * M_PI * M_E * t * t)).epsilon(1e-10));
  }

  ScalarField bad = rho;
  for (double& v : bad) v *= 1.01;
  CHECK_THROWS_AS(shannon_entropy(*model, bad), Error);
}

TEST_CASE("renyi_entropy closed forms and the p -> 1 limit") {
  auto model = line_model(-12.0, 12.0, 2048);
  ScalarField rho = gaussian_density(*model, 0.0, 1.0);
  // oracle: H_2(N(0,1)) = log(2 sqrt(pi)) = 1.2655121234846454
  CHECK(renyi_entropy(*model, rho, 2.0) ==
        doctest::Approx(oracle::gaussian_renyi2_entropy(1.0)).epsilon(1e-10));
  CHECK(oracle::gaussian_renyi2_entropy(1.0) == doctest::Approx(1.2655121234846454));

  auto am = aligned_model();
  ScalarField uni = uniform_density(*am, 0.0, 1.0);
  for (double p : {0.5, 2.0, 3.0}) CHECK(std::abs(renyi_entropy(*am, uni, p)) < 1e-12);

  // continuity at p = 1 within 1e-4 of the Shannon value at p = 1 +/- 1e-3
  double h = shannon_entropy(*model, rho);
  CHECK(std::abs(renyi_entropy(*model, rho, 1.0 + 1e-3) - h) < 1e-3);
  CHECK(std::abs(renyi_entropy(*model, rho, 1.0 - 1e-3) - h) < 1e-3);
  CHECK_THROWS_AS(renyi_entropy(*model, rho, 1.0), Error);
}

TEST_CASE("renyi entropy of the model gaussian matches the m-normalized formula") {
  Grid grid{-16.0, 16.0, 4096, false};
  GeodesicPath mp = model_gaussian_path(1, oracle::uniform_times(1.0, 1.5, 9), grid);
  // m = 1, p = 2, t = 1: (m/2)log(4 pi e t^2) + (m/2)(log p)/(p-1) - m/2
  double expect = 0.5 * std::log(4.0 * M_PI * M_E) + 0.5 * std::log(2.0) - 0.5;
  CHECK(renyi_entropy(*mp.model, mp.densities[0], 2.0) ==
        doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("sn_functional closed forms and the N -> infinity bridge") {
  auto am = aligned_model();
  ScalarField uni = uniform_density(*am, 0.0, 1.0);
  CHECK(sn_functional(*am, uni, 2.0) == doctest::Approx(-1.0).epsilon(1e-14));

  // rho^{1/2} has sqrt(2)-wider tails, so give the quadrature room
  auto model = line_model(-20.0, 20.0, 3200);
  for (double sd : {1.0, 1.7}) {
    ScalarField rho = gaussian_density(*model, 0.0, sd);
    CHECK(sn_functional(*model, rho, 2.0) ==
          doctest::Approx(oracle::gaussian_s2(sd)).epsilon(1e-10));
  }

  // N(1 + S_N) -> int rho log rho dmu with error halving as N doubles
  ScalarField rho = gaussian_density(*model, 0.0, 1.0);
  double target = -shannon_entropy(*model, rho);
  for (double N : {1e2, 1e3, 1e4}) {
    double e1 = std::abs(N * (1.0 + sn_functional(*model, rho, N)) - target);
    double e2 = std::abs(2 * N * (1.0 + sn_functional(*model, rho, 2 * N)) - target);
    CHECK(e1 / e2 >= 1.8);
  }
}

TEST_CASE("fisher_information along the dilation and identity paths") {
  auto model = line_model(-12.0, 12.0, 2048);
  GeodesicPath path = dilation_path(model, 5);
  for (std::size_t k = 0; k < path.steps(); ++k) {
    double t = path.times[k];
    FisherPair fp = fisher_information(*model, path.densities[k], path.phases[k], 2.0);
    CHECK(fp.I == doctest::Approx(1.0 / (1.0 + t)).epsilon(1e-8));
    // L phi is spatially constant, so Ip = I
    CHECK(fp.Ip == doctest::Approx(1.0 / (1.0 + t)).epsilon(1e-8));
  }
  // model path: I = n/t, at n=1, t=0.5: I = 2
  Grid grid{-16.0, 16.0, 2048, false};
  GeodesicPath mp = model_gaussian_path(1, oracle::uniform_times(0.5, 1.5, 5), grid);
  FisherPair fp = fisher_information(*mp.model, mp.densities[0], mp.phases[0], 2.0);
  CHECK(fp.I == doctest::Approx(2.0).epsilon(1e-8));
  // identity path: I = 0
  GeodesicPath idp = analytic_gaussian_path(model, 0.0, 1.0, 0.0, 1.0,
                                            oracle::uniform_times(0.0, 1.0, 5), {});
  fp = fisher_information(*model, idp.densities[2], idp.phases[2], 2.0);
  CHECK(std::abs(fp.I) < 1e-10);
}

TEST_CASE("generator presets validate and a broken one is rejected") {
  validate_generator(make_xlogx_generator());
  for (double p : {0.5, 1.5, 2.0}) validate_generator(make_power_generator(p));
  validate_generator(make_sturm_generator(3.0));
  EntropyGenerator broken = make_power_generator(2.0);
  broken.p2 = [](double r) { return r; };
  CHECK_THROWS_AS(validate_generator(broken), Error);
}

TEST_CASE("generalized_dissipation: dilation, identity, uniform examples") {
  auto model = line_model(-12.0, 12.0, 2048);
  GeodesicPath path = dilation_path(model, 5);
  // e = r log r at t = 0: U1 = -I = -1, U2 = int Gamma2 rho = 1
  DissipationPair dp = generalized_dissipation(*model, path, make_xlogx_generator(), 0);
  CHECK(dp.U1 == doctest::Approx(-1.0).epsilon(1e-8));
  CHECK(dp.U2 == doctest::Approx(1.0).epsilon(1e-8));

  GeodesicPath idp = analytic_gaussian_path(model, 0.0, 1.0, 0.0, 1.0,
                                            oracle::uniform_times(0.0, 1.0, 5), {});
  for (const auto& gen : {make_xlogx_generator(), make_power_generator(2.0)}) {
    DissipationPair d0 = generalized_dissipation(*model, idp, gen, 2);
    CHECK(std::abs(d0.U1) < 1e-9);
    CHECK(std::abs(d0.U2) < 1e-9);
  }

  // uniform [0,1] -> [0,2], e = r^2: U1(0) = -int L(phi) rho^2 = -1
  auto am = aligned_model();
  GeodesicPath up = analytic_uniform_path(am, 0.0, 1.0, 0.0, 2.0,
                                          oracle::uniform_times(0.0, 1.0, 5), {});
  DissipationPair du = generalized_dissipation(*am, up, make_power_generator(2.0), 0);
  CHECK(du.U1 == doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("build_series: dilation closed forms across the board") {
  // wide grid: S_2 integrands carry sqrt(2)-wider tails than the densities
  auto model = line_model(-20.0, 20.0, 4096);
  GeodesicPath path = dilation_path(model);
  BakryEmeryParams prm;
  prm.m = 1.0;
  prm.p = 2.0;
  prm.N = 2.0;
  EntropySeries s = build_series(*model, path, prm,
                                 {make_xlogx_generator(), make_power_generator(2.0)});

  for (std::size_t k = 0; k < s.times.size(); ++k) {
    double t = s.times[k];
    // H(t) = (1/2) log(2 pi e) + log(1+t)
    CHECK(s.H[k] == doctest::Approx(oracle::gaussian_shannon_entropy(1.0 + t)).epsilon(1e-9));
    CHECK(s.Ent[k] == -s.H[k]);
    // I = 1/(1+t), and dH matches it at interior samples
    CHECK(s.I[k] == doctest::Approx(1.0 / (1.0 + t)).epsilon(1e-7));
    if (k > 0 && k + 1 < s.times.size())
      CHECK(std::abs(s.dH[k] - 1.0 / (1.0 + t)) < 1e-4);
    // Var_gamma(L phi) = 0: L phi is x-independent
    CHECK(std::abs(s.var_gamma[k]) < 1e-10);
    // S_2 = -(8 pi)^{1/4} sqrt(1+t)
    CHECK(s.SN[k] == doctest::Approx(oracle::gaussian_s2(1.0 + t)).epsilon(1e-9));
    // energy = theta^2 = 1
    CHECK(s.energy[k] == doctest::Approx(1.0).epsilon(1e-9));
  }

  // dissipation consistency (ent1)/(ent2) and the generalized forms
  for (const auto& [name, gs] : s.generators) {
    for (std::size_t k = 2; k + 2 < s.times.size(); ++k) {
      CHECK(std::abs(gs.dU[k] - gs.U1[k]) <= 1e-3 * (1.0 + std::abs(gs.U1[k])));
      CHECK(std::abs(gs.d2U[k] - gs.U2[k]) <= 1e-3 * (1.0 + std::abs(gs.U2[k])));
    }
  }

  // Cauchy-Schwarz: int (L phi)^2 rho >= I^2
  for (std::size_t k = 0; k < s.times.size(); ++k)
    CHECK(s.lphi_sq[k] >= s.I[k] * s.I[k] - 1e-12);

  // power chain rule on the analytic assembly
  for (std::size_t k = 0; k < s.times.size(); ++k) {
    double byhand = s.Nm[k] / prm.m * (s.d2H_an[k] + s.dH_an[k] * s.dH_an[k] / prm.m);
    CHECK(std::abs(s.d2Nm_an[k] - byhand) <= 1e-6 * (1.0 + std::abs(byhand)));
  }

  // N_1(t) = sqrt(2 pi e) (1+t) is affine: FD second derivative vanishes
  for (std::size_t k = 1; k + 1 < s.times.size(); ++k) CHECK(std::abs(s.d2Nm[k]) < 1e-8);
}

TEST_CASE("build_series: constant path has vanishing derivatives") {
  auto model = line_model(-12.0, 12.0, 1024);
  GeodesicPath path = analytic_gaussian_path(model, 0.0, 1.0, 0.0, 1.0,
                                             oracle::uniform_times(0.0, 1.0, 17), {});
  BakryEmeryParams prm;
  prm.m = 1.0;
  prm.p = 2.0;
  prm.N = 2.0;
  EntropySeries s = build_series(*model, path, prm);
  for (std::size_t k = 0; k < s.times.size(); ++k) {
    CHECK(std::abs(s.dH[k]) < 1e-10);
    CHECK(std::abs(s.d2H[k]) < 1e-8);
    CHECK(std::abs(s.dSN[k]) < 1e-10);
    CHECK(std::abs(s.I[k]) < 1e-10);
  }
}

TEST_CASE("build_series: dissipation consistency on a weighted model") {
  ModelSpec spec;
  spec.kind = ModelKind::weighted_line;
  spec.n = 1;
  spec.grid = {-9.0, 9.0, 2048, false};
  spec.potential.preset = PotentialSpec::Preset::quadratic;
  spec.potential.coeff = 0.5;
  auto model = std::make_shared<const ManifoldModel>(build_model(spec));

  ScalarField rho0 = gaussian_density(*model, -0.8, 0.5);
  ScalarField rho1 = gaussian_density(*model, 0.9, 0.7);
  TransportMap map = monotone_map(*model, rho0, rho1);
  auto times = oracle::uniform_times(0.0, 1.0, 65);
  BakryEmeryParams prm;
  prm.m = 3.0;
  prm.p = 2.0;
  prm.N = 3.0;
  GeodesicPath path = interpolate_path(model, map, rho0, times, prm);
  EntropySeries s = build_series(*model, path, prm,
                                 {make_xlogx_generator(), make_power_generator(2.0),
                                  make_power_generator(1.5), make_power_generator(0.5)});
  for (const auto& [name, gs] : s.generators) {
    for (std::size_t k = 2; k + 2 < s.times.size(); ++k) {
      CHECK(std::abs(gs.dU[k] - gs.U1[k]) <= 1e-3 * (1.0 + std::abs(gs.U1[k])));
      CHECK(std::abs(gs.d2U[k] - gs.U2[k]) <= 3e-3 * (1.0 + std::abs(gs.U2[k])));
    }
  }
  // (ent1)/(ent2) against the FD route
  for (std::size_t k = 2; k + 2 < s.times.size(); ++k) {
    CHECK(std::abs(s.dH[k] - s.dH_an[k]) <= 1e-3 * (1.0 + std::abs(s.dH_an[k])));
    CHECK(std::abs(s.d2H[k] - s.d2H_an[k]) <= 3e-3 * (1.0 + std::abs(s.d2H_an[k])));
  }
}
