#include <cmath>

#include <doctest.h>

#include "oracles.hpp"
#include "wlab/comparison.hpp"

using namespace wlab;

TEST_CASE("sigma: K = 0 branch is exactly t, and tau follows") {
  for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    DistortionPair d = distortion_coefficients({0.0, 3.0, 2.0, t});
    CHECK(d.sigma == t);  // exact branch
    CHECK(d.tau == doctest::Approx(t).epsilon(1e-15));
  }
}

TEST_CASE("sigma spot values and boundary") {
  // K=1, N=1, theta=pi/2, t=0.5 -> sin(pi/4)/sin(pi/2)
  double s = distortion_sigma(1.0, 1.0, M_PI / 2.0, 0.5);
  CHECK(s == doctest::Approx(std::sin(M_PI / 4.0)).epsilon(1e-14));
  // boundary values
  CHECK(distortion_sigma(1.0, 2.0, 1.0, 0.0) == 0.0);
  CHECK(distortion_sigma(1.0, 2.0, 1.0, 1.0) == 1.0);
  CHECK(distortion_sigma(-2.0, 2.0, 1.0, 1.0) == 1.0);
  // conjugate marker
  DistortionPair d = distortion_coefficients({1.0, 1.0, 3.5, 0.5});
  CHECK(d.conjugate);
  CHECK(std::isinf(d.sigma));
}

TEST_CASE("sigma satisfies its own ODE: sigma'' + (K theta^2/N) sigma = 0") {
  const double h = 5e-3;
  for (double K : {1.0, -1.0, 0.5}) {
    for (double N : {1.0, 2.0, 5.0}) {
      double theta = K > 0 ? 0.8 * M_PI * std::sqrt(N / K) : 1.7;
      for (double t : {0.2, 0.5, 0.8}) {
        auto sig = [&](double tt) { return distortion_sigma(K, N, theta, tt); };
        double d2 = (-sig(t - 2 * h) + 16 * sig(t - h) - 30 * sig(t) + 16 * sig(t + h) -
                     sig(t + 2 * h)) /
                    (12 * h * h);
        CHECK(std::abs(d2 + K * theta * theta / N * sig(t)) < 1e-8);
      }
    }
  }
}

TEST_CASE("sigma series branch is continuous across K ~ 0") {
  double a = distortion_sigma(1e-9, 2.0, 1.0, 0.37);
  double b = distortion_sigma(-1e-9, 2.0, 1.0, 0.37);
  double c = distortion_sigma(0.0, 2.0, 1.0, 0.37);
  CHECK(std::abs(a - c) < 1e-10);
  CHECK(std::abs(b - c) < 1e-10);
  // against the direct formula just outside the series window
  double K = 4e-8;  // x = theta sqrt(K/N) ~ 1.4e-4, direct branch
  double direct = std::sin(0.37 * std::sqrt(K / 2.0)) / std::sin(std::sqrt(K / 2.0));
  CHECK(distortion_sigma(K, 2.0, 1.0, 0.37) == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("tau >= t for K >= 0 on a parameter lattice") {
  for (double K : {0.0, 0.5, 1.0})
    for (double N : {1.5, 2.0, 3.0, 10.0})
      for (double theta : {0.1, 0.5, 1.0})
        for (double t : {0.1, 0.3, 0.5, 0.7, 0.9}) {
          DistortionPair d = distortion_coefficients({K, N, theta, t});
          REQUIRE_FALSE(d.conjugate);
          CHECK(d.tau >= t - 1e-12);
        }
}

TEST_CASE("comparison profiles: K = 0 is the chord") {
  auto times = oracle::uniform_times(0.0, 1.0, 33);
  ComparisonProfiles p = comparison_profiles(0.0, 2.0, 1.3, 2.0, 5.0, 1.0, times);
  for (std::size_t k = 0; k < times.size(); ++k)
    CHECK(p.NmK[k] == doctest::Approx(2.0 + 3.0 * times[k]).epsilon(1e-12));
  CHECK(p.max_sigma_ode_gap < 1e-10);
}

TEST_CASE("comparison profiles: K = 0 Riccati has the separable closed form") {
  // y' = -y^2/m with y(0) = I0: y(t) = m/(t + m/I0), matching I <= n/(Cn+t)
  auto times = oracle::uniform_times(0.0, 1.0, 65);
  double m = 1.0, I0 = 1.0;
  ComparisonProfiles p = comparison_profiles(0.0, m, 1.0, 1.0, 1.0, I0, times);
  for (std::size_t k = 0; k < times.size(); ++k)
    CHECK(p.HprimeK[k] == doctest::Approx(m / (times[k] + m / I0)).epsilon(1e-10));
}

TEST_CASE("comparison profiles: sigma form equals two-point ODE solve") {
  auto times = oracle::uniform_times(0.0, 1.0, 65);
  {
    ComparisonProfiles p = comparison_profiles(1.0, 1.0, M_PI / 2.0, 1.0, 1.0, 0.5, times);
    CHECK(p.max_sigma_ode_gap < 1e-8);
    // K=1, m=1, theta=pi/2, N0=N1=1 -> NmK(1/2) = 2 sin(pi/4) = sqrt(2)
    CHECK(p.NmK[32] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  }
  {
    ComparisonProfiles p = comparison_profiles(-2.0, 3.0, 1.7, 2.0, 1.0, 0.0, times);
    CHECK(p.max_sigma_ode_gap < 1e-8);
  }
}

TEST_CASE("riccati blow-up is reported, not fatal") {
  auto times = oracle::uniform_times(0.0, 1.0, 65);
  // K theta^2 = 4 < m pi^2, yet y' = -y^2 - 4 from 0 blows up at t = pi/4
  ComparisonProfiles p = comparison_profiles(4.0, 1.0, 1.0, 1.0, 1.0, 0.0, times);
  CHECK(p.riccati_blowup);
}

TEST_CASE("dcn_classify: power generators match the p >= 1 - 1/N rule") {
  for (double N : {1.5, 2.0, 3.0, 10.0}) {
    for (double p : {0.4, 0.5, 2.0 / 3.0, 0.9, 1.0, 1.5, 2.0}) {
      EntropyGenerator gen = p == 1.0 ? make_xlogx_generator() : make_power_generator(p);
      DcnClassification cls = dcn_classify(gen, N);
      bool expected = p >= 1.0 - 1.0 / N - 1e-12;
      CHECK(cls.member == expected);
      CHECK(cls.conditions_agree);
      CHECK(cls.cond_pressure == cls.cond_p2);
      CHECK(cls.cond_p2 == cls.cond_ratio);
      CHECK(cls.cond_ratio == cls.cond_rescaled);
    }
  }
}

TEST_CASE("dcn_classify: K ratio is 1 on the boundary, 0 above it") {
  {
    DcnClassification cls = dcn_classify(make_power_generator(0.5), 2.0);
    CHECK(cls.member);
    CHECK(cls.k_ratio == doctest::Approx(1.0).epsilon(1e-6));
  }
  {
    DcnClassification cls = dcn_classify(make_power_generator(2.0), 2.0);
    CHECK(cls.member);
    CHECK(cls.k_ratio == doctest::Approx(0.0).epsilon(1e-12));
  }
  {
    // xlogx: p1 = r, p2 = 0, member for every N
    DcnClassification cls = dcn_classify(make_xlogx_generator(), 3.0);
    CHECK(cls.member);
  }
  {
    // p = 1/2 < 2/3 is not in DC_3
    DcnClassification cls = dcn_classify(make_power_generator(0.5), 3.0);
    CHECK_FALSE(cls.member);
  }
}
