#include <cmath>

#include <doctest.h>

#include "wlab/numerics.hpp"

using namespace wlab;

TEST_CASE("derivative stencils reach their design order") {
  const std::size_t n = 257;
  const double h = 2.0 / (n - 1);
  ScalarField f(n), d1_exact(n), d2_exact(n);
  for (std::size_t j = 0; j < n; ++j) {
    double x = -1.0 + j * h;
    f[j] = std::sin(2.0 * x);
    d1_exact[j] = 2.0 * std::cos(2.0 * x);
    d2_exact[j] = -4.0 * std::sin(2.0 * x);
  }
  ScalarField d1 = derivative1(f, h);
  ScalarField d2 = derivative2(f, h);
  double e1 = 0.0, e2 = 0.0;
  for (std::size_t j = 2; j + 2 < n; ++j) {
    e1 = std::max(e1, std::abs(d1[j] - d1_exact[j]));
    e2 = std::max(e2, std::abs(d2[j] - d2_exact[j]));
  }
  CHECK(e1 < 1e-7);
  CHECK(e2 < 1e-5);
  // boundary layer is 2nd order
  CHECK(std::abs(d1[0] - d1_exact[0]) < 1e-3);
  CHECK(std::abs(d2[n - 1] - d2_exact[n - 1]) < 1e-2);
}

TEST_CASE("cumulative integral differentiates back to the integrand") {
  const std::size_t n = 513;
  const double h = 4.0 / (n - 1);
  ScalarField f(n);
  for (std::size_t j = 0; j < n; ++j) {
    double x = -2.0 + j * h;
    f[j] = std::exp(-x * x);
  }
  ScalarField F = cumulative_integral(f, h);
  ScalarField back = derivative1(F, h);
  double err = 0.0;
  for (std::size_t j = 2; j + 2 < n; ++j) err = std::max(err, std::abs(back[j] - f[j]));
  CHECK(err < 1e-8);
}

TEST_CASE("monotone PL inversion returns the quantile") {
  std::vector<double> x{0.0, 1.0, 2.0, 3.0, 4.0};
  std::vector<double> y{0.0, 0.1, 0.5, 0.9, 1.0};
  CHECK(invert_monotone_pl(x, y, 0.5) == doctest::Approx(2.0));
  CHECK(invert_monotone_pl(x, y, 0.3) == doctest::Approx(1.5));
  CHECK(invert_monotone_pl(x, y, -1.0) == doctest::Approx(0.0));
  CHECK(invert_monotone_pl(x, y, 2.0) == doctest::Approx(4.0));
}

TEST_CASE("pchip interpolates smooth data to third order and stays monotone") {
  std::vector<double> x, y;
  for (int j = 0; j <= 40; ++j) {
    x.push_back(j * 0.05);
    y.push_back(std::tanh(x.back()));
  }
  Pchip p(x, y);
  double err = 0.0;
  for (double q = 0.01; q < 1.99; q += 0.013)
    err = std::max(err, std::abs(p(q) - std::tanh(q)));
  CHECK(err < 5e-5);
  // monotone data stays monotone through the interpolant
  double prev = p(0.0);
  for (double q = 0.01; q <= 2.0; q += 0.01) {
    CHECK(p(q) >= prev - 1e-14);
    prev = p(q);
  }
}
