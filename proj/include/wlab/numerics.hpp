#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "wlab/grid.hpp"

namespace wlab {

/// First derivative on a uniform grid: 4th-order central stencil in the
/// interior, 2nd-order in the two-node boundary layer.
inline ScalarField derivative1(const ScalarField& f, double h) {
  const std::size_t n = f.size();
  ScalarField d(n);
  if (n < 4) throw Error("derivative1 needs at least 4 nodes");
  d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
  d[1] = (f[2] - f[0]) / (2.0 * h);
  for (std::size_t j = 2; j + 2 < n; ++j)
    d[j] = (f[j - 2] - 8.0 * f[j - 1] + 8.0 * f[j + 1] - f[j + 2]) / (12.0 * h);
  d[n - 2] = (f[n - 1] - f[n - 3]) / (2.0 * h);
  d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
  return d;
}

/// Second derivative, same stencil policy as derivative1.
inline ScalarField derivative2(const ScalarField& f, double h) {
  const std::size_t n = f.size();
  ScalarField d(n);
  if (n < 5) throw Error("derivative2 needs at least 5 nodes");
  const double h2 = h * h;
  d[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / h2;
  d[1] = (f[0] - 2.0 * f[1] + f[2]) / h2;
  for (std::size_t j = 2; j + 2 < n; ++j)
    d[j] = (-f[j - 2] + 16.0 * f[j - 1] - 30.0 * f[j] + 16.0 * f[j + 1] - f[j + 2]) / (12.0 * h2);
  d[n - 2] = (f[n - 3] - 2.0 * f[n - 2] + f[n - 1]) / h2;
  d[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) / h2;
  return d;
}

/// Time-series first derivative: 2nd-order central interior, one-sided ends.
inline std::vector<double> fd_first(const std::vector<double>& f, double h) {
  const std::size_t n = f.size();
  std::vector<double> d(n, 0.0);
  if (n < 3) return d;
  d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
  for (std::size_t k = 1; k + 1 < n; ++k) d[k] = (f[k + 1] - f[k - 1]) / (2.0 * h);
  d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
  return d;
}

/// Time-series second derivative: 2nd-order central interior, one-sided ends.
inline std::vector<double> fd_second(const std::vector<double>& f, double h) {
  const std::size_t n = f.size();
  std::vector<double> d(n, 0.0);
  if (n < 4) return d;
  const double h2 = h * h;
  d[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / h2;
  for (std::size_t k = 1; k + 1 < n; ++k) d[k] = (f[k + 1] - 2.0 * f[k] + f[k - 1]) / h2;
  d[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) / h2;
  return d;
}

/// Trapezoid sum of f over the node index range [lo, hi] on spacing h.
inline double trapezoid(const ScalarField& f, double h, const Support& s) {
  if (s.empty() || s.hi == s.lo) return 0.0;
  double acc = 0.5 * (f[static_cast<std::size_t>(s.lo)] + f[static_cast<std::size_t>(s.hi)]);
  for (std::ptrdiff_t j = s.lo + 1; j < s.hi; ++j) acc += f[static_cast<std::size_t>(j)];
  return acc * h;
}

inline double trapezoid(const ScalarField& f, double h) {
  Support s;
  s.lo = 0;
  s.hi = static_cast<std::ptrdiff_t>(f.size()) - 1;
  return trapezoid(f, h, s);
}

/// Cumulative integral F(x_j) = \int_{x_0}^{x_j} f, trapezoid with an
/// Euler-Maclaurin endpoint correction (h^2/12)(f'(x_0) - f'(x_j)) so
/// differentiating the result recovers f to 4th order.
inline ScalarField cumulative_integral(const ScalarField& f, double h) {
  const std::size_t n = f.size();
  ScalarField F(n, 0.0);
  for (std::size_t j = 1; j < n; ++j) F[j] = F[j - 1] + 0.5 * h * (f[j - 1] + f[j]);
  ScalarField df = derivative1(f, h);
  const double c = h * h / 12.0;
  for (std::size_t j = 1; j < n; ++j) F[j] += c * (df[0] - df[j]);
  return F;
}

/// Plain cumulative trapezoid (no endpoint correction); used for CDFs where
/// exact nonnegativity/monotonicity of increments matters.
inline ScalarField cumulative_trapezoid(const ScalarField& f, double h) {
  const std::size_t n = f.size();
  ScalarField F(n, 0.0);
  for (std::size_t j = 1; j < n; ++j) F[j] = F[j - 1] + 0.5 * h * (f[j - 1] + f[j]);
  return F;
}

/// Piecewise-linear inverse of a nondecreasing table y(x): returns x with
/// y(x) = level. Levels outside the range clamp to the table ends. Flat
/// stretches resolve to the left edge of the first interval reaching level.
inline double invert_monotone_pl(const std::vector<double>& x, const std::vector<double>& y,
                                 double level) {
  const std::size_t n = x.size();
  if (level <= y.front()) return x.front();
  if (level >= y.back()) {
    // first index attaining the final value, so trailing flats do not inflate x
    std::size_t j = n - 1;
    while (j > 0 && y[j - 1] >= y.back()) --j;
    return x[j];
  }
  auto it = std::lower_bound(y.begin(), y.end(), level);
  std::size_t j = static_cast<std::size_t>(it - y.begin());
  if (j == 0) return x[0];
  double y0 = y[j - 1], y1 = y[j];
  if (!(y1 > y0)) return x[j - 1];
  double w = (level - y0) / (y1 - y0);
  return x[j - 1] + w * (x[j] - x[j - 1]);
}

/// Monotone cubic Hermite interpolant (Fritsch-Carlson) on strictly
/// increasing, possibly non-uniform abscissae. Third-order accurate and
/// overshoot-free; used for density resampling and map inversion.
class Pchip {
 public:
  Pchip() = default;
  Pchip(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
    build();
  }

  double operator()(double q) const {
    if (q <= x_.front()) return y_.front();
    if (q >= x_.back()) return y_.back();
    auto it = std::upper_bound(x_.begin(), x_.end(), q);
    std::size_t j = static_cast<std::size_t>(it - x_.begin()) - 1;
    double h = x_[j + 1] - x_[j];
    double t = (q - x_[j]) / h;
    double t2 = t * t, t3 = t2 * t;
    double h00 = 2 * t3 - 3 * t2 + 1;
    double h10 = t3 - 2 * t2 + t;
    double h01 = -2 * t3 + 3 * t2;
    double h11 = t3 - t2;
    return h00 * y_[j] + h10 * h * m_[j] + h01 * y_[j + 1] + h11 * h * m_[j + 1];
  }

 private:
  void build() {
    const std::size_t n = x_.size();
    m_.assign(n, 0.0);
    if (n < 2) return;
    std::vector<double> d(n - 1), hh(n - 1);
    for (std::size_t j = 0; j + 1 < n; ++j) {
      hh[j] = x_[j + 1] - x_[j];
      d[j] = (y_[j + 1] - y_[j]) / hh[j];
    }
    m_[0] = d[0];
    m_[n - 1] = d[n - 2];
    for (std::size_t j = 1; j + 1 < n; ++j) {
      if (d[j - 1] * d[j] <= 0.0) {
        m_[j] = 0.0;
      } else {
        double w1 = 2.0 * hh[j] + hh[j - 1];
        double w2 = hh[j] + 2.0 * hh[j - 1];
        m_[j] = (w1 + w2) / (w1 / d[j - 1] + w2 / d[j]);
      }
    }
    // limit end slopes to preserve monotone segments
    auto limit = [](double& m, double slope) {
      if (slope == 0.0) {
        m = 0.0;
      } else {
        double a = m / slope;
        if (a < 0.0) m = 0.0;
        else if (a > 3.0) m = 3.0 * slope;
      }
    };
    limit(m_[0], d[0]);
    limit(m_[n - 1], d[n - 2]);
  }

  std::vector<double> x_, y_;
  std::vector<double> m_;
};

}  // namespace wlab
