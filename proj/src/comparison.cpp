#include "wlab/comparison.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace wlab {

namespace {

/// sin(t x)/sin(x) or sinh(t x)/sinh(x) with a series branch for small x
/// so K-sweeps stay continuous through K = 0.
double trig_ratio(double t, double x, bool hyperbolic) {
  if (std::abs(x) < 1e-4) {
    // ratio = t (1 + s (1-t^2) x^2/6 + (1-t^2)(7-3t^2) x^4/360 + ...),
    // s = +1 for sin, -1 for sinh
    double sgn = hyperbolic ? -1.0 : 1.0;
    double x2 = x * x;
    return t * (1.0 + sgn * (1.0 - t * t) * x2 / 6.0 +
                (1.0 - t * t) * (7.0 - 3.0 * t * t) * x2 * x2 / 360.0);
  }
  return hyperbolic ? std::sinh(t * x) / std::sinh(x) : std::sin(t * x) / std::sin(x);
}

double sigma_impl(double K, double N, double theta, double t, bool& conjugate) {
  conjugate = false;
  if (K == 0.0 || theta == 0.0) return t;
  if (K > 0.0) {
    if (K * theta * theta >= N * M_PI * M_PI) {
      conjugate = true;
      return std::numeric_limits<double>::infinity();
    }
    return trig_ratio(t, theta * std::sqrt(K / N), false);
  }
  return trig_ratio(t, theta * std::sqrt(-K / N), true);
}

}  // namespace

double distortion_sigma(double K, double N, double theta, double t) {
  bool conj = false;
  double s = sigma_impl(K, N, theta, t, conj);
  if (conj) throw Error("distortion_sigma: conjugate-point regime (K theta^2 >= N pi^2)");
  return s;
}

DistortionPair distortion_coefficients(const DistortionQuery& q) {
  if (!(q.N >= 1.0)) throw Error("distortion_coefficients: N must be >= 1");
  if (q.theta < 0.0) throw Error("distortion_coefficients: theta must be >= 0");
  if (q.t < 0.0 || q.t > 1.0) throw Error("distortion_coefficients: t must lie in [0, 1]");

  DistortionPair out;
  out.sigma = sigma_impl(q.K, q.N, q.theta, q.t, out.conjugate);
  if (out.conjugate) {
    out.tau = std::numeric_limits<double>::infinity();
    return out;
  }
  if (q.N == 1.0) {
    out.tau = q.t;  // continuity convention for sigma_{K,0}
    return out;
  }
  bool conj_tau = false;
  double s = sigma_impl(q.K, q.N - 1.0, q.theta, q.t, conj_tau);
  if (conj_tau) {
    out.conjugate = true;
    out.tau = std::numeric_limits<double>::infinity();
    return out;
  }
  out.tau = std::pow(q.t, 1.0 / q.N) * std::pow(s, 1.0 - 1.0 / q.N);
  return out;
}

namespace {

/// Classical RK4 for y' = f(t, y) over [0, 1] sampled back at query times.
template <typename F>
std::vector<double> rk4_path(F f, double y0, const std::vector<double>& query, int substeps,
                             bool* blowup, double* blowup_time) {
  std::vector<double> out;
  out.reserve(query.size());
  double t = query.front();
  double y = y0;
  out.push_back(y);
  for (std::size_t k = 1; k < query.size(); ++k) {
    double t1 = query[k];
    double h = (t1 - t) / substeps;
    for (int i = 0; i < substeps; ++i) {
      if (std::abs(y) > 1e8) {
        if (blowup && !*blowup) {
          *blowup = true;
          *blowup_time = t;
        }
        break;
      }
      double k1 = f(t, y);
      double k2 = f(t + 0.5 * h, y + 0.5 * h * k1);
      double k3 = f(t + 0.5 * h, y + 0.5 * h * k2);
      double k4 = f(t + h, y + h * k3);
      y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      t += h;
    }
    t = t1;
    out.push_back(std::abs(y) > 1e8 ? -std::numeric_limits<double>::infinity() : y);
  }
  return out;
}

}  // namespace

ComparisonProfiles comparison_profiles(double K, double m, double theta, double N0, double N1,
                                       double hprime0, const std::vector<double>& times) {
  if (times.size() < 2) throw Error("comparison_profiles: need at least two times");
  double span = times.back() - times.front();
  if (!(span > 0.0)) throw Error("comparison_profiles: degenerate time window");

  ComparisonProfiles out;
  const bool finite_m = std::isfinite(m);
  const double kt2 = K * theta * theta;
  if (finite_m && K > 0.0 && kt2 >= m * M_PI * M_PI)
    throw Error("comparison_profiles: conjugate-point regime (K theta^2 >= m pi^2)");
  const double w = finite_m ? kt2 / m : 0.0;  // N'' = -w N

  // closed sigma-form on normalized time
  for (double t : times) {
    double s = (t - times.front()) / span;
    if (finite_m) {
      out.NmK.push_back(distortion_sigma(K, m, theta, 1.0 - s) * N0 +
                        distortion_sigma(K, m, theta, s) * N1);
    } else {
      out.NmK.push_back((1.0 - s) * N0 + s * N1);
    }
  }

  // two-point solve by superposition of two RK4 initial-value runs
  {
    std::vector<double> sgrid;
    sgrid.reserve(times.size());
    for (double t : times) sgrid.push_back((t - times.front()) / span);
    auto rhs = [&](double, const std::array<double, 2>& y) {
      return std::array<double, 2>{y[1], -w * y[0]};
    };
    auto integrate = [&](std::array<double, 2> y) {
      std::vector<double> vals;
      vals.reserve(sgrid.size());
      double t = 0.0;
      vals.push_back(y[0]);
      for (std::size_t k = 1; k < sgrid.size(); ++k) {
        int sub = 256;
        double h = (sgrid[k] - t) / sub;
        for (int i = 0; i < sub; ++i) {
          auto k1 = rhs(t, y);
          auto k2 = rhs(t, {y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]});
          auto k3 = rhs(t, {y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]});
          auto k4 = rhs(t, {y[0] + h * k3[0], y[1] + h * k3[1]});
          y[0] += h / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]);
          y[1] += h / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]);
          t += h;
        }
        t = sgrid[k];
        vals.push_back(y[0]);
      }
      return vals;
    };
    std::vector<double> u = integrate({1.0, 0.0});
    std::vector<double> v = integrate({0.0, 1.0});
    if (std::abs(v.back()) < 1e-14)
      throw Error("comparison_profiles: two-point problem is singular on this window");
    double beta = (N1 - N0 * u.back()) / v.back();
    for (std::size_t k = 0; k < u.size(); ++k) {
      out.NmK_ode.push_back(N0 * u[k] + beta * v[k]);
      out.max_sigma_ode_gap =
          std::max(out.max_sigma_ode_gap, std::abs(out.NmK_ode[k] - out.NmK[k]));
    }
  }

  // Riccati flow on normalized time (hprime0 and the output are dH/ds)
  {
    std::vector<double> sgrid;
    sgrid.reserve(times.size());
    for (double t : times) sgrid.push_back((t - times.front()) / span);
    auto f = [&](double, double y) {
      return finite_m ? (-y * y / m - kt2) : -kt2;
    };
    out.HprimeK =
        rk4_path(f, hprime0, sgrid, 256, &out.riccati_blowup, &out.blowup_time);
  }
  return out;
}

DcnClassification dcn_classify(const EntropyGenerator& gen, double N) {
  if (!(N >= 1.0)) throw Error("dcn_classify: N must be >= 1");
  constexpr int kProbes = 2001;
  const double lo = -6.0, hi = 6.0;  // log10 range

  std::vector<double> r(kProbes), p1(kProbes), p2(kProbes), ratio(kProbes);
  double p1_scale = 0.0, p2_scale = 0.0, ratio_scale = 0.0;
  const double q = 1.0 - 1.0 / N;
  for (int i = 0; i < kProbes; ++i) {
    r[i] = std::pow(10.0, lo + (hi - lo) * i / (kProbes - 1));
    p1[i] = gen.p1(r[i]);
    p2[i] = gen.p2(r[i]);
    ratio[i] = p1[i] / std::pow(r[i], q);
    p1_scale = std::max(p1_scale, std::abs(p1[i]));
    p2_scale = std::max(p2_scale, std::abs(p2[i]));
    ratio_scale = std::max(ratio_scale, std::abs(ratio[i]));
  }
  (void)p1_scale;
  const double tol = 1e-10;

  DcnClassification out;

  // (a) r p1' >= (1 - 1/N) p1, with p1' from a 4th-order stencil at a
  // relative step (bias well under the per-point tolerance)
  out.cond_pressure = true;
  for (int i = 0; i < kProbes; ++i) {
    double h = 1e-3 * r[i];
    double dp1 = (gen.p1(r[i] - 2 * h) - 8.0 * gen.p1(r[i] - h) + 8.0 * gen.p1(r[i] + h) -
                  gen.p1(r[i] + 2 * h)) /
                 (12.0 * h);
    if (r[i] * dp1 - q * p1[i] < -tol * (1.0 + std::abs(p1[i]))) {
      out.cond_pressure = false;
      break;
    }
  }

  // (b) p2 + p1/N >= 0
  out.cond_p2 = true;
  for (int i = 0; i < kProbes; ++i) {
    if (p2[i] + p1[i] / N < -tol * (1.0 + std::abs(p1[i]) + std::abs(p2[i]))) {
      out.cond_p2 = false;
      break;
    }
  }
  (void)p2_scale;

  // (c) p1(r)/r^{1-1/N} nondecreasing
  out.cond_ratio = true;
  for (int i = 1; i < kProbes; ++i) {
    if (ratio[i] - ratio[i - 1] <
        -tol * (1.0 + std::abs(ratio[i]) + std::abs(ratio[i - 1]))) {
      out.cond_ratio = false;
      break;
    }
  }
  (void)ratio_scale;

  // (d) delta -> delta^N e(delta^{-N}) convex, probed on delta with
  // delta^{-N} spanning the same r-range
  out.cond_rescaled = true;
  {
    std::vector<double> d(kProbes), u(kProbes);
    double u_scale = 0.0;
    for (int i = 0; i < kProbes; ++i) {
      double ex = lo + (hi - lo) * i / (kProbes - 1);  // log10 of r = delta^{-N}
      d[i] = std::pow(10.0, -ex / N);
    }
    std::sort(d.begin(), d.end());
    for (int i = 0; i < kProbes; ++i) {
      u[i] = std::pow(d[i], N) * gen.e(std::pow(d[i], -N));
      u_scale = std::max(u_scale, std::abs(u[i]));
    }
    (void)u_scale;
    double prev_slope = -std::numeric_limits<double>::infinity();
    for (int i = 1; i < kProbes; ++i) {
      double gap = d[i] - d[i - 1];
      double slope = (u[i] - u[i - 1]) / gap;
      // value noise from pow evaluations, amplified by the gap
      double noise = 1e-13 * (std::abs(u[i]) + std::abs(u[i - 1])) / gap;
      if (slope - prev_slope < -(1e-10 * (1.0 + std::abs(slope)) + noise)) {
        out.cond_rescaled = false;
        break;
      }
      prev_slope = std::max(prev_slope, slope);
    }
  }

  int yes = int(out.cond_pressure) + int(out.cond_p2) + int(out.cond_ratio) +
            int(out.cond_rescaled);
  out.conditions_agree = (yes == 0 || yes == 4);
  if (!out.conditions_agree)
    throw Error("dcn_classify: condition verdicts disagree for generator " + gen.name);
  out.member = yes == 4;

  // K_{N,U}/K = inf p1(r)/r^{1-1/N}; a power-law decay into a probe edge
  // continues to 0 beyond the grid
  double kmin = ratio[0];
  int argmin = 0;
  for (int i = 1; i < kProbes; ++i)
    if (ratio[i] < kmin) {
      kmin = ratio[i];
      argmin = i;
    }
  if (argmin == 0 || argmin == kProbes - 1) {
    int a = argmin == 0 ? 0 : kProbes - 2;
    double slope = std::log(std::max(ratio[a + 1], 1e-300) / std::max(ratio[a], 1e-300)) /
                   std::log(r[a + 1] / r[a]);
    bool decaying = argmin == 0 ? slope > 1e-6 : slope < -1e-6;
    if (decaying && kmin > 0.0) kmin = 0.0;
  }
  out.k_ratio = kmin;
  return out;
}

}  // namespace wlab
