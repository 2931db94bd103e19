#pragma once

#include <string>
#include <vector>

#include "wlab/entropy.hpp"

namespace wlab {

/// Inputs for the distortion coefficients and comparison solutions.
struct DistortionQuery {
  double K = 0.0;
  double N = 1.0;       // dimension parameter, >= 1
  double theta = 0.0;   // W2 distance, >= 0
  double t = 0.0;       // geodesic parameter in [0, 1]
};

struct DistortionPair {
  double sigma = 0.0;
  double tau = 0.0;
  bool conjugate = false;  // K theta^2 >= N pi^2: coefficients are +infinity
};

/// sigma per the sin / t / sinh branches; tau = t^{1/N} sigma_{K,N-1}^{1-1/N}
/// with tau == t at N = 1 by the continuity convention.
DistortionPair distortion_coefficients(const DistortionQuery& q);

/// sigma alone (throws in the conjugate regime).
double distortion_sigma(double K, double N, double theta, double t);

struct ComparisonProfiles {
  std::vector<double> NmK;          // closed sigma-form solution
  std::vector<double> NmK_ode;      // 4th-order two-point ODE solve
  std::vector<double> HprimeK;      // Riccati initial-value solution
  double max_sigma_ode_gap = 0.0;   // max |NmK - NmK_ode|
  bool riccati_blowup = false;
  double blowup_time = 0.0;
};

/// Comparison curves on normalized times in [0, 1]: N'' = -(K theta^2 / m) N
/// with boundary values (N0, N1), and the Riccati flow
/// y' = -y^2/m - K theta^2 from y(0) = hprime0. Riccati blow-up is reported,
/// not treated as an error.
ComparisonProfiles comparison_profiles(double K, double m, double theta, double N0, double N1,
                                       double hprime0, const std::vector<double>& times);

struct DcnClassification {
  bool member = false;
  bool cond_pressure = false;      // r p1' >= (1 - 1/N) p1
  bool cond_p2 = false;            // p2 + p1/N >= 0
  bool cond_ratio = false;         // p1(r)/r^{1-1/N} nondecreasing
  bool cond_rescaled = false;      // delta^N e(delta^{-N}) convex
  bool conditions_agree = false;
  double k_ratio = 0.0;            // K_{N,U}/K = inf p1(r)/r^{1-1/N}
};

/// Evaluates the four defining conditions of the DC_N class on a log-spaced
/// probe grid (1e-6..1e6, 2001 points). Throws when the per-condition
/// verdicts disagree beyond probe tolerance.
DcnClassification dcn_classify(const EntropyGenerator& gen, double N);

}  // namespace wlab
