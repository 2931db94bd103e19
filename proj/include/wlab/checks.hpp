#pragma once

#include <map>
#include <string>
#include <vector>

#include "wlab/comparison.hpp"
#include "wlab/entropy.hpp"

namespace wlab {

enum class Verdict { pass, fail, equality };
std::string to_string(Verdict v);

/// Margin sign convention: LHS - RHS for ">=" claims, RHS - LHS for "<="
/// claims, so >= 0 means the inequality holds. Identity checks store
/// -|residual| as the margin, which makes the verdict rules coincide:
/// pass iff min margin >= -tolerance, equality iff max |margin| <= tolerance.
struct CheckReport {
  std::string check_id;
  std::string statement;
  std::vector<double> times;
  std::vector<double> margin;
  std::vector<double> residual;
  Verdict verdict = Verdict::fail;
  double tolerance = 0.0;
  std::map<std::string, double> diagnostics;
  std::map<std::string, std::vector<double>> extra;

  double min_margin() const;
  double max_abs_margin() const;
};

/// Fills verdict from the margin arrays and the tolerance.
void finalize_report(CheckReport& report);

/// K policy when the scenario does not pin it: infimum of ric_mn over the
/// union of the path supports.
double infer_curvature_bound(const ManifoldModel& model, const GeodesicPath& path,
                             const BakryEmeryParams& params);

struct CheckPair {
  CheckReport first;
  CheckReport second;
};

/// (ii)/(iii): -H'' >= H'^2/m + K W2^2 and N_m'' <= -(K N_m/m) W2^2, plus the
/// refined variance form. The EPDI margin differentiates the N_m samples
/// directly; the chain-rule route is reported alongside.
CheckPair check_edi_epdi(const EntropySeries& series, const BakryEmeryParams& params,
                         double tolerance);

/// (vi) power lower bound via the sigma-form and the Riccati upper bound on
/// H' (both profiles on normalized window time).
CheckReport check_power_bound(const EntropySeries& series, const BakryEmeryParams& params,
                              double tolerance);

/// (iv)/(v): Renyi entropy and entropy-power differential inequalities, with
/// the refined variance decomposition residual when m > n permits.
CheckPair check_renyi(const ManifoldModel& model, const GeodesicPath& path,
                      const EntropySeries& series, const BakryEmeryParams& params,
                      double tolerance);

/// (vii): S_N convexity with the correction term, plus the weaker form.
CheckReport check_sn(const EntropySeries& series, const BakryEmeryParams& params,
                     double tolerance);

/// (viii): Sturm's coupling inequality at dimension Nprime, with the coupling
/// realized by the monotone map.
CheckReport check_sturm(const ManifoldModel& model, const GeodesicPath& path,
                        const BakryEmeryParams& params, double Nprime, double tolerance);

/// Jacobian concavity along the map: (J^{1/N})'' <= -(K/N) J^{1/N} d^2, with
/// the pushforward identity and the transported-density inequality reported.
CheckReport check_jacobian(const ManifoldModel& model, const GeodesicPath& path,
                           const BakryEmeryParams& params, double N, double tolerance);

/// Eulerian-vs-Lagrangian identity for int |grad phi|^2 rho^{1-1/N} dmu.
CheckReport identity_ij(const ManifoldModel& model, const GeodesicPath& path,
                        const BakryEmeryParams& params, double N, double tolerance);

/// CD(K,inf) forms: Ent'' >= K W2^2, the integrated t-(1-t) convexity, and
/// the DC_N functional form U'' >= K_{N,U} int |grad phi|^2 rho^{1-1/N} dmu.
CheckReport check_ent_infty(const ManifoldModel& model, const GeodesicPath& path,
                            const EntropySeries& series, const BakryEmeryParams& params,
                            double tolerance);

/// W-entropy series for the Shannon and Renyi corrections on a positive-time
/// window. The drift term sign follows Theorem-consistency: plus is the
/// default; minus is exposed for the sign probe.
struct WEntropySeries {
  std::vector<double> times;
  std::vector<double> Hm, Hmp;
  std::vector<double> Wm, Wmp;               // FD of t * H-corrected
  std::vector<double> dWm, dWmp;             // FD of W
  std::vector<double> dWm_formula, dWmp_formula;  // analytic right-hand sides
};

struct WEntropyResult {
  WEntropySeries series;
  CheckReport report;
};

WEntropyResult w_entropy_profile(const ManifoldModel& model, const GeodesicPath& path,
                                 const EntropySeries& series, const BakryEmeryParams& params,
                                 bool drift_sign_plus, double tolerance);

/// NIW identity residual and the W-inequality margins under ric_mn >= K.
CheckReport check_niw(const EntropySeries& series, const WEntropySeries& w,
                      const BakryEmeryParams& params, double tolerance);

/// Equality-case diagnostics: Hessian-soliton defect, curvature pinching,
/// Riccati residual of the Fisher information, and the weighted cross term.
std::map<std::string, double> rigidity_probe(const ManifoldModel& model,
                                             const GeodesicPath& path,
                                             const EntropySeries& series,
                                             const BakryEmeryParams& params,
                                             const CheckReport& report);

}  // namespace wlab
