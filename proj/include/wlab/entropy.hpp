#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "wlab/transport.hpp"

namespace wlab {

/// Entropy generator e with its pressure functions p1(r) = r e'(r) - e(r)
/// and p2(r) = r p1'(r) - p1(r).
struct EntropyGenerator {
  std::string name;
  std::function<double(double)> e;
  std::function<double(double)> p1;
  std::function<double(double)> p2;
};

/// Presets: xlogx, power(p) with e = r^p/(p-1), sturm(N) with e = -N r^{1-1/N}.
EntropyGenerator make_xlogx_generator();
EntropyGenerator make_power_generator(double p);
EntropyGenerator make_sturm_generator(double N);

/// Checks p1, p2 against numerical differentiation of e on a log-spaced probe
/// set; throws if the defect exceeds 1e-8 relative.
void validate_generator(const EntropyGenerator& gen);

double shannon_entropy(const ManifoldModel& model, const ScalarField& rho);
double renyi_entropy(const ManifoldModel& model, const ScalarField& rho, double p);
double sn_functional(const ManifoldModel& model, const ScalarField& rho, double N);

struct FisherPair {
  double I = 0.0;   // int L(phi) rho dmu
  double Ip = 0.0;  // int L(phi) dgamma, gamma = rho^p mu / int rho^p dmu
};
FisherPair fisher_information(const ManifoldModel& model, const ScalarField& rho,
                              const ScalarField& phi, double p);

struct DissipationPair {
  double U1 = 0.0;  // analytic dU/dt   = -int L(phi) p1(rho) dmu
  double U2 = 0.0;  // analytic d2U/dt2 = int Gamma2 p1(rho) dmu + int (L phi)^2 p2(rho) dmu
};
DissipationPair generalized_dissipation(const ManifoldModel& model, const GeodesicPath& path,
                                        const EntropyGenerator& gen, std::size_t k);

/// Per-generator slice of an EntropySeries.
struct GeneratorSeries {
  std::vector<double> U, dU, d2U;  // values and FD derivatives
  std::vector<double> U1, U2;      // analytic derivatives
};

/// All entropy functionals and derivatives along a path. _an suffixes mark
/// analytic (dissipation-formula) routes, d-prefixes finite differences.
struct EntropySeries {
  std::vector<double> times;
  std::vector<double> H, Ent, Hp, SN, Nm, Nmp, I, Ip, var_gamma;
  std::vector<double> dH, d2H, dHp, d2Hp, dSN, d2SN;
  std::vector<double> dH_an, d2H_an;    // I and -int Gamma2 rho dmu
  std::vector<double> dHp_an, d2Hp_an;  // Ip and the power-dissipation route
  std::vector<double> dSN_an, d2SN_an;
  std::vector<double> dNm, d2Nm, dNmp, d2Nmp;        // FD of the power series
  std::vector<double> d2Nm_an, d2Nmp_an;             // chain rule on analytic H routes
  std::vector<double> energy;                        // int |grad phi|^2 rho dmu
  std::vector<double> grad2_gamma;                   // int |grad phi|^2 dgamma
  std::vector<double> grad2_sn;                      // int |grad phi|^2 rho^{1-1/N} dmu
  std::vector<double> lphi_sq;                       // int (L phi)^2 rho dmu
  std::vector<double> gamma2_rho;                    // int Gamma2 rho dmu
  std::map<std::string, GeneratorSeries> generators;
  double theta = 0.0;  // constant speed of the path
  double dt = 0.0;     // time-grid spacing
};

EntropySeries build_series(const ManifoldModel& model, const GeodesicPath& path,
                           const BakryEmeryParams& params,
                           const std::vector<EntropyGenerator>& generators = {});

}  // namespace wlab
