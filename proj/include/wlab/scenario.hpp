#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wlab/analytic.hpp"
#include "wlab/checks.hpp"

namespace wlab {

enum class Engine { quantile, hopf_lax, both };

struct DensitySpec {
  std::string preset;  // gaussian | uniform | bump | mixture
  double mean = 0.0, std = 1.0;
  double a = 0.0, b = 1.0;
  double center = 0.0, halfwidth = 1.0;
  // mixture components: (weight, mean, std)
  std::vector<std::array<double, 3>> components;
};

struct PhaseSpec {
  std::string preset;  // quadratic | linear | zero
  double coeff = 0.5;  // quadratic: coeff*x^2; linear: coeff*x
};

struct ScenarioConfig {
  std::string name;
  ModelSpec model;
  std::optional<DensitySpec> rho0, rho1;
  std::optional<PhaseSpec> phase0;
  BakryEmeryParams params;
  bool auto_K = true;
  Engine engine = Engine::quantile;
  double t0 = 0.0, t1 = 1.0;
  std::size_t samples = 65;
  std::vector<std::string> checks;
  std::vector<double> sturm_nprimes;
  std::vector<std::string> generator_names;  // presets for the dissipation battery
  double default_tolerance = 2e-3;
  std::map<std::string, double> tolerance_overrides;
  bool w_sign_plus = true;
  bool export_path_csv = false;
  std::string out_dir;
};

ScenarioConfig load_scenario_config(const std::string& path);

struct ScenarioResult {
  std::string name;
  std::vector<CheckReport> reports;
  std::map<std::string, double> path_diagnostics;
  bool ok = false;           // every check passed (pass or equality)
  std::string error;         // construction/check error, when not ok
  double elapsed_seconds = 0.0;
};

/// Build model -> path(s) -> series -> checks; write report.json and CSV
/// series when out_dir is set.
ScenarioResult run_scenario(const ScenarioConfig& config);

struct BatterySummary {
  std::vector<ScenarioResult> results;
  bool ok = false;
};

/// Paths in the manifest resolve relative to the manifest location.
BatterySummary run_battery(const std::string& manifest_path, const std::string& out_dir,
                           const std::vector<std::string>& flag_overrides = {});

/// Render the scenario x check verdict table.
std::string render_summary(const BatterySummary& summary);
std::string render_result(const ScenarioResult& result);

/// Re-render a summary from report.json files under run_dir.
std::string render_run_dir(const std::string& run_dir);

/// Apply a "--key value" style override list to a config (used by the CLI).
void apply_overrides(ScenarioConfig& config, const std::vector<std::string>& overrides);

EntropyGenerator make_generator_by_name(const std::string& name);

}  // namespace wlab
