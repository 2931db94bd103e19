#include "wlab/scenario.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "wlab/numerics.hpp"

namespace wlab {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

DensitySpec parse_density(const json& j) {
  DensitySpec d;
  d.preset = j.at("preset").get<std::string>();
  if (d.preset == "gaussian") {
    d.mean = j.at("mean").get<double>();
    d.std = j.at("std").get<double>();
  } else if (d.preset == "uniform") {
    d.a = j.at("a").get<double>();
    d.b = j.at("b").get<double>();
  } else if (d.preset == "bump") {
    d.center = j.at("center").get<double>();
    d.halfwidth = j.at("halfwidth").get<double>();
  } else if (d.preset == "mixture") {
    for (const auto& c : j.at("components"))
      d.components.push_back({c.at("weight").get<double>(), c.at("mean").get<double>(),
                              c.at("std").get<double>()});
    if (d.components.empty()) throw Error("mixture preset needs components");
  } else {
    throw Error("unknown density preset: " + d.preset);
  }
  return d;
}

ScalarField realize_density(const ManifoldModel& model, const DensitySpec& d) {
  if (d.preset == "gaussian") return gaussian_density(model, d.mean, d.std);
  if (d.preset == "uniform") return uniform_density(model, d.a, d.b);
  if (d.preset == "bump") return bump_density(model, d.center, d.halfwidth);
  // mixture of gaussians
  ScalarField rho(model.size(), 0.0);
  double wsum = 0.0;
  for (const auto& c : d.components) wsum += c[0];
  for (const auto& c : d.components) {
    ScalarField g = gaussian_density(model, c[1], c[2]);
    for (std::size_t j = 0; j < rho.size(); ++j) rho[j] += c[0] / wsum * g[j];
  }
  normalize_density(model, rho);
  return rho;
}

ScalarField realize_phase(const ManifoldModel& model, const PhaseSpec& p) {
  ScalarField phi(model.size(), 0.0);
  for (std::size_t j = 0; j < model.size(); ++j) {
    double x = model.x[j];
    if (p.preset == "quadratic") phi[j] = p.coeff * x * x;
    else if (p.preset == "linear") phi[j] = p.coeff * x;
    else if (p.preset == "zero") phi[j] = 0.0;
    else throw Error("unknown phase preset: " + p.preset);
  }
  return phi;
}

PotentialSpec parse_potential(const json& j) {
  PotentialSpec p;
  std::string name = j.at("preset").get<std::string>();
  if (name == "zero") p.preset = PotentialSpec::Preset::zero;
  else if (name == "quadratic") p.preset = PotentialSpec::Preset::quadratic;
  else if (name == "quartic") p.preset = PotentialSpec::Preset::quartic;
  else if (name == "cosine") p.preset = PotentialSpec::Preset::cosine;
  else if (name == "table") p.preset = PotentialSpec::Preset::table;
  else throw Error("unknown potential preset: " + name);
  if (j.contains("coeff")) p.coeff = j.at("coeff").get<double>();
  if (j.contains("freq")) p.freq = j.at("freq").get<double>();
  if (j.contains("table")) p.table = j.at("table").get<std::vector<double>>();
  return p;
}

}  // namespace

EntropyGenerator make_generator_by_name(const std::string& name) {
  if (name == "xlogx") return make_xlogx_generator();
  auto colon = name.find(':');
  if (colon != std::string::npos) {
    std::string head = name.substr(0, colon);
    double val = std::stod(name.substr(colon + 1));
    if (head == "power") return make_power_generator(val);
    if (head == "sturm") return make_sturm_generator(val);
  }
  throw Error("unknown generator preset: " + name);
}

ScenarioConfig load_scenario_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open scenario config: " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw Error("malformed scenario config " + path + ": " + e.what());
  }

  ScenarioConfig c;
  c.name = j.at("name").get<std::string>();
  const json& jm = j.at("model");
  c.model.kind = model_kind_from_string(jm.at("kind").get<std::string>());
  c.model.n = jm.at("n").get<int>();
  auto dom = jm.at("domain").get<std::vector<double>>();
  if (dom.size() != 2) throw Error("model.domain must be [a, b]");
  c.model.grid.a = dom[0];
  c.model.grid.b = dom[1];
  c.model.grid.size = jm.at("grid_size").get<std::size_t>();
  if (jm.contains("potential")) c.model.potential = parse_potential(jm.at("potential"));

  if (j.contains("endpoints")) {
    const json& je = j.at("endpoints");
    c.rho0 = parse_density(je.at("rho0"));
    if (je.contains("rho1")) c.rho1 = parse_density(je.at("rho1"));
  }
  if (j.contains("phase0")) {
    const json& jp = j.at("phase0");
    PhaseSpec p;
    p.preset = jp.at("preset").get<std::string>();
    if (jp.contains("coeff")) p.coeff = jp.at("coeff").get<double>();
    c.phase0 = p;
  }
  if (!c.rho0) throw Error("scenario " + c.name + " is missing endpoints.rho0");

  const json& pp = j.at("params");
  if (pp.at("m").is_string()) {
    if (pp.at("m").get<std::string>() != "inf") throw Error("params.m must be a number or 'inf'");
    c.params.m = std::numeric_limits<double>::infinity();
  } else {
    c.params.m = pp.at("m").get<double>();
  }
  if (pp.contains("K")) {
    if (pp.at("K").is_string()) {
      if (pp.at("K").get<std::string>() != "auto") throw Error("params.K must be a number or 'auto'");
      c.auto_K = true;
    } else {
      c.params.K = pp.at("K").get<double>();
      c.auto_K = false;
    }
  }
  if (pp.contains("p")) c.params.p = pp.at("p").get<double>();
  if (pp.contains("N")) c.params.N = pp.at("N").get<double>();

  if (j.contains("engine")) {
    std::string e = j.at("engine").get<std::string>();
    if (e == "quantile") c.engine = Engine::quantile;
    else if (e == "hopf_lax") c.engine = Engine::hopf_lax;
    else if (e == "both") c.engine = Engine::both;
    else throw Error("unknown engine: " + e);
  }
  if (j.contains("time_window")) {
    const json& w = j.at("time_window");
    c.t0 = w.at("t0").get<double>();
    c.t1 = w.at("t1").get<double>();
    c.samples = w.at("samples").get<std::size_t>();
  }
  c.checks = j.at("checks").get<std::vector<std::string>>();
  if (j.contains("sturm_nprimes"))
    c.sturm_nprimes = j.at("sturm_nprimes").get<std::vector<double>>();
  if (j.contains("generators"))
    c.generator_names = j.at("generators").get<std::vector<std::string>>();
  if (j.contains("tolerances")) {
    for (auto& [key, val] : j.at("tolerances").items()) {
      if (key == "default") c.default_tolerance = val.get<double>();
      else c.tolerance_overrides[key] = val.get<double>();
    }
  }
  if (j.contains("w_sign")) c.w_sign_plus = j.at("w_sign").get<std::string>() != "minus";
  if (j.contains("export_path")) c.export_path_csv = j.at("export_path").get<bool>();
  if (j.contains("out_dir")) c.out_dir = j.at("out_dir").get<std::string>();

  if (!(c.t1 > c.t0)) throw Error("time_window must satisfy t1 > t0");
  if (c.samples < 5) throw Error("time_window needs at least 5 samples");
  for (const auto& id : c.checks)
    if ((id == "w_entropy" || id == "niw") && c.t0 <= 0.0)
      throw Error("check " + id + " needs a strictly positive time window");
  return c;
}

void apply_overrides(ScenarioConfig& config, const std::vector<std::string>& overrides) {
  for (std::size_t i = 0; i + 1 < overrides.size(); i += 2) {
    const std::string& key = overrides[i];
    const std::string& val = overrides[i + 1];
    if (key == "--grid-size") config.model.grid.size = std::stoul(val);
    else if (key == "--time-samples") config.samples = std::stoul(val);
    else if (key == "--tolerance") config.default_tolerance = std::stod(val);
    else if (key == "--out-dir") config.out_dir = val;
    else if (key == "--w-sign") config.w_sign_plus = val != "minus";
    else if (key == "--engine") {
      if (val == "quantile") config.engine = Engine::quantile;
      else if (val == "hopf_lax") config.engine = Engine::hopf_lax;
      else if (val == "both") config.engine = Engine::both;
      else throw Error("unknown engine: " + val);
    } else {
      throw Error("unknown override flag: " + key);
    }
  }
}

namespace {

std::vector<double> window_times(const ScenarioConfig& c) {
  std::vector<double> t(c.samples);
  for (std::size_t k = 0; k < c.samples; ++k)
    t[k] = c.t0 + (c.t1 - c.t0) * static_cast<double>(k) / static_cast<double>(c.samples - 1);
  t.back() = c.t1;
  return t;
}

double tolerance_for(const ScenarioConfig& c, const std::string& id) {
  auto it = c.tolerance_overrides.find(id);
  return it != c.tolerance_overrides.end() ? it->second : c.default_tolerance;
}

/// Max weighted-L1 distance between the densities of two paths.
double cross_engine_l1(const ManifoldModel& model, const GeodesicPath& a,
                       const GeodesicPath& b) {
  double worst = 0.0;
  for (std::size_t k = 0; k < a.steps(); ++k) {
    ScalarField diff(model.size());
    for (std::size_t j = 0; j < model.size(); ++j)
      diff[j] = std::abs(a.densities[k][j] - b.densities[k][j]);
    worst = std::max(worst, integrate_mu(model, diff));
  }
  return worst;
}

void write_series_csv(const fs::path& file, const EntropySeries& s) {
  std::ofstream out(file);
  out << "t,H,Ent,Hp,SN,Nm,Nmp,I,Ip,var_gamma,energy,dH,d2H,dH_an,d2H_an,dHp,d2Hp,dSN,d2SN,"
         "dNm,d2Nm,d2Nm_an,grad2_gamma,grad2_sn,lphi_sq,gamma2_rho\n";
  for (std::size_t k = 0; k < s.times.size(); ++k) {
    out << fmt(s.times[k]) << ',' << fmt(s.H[k]) << ',' << fmt(s.Ent[k]) << ',' << fmt(s.Hp[k])
        << ',' << fmt(s.SN[k]) << ',' << fmt(s.Nm[k]) << ',' << fmt(s.Nmp[k]) << ','
        << fmt(s.I[k]) << ',' << fmt(s.Ip[k]) << ',' << fmt(s.var_gamma[k]) << ','
        << fmt(s.energy[k]) << ',' << fmt(s.dH[k]) << ',' << fmt(s.d2H[k]) << ','
        << fmt(s.dH_an[k]) << ',' << fmt(s.d2H_an[k]) << ',' << fmt(s.dHp[k]) << ','
        << fmt(s.d2Hp[k]) << ',' << fmt(s.dSN[k]) << ',' << fmt(s.d2SN[k]) << ','
        << fmt(s.dNm[k]) << ',' << fmt(s.d2Nm[k]) << ',' << fmt(s.d2Nm_an[k]) << ','
        << fmt(s.grad2_gamma[k]) << ',' << fmt(s.grad2_sn[k]) << ',' << fmt(s.lphi_sq[k])
        << ',' << fmt(s.gamma2_rho[k]) << '\n';
  }
}

void write_margins_csv(const fs::path& file, const CheckReport& r) {
  std::ofstream out(file);
  out << "t,margin,residual";
  for (const auto& [key, _] : r.extra) out << ',' << key;
  out << '\n';
  for (std::size_t k = 0; k < r.times.size(); ++k) {
    out << fmt(r.times[k]) << ',' << (k < r.margin.size() ? fmt(r.margin[k]) : "")
        << ',' << (k < r.residual.size() ? fmt(r.residual[k]) : "");
    for (const auto& [_, v] : r.extra) out << ',' << (k < v.size() ? fmt(v[k]) : "");
    out << '\n';
  }
}

void write_path_csv(const fs::path& file, const ManifoldModel& model, const GeodesicPath& p) {
  std::ofstream out(file);
  out << "t,x,rho,phi\n";
  for (std::size_t k = 0; k < p.steps(); ++k)
    for (std::size_t j = 0; j < model.size(); ++j)
      out << fmt(p.times[k]) << ',' << fmt(model.x[j]) << ',' << fmt(p.densities[k][j]) << ','
          << fmt(p.phases[k][j]) << '\n';
}

json report_to_json(const CheckReport& r) {
  json o;
  o["check_id"] = r.check_id;
  o["statement"] = r.statement;
  o["verdict"] = to_string(r.verdict);
  o["tolerance"] = r.tolerance;
  o["min_margin"] = r.min_margin();
  o["max_abs_margin"] = r.max_abs_margin();
  double max_res = 0.0;
  for (double v : r.residual) max_res = std::max(max_res, std::abs(v));
  o["max_abs_residual"] = max_res;
  o["diagnostics"] = r.diagnostics;
  return o;
}

}  // namespace

ScenarioResult run_scenario(const ScenarioConfig& config) {
  ScenarioResult result;
  result.name = config.name;
  auto t_start = std::chrono::steady_clock::now();
  try {
    auto model = std::make_shared<const ManifoldModel>(build_model(config.model));
    std::vector<double> times = window_times(config);

    ScalarField rho0 = realize_density(*model, *config.rho0);
    ScalarField rho1 = config.rho1 ? realize_density(*model, *config.rho1) : rho0;

    BakryEmeryParams params = config.params;

    GeodesicPath path;
    std::optional<GeodesicPath> alt_path;
    if (config.engine == Engine::hopf_lax && config.phase0) {
      ScalarField phi0 = realize_phase(*model, *config.phase0);
      path = hopf_lax_evolve(model, phi0, rho0, times, params);
    } else {
      TransportMap map = monotone_map(*model, rho0, rho1);
      if (config.engine == Engine::hopf_lax) {
        ScalarField phi0 = recover_phase(*model, map, 0.0, times.back() - times.front());
        path = hopf_lax_evolve(model, phi0, rho0, times, params);
      } else {
        path = interpolate_path(model, map, rho0, times, params);
        if (config.engine == Engine::both) {
          ScalarField phi0 = recover_phase(*model, map, 0.0, times.back() - times.front());
          alt_path = hopf_lax_evolve(model, phi0, rho0, times, params);
        }
      }
    }

    if (config.auto_K) params.K = infer_curvature_bound(*model, path, params);
    path.params = params;

    std::vector<EntropyGenerator> gens;
    for (const auto& g : config.generator_names) gens.push_back(make_generator_by_name(g));
    EntropySeries series = build_series(*model, path, params, gens);

    SpeedReport speed = wasserstein_speed(path);
    result.path_diagnostics["theta"] = path.theta;
    result.path_diagnostics["speed_estimate"] = speed.theta;
    result.path_diagnostics["speed_max_rel_dev"] = speed.max_relative_deviation;
    result.path_diagnostics["K"] = params.K;

    std::optional<WEntropySeries> wseries;
    auto ensure_w = [&]() {
      if (!wseries) {
        auto wr = w_entropy_profile(*model, path, series, params, config.w_sign_plus,
                                    tolerance_for(config, "w_entropy"));
        wseries = wr.series;
        return wr;
      }
      return w_entropy_profile(*model, path, series, params, config.w_sign_plus,
                               tolerance_for(config, "w_entropy"));
    };

    for (const std::string& id : config.checks) {
      if (id == "edi" || id == "epdi") {
        // run the pair once, on the first mention
        bool already = false;
        for (const auto& r : result.reports)
          if (r.check_id == "edi") already = true;
        if (already) continue;
        CheckPair pr = check_edi_epdi(series, params, tolerance_for(config, "edi"));
        pr.second.tolerance = tolerance_for(config, "epdi");
        finalize_report(pr.second);
        result.reports.push_back(pr.first);
        result.reports.push_back(pr.second);
      } else if (id == "power_bound") {
        result.reports.push_back(
            check_power_bound(series, params, tolerance_for(config, id)));
      } else if (id == "renyi") {
        CheckPair pr = check_renyi(*model, path, series, params, tolerance_for(config, id));
        result.reports.push_back(pr.first);
        result.reports.push_back(pr.second);
      } else if (id == "sn") {
        result.reports.push_back(check_sn(series, params, tolerance_for(config, id)));
      } else if (id == "sturm") {
        std::vector<double> nps =
            config.sturm_nprimes.empty() ? std::vector<double>{params.N} : config.sturm_nprimes;
        for (double np : nps)
          result.reports.push_back(
              check_sturm(*model, path, params, np, tolerance_for(config, id)));
      } else if (id == "jacobian") {
        result.reports.push_back(
            check_jacobian(*model, path, params, params.N, tolerance_for(config, id)));
      } else if (id == "identity_ij") {
        result.reports.push_back(
            identity_ij(*model, path, params, params.N, tolerance_for(config, id)));
      } else if (id == "ent_infty") {
        result.reports.push_back(
            check_ent_infty(*model, path, series, params, tolerance_for(config, id)));
      } else if (id == "w_entropy") {
        result.reports.push_back(ensure_w().report);
      } else if (id == "niw") {
        if (!wseries) ensure_w();
        result.reports.push_back(
            check_niw(series, *wseries, params, tolerance_for(config, "niw")));
      } else if (id == "dissipation") {
        // FD-vs-analytic consistency of the dissipation formulas
        CheckReport rep;
        rep.check_id = "dissipation";
        rep.statement = "|dU_fd - U1| and |d2U_fd - U2| <= tol (1 + |analytic|)";
        rep.times = series.times;
        rep.tolerance = 0.0;
        double tol = tolerance_for(config, id);
        const std::size_t T = series.times.size();
        std::vector<double> margins(T, std::numeric_limits<double>::infinity());
        for (const auto& [name, gs] : series.generators) {
          for (std::size_t k = 2; k + 2 < T; ++k) {
            double m1 = tol * (1.0 + std::abs(gs.U1[k])) - std::abs(gs.dU[k] - gs.U1[k]);
            double m2 = tol * (1.0 + std::abs(gs.U2[k])) - std::abs(gs.d2U[k] - gs.U2[k]);
            margins[k] = std::min(margins[k], std::min(m1, m2));
          }
        }
        for (std::size_t k = 0; k < T; ++k)
          if (!std::isfinite(margins[k])) margins[k] = 0.0;
        rep.margin = margins;
        finalize_report(rep);
        if (rep.verdict == Verdict::equality) rep.verdict = Verdict::pass;
        result.reports.push_back(rep);
      } else {
        throw Error("unknown check id: " + id);
      }
    }

    if (alt_path) {
      CheckReport rep;
      rep.check_id = "engine_cross_validation";
      rep.statement = "L1 distance between quantile and Hopf-Lax densities <= 5e-3";
      rep.times = path.times;
      rep.tolerance = 0.0;
      double l1 = cross_engine_l1(*model, path, *alt_path);
      rep.margin.assign(path.steps(), 5e-3 - l1);
      rep.diagnostics["max_l1_distance"] = l1;
      finalize_report(rep);
      if (rep.verdict == Verdict::equality) rep.verdict = Verdict::pass;
      result.reports.push_back(rep);
    }

    result.ok = true;
    for (const auto& r : result.reports)
      if (r.verdict == Verdict::fail) result.ok = false;

    if (!config.out_dir.empty()) {
      fs::path dir = fs::path(config.out_dir) / config.name;
      fs::create_directories(dir);
      json doc;
      doc["scenario"] = config.name;
      doc["ok"] = result.ok;
      doc["params"] = {{"m", params.m_infinite() ? json("inf") : json(params.m)},
                       {"K", params.K},
                       {"p", params.p},
                       {"N", params.N}};
      doc["path"] = result.path_diagnostics;
      doc["checks"] = json::array();
      for (const auto& r : result.reports) doc["checks"].push_back(report_to_json(r));
      std::ofstream(dir / "report.json") << doc.dump(2) << '\n';
      write_series_csv(dir / "series.csv", series);
      for (const auto& r : result.reports) {
        std::string fname = "margins-" + r.check_id + ".csv";
        for (char& ch : fname)
          if (ch == '(' || ch == ')' || ch == ':') ch = '_';
        write_margins_csv(dir / fname, r);
      }
      if (config.export_path_csv) write_path_csv(dir / "path.csv", *model, path);
    }
  } catch (const std::exception& e) {
    result.ok = false;
    result.error = e.what();
    if (!config.out_dir.empty()) {
      fs::path dir = fs::path(config.out_dir) / config.name;
      fs::create_directories(dir);
      json doc;
      doc["scenario"] = config.name;
      doc["ok"] = false;
      doc["error"] = result.error;
      std::ofstream(dir / "report.json") << doc.dump(2) << '\n';
    }
  }
  result.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return result;
}

BatterySummary run_battery(const std::string& manifest_path, const std::string& out_dir,
                           const std::vector<std::string>& flag_overrides) {
  std::ifstream in(manifest_path);
  if (!in) throw Error("cannot open battery manifest: " + manifest_path);
  json j;
  in >> j;
  BatterySummary summary;
  summary.ok = true;
  fs::path base = fs::path(manifest_path).parent_path();
  for (const auto& entry : j.at("scenarios")) {
    std::string rel = entry.get<std::string>();
    fs::path cfg_path = fs::path(rel).is_absolute() ? fs::path(rel) : base / rel;
    ScenarioResult res;
    try {
      ScenarioConfig cfg = load_scenario_config(cfg_path.string());
      if (!out_dir.empty()) cfg.out_dir = out_dir;
      apply_overrides(cfg, flag_overrides);
      res = run_scenario(cfg);
    } catch (const std::exception& e) {
      res.name = rel;
      res.ok = false;
      res.error = e.what();
    }
    summary.ok = summary.ok && res.ok;
    summary.results.push_back(std::move(res));
  }
  if (!out_dir.empty()) {
    json agg;
    agg["ok"] = summary.ok;
    agg["scenarios"] = json::array();
    for (const auto& r : summary.results) {
      json o;
      o["name"] = r.name;
      o["ok"] = r.ok;
      if (!r.error.empty()) o["error"] = r.error;
      for (const auto& rep : r.reports) {
        json c;
        c["verdict"] = to_string(rep.verdict);
        c["min_margin"] = rep.min_margin();
        o["checks"][rep.check_id] = c;
      }
      agg["scenarios"].push_back(o);
    }
    fs::create_directories(out_dir);
    std::ofstream(fs::path(out_dir) / "battery.json") << agg.dump(2) << '\n';
  }
  return summary;
}

std::string render_result(const ScenarioResult& result) {
  std::ostringstream os;
  os << (result.ok ? "[PASS] " : "[FAIL] ") << result.name;
  if (!result.error.empty()) {
    os << "  error: " << result.error << '\n';
    return os.str();
  }
  os << '\n';
  for (const auto& r : result.reports) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%12.4e", r.min_margin());
    double max_res = 0.0;
    for (double v : r.residual) max_res = std::max(max_res, std::abs(v));
    char buf2[64];
    std::snprintf(buf2, sizeof(buf2), "%12.4e", max_res);
    os << "    " << r.check_id << ": " << to_string(r.verdict) << "  min margin " << buf
       << "  max residual " << buf2 << '\n';
  }
  return os.str();
}

std::string render_summary(const BatterySummary& summary) {
  std::ostringstream os;
  os << "scenario x check summary\n";
  for (const auto& r : summary.results) os << render_result(r);
  os << (summary.ok ? "battery: all scenarios pass\n" : "battery: failures present\n");
  return os.str();
}

std::string render_run_dir(const std::string& run_dir) {
  std::ostringstream os;
  fs::path root(run_dir);
  if (fs::exists(root / "battery.json")) {
    std::ifstream in(root / "battery.json");
    json j;
    in >> j;
    os << "battery: " << (j.at("ok").get<bool>() ? "pass" : "fail") << '\n';
    for (const auto& s : j.at("scenarios")) {
      os << (s.at("ok").get<bool>() ? "[PASS] " : "[FAIL] ") << s.at("name").get<std::string>()
         << '\n';
      if (s.contains("checks"))
        for (auto& [id, c] : s.at("checks").items())
          os << "    " << id << ": " << c.at("verdict").get<std::string>() << '\n';
    }
    return os.str();
  }
  for (const auto& entry : fs::directory_iterator(root)) {
    fs::path rep = entry.path() / "report.json";
    if (!fs::exists(rep)) continue;
    std::ifstream in(rep);
    json j;
    in >> j;
    os << (j.at("ok").get<bool>() ? "[PASS] " : "[FAIL] ")
       << j.at("scenario").get<std::string>() << '\n';
    if (j.contains("checks"))
      for (const auto& c : j.at("checks"))
        os << "    " << c.at("check_id").get<std::string>() << ": "
           << c.at("verdict").get<std::string>() << '\n';
  }
  return os.str();
}

}  // namespace wlab
