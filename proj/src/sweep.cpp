#include "dsr/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <thread>

namespace dsr {

using nlohmann::json;
using nlohmann::ordered_json;

std::vector<double> GridSpec::points() const {
  std::vector<double> p(count);
  if (spacing == Spacing::linear) {
    for (int i = 0; i < count; ++i)
      p[i] = start + (stop - start) * i / (count - 1);
  } else {
    const double ls = std::log(start), le = std::log(stop);
    for (int i = 0; i < count; ++i)
      p[i] = std::exp(ls + (le - ls) * i / (count - 1));
  }
  return p;
}

std::string benchmark_name(BenchmarkKind kind) {
  switch (kind) {
    case BenchmarkKind::hb_dss: return "hb_dss";
    case BenchmarkKind::sql_dss: return "sql_dss";
    case BenchmarkKind::hb_cs: return "hb_cs";
    case BenchmarkKind::sql_cs: return "sql_cs";
    case BenchmarkKind::sql_dss_pd: return "sql_dss_pd";
    case BenchmarkKind::hb_dss_pd: return "hb_dss_pd";
  }
  throw std::logic_error("benchmark_name: unreachable");
}

namespace {

BenchmarkKind benchmark_from_name(const std::string& name) {
  for (BenchmarkKind k : {BenchmarkKind::hb_dss, BenchmarkKind::sql_dss,
                          BenchmarkKind::hb_cs, BenchmarkKind::sql_cs,
                          BenchmarkKind::sql_dss_pd, BenchmarkKind::hb_dss_pd})
    if (benchmark_name(k) == name) return k;
  throw config_error("outputs.ratio_benchmarks: unknown benchmark '" + name + "'");
}

void check_keys(const json& j, const std::string& where,
                std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw config_error(where + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed)
      if (key == a) ok = true;
    if (!ok) throw config_error(where + ": unknown key '" + key + "'");
  }
}

double get_number(const json& j, const std::string& where, const char* key) {
  if (!j.contains(key)) throw config_error(where + ": missing key '" + key + "'");
  if (!j.at(key).is_number()) throw config_error(where + "." + key + ": expected a number");
  return j.at(key).get<double>();
}

int get_int(const json& j, const std::string& where, const char* key) {
  if (!j.contains(key)) throw config_error(where + ": missing key '" + key + "'");
  if (!j.at(key).is_number_integer())
    throw config_error(where + "." + key + ": expected an integer");
  return j.at(key).get<int>();
}

}  // namespace

SweepConfig parse_config(const json& j) {
  check_keys(j, "config",
             {"scenario", "grid", "detector", "noise", "priors", "beta", "numerics",
              "outputs"});
  SweepConfig c;

  if (!j.contains("scenario") || !j.at("scenario").is_string())
    throw config_error("scenario: expected a string");
  const std::string s = j.at("scenario").get<std::string>();
  if (s == "benchmarks") c.scenario = Scenario::benchmarks;
  else if (s == "ideal") c.scenario = Scenario::ideal;
  else if (s == "pnr") c.scenario = Scenario::pnr;
  else if (s == "phase_diffusion") c.scenario = Scenario::phase_diffusion;
  else if (s == "thermal") c.scenario = Scenario::thermal;
  else if (s == "populations") c.scenario = Scenario::populations;
  else throw config_error("scenario: unknown scenario '" + s + "'");

  if (!j.contains("grid")) throw config_error("grid: missing section");
  const json& g = j.at("grid");
  check_keys(g, "grid", {"start", "stop", "count", "spacing"});
  c.grid.start = get_number(g, "grid", "start");
  c.grid.stop = get_number(g, "grid", "stop");
  c.grid.count = get_int(g, "grid", "count");
  if (g.contains("spacing")) {
    const std::string sp = g.at("spacing").get<std::string>();
    if (sp == "linear") c.grid.spacing = Spacing::linear;
    else if (sp == "log") c.grid.spacing = Spacing::log;
    else throw config_error("grid.spacing: must be 'linear' or 'log'");
  }
  if (c.scenario != Scenario::populations) {
    if (c.grid.count < 2) throw config_error("grid.count: must be >= 2");
    if (!(c.grid.start < c.grid.stop)) throw config_error("grid: start must be < stop");
  } else if (c.grid.count < 1) {
    throw config_error("grid.count: must be >= 1");
  }
  if (c.grid.spacing == Spacing::log && !(c.grid.start > 0))
    throw config_error("grid.start: must be > 0 for log spacing");

  if (j.contains("detector")) {
    const json& d = j.at("detector");
    check_keys(d, "detector", {"M", "eta", "nu"});
    c.detector.resolution = get_int(d, "detector", "M");
    if (d.contains("eta")) c.detector.eta = get_number(d, "detector", "eta");
    if (d.contains("nu")) c.detector.nu = get_number(d, "detector", "nu");
    try {
      c.detector.validate();
    } catch (const std::invalid_argument& e) {
      throw config_error(std::string("detector: ") + e.what());
    }
  }

  if (j.contains("noise")) {
    const json& n = j.at("noise");
    check_keys(n, "noise", {"sigma", "quad_order", "n_t"});
    if (n.contains("sigma") && n.contains("n_t"))
      throw config_error("noise: sigma and n_t are mutually exclusive");
    if (n.contains("sigma")) {
      PhaseDiffusionSpec pd{get_number(n, "noise", "sigma"),
                            n.contains("quad_order") ? get_int(n, "noise", "quad_order") : 41};
      try {
        pd.validate();
      } catch (const std::invalid_argument& e) {
        throw config_error(std::string("noise: ") + e.what());
      }
      c.phase_noise = pd;
    } else if (n.contains("n_t")) {
      ThermalSpec th{get_number(n, "noise", "n_t")};
      try {
        th.validate();
      } catch (const std::invalid_argument& e) {
        throw config_error(std::string("noise: ") + e.what());
      }
      c.thermal_noise = th;
    }
  }
  if (c.scenario == Scenario::phase_diffusion && !c.phase_noise)
    throw config_error("noise.sigma: required for the phase_diffusion scenario");
  if (c.scenario == Scenario::thermal && !c.thermal_noise)
    throw config_error("noise.n_t: required for the thermal scenario");

  if (j.contains("priors")) {
    const json& p = j.at("priors");
    check_keys(p, "priors", {"p0", "p1"});
    c.p0 = get_number(p, "priors", "p0");
    c.p1 = get_number(p, "priors", "p1");
    if (c.p0 < 0 || c.p1 < 0 || std::abs(c.p0 + c.p1 - 1.0) > 1e-12)
      throw config_error("priors: p0, p1 must be nonnegative and sum to 1");
  }

  if (j.contains("beta")) {
    if (!j.at("beta").is_number()) throw config_error("beta: expected a number");
    c.beta_override = j.at("beta").get<double>();
    if (*c.beta_override < 0 || *c.beta_override > 1)
      throw config_error("beta: must be in [0, 1]");
  }

  if (j.contains("numerics")) {
    const json& n = j.at("numerics");
    check_keys(n, "numerics", {"tail_tol", "quad_order"});
    if (n.contains("tail_tol")) c.tail_tol = get_number(n, "numerics", "tail_tol");
    if (n.contains("quad_order")) c.quad_order = get_int(n, "numerics", "quad_order");
    if (!(c.tail_tol > 0 && c.tail_tol < 1))
      throw config_error("numerics.tail_tol: must be in (0, 1)");
    if (c.quad_order < 1) throw config_error("numerics.quad_order: must be >= 1");
  }

  if (j.contains("outputs")) {
    const json& o = j.at("outputs");
    check_keys(o, "outputs", {"csv_path", "json_path", "ratio_benchmarks"});
    if (o.contains("csv_path")) c.csv_path = o.at("csv_path").get<std::string>();
    if (o.contains("json_path")) c.json_path = o.at("json_path").get<std::string>();
    if (o.contains("ratio_benchmarks")) {
      for (const auto& b : o.at("ratio_benchmarks"))
        c.ratio_benchmarks.push_back(benchmark_from_name(b.get<std::string>()));
    }
  }
  return c;
}

SweepConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw config_error(path + ": " + e.what());
  }
  return parse_config(j);
}

ordered_json config_to_json(const SweepConfig& c) {
  ordered_json j;
  switch (c.scenario) {
    case Scenario::benchmarks: j["scenario"] = "benchmarks"; break;
    case Scenario::ideal: j["scenario"] = "ideal"; break;
    case Scenario::pnr: j["scenario"] = "pnr"; break;
    case Scenario::phase_diffusion: j["scenario"] = "phase_diffusion"; break;
    case Scenario::thermal: j["scenario"] = "thermal"; break;
    case Scenario::populations: j["scenario"] = "populations"; break;
  }
  j["grid"] = {{"start", c.grid.start},
               {"stop", c.grid.stop},
               {"count", c.grid.count},
               {"spacing", c.grid.spacing == Spacing::linear ? "linear" : "log"}};
  j["detector"] = {{"M", c.detector.resolution},
                   {"eta", c.detector.eta},
                   {"nu", c.detector.nu}};
  if (c.phase_noise)
    j["noise"] = {{"sigma", c.phase_noise->sigma},
                  {"quad_order", c.phase_noise->quad_order}};
  else if (c.thermal_noise)
    j["noise"] = {{"n_t", c.thermal_noise->n_t}};
  j["priors"] = {{"p0", c.p0}, {"p1", c.p1}};
  if (c.beta_override) j["beta"] = *c.beta_override;
  j["numerics"] = {{"tail_tol", c.tail_tol}, {"quad_order", c.quad_order}};
  ordered_json outputs;
  outputs["csv_path"] = c.csv_path;
  outputs["json_path"] = c.json_path;
  outputs["ratio_benchmarks"] = json::array();
  for (BenchmarkKind k : c.ratio_benchmarks)
    outputs["ratio_benchmarks"].push_back(benchmark_name(k));
  j["outputs"] = outputs;
  return j;
}

namespace {

double eval_benchmark(BenchmarkKind kind, double N, const SweepConfig& c) {
  switch (kind) {
    case BenchmarkKind::hb_dss: return hb_dss(N);
    case BenchmarkKind::sql_dss: return sql_dss(N);
    case BenchmarkKind::hb_cs: return hb_cs(N);
    case BenchmarkKind::sql_cs: return sql_cs(N);
    case BenchmarkKind::sql_dss_pd: {
      const double sigma = c.phase_noise ? c.phase_noise->sigma : 0.0;
      return sql_dss_phase_diffused(N, sigma, c.quad_order);
    }
    case BenchmarkKind::hb_dss_pd: {
      const double sigma = c.phase_noise ? c.phase_noise->sigma : 0.0;
      return hb_dss_phase_diffused(N, sigma, 0, c.quad_order);
    }
  }
  throw std::logic_error("eval_benchmark: unreachable");
}

ResultRow compute_row(double N, const SweepConfig& c) {
  ResultRow row;
  row.N = N;
  row.beta = c.beta_override ? *c.beta_override : beta_opt(N);
  row.eta = c.detector.eta;
  row.nu = c.detector.nu;
  row.M = c.detector.resolution;
  row.sigma = c.phase_noise ? c.phase_noise->sigma : 0.0;
  row.n_t = c.thermal_noise ? c.thermal_noise->n_t : 0.0;

  SignalSpec signal{N, row.beta, c.p0, c.p1};
  switch (c.scenario) {
    case Scenario::benchmarks:
    case Scenario::ideal:
      row.p_err_dsr = dsr_error_ideal(N);
      row.n_th = 1;
      break;
    case Scenario::pnr: {
      const ThresholdResult r = dsr_error_pnr(signal, c.detector);
      row.p_err_dsr = r.p_err;
      row.n_th = r.n_th;
      break;
    }
    case Scenario::phase_diffusion: {
      const ThresholdResult r =
          dsr_error_phase_diffusion(signal, c.detector, *c.phase_noise, c.tail_tol);
      row.p_err_dsr = r.p_err;
      row.n_th = r.n_th;
      break;
    }
    case Scenario::thermal: {
      const ThresholdResult r = dsr_error_thermal(signal, c.detector, *c.thermal_noise);
      row.p_err_dsr = r.p_err;
      row.n_th = r.n_th;
      break;
    }
    case Scenario::populations:
      throw std::logic_error("compute_row: populations is not a sweep scenario");
  }

  row.p_hb_dss = hb_dss(N);
  row.p_sql_dss = sql_dss(N);
  row.p_hb_cs = hb_cs(N);
  row.p_sql_cs = sql_cs(N);
  for (BenchmarkKind kind : c.ratio_benchmarks) {
    const double bench = eval_benchmark(kind, N, c);
    row.ratios_db.push_back(10.0 * std::log10(bench / row.p_err_dsr));
  }
  return row;
}

}  // namespace

std::vector<ResultRow> run_sweep(const SweepConfig& config, int jobs) {
  if (config.scenario == Scenario::populations)
    throw config_error("scenario: populations requires the populations runner");
  const std::vector<double> grid = config.grid.points();
  std::vector<ResultRow> rows(grid.size());
  if (jobs <= 0) jobs = 1;
  jobs = std::min<int>(jobs, static_cast<int>(grid.size()));

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= grid.size()) break;
      try {
        rows[i] = compute_row(grid[i], config);
      } catch (const std::exception& e) {
        rows[i].N = grid[i];
        rows[i].error = e.what();
      }
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return rows;
}

namespace {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string render_csv(const std::vector<ResultRow>& rows, const SweepConfig& config) {
  std::string out = "N,beta,eta,nu,M,sigma,n_t,p_err_dsr,n_th,p_hb_dss,p_sql_dss,p_hb_cs,p_sql_cs";
  for (BenchmarkKind k : config.ratio_benchmarks)
    out += ",ratio_db_vs_" + benchmark_name(k);
  out += "\n";
  for (const ResultRow& r : rows) {
    out += format_number(r.N) + "," + format_number(r.beta) + "," +
           format_number(r.eta) + "," + format_number(r.nu) + "," +
           std::to_string(r.M) + "," + format_number(r.sigma) + "," +
           format_number(r.n_t) + ",";
    if (r.error.empty()) {
      out += format_number(r.p_err_dsr) + "," + std::to_string(r.n_th) + "," +
             format_number(r.p_hb_dss) + "," + format_number(r.p_sql_dss) + "," +
             format_number(r.p_hb_cs) + "," + format_number(r.p_sql_cs);
      for (double db : r.ratios_db) out += "," + format_number(db);
    } else {
      out += "nan,0,nan,nan,nan,nan";
      for (std::size_t i = 0; i < config.ratio_benchmarks.size(); ++i) out += ",nan";
    }
    out += "\n";
  }
  return out;
}

ordered_json render_json(const std::vector<ResultRow>& rows, const SweepConfig& config) {
  ordered_json j;
  j["config"] = config_to_json(config);
  j["version"] = kVersion;
  j["rows"] = ordered_json::array();
  for (const ResultRow& r : rows) {
    ordered_json row;
    row["N"] = r.N;
    if (!r.error.empty()) {
      row["error"] = r.error;
      j["rows"].push_back(row);
      continue;
    }
    row["beta"] = r.beta;
    row["eta"] = r.eta;
    row["nu"] = r.nu;
    row["M"] = r.M;
    row["sigma"] = r.sigma;
    row["n_t"] = r.n_t;
    row["p_err_dsr"] = r.p_err_dsr;
    row["n_th"] = r.n_th;
    row["p_hb_dss"] = r.p_hb_dss;
    row["p_sql_dss"] = r.p_sql_dss;
    row["p_hb_cs"] = r.p_hb_cs;
    row["p_sql_cs"] = r.p_sql_cs;
    for (std::size_t i = 0; i < config.ratio_benchmarks.size(); ++i)
      row["ratio_db_vs_" + benchmark_name(config.ratio_benchmarks[i])] = r.ratios_db[i];
    j["rows"].push_back(row);
  }
  return j;
}

namespace {

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::ios_base::failure("cannot open output file: " + path);
  out << content;
  if (!out) throw std::ios_base::failure("write failed: " + path);
}

}  // namespace

void emit(const std::vector<ResultRow>& rows, const SweepConfig& config) {
  if (!config.csv_path.empty()) write_file(config.csv_path, render_csv(rows, config));
  if (!config.json_path.empty())
    write_file(config.json_path, render_json(rows, config).dump(2) + "\n");
}

std::vector<PopulationRow> run_populations(const SweepConfig& config) {
  // Single-energy study: grid.start is the signal energy.
  const double N = config.grid.start;
  SignalSpec signal{N, config.beta_override ? *config.beta_override : beta_opt(N),
                    config.p0, config.p1};
  signal.validate();
  const double a = signal.alpha();
  const double r = signal.squeeze_r();
  const auto u = dsr_unitary(signal);

  GaussianState in[2], disp[2], out[2];
  double max_photon = 0.0;
  for (int i = 0; i < 2; ++i) {
    const double sign = i == 0 ? -1.0 : 1.0;
    in[i] = make_dss(sign * a, r);
    disp[i] = apply_unitary(in[i], Displacement{a});
    out[i] = apply_unitaries(in[i], u);
    max_photon = std::max({max_photon, in[i].mean_photon(), disp[i].mean_photon(),
                           out[i].mean_photon()});
  }
  const int cutoff = auto_cutoff(max_photon, config.tail_tol);

  Eigen::VectorXd pin[2], pdisp[2], pout[2];
  for (int i = 0; i < 2; ++i) {
    pin[i] = photon_distribution(
        density_from_pure(dss_fock(normal_form(in[i]), cutoff, config.tail_tol)));
    pdisp[i] = photon_distribution(
        density_from_pure(dss_fock(normal_form(disp[i]), cutoff, config.tail_tol)));
    if (config.phase_noise) {
      const double sign = i == 0 ? -1.0 : 1.0;
      auto components = phase_diffusion_components(sign * a, r, *config.phase_noise);
      for (auto& cpt : components) cpt.state = apply_unitaries(cpt.state, u);
      pout[i] = photon_distribution(mixture_to_fock(components, cutoff, config.tail_tol));
    } else {
      pout[i] = photon_distribution(
          density_from_pure(dss_fock(normal_form(out[i]), cutoff, config.tail_tol)));
    }
  }

  std::vector<PopulationRow> rows;
  rows.reserve(cutoff + 1);
  for (int n = 0; n <= cutoff; ++n)
    rows.push_back({n, pin[0](n), pin[1](n), pdisp[0](n), pdisp[1](n), pout[0](n),
                    pout[1](n)});
  return rows;
}

std::string render_populations_csv(const std::vector<PopulationRow>& rows) {
  std::string out = "n,p0_input,p1_input,p0_displaced,p1_displaced,p0_output,p1_output\n";
  for (const PopulationRow& r : rows) {
    out += std::to_string(r.n) + "," + format_number(r.p0_input) + "," +
           format_number(r.p1_input) + "," + format_number(r.p0_displaced) + "," +
           format_number(r.p1_displaced) + "," + format_number(r.p0_output) + "," +
           format_number(r.p1_output) + "\n";
  }
  return out;
}

double find_crossover(const std::function<double(double)>& curve_a,
                      const std::function<double(double)>& curve_b,
                      double lo, double hi) {
  if (!(lo < hi)) throw bracket_error("find_crossover: lo must be < hi");
  auto f = [&](double x) { return curve_a(x) - curve_b(x); };
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0) == (fhi > 0))
    throw bracket_error("find_crossover: no sign change over the bracket");
  while (hi - lo >= 1e-5) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double max_tolerable_thermal(double N, const PnrModel& det) {
  if (!(N > 0)) throw std::invalid_argument("max_tolerable_thermal: N must be > 0");
  const double target = sql_dss(N);
  auto beats_sql = [&](double n_t) {
    const SignalSpec signal = SignalSpec::optimal(N);
    return dsr_error_thermal(signal, det, ThermalSpec{n_t}).p_err <= target;
  };
  double lo = 1e-9, hi = 1.0;
  if (!beats_sql(lo)) return 0.0;
  if (beats_sql(hi)) return hi;
  // Log-space bisection to relative tolerance 1e-4.
  while (hi / lo > 1.0 + 1e-4) {
    const double mid = std::sqrt(lo * hi);
    (beats_sql(mid) ? lo : hi) = mid;
  }
  return std::sqrt(lo * hi);
}

std::function<double(double)> make_curve(const json& j) {
  check_keys(j, "curve", {"kind", "eta", "sigma", "quad_order"});
  if (!j.contains("kind") || !j.at("kind").is_string())
    throw config_error("curve.kind: expected a string");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "dsr_ideal") return [](double N) { return dsr_error_ideal(N); };
  if (kind == "dsr_eta") {
    const double eta = get_number(j, "curve", "eta");
    return [eta](double N) { return dsr_error_eta(N, eta); };
  }
  if (kind == "hb_dss") return [](double N) { return hb_dss(N); };
  if (kind == "sql_dss") return [](double N) { return sql_dss(N); };
  if (kind == "hb_cs") return [](double N) { return hb_cs(N); };
  if (kind == "sql_cs") return [](double N) { return sql_cs(N); };
  if (kind == "sql_dss_pd") {
    const double sigma = get_number(j, "curve", "sigma");
    const int order = j.contains("quad_order") ? get_int(j, "curve", "quad_order") : 81;
    return [sigma, order](double N) { return sql_dss_phase_diffused(N, sigma, order); };
  }
  throw config_error("curve.kind: unknown curve '" + kind + "'");
}

}  // namespace dsr
