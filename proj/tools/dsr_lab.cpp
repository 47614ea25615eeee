// dsr-lab: batch front end for the DSR simulation library.
//
// Verbs: sweep, benchmarks, crossover, ntmax, reproduce-figure.
// Exit codes: 0 success, 2 config error, 3 numeric failure, 4 I/O error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "dsr/sweep.hpp"

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitIo = 4;

int resolve_jobs(int cli_jobs) {
  if (const char* env = std::getenv("DSR_LAB_JOBS")) {
    const int j = std::atoi(env);
    if (j > 0) return j;
  }
  return cli_jobs > 0 ? cli_jobs : 1;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open config file: " + path);
  json j;
  in >> j;
  return j;
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::ios_base::failure("cannot open output file: " + path);
  out << content;
  if (!out) throw std::ios_base::failure("write failed: " + path);
}

int run_sweep_verb(const std::string& config_path, const std::string& out_override,
                   int jobs) {
  dsr::SweepConfig config = dsr::load_config(config_path);
  if (!out_override.empty()) config.csv_path = out_override;

  if (config.scenario == dsr::Scenario::populations) {
    const auto rows = dsr::run_populations(config);
    if (!config.csv_path.empty())
      write_text(config.csv_path, dsr::render_populations_csv(rows));
    else
      std::cout << dsr::render_populations_csv(rows);
    return 0;
  }

  const auto rows = dsr::run_sweep(config, resolve_jobs(jobs));
  dsr::emit(rows, config);
  if (config.csv_path.empty() && config.json_path.empty())
    std::cout << dsr::render_csv(rows, config);
  for (const auto& r : rows) {
    if (!r.error.empty()) {
      std::cerr << "dsr-lab: numeric failure at N=" << r.N << ": " << r.error << "\n";
      return kExitNumeric;
    }
  }
  return 0;
}

int run_crossover_verb(const std::string& config_path, const std::string& out_path) {
  const json j = read_json_file(config_path);
  if (!j.is_object()) throw dsr::config_error("config: expected an object");
  for (const auto& [key, value] : j.items()) {
    if (key != "curve_a" && key != "curve_b" && key != "bracket")
      throw dsr::config_error("config: unknown key '" + key + "'");
  }
  if (!j.contains("curve_a") || !j.contains("curve_b") || !j.contains("bracket"))
    throw dsr::config_error("config: crossover needs curve_a, curve_b and bracket");
  const auto curve_a = dsr::make_curve(j.at("curve_a"));
  const auto curve_b = dsr::make_curve(j.at("curve_b"));
  const auto& br = j.at("bracket");
  if (!br.is_array() || br.size() != 2)
    throw dsr::config_error("bracket: expected [lo, hi]");
  const double n_star = dsr::find_crossover(curve_a, curve_b, br[0].get<double>(),
                                            br[1].get<double>());
  ordered_json out;
  out["config"] = j;
  out["version"] = dsr::kVersion;
  out["crossover_N"] = n_star;
  const std::string text = out.dump(2) + "\n";
  if (!out_path.empty())
    write_text(out_path, text);
  else
    std::cout << text;
  return 0;
}

int run_ntmax_verb(const std::string& config_path, const std::string& out_override,
                   int jobs) {
  dsr::SweepConfig config = dsr::load_config(config_path);
  if (!out_override.empty()) config.csv_path = out_override;
  const auto grid = config.grid.points();
  std::string csv = "N,n_t_max\n";
  for (double n : grid) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", n,
                  dsr::max_tolerable_thermal(n, config.detector));
    csv += buf;
  }
  (void)jobs;
  if (!config.csv_path.empty())
    write_text(config.csv_path, csv);
  else
    std::cout << csv;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dsr-lab: displacement-squeeze receiver simulation toolkit"};
  app.require_subcommand(1);

  std::string config_path, out_path, config_dir = "configs";
  int jobs = 1;
  int figure = 0;

  auto add_common = [&](CLI::App* sub, bool config_required = true) {
    auto* opt = sub->add_option("--config", config_path, "configuration file (JSON)");
    if (config_required) opt->required();
    sub->add_option("--out", out_path, "override the CSV output path");
    sub->add_option("--jobs", jobs, "worker count (DSR_LAB_JOBS overrides)");
  };

  auto* sweep = app.add_subcommand("sweep", "run the sweep described by the config");
  add_common(sweep);
  auto* bench = app.add_subcommand("benchmarks", "emit benchmark curves over the grid");
  add_common(bench);
  auto* crossover = app.add_subcommand("crossover", "bisect for a curve crossover");
  add_common(crossover);
  auto* ntmax = app.add_subcommand("ntmax", "maximum tolerable thermal noise over the grid");
  add_common(ntmax);
  auto* figure_cmd =
      app.add_subcommand("reproduce-figure", "run a committed figure recipe");
  figure_cmd->add_option("figure", figure, "figure number (3, 4, 5, 6 or 9)")->required();
  figure_cmd->add_option("--config-dir", config_dir, "directory holding figure recipes");
  figure_cmd->add_option("--out", out_path, "override the CSV output path");
  figure_cmd->add_option("--jobs", jobs, "worker count (DSR_LAB_JOBS overrides)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sweep->parsed()) return run_sweep_verb(config_path, out_path, jobs);
    if (bench->parsed()) {
      dsr::SweepConfig config = dsr::load_config(config_path);
      config.scenario = dsr::Scenario::benchmarks;
      if (!out_path.empty()) config.csv_path = out_path;
      const auto rows = dsr::run_sweep(config, resolve_jobs(jobs));
      dsr::emit(rows, config);
      if (config.csv_path.empty() && config.json_path.empty())
        std::cout << dsr::render_csv(rows, config);
      return 0;
    }
    if (crossover->parsed()) return run_crossover_verb(config_path, out_path);
    if (ntmax->parsed()) return run_ntmax_verb(config_path, out_path, jobs);
    if (figure_cmd->parsed()) {
      if (figure != 3 && figure != 4 && figure != 5 && figure != 6 && figure != 9) {
        std::cerr << "dsr-lab: no recipe for figure " << figure << "\n";
        return kExitConfig;
      }
      const std::string path = config_dir + "/fig" + std::to_string(figure) + ".json";
      return run_sweep_verb(path, out_path, jobs);
    }
  } catch (const dsr::config_error& e) {
    std::cerr << "dsr-lab: config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "dsr-lab: I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const dsr::bracket_error& e) {
    std::cerr << "dsr-lab: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "dsr-lab: numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  }
  return 0;
}
