#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "dsr/benchmarks.hpp"
#include "dsr/receiver.hpp"

namespace dsr {

inline constexpr const char* kVersion = "0.1.0";

/// Invalid or ill-typed configuration; the message names the offending field.
class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class bracket_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Scenario { benchmarks, ideal, pnr, phase_diffusion, thermal, populations };
enum class Spacing { linear, log };

struct GridSpec {
  double start;
  double stop;
  int count;
  Spacing spacing = Spacing::linear;

  std::vector<double> points() const;
};

enum class BenchmarkKind { hb_dss, sql_dss, hb_cs, sql_cs, sql_dss_pd, hb_dss_pd };

std::string benchmark_name(BenchmarkKind kind);

struct SweepConfig {
  Scenario scenario;
  GridSpec grid{0.0, 0.0, 0};
  PnrModel detector{1, 1.0, 0.0};
  std::optional<PhaseDiffusionSpec> phase_noise;
  std::optional<ThermalSpec> thermal_noise;
  double p0 = 0.5, p1 = 0.5;
  std::optional<double> beta_override;
  double tail_tol = kDefaultTailTol;
  int quad_order = 41;
  std::string csv_path;
  std::string json_path;
  std::vector<BenchmarkKind> ratio_benchmarks;
};

SweepConfig parse_config(const nlohmann::json& j);
SweepConfig load_config(const std::string& path);
nlohmann::ordered_json config_to_json(const SweepConfig& config);

struct ResultRow {
  double N = 0, beta = 0, eta = 1, nu = 0;
  int M = 1;
  double sigma = 0, n_t = 0;
  double p_err_dsr = 0;
  int n_th = 0;
  double p_hb_dss = 0, p_sql_dss = 0, p_hb_cs = 0, p_sql_cs = 0;
  std::vector<double> ratios_db;  // one entry per requested benchmark
  std::string error;              // nonempty on a row-level numeric failure
};

/// One row per grid point, in grid order regardless of worker count.
/// jobs <= 0 selects a single worker.
std::vector<ResultRow> run_sweep(const SweepConfig& config, int jobs = 1);

std::string render_csv(const std::vector<ResultRow>& rows, const SweepConfig& config);
nlohmann::ordered_json render_json(const std::vector<ResultRow>& rows,
                                   const SweepConfig& config);

/// Writes csv_path / json_path when set. Throws std::ios_base::failure on
/// I/O errors.
void emit(const std::vector<ResultRow>& rows, const SweepConfig& config);

/// Photon-number population table for the DSR stages (input carriers,
/// after displacement, after the full DSR; optionally phase-diffused).
struct PopulationRow {
  int n;
  double p0_input, p1_input;
  double p0_displaced, p1_displaced;
  double p0_output, p1_output;
};

std::vector<PopulationRow> run_populations(const SweepConfig& config);
std::string render_populations_csv(const std::vector<PopulationRow>& rows);

/// Bisection for curve_a(N) = curve_b(N) on [lo, hi] to |hi - lo| < 1e-5.
/// Throws bracket_error when the difference does not change sign.
double find_crossover(const std::function<double(double)>& curve_a,
                      const std::function<double(double)>& curve_b,
                      double lo, double hi);

/// Largest n_t in [1e-9, 1] with dsr_error_thermal <= sql_dss(N); 0 when
/// even n_t = 1e-9 fails, 1 when the full range passes. Relative
/// tolerance 1e-4.
double max_tolerable_thermal(double N, const PnrModel& det);

/// Named error-probability curve for the crossover verb, e.g.
/// {"kind": "dsr_eta", "eta": 0.9}.
std::function<double(double)> make_curve(const nlohmann::json& j);

}  // namespace dsr
