// Acceptance suite: one pass/fail line per criterion. Exits with the number
// of failed hard criteria (criterion 8 is diagnostic only).
//
// Usage: dsr_acceptance <path-to-dsr-lab> <configs-dir>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracle_helpers.hpp"

#include "dsr/benchmarks.hpp"
#include "dsr/quadrature.hpp"
#include "dsr/receiver.hpp"
#include "dsr/sweep.hpp"

using namespace dsr;

namespace {

int g_failures = 0;

void report(int criterion, bool ok, const std::string& detail) {
  std::printf("criterion %2d: %s  %s\n", criterion, ok ? "PASS" : "FAIL",
              detail.c_str());
  if (!ok) ++g_failures;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

bool criterion1() {
  const double closed = dsr_error_ideal(1.0);
  if (std::abs(closed - 0.5 * std::exp(-8.0)) > 1e-12) return false;
  for (int M : {1, 10}) {
    const ThresholdResult r =
        dsr_error_fock_pipeline(SignalSpec::optimal(1.0), PnrModel{M, 1.0, 0.0});
    if (std::abs(r.p_err - closed) > 1e-8) return false;
  }
  return true;
}

bool criterion2(std::string& detail) {
  const double p = dsr_error_ideal(1.0);
  const double r_sql_cs = 10.0 * std::log10(sql_cs(1.0) / p);
  const double r_sql_dss = 10.0 * std::log10(sql_dss(1.0) / p);
  const double r_hb_cs = 10.0 * std::log10(hb_cs(1.0) / p);
  const double r_hb_dss = 10.0 * std::log10(hb_dss(1.0) / p);
  detail = "ratios " + fmt(r_sql_cs) + " / " + fmt(r_sql_dss) + " / " +
           fmt(r_hb_cs) + " / " + fmt(r_hb_dss) + " dB";
  return std::abs(r_sql_cs - 21.3) <= 0.1 && std::abs(r_sql_dss - 11.4) <= 0.1 &&
         std::abs(r_hb_cs - 14.4) <= 0.1 && std::abs(r_hb_dss - (-3.01)) <= 0.05;
}

bool criterion3(std::string& detail) {
  auto ideal = [](double N) { return dsr_error_ideal(N); };
  const double x1 = find_crossover(ideal, [](double N) { return sql_cs(N); }, 0.05, 0.4);
  const double x2 = find_crossover(ideal, [](double N) { return sql_dss(N); }, 0.1, 0.5);
  const double x3 = find_crossover(ideal, [](double N) { return hb_cs(N); }, 0.2, 0.6);
  const double x4 = find_crossover([](double N) { return sql_dss(N); },
                                   [](double N) { return hb_cs(N); }, 0.4, 0.9);
  const double x5 = find_crossover(ideal, [](double) { return 0.01; }, 0.3, 1.0);
  detail = "crossovers " + fmt(x1) + ", " + fmt(x2) + ", " + fmt(x3) + ", " +
           fmt(x4) + "; 1% error at N = " + fmt(x5);
  return std::abs(x1 - 0.21) <= 0.01 && std::abs(x2 - 0.30) <= 0.01 &&
         std::abs(x3 - 0.40) <= 0.01 && std::abs(x4 - 0.659) <= 0.005 &&
         std::abs(x5 - 0.61) <= 0.02;
}

bool criterion4() {
  double prev_ratio = 0.0;
  for (int i = 0; i < 300; ++i) {
    const double N = 0.01 + (3.0 - 0.01) * i / 299.0;
    const double hb = hb_dss(N), p = dsr_error_ideal(N);
    if (p < hb - 1e-15 || p > 2.0 * hb + 1e-15) return false;
    const double ratio = p / hb;
    if (ratio < prev_ratio - 1e-12 || ratio > 2.0 + 1e-12) return false;
    prev_ratio = ratio;
  }
  return prev_ratio > 1.9;
}

bool criterion5(std::string& detail) {
  const double etas[3] = {1.0, 0.9, 0.8};
  const double want_cross[3] = {0.30, 0.39, 0.56};
  const double want_db[3] = {-11.44, -7.97, -4.5};
  detail.clear();
  for (int i = 0; i < 3; ++i) {
    const double eta = etas[i];
    const double cross = find_crossover(
        [eta](double N) { return dsr_error_eta(N, eta); },
        [](double N) { return sql_dss(N); }, 0.1, 0.9);
    const double db = 10.0 * std::log10(dsr_error_eta(1.0, eta) / sql_dss(1.0));
    detail += fmt(cross) + "/" + fmt(db) + "dB ";
    if (std::abs(cross - want_cross[i]) > 0.01) return false;
    if (std::abs(db - want_db[i]) > 0.1) return false;
  }
  return true;
}

bool criterion6(std::string& detail) {
  const double nu = 1e-2;
  const int M = 3;
  // Locate the plateau onset: the first grid N with n_th* = M for both
  // efficiencies; past it the two error curves must coincide.
  double onset = -1.0;
  for (double N = 0.2; N <= 12.0; N += 0.2) {
    const int t9 = dsr_error_pnr(SignalSpec::optimal(N), PnrModel{M, 0.9, nu}).n_th;
    const int t8 = dsr_error_pnr(SignalSpec::optimal(N), PnrModel{M, 0.8, nu}).n_th;
    if (t9 == M && t8 == M) {
      onset = N;
      break;
    }
  }
  if (onset < 0) return false;
  for (double N : {2.0 * onset, 4.0 * onset, 30.0}) {
    const ThresholdResult a = dsr_error_pnr(SignalSpec::optimal(N), PnrModel{M, 0.9, nu});
    const ThresholdResult b = dsr_error_pnr(SignalSpec::optimal(N), PnrModel{M, 0.8, nu});
    if (a.n_th != M || b.n_th != M) return false;
    if (std::abs(a.p_err - b.p_err) > 1e-10) return false;
  }
  detail = "plateau onset near N = " + fmt(onset);
  return true;
}

bool criterion7(std::string& detail) {
  const PnrModel det{10, 1.0, 0.0};
  const PhaseDiffusionSpec pd{0.1, 41};
  auto dsr_curve = [&](double N) {
    return dsr_error_phase_diffusion(SignalSpec::optimal(N), det, pd).p_err;
  };
  auto sql_curve = [&](double N) { return sql_dss_phase_diffused(N, pd.sigma, 81); };

  const double lo = find_crossover(dsr_curve, sql_curve, 0.1, 0.5);
  const double hi = find_crossover(dsr_curve, sql_curve, 0.5, 1.5);

  double best_db = -1e9;
  for (double N = 0.35; N <= 1.0 + 1e-9; N += 0.025)
    best_db = std::max(best_db, 10.0 * std::log10(sql_curve(N) / dsr_curve(N)));

  // Threshold staircase: below the resolution cap every jump has size 2.
  bool steps_ok = true;
  int prev = 1;
  for (double N = 0.2; N <= 3.0 + 1e-9; N += 0.1) {
    const int t = dsr_error_phase_diffusion(SignalSpec::optimal(N), det, pd).n_th;
    if (t < prev) steps_ok = false;
    if (t > prev && t <= det.resolution - 1 && t - prev != 2) steps_ok = false;
    prev = t;
  }

  detail = "interval (" + fmt(lo) + ", " + fmt(hi) + "), max advantage " +
           fmt(best_db) + " dB";
  return std::abs(lo - 0.28) <= 0.03 && std::abs(hi - 0.93) <= 0.05 &&
         std::abs(best_db - 3.32) <= 0.2 && steps_ok;
}

void criterion8_diagnostic() {
  const double want[4] = {-6.34, -13.43, -20.79, -28.27};
  std::string detail;
  bool within = true;
  for (int M = 1; M <= 4; ++M) {
    double best = 1e9;
    for (double N = 0.05; N <= 3.0 + 1e-9; N += 0.01) {
      const double p =
          dsr_error_thermal(SignalSpec::optimal(N), PnrModel{M, 1.0, 0.0},
                            ThermalSpec{1e-3})
              .p_err;
      best = std::min(best, 10.0 * std::log10(p / sql_dss(N)));
    }
    const double dev = best - want[M - 1];
    detail += "M=" + std::to_string(M) + ": " + fmt(best) + " dB (dev " +
              fmt(dev) + ") ";
    if (std::abs(dev) > 0.3) within = false;
  }
  std::printf("criterion  8: %s  %s[diagnostic, not hard-fail]\n",
              within ? "PASS" : "WARN", detail.c_str());
}

bool criterion9() {
  // dss_fock vs matrix-exponential oracle.
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 6; ++trial) {
    const complexd beta(u(rng), u(rng));
    const complexd xi = 0.6 * std::abs(u(rng)) * std::exp(complexd(0, 3.0 * u(rng)));
    const FockVector v = dss_fock(PureNormalForm{beta, xi}, 60);
    const Eigen::VectorXcd ref = oracle::dss_amplitudes_expm(beta, xi, 60, 240);
    if (oracle::phase_aligned_max_diff(ref, v.amplitudes) > 1e-8) return false;
  }

  // Displaced-thermal closed form vs 2D quadrature.
  const GaussHermiteRule gh = gauss_hermite(64);
  for (double n_t : {1e-3, 0.05}) {
    const complexd d(2.0 * std::sqrt(2.0), 0.0);
    const OutcomeDistribution q =
        outcome_probs_displaced_thermal(PnrModel{4, 1.0, 0.0}, d, n_t);
    for (int n = 0; n < 4; ++n) {
      double ref = 0.0;
      for (int j = 0; j < 64; ++j)
        for (int k = 0; k < 64; ++k) {
          const complexd lam = std::sqrt(n_t) * complexd(gh.nodes[j], gh.nodes[k]);
          ref += gh.weights[j] * gh.weights[k] / M_PI *
                 oracle::poisson_pmf(n, std::norm(lam + d));
        }
      if (std::abs(q.probs[n] - ref) > 1e-6) return false;
    }
  }

  // helstrom_mixed on rank-1 pairs vs the pure-overlap formula.
  for (int trial = 0; trial < 6; ++trial) {
    const GaussianState a = make_dss(complexd(u(rng), u(rng)), 0.7 * std::abs(u(rng)));
    const GaussianState b = make_dss(complexd(u(rng), u(rng)), 0.7 * std::abs(u(rng)));
    const FockDensity ra = density_from_pure(dss_fock(normal_form(a), 60));
    const FockDensity rb = density_from_pure(dss_fock(normal_form(b), 60));
    const double formula =
        0.5 * (1.0 - std::sqrt(1.0 - pure_overlap_sq(a, b)));
    if (std::abs(helstrom_mixed(ra, rb, 0.5, 0.5) - formula) > 1e-9) return false;
  }

  // POVM path vs Poisson path.
  for (double mu : {0.0, 0.5, 8.0}) {
    const PnrModel det{3, 0.8, 0.01};
    const FockVector coh = dss_fock(PureNormalForm{std::sqrt(mu), 0.0}, 80);
    const OutcomeDistribution a = outcome_probs_density(det, density_from_pure(coh));
    const OutcomeDistribution b = outcome_probs_coherent(det, mu);
    for (int n = 0; n <= 3; ++n)
      if (std::abs(a.probs[n] - b.probs[n]) > 1e-9) return false;
  }

  // Quadrature order doubling.
  if (std::abs(sql_dss_phase_diffused(1.0, 0.1, 41) -
               sql_dss_phase_diffused(1.0, 0.1, 81)) > 1e-9)
    return false;
  const SignalSpec s1 = SignalSpec::optimal(1.0);
  const FockDensity pa =
      phase_diffuse_pure(s1.alpha(), s1.squeeze_r(), PhaseDiffusionSpec{0.1, 41}, 40);
  const FockDensity pb =
      phase_diffuse_pure(s1.alpha(), s1.squeeze_r(), PhaseDiffusionSpec{0.1, 81}, 40);
  return (pa.matrix - pb.matrix).cwiseAbs().maxCoeff() <= 1e-9;
}

bool check_density(const FockDensity& rho) {
  if ((rho.matrix - rho.matrix.adjoint()).cwiseAbs().maxCoeff() > 1e-12) return false;
  if (rho.trace() < 1.0 - 1e-8 || rho.trace() > 1.0 + 1e-8) return false;
  return hermitian_eigenvalues(rho.matrix).minCoeff() >= -1e-9;
}

bool criterion10() {
  for (double N : {0.3, 1.0, 2.0}) {
    const SignalSpec s = SignalSpec::optimal(N);
    const int cutoff = auto_cutoff(4.0 * N * (N + 1.0)) ;

    // Phase-diffusion scenario densities.
    const auto [z0, z1] = dsr_phase_diffused_outputs(s, PhaseDiffusionSpec{0.1, 41},
                                                     cutoff);
    if (!check_density(z0) || !check_density(z1)) return false;

    // Outcome laws across the scenarios.
    std::vector<OutcomeDistribution> dists;
    const PnrModel det{5, 0.9, 0.01};
    dists.push_back(outcome_probs_coherent(det, s.gamma() * s.gamma()));
    dists.push_back(outcome_probs_density(det, z0));
    dists.push_back(outcome_probs_density(det, z1));
    dists.push_back(outcome_probs_displaced_thermal(det, s.gamma(), 1e-3));
    dists.push_back(outcome_probs_displaced_thermal(det, 0.0, 1e-3));
    for (const auto& q : dists) {
      if (std::abs(q.sum() - 1.0) > 1e-10) return false;
      for (double p : q.probs)
        if (p < 0.0) return false;
    }

    // Thermal-contaminated density (quadrature path).
    const FockDensity coh = density_from_pure(dss_fock(PureNormalForm{s.gamma(), 0.0},
                                                       cutoff));
    if (!check_density(thermal_contaminate_density(coh, ThermalSpec{1e-3}, 32)))
      return false;
  }
  return true;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return "<unreadable:" + path + ">";
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool criterion11(const std::string& binary, const std::string& configs,
                 std::string& detail) {
  const std::string tmp = "acceptance_tmp";
  std::system(("rm -rf " + tmp + " && mkdir -p " + tmp).c_str());
  for (int fig : {3, 4, 5, 6, 9}) {
    std::vector<std::string> outputs;
    const std::string runs[3] = {"_a --jobs 1", "_b --jobs 1", "_c --jobs 8"};
    for (const std::string& suffix : runs) {
      const std::string out =
          tmp + "/fig" + std::to_string(fig) + suffix.substr(0, 2) + ".csv";
      const std::string cmd = binary + " reproduce-figure " + std::to_string(fig) +
                              " --config-dir " + configs + " --out " + out +
                              suffix.substr(2) + " > /dev/null";
      if (std::system(cmd.c_str()) != 0) {
        detail = "figure " + std::to_string(fig) + " run failed";
        return false;
      }
      outputs.push_back(out);
    }
    const std::string a = slurp(outputs[0]);
    if (a.empty() || a != slurp(outputs[1]) || a != slurp(outputs[2])) {
      detail = "figure " + std::to_string(fig) + " outputs differ";
      return false;
    }
  }
  detail = "all 5 recipes byte-identical across reruns and jobs {1, 8}";
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: dsr_acceptance <dsr-lab binary> <configs dir>\n";
    return 64;
  }
  const std::string binary = argv[1], configs = argv[2];
  unsetenv("DSR_LAB_JOBS");

  std::string detail;
  report(1, criterion1(), "closed form and Fock pipeline at N = 1");
  detail.clear();
  {
    const bool ok = criterion2(detail);
    report(2, ok, detail);
  }
  {
    const bool ok = criterion3(detail);
    report(3, ok, detail);
  }
  report(4, criterion4(), "Helstrom sandwich over [0.01, 3]");
  {
    const bool ok = criterion5(detail);
    report(5, ok, detail);
  }
  {
    const bool ok = criterion6(detail);
    report(6, ok, detail);
  }
  {
    const bool ok = criterion7(detail);
    report(7, ok, detail);
  }
  criterion8_diagnostic();
  report(9, criterion9(), "oracle equivalence suite");
  report(10, criterion10(), "state and distribution validity sweep");
  {
    const bool ok = criterion11(binary, configs, detail);
    report(11, ok, detail);
  }

  if (g_failures == 0)
    std::printf("acceptance: all hard criteria passed\n");
  else
    std::printf("acceptance: %d hard criteria FAILED\n", g_failures);
  return g_failures;
}
