#pragma once

#include <cmath>
#include <variant>
#include <vector>

#include "dsr/channels.hpp"
#include "dsr/detection.hpp"

namespace dsr {

/// beta_opt = N / (2N + 1): squeezing fraction minimizing the S-BPSK
/// Helstrom bound at fixed energy.
double beta_opt(double N);

/// S-BPSK ensemble description. The carriers are D(-alpha)S(r)|0> and
/// D(+alpha)S(r)|0> with alpha = sqrt(N(1-beta)), r = asinh(sqrt(N beta)).
struct SignalSpec {
  double mean_photon;             // N
  double beta;                    // squeezing fraction in [0, 1]
  double p0 = 0.5, p1 = 0.5;

  static SignalSpec optimal(double N, double p0 = 0.5, double p1 = 0.5);

  void validate() const;
  double alpha() const { return std::sqrt(mean_photon * (1.0 - beta)); }
  double squeeze_r() const { return std::asinh(std::sqrt(mean_photon * beta)); }
  /// Post-DSR separation gamma = 2 alpha e^r.
  double gamma() const { return 2.0 * alpha() * std::exp(squeeze_r()); }
};

/// Decide '1' iff the PNR outcome n >= n_th. n_th = 0 always decides '1';
/// n_th = M + 1 always decides '0'.
struct ThresholdRule {
  int n_th;
};

/// Arbitrary outcome partition: decide_one[n] maps outcome n to symbol '1'.
struct MapRegions {
  std::vector<bool> decide_one;
};

using DecisionRule = std::variant<ThresholdRule, MapRegions>;

double error_from_distributions(const OutcomeDistribution& q0,
                                const OutcomeDistribution& q1,
                                const DecisionRule& rule, double p0, double p1);

struct ThresholdResult {
  int n_th;
  double p_err;
};

/// Exhaustive minimization over n_th in {0..M+1}; ties break to the
/// smallest threshold.
ThresholdResult optimal_threshold(const OutcomeDistribution& q0,
                                  const OutcomeDistribution& q1, double p0, double p1);

struct MapResult {
  MapRegions rule;
  double p_err;
};

/// Per-outcome MAP rule; never worse than the best threshold rule.
MapResult optimal_map_rule(const OutcomeDistribution& q0,
                           const OutcomeDistribution& q1, double p0, double p1);

/// Closed forms at beta = beta_opt, equal priors.
double dsr_error_ideal(double N);                  // exp(-4N(N+1)) / 2
double dsr_error_eta(double N, double eta);        // exp(-4N(N+1) eta) / 2

/// Poisson outcome statistics (exact for coherent post-DSR states) with
/// detector imperfections, threshold optimized.
ThresholdResult dsr_error_pnr(const SignalSpec& signal, const PnrModel& det);

/// Full truncated-Fock pipeline (state construction, DSR unitary, POVM,
/// threshold). Slower than dsr_error_pnr but makes no Poisson shortcut;
/// used to validate the closed forms.
ThresholdResult dsr_error_fock_pipeline(const SignalSpec& signal, const PnrModel& det,
                                        double tail_tol = kDefaultTailTol);

ThresholdResult dsr_error_phase_diffusion(const SignalSpec& signal, const PnrModel& det,
                                          const PhaseDiffusionSpec& pd,
                                          double tail_tol = kDefaultTailTol);

ThresholdResult dsr_error_thermal(const SignalSpec& signal, const PnrModel& det,
                                  const ThermalSpec& th);

/// The DSR unitary U = S(-r) D(alpha) as a gaussian_core sequence
/// (applied left to right).
std::vector<GaussianUnitary> dsr_unitary(const SignalSpec& signal);

/// Post-DSR outcome distributions under phase diffusion (exposed for
/// population studies and map-rule comparisons).
std::pair<FockDensity, FockDensity> dsr_phase_diffused_outputs(
    const SignalSpec& signal, const PhaseDiffusionSpec& pd, int cutoff,
    double tail_tol = kDefaultTailTol);

}  // namespace dsr
