#include "dsr/receiver.hpp"

#include <cmath>
#include <numbers>

namespace dsr {

double beta_opt(double N) {
  if (N < 0) throw std::invalid_argument("beta_opt: N must be >= 0");
  return N / (2.0 * N + 1.0);
}

SignalSpec SignalSpec::optimal(double N, double p0, double p1) {
  SignalSpec s{N, beta_opt(N), p0, p1};
  s.validate();
  return s;
}

void SignalSpec::validate() const {
  if (mean_photon < 0) throw std::invalid_argument("SignalSpec: N must be >= 0");
  if (beta < 0 || beta > 1) throw std::invalid_argument("SignalSpec: beta must be in [0, 1]");
  if (p0 < 0 || p1 < 0 || std::abs(p0 + p1 - 1.0) > 1e-12)
    throw std::invalid_argument("SignalSpec: priors must be nonnegative and sum to 1");
}

double error_from_distributions(const OutcomeDistribution& q0,
                                const OutcomeDistribution& q1,
                                const DecisionRule& rule, double p0, double p1) {
  if (q0.probs.size() != q1.probs.size())
    throw dimension_error("error_from_distributions: distribution length mismatch");
  const int outcomes = static_cast<int>(q0.probs.size());
  double correct = 0.0;
  if (const auto* th = std::get_if<ThresholdRule>(&rule)) {
    for (int n = 0; n < outcomes; ++n) {
      if (n >= th->n_th)
        correct += p1 * q1.probs[n];
      else
        correct += p0 * q0.probs[n];
    }
  } else {
    const auto& regions = std::get<MapRegions>(rule);
    if (static_cast<int>(regions.decide_one.size()) != outcomes)
      throw dimension_error("error_from_distributions: rule length mismatch");
    for (int n = 0; n < outcomes; ++n)
      correct += regions.decide_one[n] ? p1 * q1.probs[n] : p0 * q0.probs[n];
  }
  return std::clamp(1.0 - correct, 0.0, 1.0);
}

ThresholdResult optimal_threshold(const OutcomeDistribution& q0,
                                  const OutcomeDistribution& q1, double p0, double p1) {
  const int outcomes = static_cast<int>(q0.probs.size());
  ThresholdResult best{0, error_from_distributions(q0, q1, ThresholdRule{0}, p0, p1)};
  for (int n_th = 1; n_th <= outcomes; ++n_th) {
    const double p = error_from_distributions(q0, q1, ThresholdRule{n_th}, p0, p1);
    if (p < best.p_err) best = {n_th, p};
  }
  return best;
}

MapResult optimal_map_rule(const OutcomeDistribution& q0,
                           const OutcomeDistribution& q1, double p0, double p1) {
  if (q0.probs.size() != q1.probs.size())
    throw dimension_error("optimal_map_rule: distribution length mismatch");
  MapResult out;
  out.rule.decide_one.resize(q0.probs.size());
  for (std::size_t n = 0; n < q0.probs.size(); ++n)
    out.rule.decide_one[n] = p1 * q1.probs[n] > p0 * q0.probs[n];
  out.p_err = error_from_distributions(q0, q1, out.rule, p0, p1);
  return out;
}

double dsr_error_ideal(double N) {
  if (N < 0) throw std::invalid_argument("dsr_error_ideal: N must be >= 0");
  return 0.5 * std::exp(-4.0 * N * (N + 1.0));
}

double dsr_error_eta(double N, double eta) {
  if (N < 0) throw std::invalid_argument("dsr_error_eta: N must be >= 0");
  if (!(eta > 0 && eta <= 1)) throw std::invalid_argument("dsr_error_eta: eta must be in (0, 1]");
  return 0.5 * std::exp(-4.0 * N * (N + 1.0) * eta);
}

ThresholdResult dsr_error_pnr(const SignalSpec& signal, const PnrModel& det) {
  signal.validate();
  const double g = signal.gamma();
  const OutcomeDistribution q0 = outcome_probs_coherent(det, 0.0);
  const OutcomeDistribution q1 = outcome_probs_coherent(det, g * g);
  return optimal_threshold(q0, q1, signal.p0, signal.p1);
}

std::vector<GaussianUnitary> dsr_unitary(const SignalSpec& signal) {
  return {Displacement{signal.alpha()},
          Squeeze{signal.squeeze_r(), std::numbers::pi / 2}};
}

ThresholdResult dsr_error_fock_pipeline(const SignalSpec& signal, const PnrModel& det,
                                        double tail_tol) {
  signal.validate();
  const auto u = dsr_unitary(signal);
  OutcomeDistribution q[2];
  int cutoff = 0;
  GaussianState out[2];
  for (int i = 0; i < 2; ++i) {
    const double sign = i == 0 ? -1.0 : 1.0;
    out[i] = apply_unitaries(make_dss(sign * signal.alpha(), signal.squeeze_r()), u);
    cutoff = std::max(
        cutoff, auto_cutoff(std::max(out[i].mean_photon(), 0.0), tail_tol));
  }
  cutoff = std::max(cutoff, det.resolution);
  // The automatic cutoff assumes Poissonian tails; residual squeezing decays
  // only geometrically, so double the cutoff until the tail check passes.
  for (int attempt = 0;; ++attempt) {
    try {
      for (int i = 0; i < 2; ++i) {
        const FockVector v = dss_fock(normal_form(out[i]), cutoff, tail_tol);
        q[i] = outcome_probs_density(det, density_from_pure(v));
      }
      break;
    } catch (const insufficient_cutoff_error&) {
      if (attempt >= 5) throw;
      cutoff *= 2;
    }
  }
  return optimal_threshold(q[0], q[1], signal.p0, signal.p1);
}

std::pair<FockDensity, FockDensity> dsr_phase_diffused_outputs(
    const SignalSpec& signal, const PhaseDiffusionSpec& pd, int cutoff,
    double tail_tol) {
  signal.validate();
  const auto u = dsr_unitary(signal);
  std::pair<FockDensity, FockDensity> out;
  for (int i = 0; i < 2; ++i) {
    const double sign = i == 0 ? -1.0 : 1.0;
    auto components = phase_diffusion_components(sign * signal.alpha(),
                                                 signal.squeeze_r(), pd);
    for (auto& c : components) c.state = apply_unitaries(c.state, u);
    (i == 0 ? out.first : out.second) = mixture_to_fock(components, cutoff, tail_tol);
  }
  return out;
}

ThresholdResult dsr_error_phase_diffusion(const SignalSpec& signal, const PnrModel& det,
                                          const PhaseDiffusionSpec& pd,
                                          double tail_tol) {
  signal.validate();
  const auto u = dsr_unitary(signal);
  // Cutoff from the most energetic pure component across both symbols.
  double max_photon = 0.0;
  for (int i = 0; i < 2; ++i) {
    const double sign = i == 0 ? -1.0 : 1.0;
    for (const auto& c :
         phase_diffusion_components(sign * signal.alpha(), signal.squeeze_r(), pd)) {
      max_photon = std::max(max_photon, apply_unitaries(c.state, u).mean_photon());
    }
  }
  int cutoff = std::max(auto_cutoff(std::max(max_photon, 0.0), tail_tol),
                        det.resolution);
  // Retry with doubled cutoff: quadrature tail components can carry residual
  // squeezing whose Fock tail outlasts the Poisson-based estimate.
  for (int attempt = 0;; ++attempt) {
    try {
      const auto [zeta0, zeta1] =
          dsr_phase_diffused_outputs(signal, pd, cutoff, tail_tol);
      const OutcomeDistribution q0 = outcome_probs_density(det, zeta0);
      const OutcomeDistribution q1 = outcome_probs_density(det, zeta1);
      return optimal_threshold(q0, q1, signal.p0, signal.p1);
    } catch (const insufficient_cutoff_error&) {
      if (attempt >= 5) throw;
      cutoff *= 2;
    }
  }
}

ThresholdResult dsr_error_thermal(const SignalSpec& signal, const PnrModel& det,
                                  const ThermalSpec& th) {
  signal.validate();
  const DisplacedThermal z0 = thermal_contaminate_coherent(0.0, th);
  const DisplacedThermal z1 = thermal_contaminate_coherent(signal.gamma(), th);
  const OutcomeDistribution q0 =
      outcome_probs_displaced_thermal(det, z0.displacement, z0.n_t);
  const OutcomeDistribution q1 =
      outcome_probs_displaced_thermal(det, z1.displacement, z1.n_t);
  return optimal_threshold(q0, q1, signal.p0, signal.p1);
}

}  // namespace dsr
