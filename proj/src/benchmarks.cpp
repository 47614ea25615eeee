#include "dsr/benchmarks.hpp"

#include <cmath>
#include <numbers>

#include "dsr/quadrature.hpp"
#include "dsr/receiver.hpp"

namespace dsr {

namespace {

void require_nonneg(double N, const char* who) {
  if (!(N >= 0)) throw std::invalid_argument(std::string(who) + ": N must be >= 0");
}

}  // namespace

double hb_dss(double N) {
  require_nonneg(N, "hb_dss");
  // 0.5 (1 - sqrt(1 - u)) rewritten as 0.5 u / (1 + sqrt(1 - u)) so the
  // bound stays positive when u underflows the 1 - sqrt cancellation.
  const double u = std::exp(-4.0 * N * (N + 1.0));
  return 0.5 * u / (1.0 + std::sqrt(-std::expm1(-4.0 * N * (N + 1.0))));
}

double sql_dss(double N) {
  require_nonneg(N, "sql_dss");
  return 0.5 * std::erfc(std::sqrt(2.0 * N * (N + 1.0)));
}

double hb_cs(double N) {
  require_nonneg(N, "hb_cs");
  const double u = std::exp(-4.0 * N);
  return 0.5 * u / (1.0 + std::sqrt(-std::expm1(-4.0 * N)));
}

double sql_cs(double N) {
  require_nonneg(N, "sql_cs");
  return 0.5 * std::erfc(std::sqrt(2.0 * N));
}

double sql_dss_phase_diffused(double N, double sigma, int quad_order) {
  require_nonneg(N, "sql_dss_phase_diffused");
  PhaseDiffusionSpec spec{sigma, quad_order};
  spec.validate();
  if (sigma == 0.0) return sql_dss(N);
  const SignalSpec signal = SignalSpec::optimal(N);
  const double a = signal.alpha();
  const double r = signal.squeeze_r();
  const GaussHermiteRule rule = gauss_hermite(quad_order);
  const double wnorm = 1.0 / std::sqrt(std::numbers::pi);
  double acc = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    const double phi = std::numbers::sqrt2 * sigma * rule.nodes[k];
    const double c = std::cos(phi), s = std::sin(phi);
    const double var = 0.5 * (std::exp(-2 * r) * c * c + std::exp(2 * r) * s * s);
    // Per-angle homodyne error with the fixed x = 0 threshold.
    const double err =
        0.5 * std::erfc(std::numbers::sqrt2 * a * c / std::sqrt(2.0 * var));
    acc += rule.weights[k] * wnorm * err;
  }
  return acc;
}

double hb_dss_phase_diffused(double N, double sigma, int cutoff, int quad_order) {
  require_nonneg(N, "hb_dss_phase_diffused");
  PhaseDiffusionSpec spec{sigma, quad_order};
  spec.validate();
  const SignalSpec signal = SignalSpec::optimal(N);
  const bool chosen_automatically = cutoff <= 0;
  if (chosen_automatically) cutoff = auto_cutoff(N);
  // An automatically chosen cutoff assumes Poissonian tails; the squeezed
  // carrier decays only geometrically, so grow the cutoff until it suffices.
  for (int attempt = 0;; ++attempt) {
    try {
      const FockDensity rho0 =
          phase_diffuse_pure(-signal.alpha(), signal.squeeze_r(), spec, cutoff);
      const FockDensity rho1 =
          phase_diffuse_pure(+signal.alpha(), signal.squeeze_r(), spec, cutoff);
      return helstrom_mixed(rho0, rho1, 0.5, 0.5);
    } catch (const insufficient_cutoff_error&) {
      if (!chosen_automatically || attempt >= 5) throw;
      cutoff *= 2;
    }
  }
}

}  // namespace dsr
