#pragma once

#include "dsr/channels.hpp"

namespace dsr {

/// Reference error-probability curves at beta = beta_opt, equal priors.
/// hb_* are Helstrom bounds, sql_* are homodyne (standard quantum limit)
/// errors; _dss uses displaced squeezed carriers, _cs coherent carriers.
double hb_dss(double N);   // (1 - sqrt(1 - exp(-4N(N+1)))) / 2
double sql_dss(double N);  // erfc(sqrt(2N(N+1))) / 2
double hb_cs(double N);    // (1 - sqrt(1 - exp(-4N))) / 2
double sql_cs(double N);   // erfc(sqrt(2N)) / 2

/// SQL under phase diffusion: Gauss-Hermite average of the per-angle
/// homodyne error of the rotated carrier.
double sql_dss_phase_diffused(double N, double sigma, int quad_order = 41);

/// Helstrom bound of the phase-diffused carrier pair via the mixed-state
/// trace-norm formula. cutoff <= 0 selects auto_cutoff(N).
double hb_dss_phase_diffused(double N, double sigma, int cutoff = 0,
                             int quad_order = 41);

}  // namespace dsr
