#pragma once

#include <vector>

#include "dsr/fock_engine.hpp"

namespace dsr {

/// Gaussian random rotation of the phase-space angle, integrated with a
/// Gauss-Hermite rule (change of variable phi = sqrt(2) sigma t).
struct PhaseDiffusionSpec {
  double sigma;
  int quad_order = 41;

  void validate() const;
};

/// Gaussian random displacement with mean thermal photon number n_t.
struct ThermalSpec {
  double n_t;

  void validate() const;
};

/// Exact output descriptor of the thermal channel on a coherent input:
/// D(displacement) rho_th(n_t) D(displacement)^dag.
struct DisplacedThermal {
  complexd displacement;
  double n_t;
};

/// Pure components (weights and rotated Gaussian states) of the
/// phase-diffused DSS D((-1)^{i+1} alpha) S(r) |0>, alpha signed.
std::vector<WeightedGaussian> phase_diffusion_components(complexd alpha_signed,
                                                         double r,
                                                         const PhaseDiffusionSpec& spec);

/// Phase-diffused DSS as a Fock density at the given cutoff.
FockDensity phase_diffuse_pure(complexd alpha_signed, double r,
                               const PhaseDiffusionSpec& spec, int cutoff);

DisplacedThermal thermal_contaminate_coherent(complexd d, const ThermalSpec& spec);

/// General thermal channel by 2D Gaussian quadrature over the displacement
/// amplitude. Intended for non-coherent inputs and as a cross-check; the
/// coherent path uses the exact DisplacedThermal descriptor instead.
FockDensity thermal_contaminate_density(const FockDensity& rho, const ThermalSpec& spec,
                                        int quad_order);

}  // namespace dsr
