#pragma once

#include <vector>

#include <Eigen/Dense>

#include "dsr/fock_engine.hpp"

namespace dsr {

/// PNR(M) detector: resolves counts 0..M-1 plus an overflow outcome M,
/// with quantum efficiency eta and mean dark counts nu per gate.
struct PnrModel {
  int resolution;
  double eta = 1.0;
  double nu = 0.0;

  void validate() const;
};

/// Probabilities of outcomes 0..M (index M is the overflow bin).
struct OutcomeDistribution {
  std::vector<double> probs;

  int resolution() const { return static_cast<int>(probs.size()) - 1; }
  double sum() const;
};

/// Outcome law for a coherent input with mean photon number mu:
/// Poisson(eta mu + nu) with overflow at M.
OutcomeDistribution outcome_probs_coherent(const PnrModel& det, double mu);

/// Diagonals of the POVM elements Pi_0..Pi_M on the truncated basis
/// (binomial loss composed with Poisson dark-count smearing; the overflow
/// element is the completeness complement).
std::vector<Eigen::VectorXd> povm_diagonals(const PnrModel& det, int cutoff);

/// probs[n] = Tr(Pi_n rho).
OutcomeDistribution outcome_probs_density(const PnrModel& det, const FockDensity& rho);

/// Outcome law for a displaced thermal state D(d) rho_th(n_t) D(d)^dag via
/// the Laguerre closed form, with loss folded as n_t -> eta n_t,
/// d -> sqrt(eta) d and dark counts convolved as Poisson(nu).
OutcomeDistribution outcome_probs_displaced_thermal(const PnrModel& det,
                                                    complexd d, double n_t);

}  // namespace dsr
