#include "dsr/channels.hpp"

#include <cmath>
#include <numbers>

#include "dsr/quadrature.hpp"

namespace dsr {

void PhaseDiffusionSpec::validate() const {
  if (!(sigma >= 0) || !std::isfinite(sigma))
    throw std::invalid_argument("PhaseDiffusionSpec: sigma must be finite and >= 0");
  if (quad_order < 1 || quad_order % 2 == 0)
    throw std::invalid_argument("PhaseDiffusionSpec: quad_order must be odd and >= 1");
}

void ThermalSpec::validate() const {
  if (!(n_t >= 0)) throw std::invalid_argument("ThermalSpec: n_t must be >= 0");
}

std::vector<WeightedGaussian> phase_diffusion_components(complexd alpha_signed,
                                                         double r,
                                                         const PhaseDiffusionSpec& spec) {
  spec.validate();
  const GaussianState base = make_dss(alpha_signed, r);
  if (spec.sigma == 0.0) return {{1.0, base}};

  const GaussHermiteRule rule = gauss_hermite(spec.quad_order);
  std::vector<WeightedGaussian> out;
  out.reserve(rule.nodes.size());
  const double wnorm = 1.0 / std::sqrt(std::numbers::pi);
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    const double phi = std::numbers::sqrt2 * spec.sigma * rule.nodes[k];
    out.push_back({rule.weights[k] * wnorm, apply_unitary(base, Rotation{phi})});
  }
  return out;
}

FockDensity phase_diffuse_pure(complexd alpha_signed, double r,
                               const PhaseDiffusionSpec& spec, int cutoff) {
  const auto components = phase_diffusion_components(alpha_signed, r, spec);
  return mixture_to_fock(components, cutoff);
}

DisplacedThermal thermal_contaminate_coherent(complexd d, const ThermalSpec& spec) {
  spec.validate();
  return {d, spec.n_t};
}

FockDensity thermal_contaminate_density(const FockDensity& rho, const ThermalSpec& spec,
                                        int quad_order) {
  spec.validate();
  if (spec.n_t == 0.0) return rho;
  const int dim = static_cast<int>(rho.matrix.rows());
  // Buffer above the output cutoff so the truncated displacement
  // conjugation keeps the trace.
  const double spread = std::sqrt(spec.n_t);
  const int work = dim + 16 + static_cast<int>(std::ceil(
                       36.0 * spec.n_t + 12.0 * spread * std::sqrt(double(dim))));
  Eigen::MatrixXcd padded = Eigen::MatrixXcd::Zero(work, work);
  padded.topLeftCorner(dim, dim) = rho.matrix;

  const GaussHermiteRule rule = gauss_hermite(quad_order);
  const double wnorm = 1.0 / std::numbers::pi;
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(work, work);
  for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      const complexd lambda = spread * complexd(rule.nodes[j], rule.nodes[k]);
      const double w = rule.weights[j] * rule.weights[k] * wnorm;
      const Eigen::MatrixXcd d = displacement_matrix(lambda, work);
      acc.noalias() += w * (d * padded * d.adjoint());
    }
  }
  FockDensity out;
  out.matrix = acc.topLeftCorner(dim, dim);
  const double loss = rho.trace() - out.trace();
  if (loss > 1e-6)
    throw insufficient_cutoff_error("thermal_contaminate_density: cutoff too small",
                                    out.trace());
  return out;
}

}  // namespace dsr
