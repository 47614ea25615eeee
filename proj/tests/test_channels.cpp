#include <cmath>

#include "doctest.h"
#include "oracle_helpers.hpp"

#include "dsr/channels.hpp"
#include "dsr/detection.hpp"
#include "dsr/quadrature.hpp"
#include "dsr/receiver.hpp"

using namespace dsr;

TEST_CASE("phase diffusion spec validation") {
  CHECK_THROWS_AS(PhaseDiffusionSpec({-0.1, 41}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(PhaseDiffusionSpec({0.1, 40}).validate(), std::invalid_argument);
  CHECK_NOTHROW(PhaseDiffusionSpec({0.1, 41}).validate());
  CHECK_THROWS_AS(ThermalSpec({-1e-3}).validate(), std::invalid_argument);
}

TEST_CASE("phase_diffuse_pure: sigma = 0 is rank one") {
  const SignalSpec s = SignalSpec::optimal(1.0);
  const int cutoff = 40;
  const FockDensity rho =
      phase_diffuse_pure(s.alpha(), s.squeeze_r(), PhaseDiffusionSpec{0.0, 41}, cutoff);
  const FockDensity pure = density_from_pure(
      dss_fock(normal_form(make_dss(s.alpha(), s.squeeze_r())), cutoff));
  CHECK((rho.matrix - pure.matrix).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("phase_diffuse_pure: mixedness and normalization") {
  const SignalSpec s = SignalSpec::optimal(1.0);
  const int cutoff = 48;
  const FockDensity rho =
      phase_diffuse_pure(s.alpha(), s.squeeze_r(), PhaseDiffusionSpec{0.5, 41}, cutoff);
  CHECK(rho.trace() == doctest::Approx(1.0).epsilon(1e-9));
  const double purity = (rho.matrix * rho.matrix).trace().real();
  CHECK(purity < 1.0 - 1e-3);
  CHECK((rho.matrix - rho.matrix.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(hermitian_eigenvalues(rho.matrix).minCoeff() >= -1e-9);
}

TEST_CASE("phase_diffuse_pure: quadrature order convergence") {
  const SignalSpec s = SignalSpec::optimal(1.0);
  const int cutoff = 40;
  const FockDensity a =
      phase_diffuse_pure(s.alpha(), s.squeeze_r(), PhaseDiffusionSpec{0.1, 41}, cutoff);
  const FockDensity b =
      phase_diffuse_pure(s.alpha(), s.squeeze_r(), PhaseDiffusionSpec{0.1, 81}, cutoff);
  CHECK((a.matrix - b.matrix).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("phase diffusion commutes with ensemble rotation") {
  // Diffusing a rotated carrier equals rotating every diffused component:
  // the Gaussian angle density is shift-symmetric.
  const double alpha = 0.8, r = 0.45, phi = 0.3;
  const PhaseDiffusionSpec pd{0.2, 61};
  const int cutoff = 40;

  auto comps = phase_diffusion_components(alpha, r, pd);
  for (auto& c : comps) c.state = apply_unitary(c.state, Rotation{phi});
  const FockDensity rotated_after = mixture_to_fock(comps, cutoff);

  // Independent reconstruction: rotate the carrier first, then diffuse it by
  // hand with the same Gauss-Hermite discretization of the angle density.
  const GaussianState pre = apply_unitary(make_dss(alpha, r), Rotation{phi});
  const GaussHermiteRule gh = gauss_hermite(pd.quad_order);
  std::vector<WeightedGaussian> direct;
  for (int k = 0; k < pd.quad_order; ++k) {
    const double phi_k = std::sqrt(2.0) * pd.sigma * gh.nodes[k];
    direct.push_back({gh.weights[k] / std::sqrt(M_PI),
                      apply_unitary(pre, Rotation{phi_k})});
  }
  const FockDensity diffused_rotated = mixture_to_fock(direct, cutoff);
  CHECK((rotated_after.matrix - diffused_rotated.matrix).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("phase_diffusion_components weights sum to one") {
  const auto comps = phase_diffusion_components(0.7, 0.3, PhaseDiffusionSpec{0.15, 41});
  double total = 0.0;
  for (const auto& c : comps) {
    CHECK(c.weight > 0.0);
    CHECK(c.state.is_pure());
    total += c.weight;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("thermal_contaminate_coherent descriptors") {
  const DisplacedThermal a = thermal_contaminate_coherent(0.0, ThermalSpec{0.2});
  CHECK(std::abs(a.displacement) == 0.0);
  CHECK(a.n_t == 0.2);

  const DisplacedThermal b = thermal_contaminate_coherent(complexd(0.5, 0.1),
                                                          ThermalSpec{0.0});
  CHECK(b.n_t == 0.0);
  CHECK(b.displacement == complexd(0.5, 0.1));

  const SignalSpec s = SignalSpec::optimal(1.0);
  const DisplacedThermal c =
      thermal_contaminate_coherent(s.gamma(), ThermalSpec{1e-3});
  CHECK(std::abs(c.displacement) == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("thermal_contaminate_density: identity at n_t = 0") {
  const FockDensity rho = density_from_pure(
      dss_fock(normal_form(make_dss(complexd(0.4, 0.2), 0.3)), 24));
  const FockDensity out = thermal_contaminate_density(rho, ThermalSpec{0.0}, 16);
  CHECK((out.matrix - rho.matrix).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("thermal_contaminate_density: vacuum becomes thermal") {
  const double n_t = 0.3;
  const int cutoff = 24;
  FockDensity vac{Eigen::MatrixXcd::Zero(cutoff + 1, cutoff + 1)};
  vac.matrix(0, 0) = 1.0;
  const FockDensity out = thermal_contaminate_density(vac, ThermalSpec{n_t}, 64);
  const Eigen::VectorXd p = photon_distribution(out);
  for (int n = 0; n <= 12; ++n)
    CHECK(p(n) == doctest::Approx(std::pow(n_t, n) / std::pow(1 + n_t, n + 1))
                      .epsilon(0).scale(1).epsilon(1e-6));
  CHECK(out.trace() == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("thermal_contaminate_density matches the displaced-thermal closed form") {
  const double n_t = 0.05;
  const complexd d(1.1, 0.0);
  const int cutoff = 40;
  const FockDensity coh = density_from_pure(dss_fock(PureNormalForm{d, 0.0}, cutoff));
  const FockDensity out = thermal_contaminate_density(coh, ThermalSpec{n_t}, 48);
  const PnrModel det{6, 1.0, 0.0};
  const OutcomeDistribution via_density = outcome_probs_density(det, out);
  const OutcomeDistribution closed = outcome_probs_displaced_thermal(det, d, n_t);
  for (int n = 0; n <= 6; ++n)
    CHECK(via_density.probs[n] ==
          doctest::Approx(closed.probs[n]).epsilon(0).scale(1).epsilon(1e-6));
}

TEST_CASE("thermal channel displacement covariance") {
  // Phi(D(a) rho D(a)^dag) = D(a) Phi(rho) D(a)^dag.
  const double n_t = 0.1;
  const complexd a(0.3, -0.2);
  const int cutoff = 28;
  const FockDensity rho = density_from_pure(
      dss_fock(normal_form(make_dss(0.2, 0.25)), cutoff));

  const std::vector<GaussianUnitary> disp = {Displacement{a}};
  const FockDensity displaced = apply_gaussian_unitary_fock(rho, disp, cutoff);
  const FockDensity lhs = thermal_contaminate_density(displaced, ThermalSpec{n_t}, 48);
  const FockDensity mixed = thermal_contaminate_density(rho, ThermalSpec{n_t}, 48);
  const FockDensity rhs = apply_gaussian_unitary_fock(mixed, disp, cutoff);
  CHECK((lhs.matrix - rhs.matrix).cwiseAbs().maxCoeff() < 1e-7);
}
