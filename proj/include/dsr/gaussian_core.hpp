#pragma once

#include <complex>
#include <span>
#include <variant>

#include <Eigen/Dense>

#include "dsr/errors.hpp"

namespace dsr {

using complexd = std::complex<double>;

/// |det V - 1/4| below this counts as pure.
inline constexpr double kPurityTol = 1e-9;

/// Single-mode Gaussian state in quadrature units with vacuum variance 1/2:
/// X = (a + a^dag)/sqrt(2), P = (a - a^dag)/(i sqrt(2)), so a coherent
/// state |alpha> has mean (sqrt(2) Re alpha, sqrt(2) Im alpha).
struct GaussianState {
  Eigen::Vector2d mean;  // (d_x, d_p)
  Eigen::Matrix2d cov;   // symmetric positive definite

  bool is_pure(double tol = kPurityTol) const;
  /// <a^dag a> = (|mean|^2 + tr cov - 1) / 2.
  double mean_photon() const;
};

struct Displacement {
  complexd amount;
};

/// Squeezing with the squeezed quadrature along `axis` (radians from X).
/// A negative magnitude is accepted and normalized to (|magnitude|,
/// axis + pi/2), so squeeze(-r, 0) and squeeze(r, pi/2) are the same
/// operation.
struct Squeeze {
  double magnitude;
  double axis = 0.0;
};

/// R_phi = exp(-i phi a^dag a); maps a -> a exp(-i phi).
struct Rotation {
  double angle;
};

using GaussianUnitary = std::variant<Displacement, Squeeze, Rotation>;

GaussianState vacuum_state();

/// D(alpha) S(r) |0>, squeezing along X. r >= 0 squeezes the X variance.
GaussianState make_dss(complexd alpha, double r);

GaussianState apply_unitary(const GaussianState& state, const GaussianUnitary& u);
GaussianState apply_unitaries(GaussianState state, std::span<const GaussianUnitary> seq);

/// Wigner density at phase-space point (x, p). Throws invalid_state_error
/// when cov is singular.
double wigner(const GaussianState& state, double x, double p);

/// Marginal density of the X homodyne outcome.
double homodyne_x_pdf(const GaussianState& state, double x);

/// |<a|b>|^2 for two pure states. Throws invalid_state_error when either
/// input fails the purity check.
double pure_overlap_sq(const GaussianState& a, const GaussianState& b);

/// Canonical decomposition of a pure Gaussian state as D(beta) S(xi) |0>
/// up to global phase, with xi = r' exp(2i theta), r' >= 0 and
/// theta in (-pi/2, pi/2].
struct PureNormalForm {
  complexd displacement;
  complexd squeeze;
};

PureNormalForm normal_form(const GaussianState& state);
GaussianState from_normal_form(const PureNormalForm& nf);

}  // namespace dsr
