#include "dsr/gaussian_core.hpp"

#include <cmath>
#include <numbers>

namespace dsr {

namespace {

Eigen::Matrix2d rotation_matrix(double phi) {
  // Phase-space action of R_phi = exp(-i phi a^dag a): alpha -> alpha e^{-i phi}.
  Eigen::Matrix2d m;
  m << std::cos(phi), std::sin(phi), -std::sin(phi), std::cos(phi);
  return m;
}

Eigen::Matrix2d squeeze_matrix(double r, double axis) {
  if (r < 0) {
    r = -r;
    axis += std::numbers::pi / 2;
  }
  const double c = std::cos(axis), s = std::sin(axis);
  Eigen::Matrix2d rot;
  rot << c, -s, s, c;
  Eigen::Matrix2d d = Eigen::Matrix2d::Zero();
  d(0, 0) = std::exp(-r);
  d(1, 1) = std::exp(r);
  return rot * d * rot.transpose();
}

}  // namespace

bool GaussianState::is_pure(double tol) const {
  return std::abs(cov.determinant() - 0.25) <= tol;
}

double GaussianState::mean_photon() const {
  return 0.5 * (mean.squaredNorm() + cov.trace() - 1.0);
}

GaussianState vacuum_state() {
  GaussianState s;
  s.mean.setZero();
  s.cov = 0.5 * Eigen::Matrix2d::Identity();
  return s;
}

GaussianState make_dss(complexd alpha, double r) {
  GaussianState s;
  s.mean << std::numbers::sqrt2 * alpha.real(), std::numbers::sqrt2 * alpha.imag();
  s.cov = Eigen::Matrix2d::Zero();
  s.cov(0, 0) = 0.5 * std::exp(-2 * r);
  s.cov(1, 1) = 0.5 * std::exp(2 * r);
  return s;
}

GaussianState apply_unitary(const GaussianState& state, const GaussianUnitary& u) {
  GaussianState out = state;
  if (const auto* d = std::get_if<Displacement>(&u)) {
    out.mean(0) += std::numbers::sqrt2 * d->amount.real();
    out.mean(1) += std::numbers::sqrt2 * d->amount.imag();
  } else if (const auto* sq = std::get_if<Squeeze>(&u)) {
    if (!std::isfinite(sq->magnitude))
      throw std::invalid_argument("apply_unitary: squeeze magnitude must be finite");
    const Eigen::Matrix2d m = squeeze_matrix(sq->magnitude, sq->axis);
    out.mean = m * state.mean;
    out.cov = m * state.cov * m.transpose();
  } else {
    const auto& rot = std::get<Rotation>(u);
    const Eigen::Matrix2d m = rotation_matrix(rot.angle);
    out.mean = m * state.mean;
    out.cov = m * state.cov * m.transpose();
  }
  return out;
}

GaussianState apply_unitaries(GaussianState state, std::span<const GaussianUnitary> seq) {
  for (const auto& u : seq) state = apply_unitary(state, u);
  return state;
}

double wigner(const GaussianState& state, double x, double p) {
  const double det = state.cov.determinant();
  if (!(det > 0))
    throw invalid_state_error("wigner: covariance matrix is singular");
  Eigen::Vector2d delta(x - state.mean(0), p - state.mean(1));
  const double quad = delta.dot(state.cov.inverse() * delta);
  return std::exp(-0.5 * quad) / (2 * std::numbers::pi * std::sqrt(det));
}

double homodyne_x_pdf(const GaussianState& state, double x) {
  const double var = state.cov(0, 0);
  const double d = x - state.mean(0);
  return std::exp(-0.5 * d * d / var) / std::sqrt(2 * std::numbers::pi * var);
}

double pure_overlap_sq(const GaussianState& a, const GaussianState& b) {
  if (!a.is_pure() || !b.is_pure())
    throw invalid_state_error("pure_overlap_sq: inputs must be pure (det V = 1/4)");
  const Eigen::Matrix2d sum = a.cov + b.cov;
  const Eigen::Vector2d delta = a.mean - b.mean;
  const double det = sum.determinant();
  const double quad = delta.dot(sum.inverse() * delta);
  const double f = std::exp(-0.5 * quad) / std::sqrt(det);
  return std::clamp(f, 0.0, 1.0);
}

PureNormalForm normal_form(const GaussianState& state) {
  if (!state.is_pure())
    throw invalid_state_error("normal_form: input must be pure (det V = 1/4)");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(state.cov);
  const double lam_min = es.eigenvalues()(0);
  if (!(lam_min > 0))
    throw invalid_state_error("normal_form: covariance not positive definite");
  double r = -0.5 * std::log(2 * lam_min);
  double theta = std::atan2(es.eigenvectors()(1, 0), es.eigenvectors()(0, 0));
  // Gauge: r >= 0, theta in (-pi/2, pi/2]; theta = 0 when r = 0.
  while (theta <= -std::numbers::pi / 2) theta += std::numbers::pi;
  while (theta > std::numbers::pi / 2) theta -= std::numbers::pi;
  if (r < 1e-14) {
    r = std::max(r, 0.0);
    theta = 0.0;
  }
  PureNormalForm nf;
  nf.squeeze = std::polar(r, 0.0) * std::exp(complexd(0.0, 2 * theta));
  nf.displacement = complexd(state.mean(0), state.mean(1)) / std::numbers::sqrt2;
  return nf;
}

GaussianState from_normal_form(const PureNormalForm& nf) {
  const double r = std::abs(nf.squeeze);
  const double theta = r > 0 ? 0.5 * std::arg(nf.squeeze) : 0.0;
  GaussianState s = vacuum_state();
  s = apply_unitary(s, Squeeze{r, theta});
  s = apply_unitary(s, Displacement{nf.displacement});
  return s;
}

}  // namespace dsr
