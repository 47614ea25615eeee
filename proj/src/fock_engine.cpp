#include "dsr/fock_engine.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <unsupported/Eigen/MatrixFunctions>

namespace dsr {

int auto_cutoff(double mean_photon, double tail_tol) {
  if (mean_photon < 0) throw std::invalid_argument("auto_cutoff: mean_photon must be >= 0");
  if (!(tail_tol > 0 && tail_tol < 1))
    throw std::invalid_argument("auto_cutoff: tail_tol must be in (0, 1)");
  int k = 0;
  double term = std::exp(-mean_photon);
  double cum = term;
  while (1.0 - cum >= tail_tol && k < 100000) {
    ++k;
    term *= mean_photon / k;
    cum += term;
  }
  return std::max(2 * k, 16);
}

FockVector dss_fock(const PureNormalForm& nf, int cutoff, double tail_tol) {
  if (cutoff < 0) throw std::invalid_argument("dss_fock: cutoff must be >= 0");
  const double r = std::abs(nf.squeeze);
  const complexd eip = r > 0 ? nf.squeeze / r : complexd(1.0, 0.0);
  const double ch = std::cosh(r), sh = std::sinh(r), th = std::tanh(r);
  const complexd beta = nf.displacement;
  const complexd bconj = std::conj(beta);

  FockVector v;
  v.amplitudes.resize(cutoff + 1);
  v.amplitudes(0) = std::sqrt(1.0 / ch) *
                    std::exp(-0.5 * std::norm(beta) - 0.5 * eip * th * bconj * bconj);
  const complexd B = beta * ch + bconj * eip * sh;
  for (int n = 0; n < cutoff; ++n) {
    const complexd prev = n >= 1 ? v.amplitudes(n - 1) : complexd(0.0);
    v.amplitudes(n + 1) =
        (B * v.amplitudes(n) - eip * sh * std::sqrt(double(n)) * prev) /
        (ch * std::sqrt(double(n + 1)));
  }
  const double norm = v.norm_sq();
  if (norm < 1.0 - tail_tol)
    throw insufficient_cutoff_error("dss_fock: cutoff too small for requested tail tolerance",
                                    norm);
  return v;
}

FockDensity density_from_pure(const FockVector& v) {
  FockDensity rho;
  rho.matrix = v.amplitudes * v.amplitudes.adjoint();
  return rho;
}

Eigen::VectorXd photon_distribution(const FockDensity& rho) {
  Eigen::VectorXd p = rho.matrix.diagonal().real();
  for (int i = 0; i < p.size(); ++i) {
    if (p(i) < 0) {
      if (p(i) < -1e-12)
        throw invalid_state_error("photon_distribution: negative diagonal entry");
      p(i) = 0.0;
    }
  }
  return p;
}

namespace {

void require_hermitian(const Eigen::MatrixXcd& h, double tol) {
  if (h.rows() != h.cols())
    throw dimension_error("hermitian matrix expected, got non-square input");
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > tol * scale)
    throw invalid_state_error("matrix is not Hermitian within tolerance");
}

}  // namespace

Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& h) {
  require_hermitian(h, 1e-10);
  const int n = static_cast<int>(h.rows());
  Eigen::MatrixXcd a = 0.5 * (h + h.adjoint());
  const double fro = a.norm();
  const double tol = std::max(1e-14 * fro, 1e-300);

  // Cyclic Jacobi: each pivot (p, q) is annihilated by conjugating with the
  // exact eigenvector basis of the 2x2 Hermitian block.
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    if (std::sqrt(off) <= tol) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const complexd b = a(p, q);
        if (std::abs(b) <= 1e-300) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        // Cancellation-safe Jacobi angle: take the smaller-magnitude root of
        // t^2 + 2 theta t - 1 = 0, so the rotation tends to the identity as
        // the pivot vanishes and never amplifies rounding noise.
        const double absb = std::abs(b);
        const complexd phase = std::conj(b) / absb;
        const double theta = (app - aqq) / (2.0 * absb);
        const double t =
            (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::hypot(theta, 1.0));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const complexd x = c;
        const complexd y = t * c * phase;
        // Columns of the 2x2 unitary: (x, y) and (-conj(y), conj(x)).
        for (int i = 0; i < n; ++i) {
          const complexd aip = a(i, p), aiq = a(i, q);
          a(i, p) = aip * x + aiq * y;
          a(i, q) = -aip * std::conj(y) + aiq * std::conj(x);
        }
        for (int j = 0; j < n; ++j) {
          const complexd apj = a(p, j), aqj = a(q, j);
          a(p, j) = std::conj(x) * apj + std::conj(y) * aqj;
          a(q, j) = -y * apj + x * aqj;
        }
        a(p, q) = complexd(0.0);
        a(q, p) = complexd(0.0);
      }
    }
  }
  Eigen::VectorXd eig = a.diagonal().real();
  std::sort(eig.data(), eig.data() + n);
  return eig;
}

double trace_norm(const Eigen::MatrixXcd& h) {
  const Eigen::VectorXd eig = hermitian_eigenvalues(h);
  double s = 0.0;
  for (int i = 0; i < eig.size(); ++i) s += std::abs(eig(i));
  return s;
}

double helstrom_mixed(const FockDensity& rho0, const FockDensity& rho1,
                      double p0, double p1) {
  if (rho0.cutoff() != rho1.cutoff())
    throw dimension_error("helstrom_mixed: cutoff mismatch");
  if (p0 < 0 || p1 < 0 || std::abs(p0 + p1 - 1.0) > 1e-12)
    throw std::invalid_argument("helstrom_mixed: priors must be nonnegative and sum to 1");
  const double tn = trace_norm(p0 * rho0.matrix - p1 * rho1.matrix);
  return std::clamp(0.5 * (1.0 - tn), 0.0, 0.5);
}

Eigen::MatrixXcd displacement_matrix(complexd lambda, int dim) {
  if (dim < 1) throw std::invalid_argument("displacement_matrix: dim must be >= 1");
  Eigen::MatrixXcd d(dim, dim);
  const double e = std::exp(-0.5 * std::norm(lambda));
  // First column and row are coherent-state amplitudes; interior entries
  // follow from sqrt(m+1) <m+1|D|n> = sqrt(n) <m|D|n-1> + lambda <m|D|n>.
  d(0, 0) = e;
  for (int m = 1; m < dim; ++m) d(m, 0) = d(m - 1, 0) * lambda / std::sqrt(double(m));
  for (int n = 1; n < dim; ++n) {
    d(0, n) = -d(0, n - 1) * std::conj(lambda) / std::sqrt(double(n));
    for (int m = 0; m + 1 < dim; ++m) {
      d(m + 1, n) = (std::sqrt(double(n)) * d(m, n - 1) + lambda * d(m, n)) /
                    std::sqrt(double(m + 1));
    }
  }
  return d;
}

namespace {

Eigen::MatrixXcd unitary_matrix_fock(const GaussianUnitary& u, int dim) {
  if (const auto* rot = std::get_if<Rotation>(&u)) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    for (int k = 0; k < dim; ++k)
      m(k, k) = std::exp(complexd(0.0, -rot->angle * k));
    return m;
  }
  // Truncated generator, numerically exponentiated.
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(dim, dim);
  if (const auto* disp = std::get_if<Displacement>(&u)) {
    for (int k = 0; k + 1 < dim; ++k) {
      g(k + 1, k) = disp->amount * std::sqrt(double(k + 1));
      g(k, k + 1) = -std::conj(disp->amount) * std::sqrt(double(k + 1));
    }
  } else {
    const auto& sq = std::get<Squeeze>(u);
    double r = sq.magnitude;
    double axis = sq.axis;
    if (r < 0) {
      r = -r;
      axis += std::numbers::pi / 2;
    }
    const complexd xi = r * std::exp(complexd(0.0, 2 * axis));
    for (int k = 0; k + 2 < dim; ++k) {
      const double f = 0.5 * std::sqrt(double(k + 1)) * std::sqrt(double(k + 2));
      g(k, k + 2) = std::conj(xi) * f;
      g(k + 2, k) = -xi * f;
    }
  }
  return g.exp();
}

}  // namespace

FockDensity apply_gaussian_unitary_fock(const FockDensity& rho,
                                        std::span<const GaussianUnitary> seq,
                                        int cutoff) {
  if (seq.empty())
    throw std::invalid_argument("apply_gaussian_unitary_fock: empty unitary sequence");
  const int work = std::max(4 * (cutoff + 1), rho.cutoff() + 1);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(work, work);
  m.topLeftCorner(rho.matrix.rows(), rho.matrix.cols()) = rho.matrix;
  for (const auto& u : seq) {
    const Eigen::MatrixXcd uf = unitary_matrix_fock(u, work);
    m = uf * m * uf.adjoint();
  }
  FockDensity out;
  out.matrix = m.topLeftCorner(cutoff + 1, cutoff + 1);
  const double loss = rho.trace() - out.trace();
  if (loss > 1e-8)
    throw insufficient_cutoff_error(
        "apply_gaussian_unitary_fock: working cutoff too small", out.trace());
  return out;
}

FockDensity mixture_to_fock(std::span<const WeightedGaussian> components,
                            int cutoff, double tail_tol) {
  FockDensity rho;
  rho.matrix = Eigen::MatrixXcd::Zero(cutoff + 1, cutoff + 1);
  const double k = static_cast<double>(std::max<size_t>(components.size(), 1));
  for (const auto& c : components) {
    // Budget the tail tolerance by weight: a component contributing weight w
    // may lose up to tail_tol / (k * w) of its own norm while keeping the
    // mixture's total truncation deficit at or below tail_tol.
    const double w = std::max(c.weight, 0.0);
    const double tol_c =
        w > 0 ? std::min(0.9, std::max(tail_tol, tail_tol / (k * w))) : 0.9;
    const FockVector v = dss_fock(normal_form(c.state), cutoff, tol_c);
    rho.matrix.noalias() += c.weight * (v.amplitudes * v.amplitudes.adjoint());
  }
  return rho;
}

}  // namespace dsr
