#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "dsr/errors.hpp"
#include "dsr/gaussian_core.hpp"

namespace dsr {

inline constexpr double kDefaultTailTol = 1e-10;

/// Pure state in the truncated photon-number basis, indices 0..cutoff.
struct FockVector {
  Eigen::VectorXcd amplitudes;

  int cutoff() const { return static_cast<int>(amplitudes.size()) - 1; }
  double norm_sq() const { return amplitudes.squaredNorm(); }
};

/// Hermitian density matrix on the truncated photon-number basis.
struct FockDensity {
  Eigen::MatrixXcd matrix;

  int cutoff() const { return static_cast<int>(matrix.rows()) - 1; }
  double trace() const { return matrix.trace().real(); }
};

/// Smallest cutoff whose Poisson(mean_photon) tail mass is below tail_tol,
/// doubled as a safety factor and clamped to >= 16.
int auto_cutoff(double mean_photon, double tail_tol = kDefaultTailTol);

/// Number-basis amplitudes of D(beta) S(xi) |0> via the three-term
/// recurrence c_{n+1} = (B c_n - e^{i phi} sinh(r) sqrt(n) c_{n-1}) /
/// (cosh(r) sqrt(n+1)) with B = beta cosh r + conj(beta) e^{i phi} sinh r,
/// xi = r e^{i phi}. Throws insufficient_cutoff_error when the captured
/// norm falls short of 1 - tail_tol.
FockVector dss_fock(const PureNormalForm& nf, int cutoff,
                    double tail_tol = kDefaultTailTol);

FockDensity density_from_pure(const FockVector& v);

/// Diagonal of the density as a probability vector; tiny negative entries
/// (>= -1e-12) are clamped to zero.
Eigen::VectorXd photon_distribution(const FockDensity& rho);

/// Eigenvalues of a Hermitian matrix by cyclic Jacobi with a deterministic
/// sweep order, ascending. Throws invalid_state_error on a matrix that is
/// not Hermitian within 1e-10.
Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& h);

/// Sum of absolute eigenvalues.
double trace_norm(const Eigen::MatrixXcd& h);

/// Minimum error probability for discriminating rho0 / rho1 with priors
/// p0 / p1: (1 - ||p0 rho0 - p1 rho1||_1) / 2, clamped to [0, 1/2].
double helstrom_mixed(const FockDensity& rho0, const FockDensity& rho1,
                      double p0, double p1);

/// Exact matrix elements <m|D(lambda)|n> on a truncated basis.
Eigen::MatrixXcd displacement_matrix(complexd lambda, int dim);

/// Conjugates rho by the (left-to-right applied) unitary sequence using
/// numerically exponentiated truncated generators at an enlarged working
/// cutoff (>= 4x the output cutoff), then truncates. Throws
/// insufficient_cutoff_error when more than 1e-8 of the trace is lost.
FockDensity apply_gaussian_unitary_fock(const FockDensity& rho,
                                        std::span<const GaussianUnitary> seq,
                                        int cutoff);

/// Convex mixture of pure Gaussian states, each converted exactly through
/// normal_form + dss_fock.
struct WeightedGaussian {
  double weight;
  GaussianState state;
};

FockDensity mixture_to_fock(std::span<const WeightedGaussian> components,
                            int cutoff, double tail_tol = kDefaultTailTol);

}  // namespace dsr
