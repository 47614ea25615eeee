#include "dsr/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

namespace dsr {

GaussHermiteRule gauss_hermite(int order) {
  if (order < 1) throw std::invalid_argument("gauss_hermite: order must be >= 1");
  // Jacobi matrix of the (physicists') Hermite recurrence: off-diagonal
  // entries sqrt(k/2), zero diagonal.
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(order, order);
  for (int k = 1; k < order; ++k) {
    const double b = std::sqrt(k / 2.0);
    J(k, k - 1) = b;
    J(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  GaussHermiteRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const double mu0 = std::sqrt(std::numbers::pi);
  for (int k = 0; k < order; ++k) {
    rule.nodes[k] = es.eigenvalues()(k);
    const double v0 = es.eigenvectors()(0, k);
    rule.weights[k] = mu0 * v0 * v0;
  }
  // Symmetrize: the rule is exactly symmetric; enforce it so downstream
  // sums do not depend on eigensolver rounding.
  for (int k = 0; k < order / 2; ++k) {
    const int m = order - 1 - k;
    const double n = 0.5 * (rule.nodes[m] - rule.nodes[k]);
    rule.nodes[k] = -n;
    rule.nodes[m] = n;
    const double w = 0.5 * (rule.weights[k] + rule.weights[m]);
    rule.weights[k] = w;
    rule.weights[m] = w;
  }
  if (order % 2 == 1) rule.nodes[order / 2] = 0.0;
  return rule;
}

}  // namespace dsr
