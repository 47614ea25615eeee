#pragma once

#include <vector>

namespace dsr {

/// Nodes and weights of an N-point Gauss-Hermite rule:
///   integral f(t) exp(-t^2) dt  ~=  sum_k w[k] f(t[k])
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Computed via Golub-Welsch on the Hermite Jacobi matrix. Deterministic
/// for a given order; nodes are returned in ascending order.
GaussHermiteRule gauss_hermite(int order);

}  // namespace dsr
