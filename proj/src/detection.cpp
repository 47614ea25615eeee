#include "dsr/detection.hpp"

#include <cmath>
#include <numeric>

namespace dsr {

void PnrModel::validate() const {
  if (resolution < 1) throw std::invalid_argument("PnrModel: resolution must be >= 1");
  if (!(eta > 0.0 && eta <= 1.0))
    throw std::invalid_argument("PnrModel: eta must be in (0, 1]");
  if (nu < 0.0) throw std::invalid_argument("PnrModel: nu must be >= 0");
}

double OutcomeDistribution::sum() const {
  return std::accumulate(probs.begin(), probs.end(), 0.0);
}

namespace {

std::vector<double> poisson_pmf(double mean, int count) {
  std::vector<double> p(count);
  if (count == 0) return p;
  p[0] = std::exp(-mean);
  for (int n = 1; n < count; ++n) p[n] = p[n - 1] * mean / n;
  return p;
}

OutcomeDistribution bin_with_overflow(const std::vector<double>& raw, int m) {
  OutcomeDistribution out;
  out.probs.assign(m + 1, 0.0);
  double cum = 0.0;
  for (int n = 0; n < m; ++n) {
    out.probs[n] = raw[n];
    cum += raw[n];
  }
  out.probs[m] = std::max(0.0, 1.0 - cum);
  return out;
}

}  // namespace

OutcomeDistribution outcome_probs_coherent(const PnrModel& det, double mu) {
  det.validate();
  if (mu < 0) throw std::invalid_argument("outcome_probs_coherent: mu must be >= 0");
  return bin_with_overflow(poisson_pmf(det.eta * mu + det.nu, det.resolution),
                           det.resolution);
}

std::vector<Eigen::VectorXd> povm_diagonals(const PnrModel& det, int cutoff) {
  det.validate();
  if (cutoff < det.resolution)
    throw dimension_error("povm_diagonals: cutoff must be >= detector resolution");
  const int dim = cutoff + 1;
  const int m = det.resolution;
  const std::vector<double> darks = poisson_pmf(det.nu, m);

  std::vector<Eigen::VectorXd> povm(m + 1, Eigen::VectorXd::Zero(dim));
  // binom(k, j) eta^j (1-eta)^(k-j), built row by row over k.
  Eigen::VectorXd residual = Eigen::VectorXd::Ones(dim);
  for (int n = 0; n < m; ++n) {
    for (int k = 0; k < dim; ++k) {
      double v = 0.0;
      for (int l = 0; l <= n; ++l) {
        const int j = n - l;  // photons surviving the loss
        if (j > k) continue;
        double binom = 1.0;
        for (int i = 0; i < j; ++i) binom *= double(k - i) / (i + 1);
        v += darks[l] * binom * std::pow(det.eta, j) * std::pow(1.0 - det.eta, k - j);
      }
      povm[n](k) = v;
    }
    residual -= povm[n];
  }
  povm[m] = residual.cwiseMax(0.0);
  return povm;
}

OutcomeDistribution outcome_probs_density(const PnrModel& det, const FockDensity& rho) {
  const auto povm = povm_diagonals(det, rho.cutoff());
  const Eigen::VectorXd diag = rho.matrix.diagonal().real();
  OutcomeDistribution out;
  out.probs.resize(det.resolution + 1);
  for (int n = 0; n <= det.resolution; ++n)
    out.probs[n] = std::max(0.0, povm[n].dot(diag));
  return out;
}

OutcomeDistribution outcome_probs_displaced_thermal(const PnrModel& det,
                                                    complexd d, double n_t) {
  det.validate();
  if (n_t < 0)
    throw std::invalid_argument("outcome_probs_displaced_thermal: n_t must be >= 0");
  const int m = det.resolution;
  const double d2 = det.eta * std::norm(d);
  const double nt = det.eta * n_t;

  std::vector<double> raw(m);
  if (nt < 1e-300) {
    raw = poisson_pmf(d2, m);
  } else {
    // Laguerre photon statistics of a displaced thermal state, with the
    // geometric factor folded into the recurrence to avoid overflow:
    //   p(n) = nt^n/(1+nt)^(n+1) exp(-d2/(1+nt)) L_n(-d2/(nt(1+nt)))
    const double x = -d2 / (nt * (1.0 + nt));
    const double c = nt / (1.0 + nt);
    const double pref = std::exp(-d2 / (1.0 + nt)) / (1.0 + nt);
    double lprev = 0.0, l = 1.0;  // l holds c^n L_n(x)
    for (int n = 0; n < m; ++n) {
      raw[n] = pref * l;
      const double lnext = (c * (2 * n + 1 - x) * l - n * c * c * lprev) / (n + 1);
      lprev = l;
      l = lnext;
    }
  }
  if (det.nu > 0) {
    const std::vector<double> darks = poisson_pmf(det.nu, m);
    std::vector<double> conv(m, 0.0);
    for (int n = 0; n < m; ++n)
      for (int j = 0; j <= n; ++j) conv[n] += darks[j] * raw[n - j];
    raw = conv;
  }
  return bin_with_overflow(raw, m);
}

}  // namespace dsr
