#pragma once

// Dependent Gaussian multipliers: quadratic-spectral Toeplitz covariance
// B, its symmetric PSD square root A (eigendecomposition, negative
// eigenvalues clamped to zero), correlated draws eps = A eta, and the
// data-adaptive bandwidth selection.

#include <Eigen/Dense>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "funcpd/core.hpp"
#include "funcpd/rng.hpp"
#include "funcpd/ustat.hpp"

namespace funcpd {

// Quadratic spectral weight at lag k with bandwidth q. Even in k, equals
// 1 at k = 0 (analytic limit), integrable tails.
inline double qs_weight(double lag, double bandwidth) {
  if (!(bandwidth > 0.0))
    throw std::invalid_argument("qs_weight: bandwidth must be positive, got " +
                                std::to_string(bandwidth));
  const double x = 6.0 * std::numbers::pi * (lag / bandwidth) / 5.0;
  // w = 25/(12 pi^2 (lag/q)^2) (sin(x)/x - cos(x)) with x = 6 pi lag / (5 q),
  // which simplifies to 3 (sin x - x cos x) / x^3.
  if (std::fabs(x) < 1e-3) {
    const double x2 = x * x;  // series: 1 - x^2/10 + x^4/280 - ...
    return 1.0 - x2 / 10.0 + x2 * x2 / 280.0;
  }
  return 3.0 * (std::sin(x) - x * std::cos(x)) / (x * x * x);
}

// How the Toeplitz band index maps to the weight's lag argument.
// standard:     B_{ij} = w(|i-j|, q)          -- Cov(eps_i, eps_j) = w(|i-j|/q)
// paper_offset: B_{ij} = w(|i-j| - 1, q) off the diagonal, so the first
//               off-diagonal is exactly 1. Kept so legacy results using
//               that convention replicate bit for bit; note the resulting
//               matrix is indefinite, so the clamped factor satisfies
//               A A^t = B only up to the clamped mass.
enum class LagConvention { standard, paper_offset };

inline const char* to_string(LagConvention lc) {
  return lc == LagConvention::standard ? "standard" : "paper_offset";
}

struct MultiplierConfig {
  double q = 1.0;
  std::size_t n = 0;
  LagConvention lag_convention = LagConvention::standard;
  std::uint64_t seed = 0;

  void validate() const {
    if (!(q >= 1.0))
      throw std::invalid_argument("MultiplierConfig: bandwidth q must be >= 1");
    if (n < 2)
      throw std::invalid_argument("MultiplierConfig: need n >= 2");
  }
};

struct CovarianceFactor {
  Eigen::MatrixXd cov;     // B, symmetric Toeplitz, unit diagonal
  Eigen::MatrixXd root;    // A with A A^t = B (up to clamping)
  int clamped_eigs = 0;    // eigenvalues < 0 clamped to 0
};

inline Eigen::MatrixXd build_covariance(std::size_t n, double q,
                                        LagConvention lc) {
  if (n < 2) throw std::invalid_argument("build_covariance: need n >= 2");
  std::vector<double> v(n);
  v[0] = 1.0;
  for (std::size_t lag = 1; lag < n; ++lag)
    v[lag] = lc == LagConvention::standard
                 ? qs_weight(static_cast<double>(lag), q)
                 : qs_weight(static_cast<double>(lag) - 1.0, q);
  Eigen::MatrixXd b(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      b(i, j) = v[i > j ? i - j : j - i];
  return b;
}

inline CovarianceFactor sqrt_psd(const Eigen::MatrixXd& b) {
  if (b.rows() != b.cols())
    throw std::invalid_argument("sqrt_psd: matrix must be square");
  if ((b - b.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("sqrt_psd: matrix must be symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("sqrt_psd: eigendecomposition failed");
  Eigen::VectorXd lambda = es.eigenvalues();
  int clamped = 0;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (lambda[i] < 0.0) {
      lambda[i] = 0.0;
      ++clamped;
    }
  }
  CovarianceFactor out;
  out.cov = b;
  out.root = es.eigenvectors() * lambda.cwiseSqrt().asDiagonal() *
             es.eigenvectors().transpose();
  out.clamped_eigs = clamped;
  return out;
}

inline CovarianceFactor make_multiplier_factor(const MultiplierConfig& cfg) {
  cfg.validate();
  return sqrt_psd(build_covariance(cfg.n, cfg.q, cfg.lag_convention));
}

// eps = A eta with eta i.i.d. N(0,1) from the supplied engine. The engine
// is the caller's per-replicate stream; drawing consumes exactly n normals.
inline std::vector<double> draw_multipliers(const CovarianceFactor& factor,
                                            std::mt19937_64& rng) {
  const Eigen::Index n = factor.root.rows();
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd eta(n);
  for (Eigen::Index i = 0; i < n; ++i) eta[i] = gauss(rng);
  Eigen::VectorXd eps = factor.root * eta;
  return {eps.data(), eps.data() + n};
}

struct BandwidthReport {
  int q_adpt = 1;          // selected bandwidth, integer in [1, n-1]
  double q0 = 0.0;         // pilot bandwidth n^{1/5}
  double cp0_sum = 0.0;    // sum of all CP0 entries
  double cp1_sum = 0.0;    // sum of all CP1 entries
  double cp0_diag_sq = 0.0;  // sum of squared CP0 diagonal entries
  bool clamped = false;    // ratio was non-positive or undefined
};

// Data-adaptive bandwidth:
//   X~_i   = (1/(n-1)) sum_{j != i} h(X_i, X_j)
//   q0     = n^{1/5}
//   V_k    = (1/n) sum_{i=1}^{n-(k-1)} X~_i (X~_{i+k-1})^t,  k = 1..ceil(q0)
//   CP0    = V_1 + 2 sum_{k=1}^{ceil(q0)-1} w(k, q0) V_{k+1}
//   CP1    =       2 sum_{k=1}^{ceil(q0)-1} k w(k, q0) V_{k+1}
//   q_adpt = ceil((3 n S1 / (S0 + Q0))^{1/5})  clipped to [1, n-1],
// with S1, S0 the entry sums of CP1, CP0 and Q0 the squared-diagonal sum
// of CP0. A non-positive or undefined ratio is clamped to q_adpt = 1.
inline BandwidthReport adaptive_bandwidth(const FunctionalSample& sample,
                                          const KernelSpec& spec) {
  const std::size_t n = sample.size();
  const std::size_t d = sample.dim();
  const HoeffdingPlugin plugin = hoeffding_plugin(sample, spec);

  BandwidthReport rep;
  rep.q0 = std::pow(static_cast<double>(n), 0.2);
  const std::size_t max_k =
      std::min<std::size_t>(static_cast<std::size_t>(std::ceil(rep.q0)), n);

  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                 Eigen::RowMajor>>
      xt(plugin.h1_hat.values().data(), static_cast<Eigen::Index>(n),
         static_cast<Eigen::Index>(d));

  Eigen::MatrixXd cp0 = Eigen::MatrixXd::Zero(d, d);
  Eigen::MatrixXd cp1 = Eigen::MatrixXd::Zero(d, d);
  for (std::size_t k = 1; k <= max_k; ++k) {
    const Eigen::Index rows = static_cast<Eigen::Index>(n - (k - 1));
    Eigen::MatrixXd vk = xt.topRows(rows).transpose() *
                         xt.middleRows(static_cast<Eigen::Index>(k - 1), rows) /
                         static_cast<double>(n);
    if (k == 1) {
      cp0 += vk;
    } else {
      const double w = qs_weight(static_cast<double>(k - 1), rep.q0);
      cp0 += 2.0 * w * vk;
      cp1 += 2.0 * static_cast<double>(k - 1) * w * vk;
    }
  }
  rep.cp0_sum = cp0.sum();
  rep.cp1_sum = cp1.sum();
  rep.cp0_diag_sq = cp0.diagonal().array().square().sum();

  const double ratio = 3.0 * static_cast<double>(n) * rep.cp1_sum /
                       (rep.cp0_sum + rep.cp0_diag_sq);
  if (!std::isfinite(ratio) || !(ratio > 0.0)) {
    rep.q_adpt = 1;
    rep.clamped = true;
    return rep;
  }
  const double q = std::ceil(std::pow(ratio, 0.2));
  rep.q_adpt = static_cast<int>(
      std::min<double>(static_cast<double>(n - 1), std::max(1.0, q)));
  return rep;
}

}  // namespace funcpd
