#pragma once

// The two-sample U-statistic process
//   U_{n,k} = sum_{i<=k} sum_{j>k} h(X_i, X_j),   k = 1..n-1,
// its scaled max statistic  max_k n^{-3/2} ||U_{n,k}||, and the
// change-point estimate (smallest maximizing k).
//
// Everything is computed from the kernel row sums R_i = sum_j h(X_i, X_j):
// antisymmetry gives U_{n,k+1} - U_{n,k} = R_{k+1}, so the whole
// trajectory costs O(n^2) kernel evaluations and O(n d) memory instead
// of a triple loop.

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "funcpd/core.hpp"
#include "funcpd/kernels.hpp"

namespace funcpd {

struct UStatProcess {
  CurveMatrix row_sums;            // R_i, one row per observation
  std::vector<double> traj_norms;  // ||U_{n,k}|| (unscaled), k = 1..n-1
  double statistic = 0.0;          // max_k n^{-3/2} ||U_{n,k}||
  double raw_max = 0.0;            // max_k ||U_{n,k}||, kept for diagnostics
  std::size_t argmax_k = 1;        // smallest maximizing k, 1-based
};

// Plug-in Hoeffding pieces: h1_hat(X_i) = (1/(n-1)) sum_{j != i} h(X_i, X_j).
// Feeds the bandwidth selector and the decomposition self-test.
struct HoeffdingPlugin {
  CurveMatrix h1_hat;
  std::vector<double> mean_h1;
};

inline CurveMatrix compute_row_sums(const FunctionalSample& sample,
                                    const KernelSpec& spec) {
  const std::size_t n = sample.size();
  const std::size_t d = sample.dim();
  CurveMatrix sums(n, d);
  std::vector<double> buf(d);
  for (std::size_t i = 0; i < n; ++i) {
    auto ri = sums.row(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      eval_kernel(spec, sample.row(i), sample.row(j), buf);
      auto rj = sums.row(j);
      for (std::size_t c = 0; c < d; ++c) {
        ri[c] += buf[c];
        rj[c] -= buf[c];  // h(X_j, X_i) = -h(X_i, X_j)
      }
    }
  }
  return sums;
}

// Trajectory from precomputed row sums (shared with the bootstrap, which
// reuses the same R_i).
inline UStatProcess ustat_process_from(CurveMatrix row_sums,
                                       GridWeighting weighting) {
  const std::size_t n = row_sums.rows();
  const std::size_t d = row_sums.cols();
  if (n < 2) throw std::invalid_argument("ustat_process: need n >= 2");
  UStatProcess out;
  out.traj_norms.resize(n - 1);
  std::vector<double> partial(d, 0.0);
  double best = -1.0;
  for (std::size_t k = 1; k < n; ++k) {
    auto rk = row_sums.row(k - 1);
    for (std::size_t c = 0; c < d; ++c) partial[c] += rk[c];
    const double tn = norm(partial, weighting);
    out.traj_norms[k - 1] = tn;
    if (tn > best) {  // strict: ties resolve to the smallest k
      best = tn;
      out.argmax_k = k;
    }
  }
  out.raw_max = best;
  out.statistic = best / (static_cast<double>(n) * std::sqrt(static_cast<double>(n)));
  out.row_sums = std::move(row_sums);
  return out;
}

inline UStatProcess ustat_process(const FunctionalSample& sample,
                                  const KernelSpec& spec) {
  return ustat_process_from(compute_row_sums(sample, spec), spec.weighting);
}

inline HoeffdingPlugin hoeffding_plugin(const FunctionalSample& sample,
                                        const KernelSpec& spec) {
  const std::size_t n = sample.size();
  const std::size_t d = sample.dim();
  HoeffdingPlugin out;
  out.h1_hat = compute_row_sums(sample, spec);
  const double scale = 1.0 / static_cast<double>(n - 1);
  for (double& v : out.h1_hat.values()) v *= scale;
  out.mean_h1.assign(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    auto hi = out.h1_hat.row(i);
    for (std::size_t c = 0; c < d; ++c) out.mean_h1[c] += hi[c];
  }
  for (double& v : out.mean_h1) v /= static_cast<double>(n);
  return out;
}

// Max over k of the gap between the scaled U-statistic trajectory for
// h(x,y) = x - y and the classical CUSUM form n^{-1/2} ||sum_{i<=k}(X_i - Xbar)||.
// The two agree algebraically; the return value is a pure roundoff check.
inline double cusum_identity_check(
    const FunctionalSample& sample,
    GridWeighting weighting = GridWeighting::euclidean) {
  const std::size_t n = sample.size();
  const std::size_t d = sample.dim();
  KernelSpec spec{KernelKind::cusum, 1.0, weighting};
  const UStatProcess proc = ustat_process(sample, spec);

  std::vector<double> mean(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    auto xi = sample.row(i);
    for (std::size_t c = 0; c < d; ++c) mean[c] += xi[c];
  }
  for (double& v : mean) v /= static_cast<double>(n);

  const double n32 = static_cast<double>(n) * std::sqrt(static_cast<double>(n));
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  std::vector<double> partial(d, 0.0);
  double worst = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    auto xk = sample.row(k - 1);
    for (std::size_t c = 0; c < d; ++c) partial[c] += xk[c] - mean[c];
    const double cusum_side = norm(partial, weighting) / sqrt_n;
    const double ustat_side = proc.traj_norms[k - 1] / n32;
    worst = std::max(worst, std::fabs(ustat_side - cusum_side));
  }
  return worst;
}

}  // namespace funcpd
