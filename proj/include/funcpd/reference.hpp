#pragma once

// Brute-force reference implementations, kept deliberately naive and
// independent of the row-sum recursions: every U_{n,k} is a fresh double
// (or triple) loop straight from the definitions. O(n^3 d) and worse --
// test oracles and debug cross-checks only.

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "funcpd/core.hpp"
#include "funcpd/kernels.hpp"

namespace funcpd::reference {

// ||U_{n,k}|| for k = 1..n-1 by direct double summation.
inline std::vector<double> ustat_traj_norms(const FunctionalSample& sample,
                                            const KernelSpec& spec) {
  const std::size_t n = sample.size();
  const std::size_t d = sample.dim();
  std::vector<double> norms(n - 1);
  std::vector<double> acc(d), buf(d);
  for (std::size_t k = 1; k < n; ++k) {
    std::fill(acc.begin(), acc.end(), 0.0);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = k; j < n; ++j) {
        eval_kernel(spec, sample.row(i), sample.row(j), buf);
        for (std::size_t c = 0; c < d; ++c) acc[c] += buf[c];
      }
    norms[k - 1] = norm(acc, spec.weighting);
  }
  return norms;
}

inline double ustat_statistic(const FunctionalSample& sample,
                              const KernelSpec& spec) {
  const auto norms = ustat_traj_norms(sample, spec);
  double best = 0.0;
  for (double v : norms) best = std::max(best, v);
  const double n = static_cast<double>(sample.size());
  return best / (n * std::sqrt(n));
}

// max_k n^{-3/2} || sum_{i<=k} sum_{j>k} h(X_i,X_j)(eps_i + eps_j) || by
// direct triple loop.
inline double bootstrap_statistic(const FunctionalSample& sample,
                                  const KernelSpec& spec,
                                  std::span<const double> eps) {
  const std::size_t n = sample.size();
  const std::size_t d = sample.dim();
  std::vector<double> acc(d), buf(d);
  double best = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    std::fill(acc.begin(), acc.end(), 0.0);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = k; j < n; ++j) {
        eval_kernel(spec, sample.row(i), sample.row(j), buf);
        const double m = eps[i] + eps[j];
        for (std::size_t c = 0; c < d; ++c) acc[c] += buf[c] * m;
      }
    best = std::max(best, norm(acc, spec.weighting));
  }
  const double nn = static_cast<double>(n);
  return best / (nn * std::sqrt(nn));
}

}  // namespace funcpd::reference
