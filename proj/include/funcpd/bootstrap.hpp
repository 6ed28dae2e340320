#pragma once

// Dependent wild bootstrap for the non-degenerate two-sample U-statistic:
//   U*_{n,k} = sum_{i<=k} sum_{j>k} h(X_i, X_j)(eps_i + eps_j)
// with correlated Gaussian multipliers eps. Per replicate the trajectory
// follows from the recursion
//   U*_{n,k+1} - U*_{n,k} = eps_{k+1} R_{k+1} + B_{k+1},
// where R_i is the kernel row sum and B_i = sum_j h(X_i, X_j) eps_j
// (self-terms vanish by antisymmetry). Replicates draw from independent
// seed-derived streams and are reduced in replicate order, so reports are
// identical for any worker count.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "funcpd/core.hpp"
#include "funcpd/kernels.hpp"
#include "funcpd/multiplier.hpp"
#include "funcpd/parallel.hpp"
#include "funcpd/rng.hpp"
#include "funcpd/ustat.hpp"

namespace funcpd {

enum class PValueRule { plain, add_one };

inline const char* to_string(PValueRule r) {
  return r == PValueRule::plain ? "plain" : "add_one";
}

struct BandwidthChoice {
  bool automatic = true;
  double value = 1.0;  // fixed bandwidth when !automatic; must be >= 1
};

struct BootstrapConfig {
  std::size_t replicates = 1000;  // m
  double alpha = 0.05;
  BandwidthChoice bandwidth{};
  LagConvention lag_convention = LagConvention::standard;
  PValueRule p_value_rule = PValueRule::plain;
  std::uint64_t seed = 0;
  int threads = 1;
  // Pairwise kernel values are cached only when n(n-1)/2 * d doubles fit;
  // otherwise every pass recomputes them in streaming order.
  std::size_t cache_budget_bytes = 256ull << 20;

  void validate() const {
    if (replicates < 1)
      throw std::invalid_argument("BootstrapConfig: need m >= 1 replicates");
    if (!(alpha > 0.0 && alpha < 1.0))
      throw std::invalid_argument("BootstrapConfig: alpha must be in (0,1)");
    if (!bandwidth.automatic && !(bandwidth.value >= 1.0))
      throw std::invalid_argument(
          "BootstrapConfig: fixed bandwidth must be >= 1");
  }
};

struct TestReport {
  double statistic = 0.0;   // n^{-3/2}-scaled max of ||U_{n,k}||
  double raw_max = 0.0;     // unscaled max, diagnostic
  std::size_t k_hat = 1;    // smallest maximizing k (1-based)
  std::vector<double> replicates;  // T*_1..T*_m in replicate order
  double critical_value = 0.0;     // empirical upper-alpha order statistic
  double p_value = 1.0;
  bool reject = false;
  double alpha = 0.05;
  double q_used = 1.0;
  bool bandwidth_auto = true;
  BandwidthReport bandwidth;  // populated when bandwidth_auto
  int clamped_eigs = 0;
  KernelSpec kernel;
  LagConvention lag_convention = LagConvention::standard;
  PValueRule p_value_rule = PValueRule::plain;
  std::size_t n = 0, d = 0;
};

namespace detail {

// Serves h(X_i, X_j) for i < j, either from a precomputed table or by
// recomputing into the caller's scratch. Cached rows keep pairs of row i
// contiguous, in increasing j.
class PairTable {
 public:
  PairTable(const FunctionalSample& sample, const KernelSpec& spec,
            std::size_t budget_bytes)
      : sample_(sample), spec_(spec), n_(sample.size()), d_(sample.dim()) {
    const std::size_t pairs = n_ * (n_ - 1) / 2;
    if (pairs * d_ * sizeof(double) <= budget_bytes) {
      values_.resize(pairs * d_);
      std::size_t off = 0;
      for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = i + 1; j < n_; ++j, off += d_)
          eval_kernel(spec_, sample_.row(i), sample_.row(j),
                      std::span<double>(values_.data() + off, d_));
      cached_ = true;
    }
  }

  bool cached() const { return cached_; }

  // pre: i < j; scratch has size d (used on the streaming path only).
  std::span<const double> at(std::size_t i, std::size_t j,
                             std::span<double> scratch) const {
    if (cached_) {
      const std::size_t off =
          (i * (2 * n_ - i - 1) / 2 + (j - i - 1)) * d_;
      return {values_.data() + off, d_};
    }
    eval_kernel(spec_, sample_.row(i), sample_.row(j), scratch);
    return scratch;
  }

 private:
  const FunctionalSample& sample_;
  KernelSpec spec_;
  std::size_t n_, d_;
  std::vector<double> values_;
  bool cached_ = false;
};

inline double bootstrap_statistic_impl(const CurveMatrix& row_sums,
                                       const PairTable& table,
                                       GridWeighting weighting,
                                       std::span<const double> eps,
                                       CurveMatrix& b, std::vector<double>& u,
                                       std::vector<double>& scratch) {
  const std::size_t n = row_sums.rows();
  const std::size_t d = row_sums.cols();
  std::fill(b.values().begin(), b.values().end(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    auto bi = b.row(i);
    const double ei = eps[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto h = table.at(i, j, scratch);
      auto bj = b.row(j);
      const double ej = eps[j];
      for (std::size_t c = 0; c < d; ++c) {
        bi[c] += ej * h[c];
        bj[c] -= ei * h[c];
      }
    }
  }
  std::fill(u.begin(), u.end(), 0.0);
  double best = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    auto rk = row_sums.row(k - 1);
    auto bk = b.row(k - 1);
    const double ek = eps[k - 1];
    for (std::size_t c = 0; c < d; ++c) u[c] += ek * rk[c] + bk[c];
    best = std::max(best, norm(u, weighting));
  }
  const double nn = static_cast<double>(n);
  return best / (nn * std::sqrt(nn));
}

// Empirical upper-alpha critical value: order statistic at 1-based index
// ceil((1 - alpha) m) of the sorted replicates.
inline double critical_value(std::vector<double> sorted_replicates,
                             double alpha) {
  const std::size_t m = sorted_replicates.size();
  std::size_t idx = static_cast<std::size_t>(
      std::ceil((1.0 - alpha) * static_cast<double>(m)));
  idx = std::min(std::max<std::size_t>(idx, 1), m);
  return sorted_replicates[idx - 1];
}

inline double p_value(const std::vector<double>& replicates, double statistic,
                      PValueRule rule) {
  std::size_t count = 0;
  for (double t : replicates)
    if (t >= statistic) ++count;
  const double m = static_cast<double>(replicates.size());
  return rule == PValueRule::plain
             ? static_cast<double>(count) / m
             : (1.0 + static_cast<double>(count)) / (m + 1.0);
}

}  // namespace detail

// Single-replicate bootstrap statistic for an explicit multiplier vector.
inline double bootstrap_statistic(const FunctionalSample& sample,
                                  const KernelSpec& spec,
                                  std::span<const double> eps,
                                  std::size_t cache_budget_bytes = 256ull
                                                                   << 20) {
  if (eps.size() != sample.size())
    throw std::invalid_argument(
        "bootstrap_statistic: multiplier length " + std::to_string(eps.size()) +
        " does not match sample size " + std::to_string(sample.size()));
  const CurveMatrix row_sums = compute_row_sums(sample, spec);
  const detail::PairTable table(sample, spec, cache_budget_bytes);
  CurveMatrix b(sample.size(), sample.dim());
  std::vector<double> u(sample.dim()), scratch(sample.dim());
  return detail::bootstrap_statistic_impl(row_sums, table, spec.weighting, eps,
                                          b, u, scratch);
}

inline TestReport run_test(const FunctionalSample& sample,
                           const KernelSpec& spec,
                           const BootstrapConfig& config) {
  config.validate();
  spec.validate();
  const std::size_t n = sample.size();
  const std::size_t d = sample.dim();

  TestReport rep;
  rep.kernel = spec;
  rep.alpha = config.alpha;
  rep.lag_convention = config.lag_convention;
  rep.p_value_rule = config.p_value_rule;
  rep.n = n;
  rep.d = d;

  rep.bandwidth_auto = config.bandwidth.automatic;
  if (config.bandwidth.automatic) {
    rep.bandwidth = adaptive_bandwidth(sample, spec);
    rep.q_used = static_cast<double>(rep.bandwidth.q_adpt);
  } else {
    rep.q_used = config.bandwidth.value;
  }

  MultiplierConfig mcfg{rep.q_used, n, config.lag_convention, config.seed};
  const CovarianceFactor factor = make_multiplier_factor(mcfg);
  rep.clamped_eigs = factor.clamped_eigs;

  CurveMatrix row_sums = compute_row_sums(sample, spec);
  const detail::PairTable table(sample, spec, config.cache_budget_bytes);

  const std::size_t m = config.replicates;
  rep.replicates.resize(m);
  parallel_chunks(0, m, config.threads, [&](std::size_t lo, std::size_t hi) {
    CurveMatrix b(n, d);
    std::vector<double> u(d), scratch(d);
    for (std::size_t t = lo; t < hi; ++t) {
      auto rng = make_engine(config.seed, StreamPurpose::multiplier_draw, t);
      const std::vector<double> eps = draw_multipliers(factor, rng);
      rep.replicates[t] = detail::bootstrap_statistic_impl(
          row_sums, table, spec.weighting, eps, b, u, scratch);
    }
  });

  const UStatProcess proc =
      ustat_process_from(std::move(row_sums), spec.weighting);
  rep.statistic = proc.statistic;
  rep.raw_max = proc.raw_max;
  rep.k_hat = proc.argmax_k;

  std::vector<double> sorted = rep.replicates;
  std::sort(sorted.begin(), sorted.end());
  rep.critical_value = detail::critical_value(std::move(sorted), config.alpha);
  rep.p_value = detail::p_value(rep.replicates, rep.statistic,
                                config.p_value_rule);
  rep.reject = rep.statistic > rep.critical_value;
  return rep;
}

}  // namespace funcpd
