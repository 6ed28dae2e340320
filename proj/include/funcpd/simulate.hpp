#pragma once

// Synthetic functional time series: a functional AR(1) process whose
// innovations are Brownian motions discretized on a d-point grid, plus
// the mean-shift / outlier scenarios used in the size-power studies.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "funcpd/bootstrap.hpp"
#include "funcpd/core.hpp"
#include "funcpd/parallel.hpp"
#include "funcpd/rng.hpp"

namespace funcpd {

enum class Innovation { gaussian, cauchy };

inline const char* to_string(Innovation in) {
  return in == Innovation::gaussian ? "gaussian" : "cauchy";
}

struct SimConfig {
  std::size_t n = 200;
  std::size_t d = 100;
  double ar_a = 1.0;       // AR parameter a
  int burn_in = 100;       // first burn_in + 1 draws are discarded
  Innovation innovation = Innovation::gaussian;
  std::uint64_t seed = 0;

  void validate() const {
    if (n < 2) throw std::invalid_argument("SimConfig: need n >= 2");
    if (d < 1) throw std::invalid_argument("SimConfig: need d >= 1");
    if (burn_in < 0) throw std::invalid_argument("SimConfig: burn_in >= 0");
  }
};

// AR operator entry Phi_{ij} = min(i,j)/d^2 (1-based i, j).
inline double ar_operator_entry(std::size_t i, std::size_t j, std::size_t d) {
  return static_cast<double>(std::min(i, j)) /
         (static_cast<double>(d) * static_cast<double>(d));
}

// X_t = a Phi X_{t-1} + W_t with Brownian-motion innovations
// W_t = (xi_1, xi_1 + xi_2, ..., sum xi_i)/sqrt(d); the pre-sample value
// X_{-burn_in} is such an innovation itself. Returns X_1..X_n.
inline FunctionalSample far1(const SimConfig& cfg) {
  cfg.validate();
  const std::size_t n = cfg.n;
  const std::size_t d = cfg.d;
  auto rng = make_engine(cfg.seed, StreamPurpose::sim_innovation, 0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::cauchy_distribution<double> cauchy(0.0, 1.0);
  const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(d));

  auto draw_innovation = [&](std::vector<double>& w) {
    double cum = 0.0;
    for (std::size_t c = 0; c < d; ++c) {
      cum += cfg.innovation == Innovation::gaussian ? gauss(rng) : cauchy(rng);
      w[c] = cum * inv_sqrt_d;
    }
  };

  std::vector<double> x(d), w(d), phix(d), prefix(d);
  draw_innovation(x);  // X_{-burn_in}

  CurveMatrix out(n, d);
  const std::size_t steps = static_cast<std::size_t>(cfg.burn_in) + n;
  for (std::size_t s = 1; s <= steps; ++s) {
    // (Phi x)_i = (1/d^2)(sum_{j<=i} j x_j + i sum_{j>i} x_j) via prefix sums
    double run = 0.0;
    for (std::size_t c = 0; c < d; ++c) {
      run += static_cast<double>(c + 1) * x[c];
      prefix[c] = run;
    }
    double tail = 0.0;
    for (std::size_t c = d; c-- > 0;) {
      phix[c] = (prefix[c] + static_cast<double>(c + 1) * tail) /
                (static_cast<double>(d) * static_cast<double>(d));
      tail += x[c];
    }
    draw_innovation(w);
    for (std::size_t c = 0; c < d; ++c) x[c] = cfg.ar_a * phix[c] + w[c];
    if (s > static_cast<std::size_t>(cfg.burn_in)) {
      auto row = out.row(s - cfg.burn_in - 1);
      std::copy(x.begin(), x.end(), row.begin());
    }
  }
  return FunctionalSample(std::move(out));
}

enum class ScenarioId {
  null,               // fAR(1) as-is
  s1_uniform_jump,    // +0.3 on every coordinate from n/2 on
  s2_sinus_jump,      // + (1/(2 sqrt 2)) sin(pi D/d) from n/2 on
  s3_jump_with_outliers,  // s1 plus 10x outliers at 0.2n..0.8n
  s4_heavy_jump,      // Cauchy innovations, +5 jump at n/2
  s5_early_jump,      // +0.3 from gamma*n on
  s6_large_d,         // s1 with n=150, d=350
  null_outliers,      // no jump, 10x outliers at 0.2n..0.8n
  null_heavy,         // no jump, Cauchy innovations
};

struct ScenarioSpec {
  ScenarioId id = ScenarioId::null;
  double gamma = 0.3;        // change fraction, s5 only
  std::size_t s6_n = 150;    // expected shape for s6
  std::size_t s6_d = 350;

  void validate() const {
    if (id == ScenarioId::s5_early_jump && !(gamma > 0.0 && gamma < 1.0))
      throw std::invalid_argument("ScenarioSpec: gamma must be in (0,1)");
  }
};

inline const char* to_string(ScenarioId id) {
  switch (id) {
    case ScenarioId::null: return "null";
    case ScenarioId::s1_uniform_jump: return "s1";
    case ScenarioId::s2_sinus_jump: return "s2";
    case ScenarioId::s3_jump_with_outliers: return "s3";
    case ScenarioId::s4_heavy_jump: return "s4";
    case ScenarioId::s5_early_jump: return "s5";
    case ScenarioId::s6_large_d: return "s6";
    case ScenarioId::null_outliers: return "null_outliers";
    case ScenarioId::null_heavy: return "null_heavy";
  }
  return "?";
}

inline ScenarioId scenario_from_string(const std::string& s) {
  if (s == "null") return ScenarioId::null;
  if (s == "s1") return ScenarioId::s1_uniform_jump;
  if (s == "s2") return ScenarioId::s2_sinus_jump;
  if (s == "s3") return ScenarioId::s3_jump_with_outliers;
  if (s == "s4") return ScenarioId::s4_heavy_jump;
  if (s == "s5") return ScenarioId::s5_early_jump;
  if (s == "s6") return ScenarioId::s6_large_d;
  if (s == "null_outliers") return ScenarioId::null_outliers;
  if (s == "null_heavy") return ScenarioId::null_heavy;
  throw std::invalid_argument(
      "unknown scenario '" + s +
      "' (valid: null, s1, s2, s3, s4, s5, s6, null_outliers, null_heavy)");
}

// Shape/innovation requirements a scenario imposes on the generator:
// s4 and null_heavy switch to Cauchy innovations; s6 uses its own (n, d).
inline SimConfig scenario_sim_config(const ScenarioSpec& scenario,
                                     SimConfig base) {
  if (scenario.id == ScenarioId::s4_heavy_jump ||
      scenario.id == ScenarioId::null_heavy)
    base.innovation = Innovation::cauchy;
  if (scenario.id == ScenarioId::s6_large_d) {
    base.n = scenario.s6_n;
    base.d = scenario.s6_d;
  }
  return base;
}

namespace detail {

// 1-based outlier positions round(0.2n), round(0.4n), round(0.6n), round(0.8n).
inline std::set<std::size_t> outlier_rows(std::size_t n) {
  std::set<std::size_t> rows;
  for (double f : {0.2, 0.4, 0.6, 0.8}) {
    auto r = static_cast<std::size_t>(
        std::max<long>(1, std::lround(f * static_cast<double>(n))));
    rows.insert(std::min(r, n));
  }
  return rows;
}

}  // namespace detail

// Applies the scenario's mean shift and/or outlier scaling. Rows are
// 1-based; jumps start at ceil(n/2) (or max(1, round(gamma n)) for s5).
inline FunctionalSample apply_scenario(const FunctionalSample& sample,
                                       const ScenarioSpec& scenario) {
  scenario.validate();
  const std::size_t n = sample.size();
  const std::size_t d = sample.dim();
  if (scenario.id == ScenarioId::s6_large_d &&
      (n != scenario.s6_n || d != scenario.s6_d))
    throw std::invalid_argument(
        "scenario s6 expects n=" + std::to_string(scenario.s6_n) +
        ", d=" + std::to_string(scenario.s6_d) + "; sample has n=" +
        std::to_string(n) + ", d=" + std::to_string(d));

  CurveMatrix out(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    auto src = sample.row(i);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }

  const bool jump = scenario.id == ScenarioId::s1_uniform_jump ||
                    scenario.id == ScenarioId::s2_sinus_jump ||
                    scenario.id == ScenarioId::s3_jump_with_outliers ||
                    scenario.id == ScenarioId::s4_heavy_jump ||
                    scenario.id == ScenarioId::s5_early_jump ||
                    scenario.id == ScenarioId::s6_large_d;
  const bool outliers = scenario.id == ScenarioId::s3_jump_with_outliers ||
                        scenario.id == ScenarioId::null_outliers;

  std::size_t jump_start = (n + 1) / 2;  // ceil(n/2), 1-based
  if (scenario.id == ScenarioId::s5_early_jump)
    jump_start = static_cast<std::size_t>(std::max<long>(
        1, std::lround(scenario.gamma * static_cast<double>(n))));

  std::vector<double> shift(d, 0.0);
  if (jump) {
    switch (scenario.id) {
      case ScenarioId::s2_sinus_jump:
        for (std::size_t c = 0; c < d; ++c)
          shift[c] = std::sin(std::numbers::pi * static_cast<double>(c + 1) /
                              static_cast<double>(d)) /
                     (2.0 * std::numbers::sqrt2);
        break;
      case ScenarioId::s4_heavy_jump:
        shift.assign(d, 5.0);
        break;
      default:
        shift.assign(d, 0.3);
    }
  }

  const auto outlier_set =
      outliers ? detail::outlier_rows(n) : std::set<std::size_t>{};
  for (std::size_t i = 1; i <= n; ++i) {
    auto row = out.row(i - 1);
    if (outliers && outlier_set.count(i))
      for (double& v : row) v *= 10.0;
    if (jump && i >= jump_start)
      for (std::size_t c = 0; c < d; ++c) row[c] += shift[c];
  }
  return FunctionalSample(std::move(out));
}

struct MonteCarloStudy {
  ScenarioSpec scenario{};
  SimConfig sim{};
  BootstrapConfig boot{};
  std::size_t studies = 100;  // S
  std::vector<KernelSpec> kernels{
      {KernelKind::cusum, 1.0, GridWeighting::euclidean},
      {KernelKind::spatial_sign, 1.0, GridWeighting::euclidean}};
  std::vector<double> alphas{0.1, 0.05, 0.025, 0.01};
  int threads = 1;

  void validate() const {
    if (studies < 1) throw std::invalid_argument("MonteCarloStudy: S >= 1");
    if (kernels.empty() || alphas.empty())
      throw std::invalid_argument("MonteCarloStudy: kernels/alphas empty");
  }
};

struct RejectionRow {
  std::string scenario;
  std::string kernel;
  double alpha = 0.0;
  double rate = 0.0;
  double mc_stderr = 0.0;
};

// One row per study x kernel: the statistic, its p-value, and the
// rejection flag at every alpha (plot-ready long format).
struct StudyOutcome {
  std::size_t study = 0;  // 1-based
  std::string kernel;
  double statistic = 0.0;
  double p_value = 0.0;
  std::vector<bool> reject_at;  // parallel to MonteCarloStudy::alphas
};

struct RejectionTable {
  std::vector<RejectionRow> rows;
  std::vector<StudyOutcome> outcomes;  // study-major, then kernel order
  std::vector<double> alphas;
};

// Runs S independent simulate -> test pipelines. Each study draws one
// sample and evaluates every kernel on it (the tests are compared on the
// same data); each (study, kernel) bootstrap uses its own derived seed.
inline RejectionTable monte_carlo(const MonteCarloStudy& study) {
  study.validate();
  study.boot.validate();
  const SimConfig sim_cfg = scenario_sim_config(study.scenario, study.sim);
  sim_cfg.validate();
  const std::size_t s_count = study.studies;
  const std::size_t k_count = study.kernels.size();

  RejectionTable table;
  table.alphas = study.alphas;
  table.outcomes.resize(s_count * k_count);

  parallel_chunks(0, s_count, study.threads, [&](std::size_t lo,
                                                  std::size_t hi) {
    for (std::size_t s = lo; s < hi; ++s) {
      SimConfig cfg = sim_cfg;
      cfg.seed = derive_seed(study.sim.seed, StreamPurpose::mc_study_sim, s);
      const FunctionalSample raw = far1(cfg);
      const FunctionalSample data = apply_scenario(raw, study.scenario);
      for (std::size_t ki = 0; ki < k_count; ++ki) {
        BootstrapConfig boot = study.boot;
        boot.threads = 1;  // studies are the parallel axis
        boot.seed = derive_seed(study.boot.seed, StreamPurpose::mc_study_boot,
                                s * k_count + ki);
        const TestReport rep = run_test(data, study.kernels[ki], boot);
        StudyOutcome& oc = table.outcomes[s * k_count + ki];
        oc.study = s + 1;
        oc.kernel = to_string(study.kernels[ki].kind);
        oc.statistic = rep.statistic;
        oc.p_value = rep.p_value;
        oc.reject_at.resize(study.alphas.size());
        std::vector<double> sorted = rep.replicates;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t ai = 0; ai < study.alphas.size(); ++ai) {
          const double crit =
              funcpd::detail::critical_value(sorted, study.alphas[ai]);
          oc.reject_at[ai] = rep.statistic > crit;
        }
      }
    }
  });

  for (std::size_t ki = 0; ki < k_count; ++ki) {
    for (std::size_t ai = 0; ai < study.alphas.size(); ++ai) {
      std::size_t rejected = 0;
      for (std::size_t s = 0; s < s_count; ++s)
        if (table.outcomes[s * k_count + ki].reject_at[ai]) ++rejected;
      RejectionRow row;
      row.scenario = to_string(study.scenario.id);
      row.kernel = to_string(study.kernels[ki].kind);
      row.alpha = study.alphas[ai];
      row.rate = static_cast<double>(rejected) / static_cast<double>(s_count);
      row.mc_stderr = std::sqrt(row.rate * (1.0 - row.rate) /
                                static_cast<double>(s_count));
      table.rows.push_back(row);
    }
  }
  return table;
}

}  // namespace funcpd
