// funcpd: change-point tests for functional time series.
//
// Subcommands: test (bootstrap change-point test on a CSV sample),
// bandwidth (data-adaptive bandwidth only), simulate (synthetic fAR(1)
// sample with optional scenario), mc (Monte Carlo size/power table).
//
// Reports embed a manifest of every result-affecting flag; timing and
// thread counts are printed to the console only, so runs with equal
// seeds produce byte-identical artifacts for any --threads value.

#include <CLI11.hpp>

#include <chrono>
#include <cstdint>
#include <iostream>
#include <string>

#include "funcpd/funcpd.hpp"

namespace {

using Clock = std::chrono::steady_clock;

struct KernelOpts {
  std::string kind = "sign";
  double clip_c = 1.0;
  std::string weighting = "euclidean";

  funcpd::KernelSpec spec() const {
    funcpd::KernelSpec out;
    if (kind == "cusum") {
      out.kind = funcpd::KernelKind::cusum;
    } else if (kind == "sign" || kind == "spatial_sign") {
      out.kind = funcpd::KernelKind::spatial_sign;
    } else if (kind == "clipped") {
      out.kind = funcpd::KernelKind::clipped;
    } else {
      throw CLI::ValidationError("--kernel",
                                 "unknown kernel '" + kind +
                                     "' (valid: cusum, sign, clipped)");
    }
    out.clip_c = clip_c;
    out.weighting = weighting == "mean" ? funcpd::GridWeighting::mean
                                        : funcpd::GridWeighting::euclidean;
    return out;
  }
};

void add_kernel_flags(CLI::App* cmd, KernelOpts& k) {
  cmd->add_option("--kernel", k.kind,
                  "Kernel: cusum, sign (spatial sign) or clipped")
      ->default_val(k.kind);
  cmd->add_option("--clip-c", k.clip_c,
                  "Clipping constant c > 0 (clipped kernel only)")
      ->default_val(k.clip_c);
  cmd->add_option("--weighting", k.weighting,
                  "Grid inner product: euclidean or mean (1/d-scaled)")
      ->check(CLI::IsMember({"euclidean", "mean"}))
      ->default_val(k.weighting);
}

funcpd::LagConvention parse_lag(const std::string& s) {
  if (s == "standard") return funcpd::LagConvention::standard;
  if (s == "paper" || s == "paper_offset")
    return funcpd::LagConvention::paper_offset;
  throw CLI::ValidationError("--lag-convention",
                             "expected 'standard' or 'paper'");
}

funcpd::BandwidthChoice parse_bandwidth(const std::string& s) {
  if (s == "auto") return {true, 1.0};
  try {
    const double v = std::stod(s);
    return {false, v};
  } catch (const std::exception&) {
    throw CLI::ValidationError("--bandwidth",
                               "expected 'auto' or a number >= 1, got '" + s +
                                   "'");
  }
}

int resolve_threads(int requested) {
  return requested > 0 ? requested : funcpd::default_thread_count();
}

double elapsed_s(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct TestArgs {
  std::string input, out;
  KernelOpts kernel;
  double alpha = 0.05;
  std::size_t reps = 1000;
  std::string bandwidth = "auto";
  std::string lag = "standard";
  std::string p_rule = "plain";
  std::uint64_t seed = 0;
  int threads = 0;
  std::size_t cache_mb = 256;
  std::size_t date_column = 0;
  bool exit_on_reject = false;
};

int cmd_test(const TestArgs& a) {
  const auto start = Clock::now();
  funcpd::CsvReadOptions opts;
  if (a.date_column > 0) opts.date_column = a.date_column;
  const auto csv = funcpd::read_sample_csv(a.input, opts);

  funcpd::BootstrapConfig cfg;
  cfg.replicates = a.reps;
  cfg.alpha = a.alpha;
  cfg.bandwidth = parse_bandwidth(a.bandwidth);
  cfg.lag_convention = parse_lag(a.lag);
  cfg.p_value_rule = a.p_rule == "add-one" ? funcpd::PValueRule::add_one
                                           : funcpd::PValueRule::plain;
  cfg.seed = a.seed;
  cfg.threads = resolve_threads(a.threads);
  cfg.cache_budget_bytes = a.cache_mb << 20;

  const auto spec = a.kernel.spec();
  const auto rep = funcpd::run_test(csv.sample, spec, cfg);

  std::string k_hat_label;
  if (!csv.labels.empty() && rep.k_hat >= 1 && rep.k_hat <= csv.labels.size())
    k_hat_label = csv.labels[rep.k_hat - 1];

  funcpd::RunManifest manifest;
  manifest.command = "test";
  manifest.seed = a.seed;
  manifest.input_checksum = csv.checksum;
  manifest.flags = {{"input", a.input},
                    {"kernel", funcpd::to_string(spec.kind)},
                    {"weighting", funcpd::to_string(spec.weighting)},
                    {"alpha", a.alpha},
                    {"reps", a.reps},
                    {"bandwidth", a.bandwidth},
                    {"lag_convention", funcpd::to_string(cfg.lag_convention)},
                    {"p_rule", funcpd::to_string(cfg.p_value_rule)}};
  if (spec.kind == funcpd::KernelKind::clipped)
    manifest.flags["clip_c"] = spec.clip_c;
  if (a.date_column > 0) manifest.flags["date_column"] = a.date_column;

  if (!a.out.empty())
    funcpd::write_json(a.out, funcpd::report_json(rep, manifest, k_hat_label));

  std::cout << "funcpd test\n"
            << "  input:          " << a.input << "  (n=" << rep.n
            << ", d=" << rep.d << ")\n"
            << "  kernel:         " << funcpd::to_string(spec.kind) << " ("
            << funcpd::to_string(spec.weighting) << " weighting)\n"
            << "  bandwidth:      "
            << (rep.bandwidth_auto ? "auto -> q = " : "fixed q = ")
            << rep.q_used << "\n"
            << "  replicates:     " << a.reps << "  (seed " << a.seed
            << ", threads " << cfg.threads << ")\n"
            << "  statistic:      " << rep.statistic << "\n"
            << "  critical value: " << rep.critical_value << "  (alpha "
            << rep.alpha << ")\n"
            << "  p-value:        " << rep.p_value << "\n"
            << "  change point:   k_hat = " << rep.k_hat;
  if (!k_hat_label.empty()) std::cout << "  (" << k_hat_label << ")";
  std::cout << "\n  decision:       "
            << (rep.reject ? "REJECT the null (change detected)"
                           : "do not reject the null")
            << "\n  elapsed:        " << elapsed_s(start) << " s\n";
  if (!a.out.empty()) std::cout << "  report:         " << a.out << "\n";

  return (rep.reject && a.exit_on_reject) ? 2 : 0;
}

struct BandwidthArgs {
  std::string input;
  KernelOpts kernel;
  std::size_t date_column = 0;
};

int cmd_bandwidth(const BandwidthArgs& a) {
  funcpd::CsvReadOptions opts;
  if (a.date_column > 0) opts.date_column = a.date_column;
  const auto csv = funcpd::read_sample_csv(a.input, opts);
  const auto rep = funcpd::adaptive_bandwidth(csv.sample, a.kernel.spec());
  std::cout << "funcpd bandwidth\n"
            << "  input:    " << a.input << "  (n=" << csv.sample.size()
            << ", d=" << csv.sample.dim() << ")\n"
            << "  kernel:   " << a.kernel.kind << "\n"
            << "  q0:       " << rep.q0 << "  (n^(1/5))\n"
            << "  cp0_sum:  " << rep.cp0_sum << "\n"
            << "  cp1_sum:  " << rep.cp1_sum << "\n"
            << "  clamped:  " << (rep.clamped ? "true" : "false") << "\n"
            << "  q_adpt:   " << rep.q_adpt << "\n";
  return 0;
}

struct SimulateArgs {
  std::string scenario = "null";
  std::size_t n = 200, d = 100;
  double ar_a = 1.0;
  int burn_in = 100;
  double gamma = 0.3;
  std::string innovation = "gaussian";
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_simulate(const SimulateArgs& a, const CLI::App* cmd) {
  funcpd::ScenarioSpec scenario{funcpd::scenario_from_string(a.scenario)};
  scenario.gamma = a.gamma;

  funcpd::SimConfig cfg;
  cfg.n = a.n;
  cfg.d = a.d;
  cfg.ar_a = a.ar_a;
  cfg.burn_in = a.burn_in;
  cfg.innovation = a.innovation == "cauchy" ? funcpd::Innovation::cauchy
                                            : funcpd::Innovation::gaussian;
  cfg.seed = a.seed;
  cfg = funcpd::scenario_sim_config(scenario, cfg);
  // explicit --n/--d win over the s6 default shape
  if (cmd->count("--n")) cfg.n = a.n;
  if (cmd->count("--d")) cfg.d = a.d;
  scenario.s6_n = cfg.n;
  scenario.s6_d = cfg.d;

  const auto sample = funcpd::apply_scenario(funcpd::far1(cfg), scenario);

  funcpd::RunManifest manifest;
  manifest.command = "simulate";
  manifest.seed = a.seed;
  manifest.flags = {{"scenario", a.scenario},
                    {"n", cfg.n},
                    {"d", cfg.d},
                    {"a", cfg.ar_a},
                    {"burn_in", cfg.burn_in},
                    {"innovation", funcpd::to_string(cfg.innovation)},
                    {"gamma", a.gamma}};
  funcpd::write_sample_csv(a.out, sample, &manifest);
  std::cout << "wrote " << sample.size() << " x " << sample.dim()
            << " sample to " << a.out << "\n";
  return 0;
}

struct McArgs {
  std::string scenario = "null";
  std::size_t studies = 100;
  std::size_t reps = 300;
  std::size_t n = 200, d = 100;
  double ar_a = 1.0;
  int burn_in = 100;
  double gamma = 0.3;
  std::string bandwidth = "auto";
  std::string lag = "standard";
  std::uint64_t seed = 0;
  int threads = 0;
  std::size_t cache_mb = 256;
  std::string out;
  std::string long_out;
};

int cmd_mc(const McArgs& a, const CLI::App* cmd) {
  const auto start = Clock::now();
  funcpd::MonteCarloStudy study;
  study.scenario = funcpd::ScenarioSpec{funcpd::scenario_from_string(a.scenario)};
  study.scenario.gamma = a.gamma;
  study.sim.n = a.n;
  study.sim.d = a.d;
  study.sim.ar_a = a.ar_a;
  study.sim.burn_in = a.burn_in;
  study.sim.seed = a.seed;
  if (study.scenario.id == funcpd::ScenarioId::s6_large_d) {
    if (cmd->count("--n")) study.scenario.s6_n = a.n;
    if (cmd->count("--d")) study.scenario.s6_d = a.d;
  }
  study.boot.replicates = a.reps;
  study.boot.bandwidth = parse_bandwidth(a.bandwidth);
  study.boot.lag_convention = parse_lag(a.lag);
  study.boot.seed = funcpd::splitmix64(a.seed ^ 0x6d63u);  // independent of sim stream
  study.boot.cache_budget_bytes = a.cache_mb << 20;
  study.studies = a.studies;
  study.threads = resolve_threads(a.threads);

  const auto table = funcpd::monte_carlo(study);

  funcpd::RunManifest manifest;
  manifest.command = "mc";
  manifest.seed = a.seed;
  manifest.flags = {{"scenario", a.scenario}, {"studies", a.studies},
                    {"reps", a.reps},         {"n", a.n},
                    {"d", a.d},               {"a", a.ar_a},
                    {"burn_in", a.burn_in},   {"bandwidth", a.bandwidth},
                    {"lag_convention", a.lag}, {"gamma", a.gamma}};

  funcpd::write_rejection_table_csv(a.out, table, manifest);
  std::string long_path = a.long_out;
  if (long_path.empty()) {
    long_path = a.out;
    const auto dot = long_path.rfind('.');
    long_path = (dot == std::string::npos ? long_path
                                          : long_path.substr(0, dot)) +
                "_long.csv";
  }
  funcpd::write_long_csv(long_path, study.scenario, table, manifest);

  std::cout << "scenario " << a.scenario << ", S=" << a.studies
            << " studies, m=" << a.reps << " replicates\n";
  for (const auto& row : table.rows)
    std::cout << "  " << row.kernel << "  alpha=" << row.alpha
              << "  rate=" << row.rate << "  (se " << row.mc_stderr << ")\n";
  std::cout << "table: " << a.out << "\nlong:  " << long_path
            << "\nelapsed: " << elapsed_s(start) << " s\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Change-point tests for functional time series: two-sample "
               "U-statistics with a dependent wild bootstrap"};
  app.set_version_flag("--version", funcpd::kVersion);
  app.require_subcommand(1);

  TestArgs ta;
  auto* test = app.add_subcommand("test", "Bootstrap change-point test");
  test->add_option("--input", ta.input, "Input CSV (rows = time points)")
      ->required();
  add_kernel_flags(test, ta.kernel);
  test->add_option("--alpha", ta.alpha, "Significance level in (0,1)")
      ->default_val(ta.alpha);
  test->add_option("--reps", ta.reps, "Bootstrap replicates m")
      ->default_val(ta.reps);
  test->add_option("--bandwidth", ta.bandwidth, "'auto' or a fixed q >= 1")
      ->default_val(ta.bandwidth);
  test->add_option("--lag-convention", ta.lag,
                   "Multiplier lag convention: standard or paper")
      ->default_val(ta.lag);
  test->add_option("--p-rule", ta.p_rule, "p-value rule: plain or add-one")
      ->check(CLI::IsMember({"plain", "add-one"}))
      ->default_val(ta.p_rule);
  test->add_option("--seed", ta.seed, "Master RNG seed")->default_val(0);
  test->add_option("--threads", ta.threads,
                   "Worker threads (0 = hardware)")->default_val(0);
  test->add_option("--cache-budget-mb", ta.cache_mb,
                   "Pairwise kernel cache budget in MiB")
      ->envname("FUNCPD_CACHE_BUDGET_MB")
      ->default_val(ta.cache_mb);
  test->add_option("--date-column", ta.date_column,
                   "1-based CSV column holding dates/labels");
  test->add_option("--out", ta.out, "Write the full report JSON here");
  test->add_flag("--exit-on-reject", ta.exit_on_reject,
                 "Exit with code 2 when the test rejects");

  BandwidthArgs ba;
  auto* bw = app.add_subcommand("bandwidth",
                                "Data-adaptive bandwidth for a CSV sample");
  bw->add_option("--input", ba.input, "Input CSV")->required();
  add_kernel_flags(bw, ba.kernel);
  bw->add_option("--date-column", ba.date_column,
                 "1-based CSV column holding dates/labels");

  SimulateArgs sa;
  auto* sim = app.add_subcommand("simulate", "Generate a synthetic sample");
  sim->add_option("--scenario", sa.scenario,
                  "null, s1..s6, null_outliers, null_heavy")
      ->default_val(sa.scenario);
  sim->add_option("--n", sa.n, "Sample size")->default_val(sa.n);
  sim->add_option("--d", sa.d, "Grid size")->default_val(sa.d);
  sim->add_option("--a", sa.ar_a, "AR parameter")->default_val(sa.ar_a);
  sim->add_option("--burn-in", sa.burn_in, "Burn-in length")
      ->default_val(sa.burn_in);
  sim->add_option("--gamma", sa.gamma, "Change fraction (s5)")
      ->default_val(sa.gamma);
  sim->add_option("--innovation", sa.innovation,
                  "gaussian or cauchy (scenarios may override)")
      ->check(CLI::IsMember({"gaussian", "cauchy"}))
      ->default_val(sa.innovation);
  sim->add_option("--seed", sa.seed, "Master RNG seed")->default_val(0);
  sim->add_option("--out", sa.out, "Output CSV path")->required();

  McArgs ma;
  auto* mc = app.add_subcommand("mc", "Monte Carlo size/power study");
  mc->add_option("--scenario", ma.scenario,
                 "null, s1..s6, null_outliers, null_heavy")
      ->default_val(ma.scenario);
  mc->add_option("--studies", ma.studies, "Study count S")
      ->default_val(ma.studies);
  mc->add_option("--reps", ma.reps, "Bootstrap replicates m per study")
      ->default_val(ma.reps);
  mc->add_option("--n", ma.n, "Sample size")->default_val(ma.n);
  mc->add_option("--d", ma.d, "Grid size")->default_val(ma.d);
  mc->add_option("--a", ma.ar_a, "AR parameter")->default_val(ma.ar_a);
  mc->add_option("--burn-in", ma.burn_in, "Burn-in length")
      ->default_val(ma.burn_in);
  mc->add_option("--gamma", ma.gamma, "Change fraction (s5)")
      ->default_val(ma.gamma);
  mc->add_option("--bandwidth", ma.bandwidth, "'auto' or a fixed q >= 1")
      ->default_val(ma.bandwidth);
  mc->add_option("--lag-convention", ma.lag,
                 "Multiplier lag convention: standard or paper")
      ->default_val(ma.lag);
  mc->add_option("--seed", ma.seed, "Master RNG seed")->default_val(0);
  mc->add_option("--threads", ma.threads, "Worker threads (0 = hardware)")
      ->default_val(0);
  mc->add_option("--cache-budget-mb", ma.cache_mb,
                 "Pairwise kernel cache budget in MiB")
      ->envname("FUNCPD_CACHE_BUDGET_MB")
      ->default_val(ma.cache_mb);
  mc->add_option("--out", ma.out, "Output table CSV path")->required();
  mc->add_option("--long-out", ma.long_out,
                 "Long-format per-study CSV (default: <out>_long.csv)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (test->parsed()) return cmd_test(ta);
    if (bw->parsed()) return cmd_bandwidth(ba);
    if (sim->parsed()) return cmd_simulate(sa, sim);
    if (mc->parsed()) return cmd_mc(ma, mc);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
