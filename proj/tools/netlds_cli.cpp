// Command line front end for the topology-learning experiment harness.
//
// Subcommands: simulate, recover, nmin, compare, bounds, diagnose.
// Exit codes: 0 success, 2 when the requested theorem conditions are
// infeasible at the computed sample bound, 1 on any other error.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <limits>
#include <iostream>
#include <optional>
#include <string>

#include "netlds/experiment.hpp"
#include "netlds/report.hpp"
#include "netlds/simulate.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInfeasible = 2;

struct CommonFlags {
  std::string config_path;
  std::string regime;
  double epsilon = -1.0;
  int trials = -1;
  long long seed = -1;
  std::string out_dir;
  std::string lambda_rule;
  int threads = -1;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "JSON experiment config");
  cmd->add_option("--regime", flags.regime, "iid | consecutive")
      ->check(CLI::IsMember({"iid", "consecutive"}));
  cmd->add_option("--epsilon", flags.epsilon, "failure tolerance in (0, 0.5)");
  cmd->add_option("--trials", flags.trials, "random trials per configuration");
  cmd->add_option("--seed", flags.seed, "master seed");
  cmd->add_option("--out", flags.out_dir, "output directory");
  cmd->add_option("--lambda-rule", flags.lambda_rule,
                  "theorem | calibrated | fixed:<value> (overrides config)");
  cmd->add_option("--threads", flags.threads, "worker threads (0 = hardware)");
}

netlds::ExperimentConfig resolve_config(const CommonFlags& flags) {
  netlds::ExperimentConfig config;
  if (!flags.config_path.empty()) {
    config = netlds::config_from_json_file(flags.config_path);
  }
  if (!flags.regime.empty()) config.regime = netlds::regime_from_name(flags.regime);
  if (flags.epsilon > 0.0) config.epsilon = flags.epsilon;
  if (flags.trials > 0) config.trials = flags.trials;
  if (flags.seed >= 0) config.seed = static_cast<std::uint64_t>(flags.seed);
  if (!flags.out_dir.empty()) config.out_dir = flags.out_dir;
  if (flags.threads >= 0) config.threads = flags.threads;
  if (!flags.lambda_rule.empty()) {
    const std::string& rule = flags.lambda_rule;
    if (rule == "theorem") {
      config.lambda.kind = netlds::LambdaRuleKind::theorem;
    } else if (rule == "calibrated") {
      config.lambda.kind = netlds::LambdaRuleKind::calibrated;
    } else if (rule.rfind("fixed:", 0) == 0) {
      config.lambda.kind = netlds::LambdaRuleKind::fixed;
      config.lambda.fixed_value = std::stod(rule.substr(6));
    } else {
      throw std::invalid_argument("--lambda-rule must be theorem, calibrated, or fixed:<value>");
    }
  }
  config.validate();
  return config;
}

int finish(const netlds::ExperimentConfig& config, const netlds::ExperimentContext& ctx) {
  if (config.lambda.kind != netlds::LambdaRuleKind::theorem) return kExitOk;
  if (!ctx.bounds_applicable) {
    std::cerr << "theorem-inapplicable: " << ctx.bounds_message << "\n";
    return kExitInfeasible;
  }
  if (!ctx.bounds.feasible) {
    std::cerr << "theorem-infeasible: lambda_lo " << ctx.bounds.lambda_lo << " > lambda_hi "
              << ctx.bounds.lambda_hi << " at n_min " << ctx.bounds.n_min << "\n";
    return kExitInfeasible;
  }
  return kExitOk;
}

int cmd_simulate(const CommonFlags& flags, long long n, int N_flag, const std::string& csv_path) {
  auto config = resolve_config(flags);
  if (N_flag > 0) config.N_override = N_flag;
  const auto ctx = netlds::build_context(config);
  const long long count = n > 0 ? n : (config.n_values.empty() ? 64 : config.n_values.front());

  netlds::ensure_directory(config.out_dir);
  const auto batch = netlds::simulate(ctx.model, ctx.graph, config.regime,
                                      static_cast<int>(count), ctx.N, config.seed);
  const std::string batch_path = config.out_dir + "/batch.wtb";
  netlds::save_batch(batch, batch_path);
  std::vector<std::string> files = {"batch.wtb"};
  if (!csv_path.empty()) {
    netlds::export_batch_csv(batch, config.out_dir + "/" + csv_path);
    files.push_back(csv_path);
  }
  netlds::save_graph(ctx.graph, config.out_dir + "/graph.edges");
  files.push_back("graph.edges");
  netlds::write_manifest(config.out_dir, config, ctx, files);
  std::cout << "wrote " << batch_path << " (" << count << " x " << ctx.N << " x "
            << ctx.graph.node_count() << ")\n";
  return finish(config, ctx);
}

int cmd_recover(const CommonFlags& flags, long long n_flag) {
  const auto config = resolve_config(flags);
  const auto ctx = netlds::build_context(config);
  const long long n = n_flag > 0 ? n_flag : (config.n_values.empty() ? 1024 : config.n_values.front());

  netlds::ensure_directory(config.out_dir);
  std::vector<std::string> files;
  if (config.lambda.kind == netlds::LambdaRuleKind::grid) {
    const auto rows = netlds::sweep_lambda_grid(ctx, config, n);
    netlds::write_lambda_sweep_csv(rows, config.out_dir + "/lambda_sweep.csv");
    files.push_back("lambda_sweep.csv");
    for (const auto& row : rows) {
      std::printf("lambda %.6g  mean error %.4g  exact %d/%d\n", row.lambda,
                  row.mean_relative_error, row.zero_error_trials, config.trials);
    }
  } else {
    const auto reports = netlds::run_trials(ctx, config, n);
    netlds::write_trials_csv(reports, config.out_dir + "/trials.csv");
    files.push_back("trials.csv");
    const auto& first = reports.front();
    netlds::export_recovery_csv(first.recovered, config.out_dir + "/scores.csv");
    files.push_back("scores.csv");
    int exact = 0;
    double mean_error = 0.0;
    for (const auto& r : reports) {
      if (r.relative_error == 0) ++exact;
      mean_error += r.relative_error;
    }
    mean_error /= reports.size();
    std::printf("n %lld  lambda %.6g  exact %d/%d  mean relative error %.4g\n", n, first.lambda,
                exact, config.trials, mean_error);
  }
  netlds::write_manifest(config.out_dir, config, ctx, files);
  return finish(config, ctx);
}

int cmd_nmin(const CommonFlags& flags) {
  const auto config = resolve_config(flags);
  const auto ctx = netlds::build_context(config);
  netlds::ensure_directory(config.out_dir);

  const auto result = netlds::find_n_min(ctx, config);
  netlds::write_nmin_csv(result, config.out_dir + "/nmin_curve.csv");
  std::vector<netlds::PlotSeries> series(1);
  series[0].name = "zero-error trials";
  for (const auto& [n, ok] : result.curve) {
    series[0].points.push_back({static_cast<double>(n), static_cast<double>(ok)});
  }
  netlds::write_svg_plot(config.out_dir + "/nmin_curve.svg", "exact recoveries vs n", "n",
                         "zero-error trials", series, /*log_x=*/true);
  netlds::write_manifest(config.out_dir, config, ctx, {"nmin_curve.csv", "nmin_curve.svg"});

  if (!result.found) {
    std::cerr << "n_min not found within [" << config.n_search_lo << ", " << config.n_search_hi
              << "]; success curve written to " << config.out_dir << "/nmin_curve.csv\n";
    return kExitError;
  }
  std::printf("n_min %lld (%d/%d exact)\n", result.n_min, config.trials, config.trials);
  return finish(config, ctx);
}

int cmd_compare(const CommonFlags& flags) {
  const auto config = resolve_config(flags);
  const auto ctx = netlds::build_context(config);
  if (config.n_values.empty()) {
    throw std::invalid_argument("compare: config.n_values must list the sample grid");
  }
  netlds::ensure_directory(config.out_dir);
  const auto rows = netlds::compare_baselines(ctx, config, config.n_values);
  netlds::write_comparison_csv(rows, config.out_dir + "/comparison.csv");

  std::vector<netlds::PlotSeries> series(3);
  series[0].name = "regularized";
  series[1].name = "unregularized";
  series[2].name = "inverse-density support";
  for (const auto& r : rows) {
    series[0].points.push_back({static_cast<double>(r.n), r.regularized});
    series[1].points.push_back({static_cast<double>(r.n), r.unregularized});
    series[2].points.push_back({static_cast<double>(r.n), r.cig});
  }
  netlds::write_svg_plot(config.out_dir + "/comparison.svg", "mean relative error vs n", "n",
                         "mean relative error", series, /*log_x=*/true);
  netlds::write_manifest(config.out_dir, config, ctx, {"comparison.csv", "comparison.svg"});
  for (const auto& r : rows) {
    std::printf("n %lld  regularized %.4g  unregularized %.4g  cig %.4g\n", r.n, r.regularized,
                r.unregularized, r.cig);
  }
  return finish(config, ctx);
}

int cmd_bounds(const CommonFlags& flags) {
  const auto config = resolve_config(flags);
  const auto ctx = netlds::build_context(config);
  netlds::ensure_directory(config.out_dir);
  const std::string report = netlds::bounds_report_json(ctx, config);
  std::ofstream out(config.out_dir + "/bounds.json", std::ios::binary);
  out << report;
  out.close();
  netlds::write_manifest(config.out_dir, config, ctx, {"bounds.json"});
  std::cout << report;
  return (ctx.bounds_applicable && ctx.bounds.feasible) ? kExitOk : kExitInfeasible;
}

int cmd_diagnose(const CommonFlags& flags, long long n_flag) {
  auto config = resolve_config(flags);
  config.diagnostics = true;
  const auto ctx = netlds::build_context(config);
  const long long n = n_flag > 0 ? n_flag : (config.n_values.empty() ? 1024 : config.n_values.front());

  netlds::ensure_directory(config.out_dir);
  const auto reports = netlds::run_trials(ctx, config, n);
  netlds::write_trials_csv(reports, config.out_dir + "/diagnostics.csv");

  int eq11_all = 0, violations = 0;
  double kappa_min = std::numeric_limits<double>::infinity();
  for (const auto& r : reports) {
    if (r.diagnostics->eq11_all) ++eq11_all;
    violations += r.diagnostics->prop31_violations;
    kappa_min = std::min(kappa_min, r.diagnostics->kappa_hat_min);
  }
  const auto gap = netlds::diagnose_psd_gap(ctx.model, ctx.frequency, ctx.N);
  std::printf("n %lld  eq11 all-nodes %d/%d  kappa_hat_min %.6g  prop31 violations %d\n", n,
              eq11_all, config.trials, kappa_min, violations);
  std::printf("spectral gap %.6g  tail bound %.6g  half_inv_U %.6g  lemma holds %s\n", gap.gap,
              gap.bound, gap.half_inv_U, gap.lemma_holds ? "yes" : "no");
  netlds::write_manifest(config.out_dir, config, ctx, {"diagnostics.csv"});
  return finish(config, ctx);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"passive topology learning for networked linear dynamics"};
  app.require_subcommand(1);

  CommonFlags flags;
  long long n = 0;
  int N_flag = 0;
  std::string csv_path;

  auto* simulate = app.add_subcommand("simulate", "generate and store a trajectory batch");
  add_common_flags(simulate, flags);
  simulate->add_option("--n", n, "trajectory count");
  simulate->add_option("--N", N_flag, "samples per trajectory (overrides the bound)");
  simulate->add_option("--csv", csv_path, "also export the batch as CSV (filename in --out)");

  auto* recover = app.add_subcommand("recover", "estimate the topology from simulated batches");
  add_common_flags(recover, flags);
  recover->add_option("--n", n, "trajectory count");

  auto* nmin = app.add_subcommand("nmin", "search the smallest n with all-exact recovery");
  add_common_flags(nmin, flags);

  auto* compare = app.add_subcommand("compare", "compare against unregularized and inverse-density baselines");
  add_common_flags(compare, flags);

  auto* bounds = app.add_subcommand("bounds", "report model constants and sufficient (lambda, n, N)");
  add_common_flags(bounds, flags);

  auto* diagnose = app.add_subcommand("diagnose", "estimation-condition diagnostics on random trials");
  add_common_flags(diagnose, flags);
  diagnose->add_option("--n", n, "trajectory count");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) return cmd_simulate(flags, n, N_flag, csv_path);
    if (recover->parsed()) return cmd_recover(flags, n);
    if (nmin->parsed()) return cmd_nmin(flags);
    if (compare->parsed()) return cmd_compare(flags);
    if (bounds->parsed()) return cmd_bounds(flags);
    if (diagnose->parsed()) return cmd_diagnose(flags, n);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
