#include "netlds/experiment.hpp"

#include <Eigen/Dense>
#include <atomic>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "netlds/rng.hpp"
#include "netlds/simulate.hpp"

namespace netlds {

using json = nlohmann::ordered_json;

Graph make_graph(const GraphSpec& spec) {
  if (spec.kind == "grid") return grid_graph(spec.rows, spec.cols);
  if (spec.kind == "chain") return chain_graph(spec.nodes);
  if (spec.kind == "tree") return random_tree(spec.nodes, spec.seed);
  throw std::invalid_argument("make_graph(): unknown graph kind '" + spec.kind + "'");
}

const char* lambda_rule_name(LambdaRuleKind kind) {
  switch (kind) {
    case LambdaRuleKind::theorem: return "theorem";
    case LambdaRuleKind::calibrated: return "calibrated";
    case LambdaRuleKind::fixed: return "fixed";
    case LambdaRuleKind::grid: return "grid";
  }
  return "unknown";
}

void ExperimentConfig::validate() const {
  if (!(epsilon > 0.0 && epsilon < 0.5)) {
    throw std::invalid_argument("ExperimentConfig: epsilon must lie in (0, 0.5)");
  }
  if (trials < 1) {
    throw std::invalid_argument("ExperimentConfig: trials must be >= 1");
  }
  if (n_search_lo < 1 || n_search_hi < n_search_lo) {
    throw std::invalid_argument("ExperimentConfig: n_search range is empty");
  }
  if (frequency_harmonic < 1) {
    throw std::invalid_argument("ExperimentConfig: frequency_harmonic must be >= 1");
  }
  if (lambda.kind == LambdaRuleKind::fixed && lambda.fixed_value < 0.0) {
    throw std::invalid_argument("ExperimentConfig: fixed lambda must be >= 0");
  }
  if (lambda.kind == LambdaRuleKind::grid && lambda.grid.empty()) {
    throw std::invalid_argument("ExperimentConfig: grid lambda rule needs a non-empty grid");
  }
  if (lambda.kappa_cal <= 0.0) {
    throw std::invalid_argument("ExperimentConfig: kappa_cal must be > 0");
  }
}

namespace {

void reject_unknown_keys(const json& j, std::initializer_list<const char*> known,
                         const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : known) {
      if (it.key() == k) {
        ok = true;
        break;
      }
    }
    if (!ok) {
      throw std::invalid_argument("config: unknown key '" + it.key() + "' in " + where);
    }
  }
}

LambdaRuleKind lambda_rule_from_name(const std::string& name) {
  if (name == "theorem") return LambdaRuleKind::theorem;
  if (name == "calibrated") return LambdaRuleKind::calibrated;
  if (name == "fixed") return LambdaRuleKind::fixed;
  if (name == "grid") return LambdaRuleKind::grid;
  throw std::invalid_argument("config: unknown lambda rule '" + name + "'");
}

}  // namespace

ExperimentConfig config_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: JSON parse error: ") + e.what());
  }
  reject_unknown_keys(j, {"graph", "model", "regime", "frequency_harmonic", "N_override",
                          "epsilon", "lambda", "n_values", "n_search", "trials", "seed",
                          "out_dir", "oracle_mode", "diagnostics", "threads", "tau1_override",
                          "tau2_override"},
                      "top level");

  ExperimentConfig c;
  if (j.contains("graph")) {
    const auto& g = j.at("graph");
    reject_unknown_keys(g, {"kind", "rows", "cols", "nodes", "seed"}, "graph");
    c.graph.kind = g.value("kind", c.graph.kind);
    c.graph.rows = g.value("rows", c.graph.rows);
    c.graph.cols = g.value("cols", c.graph.cols);
    c.graph.nodes = g.value("nodes", c.graph.nodes);
    c.graph.seed = g.value("seed", c.graph.seed);
  }
  if (j.contains("model")) {
    const auto& m = j.at("model");
    reject_unknown_keys(m, {"self_weight", "coupling", "asymmetry", "target_rho", "theta0",
                            "theta1", "gain"},
                        "model");
    c.model.self_weight = m.value("self_weight", c.model.self_weight);
    c.model.coupling = m.value("coupling", c.model.coupling);
    c.model.asymmetry = m.value("asymmetry", c.model.asymmetry);
    c.model.target_rho = m.value("target_rho", c.model.target_rho);
    c.model.theta0 = m.value("theta0", c.model.theta0);
    c.model.theta1 = m.value("theta1", c.model.theta1);
    c.model.gain = m.value("gain", c.model.gain);
  }
  if (j.contains("regime")) c.regime = regime_from_name(j.at("regime").get<std::string>());
  c.frequency_harmonic = j.value("frequency_harmonic", c.frequency_harmonic);
  c.N_override = j.value("N_override", c.N_override);
  c.epsilon = j.value("epsilon", c.epsilon);
  if (j.contains("lambda")) {
    const auto& l = j.at("lambda");
    reject_unknown_keys(l, {"rule", "fixed_value", "kappa_cal", "grid"}, "lambda");
    if (l.contains("rule")) c.lambda.kind = lambda_rule_from_name(l.at("rule").get<std::string>());
    c.lambda.fixed_value = l.value("fixed_value", c.lambda.fixed_value);
    c.lambda.kappa_cal = l.value("kappa_cal", c.lambda.kappa_cal);
    if (l.contains("grid")) c.lambda.grid = l.at("grid").get<std::vector<double>>();
  }
  if (j.contains("n_values")) c.n_values = j.at("n_values").get<std::vector<long long>>();
  if (j.contains("n_search")) {
    const auto& r = j.at("n_search");
    reject_unknown_keys(r, {"lo", "hi"}, "n_search");
    c.n_search_lo = r.value("lo", c.n_search_lo);
    c.n_search_hi = r.value("hi", c.n_search_hi);
  }
  c.trials = j.value("trials", c.trials);
  c.seed = j.value("seed", c.seed);
  c.out_dir = j.value("out_dir", c.out_dir);
  c.oracle_mode = j.value("oracle_mode", c.oracle_mode);
  c.diagnostics = j.value("diagnostics", c.diagnostics);
  c.threads = j.value("threads", c.threads);
  c.tau1_override = j.value("tau1_override", c.tau1_override);
  c.tau2_override = j.value("tau2_override", c.tau2_override);
  c.validate();
  return c;
}

ExperimentConfig config_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("config_from_json_file(): cannot open " + path);
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return config_from_json_text(buffer.str());
}

std::string config_to_json_text(const ExperimentConfig& c) {
  json j;
  j["graph"] = {{"kind", c.graph.kind}, {"rows", c.graph.rows}, {"cols", c.graph.cols},
                {"nodes", c.graph.nodes}, {"seed", c.graph.seed}};
  j["model"] = {{"self_weight", c.model.self_weight}, {"coupling", c.model.coupling},
                {"asymmetry", c.model.asymmetry},     {"target_rho", c.model.target_rho},
                {"theta0", c.model.theta0},           {"theta1", c.model.theta1},
                {"gain", c.model.gain}};
  j["regime"] = regime_name(c.regime);
  j["frequency_harmonic"] = c.frequency_harmonic;
  j["N_override"] = c.N_override;
  j["epsilon"] = c.epsilon;
  j["lambda"] = {{"rule", lambda_rule_name(c.lambda.kind)},
                 {"fixed_value", c.lambda.fixed_value},
                 {"kappa_cal", c.lambda.kappa_cal},
                 {"grid", c.lambda.grid}};
  j["n_values"] = c.n_values;
  j["n_search"] = {{"lo", c.n_search_lo}, {"hi", c.n_search_hi}};
  j["trials"] = c.trials;
  j["seed"] = c.seed;
  j["out_dir"] = c.out_dir;
  j["oracle_mode"] = c.oracle_mode;
  j["diagnostics"] = c.diagnostics;
  j["threads"] = c.threads;
  j["tau1_override"] = c.tau1_override;
  j["tau2_override"] = c.tau2_override;
  return j.dump(2) + "\n";
}

ExperimentContext build_context(const ExperimentConfig& config) {
  config.validate();
  ExperimentContext ctx;
  ctx.graph = make_graph(config.graph);
  ctx.two_hop = two_hop_closure(ctx.graph);
  ctx.model = model_from_rule(ctx.graph, config.model);

  const int l = config.frequency_harmonic;
  auto frequency_at = [l](int N) { return 2.0 * std::numbers::pi * l / N; };

  // N and f = 2 pi l / N determine each other through the certified-length
  // bound; iterate to a fixed point (a handful of steps in practice).
  int N = config.N_override > 0 ? config.N_override : 64;
  if (config.N_override <= 0) {
    for (int iter = 0; iter < 12; ++iter) {
      const ModelConstants constants = compute_constants(ctx.model, ctx.graph, frequency_at(N));
      const int next = std::max(bound_N_min(constants), 2 * l + 1);
      if (next == N) break;
      N = next;
    }
  }
  if (2 * l >= N) {
    throw std::invalid_argument("build_context(): frequency harmonic " + std::to_string(l) +
                                " is not below N/2 for N = " + std::to_string(N));
  }
  ctx.N = N;
  ctx.frequency = frequency_at(N);
  ctx.constants = compute_constants(ctx.model, ctx.graph, ctx.frequency);
  try {
    ctx.bounds = bound_lambda_and_n(ctx.constants, ctx.p(), config.epsilon, config.regime);
    ctx.bounds_applicable = true;
  } catch (const std::invalid_argument& e) {
    // The consecutive-regime constraint epsilon > 8/p is unsatisfiable for
    // small graphs; the run itself does not need the sample bound.
    ctx.bounds_applicable = false;
    ctx.bounds_message = e.what();
    ctx.bounds.regime = config.regime;
    ctx.bounds.epsilon = config.epsilon;
    ctx.bounds.N_min = bound_N_min(ctx.constants);
    ctx.bounds.kappa = 1.0 / (256.0 * ctx.constants.U);
  }
  ctx.tau1 = config.tau1_override > 0.0 ? config.tau1_override : ctx.constants.m;
  ctx.tau2 = config.tau2_override > 0.0 ? config.tau2_override : ctx.constants.m;

  const SpectralMatrix raw_psd = analytic_psd(ctx.model, ctx.frequency);
  ctx.population_psd = normalize_unit_diagonal(raw_psd);

  // Oracle-informed baseline threshold: half the smallest two-hop entry of
  // the normalized inverse density.
  {
    Eigen::LLT<Eigen::MatrixXcd> llt(ctx.population_psd.psd.matrix);
    const Eigen::MatrixXcd precision =
        llt.solve(Eigen::MatrixXcd::Identity(ctx.graph.node_count(), ctx.graph.node_count()));
    double min_entry = std::numeric_limits<double>::infinity();
    for (const auto& [i, j] : ctx.two_hop.pairs) {
      min_entry = std::min(min_entry, std::abs(precision(i, j)));
    }
    ctx.cig_threshold = ctx.two_hop.pairs.empty() ? 0.0 : 0.5 * min_entry;
  }

  ctx.oracle_raw.reserve(ctx.graph.node_count());
  for (int i = 0; i < ctx.graph.node_count(); ++i) {
    ctx.oracle_raw.push_back(exact_wiener(raw_psd, i));
  }
  return ctx;
}

double lambda_for(const ExperimentConfig& config, const ExperimentContext& ctx, long long n) {
  switch (config.lambda.kind) {
    case LambdaRuleKind::theorem:
      return lambda_lower(ctx.constants, ctx.p(), n, config.epsilon, config.regime);
    case LambdaRuleKind::calibrated: {
      const int p = ctx.p();
      return config.lambda.kappa_cal *
             std::sqrt(std::log(p * p / config.epsilon) / (static_cast<double>(n) * ctx.constants.L));
    }
    case LambdaRuleKind::fixed:
      return config.lambda.fixed_value;
    case LambdaRuleKind::grid:
      throw std::invalid_argument("lambda_for(): the grid rule has no single value; sweep the grid");
  }
  throw std::logic_error("lambda_for(): unreachable");
}

namespace {

int relative_error_vs(const EdgeSet& estimate, const EdgeSet& truth) {
  int err = 0;
  for (const auto& e : estimate) {
    if (!truth.count(e)) ++err;
  }
  for (const auto& e : truth) {
    if (!estimate.count(e)) ++err;
  }
  return err;
}

}  // namespace

TrialReport run_trial(const ExperimentContext& ctx, const ExperimentConfig& config, long long n,
                      int trial_index, std::optional<double> lambda_override) {
  const int p1 = ctx.graph.node_count();
  TrialReport report;
  report.n = n;
  report.seed = derive_seed(config.seed, static_cast<std::uint64_t>(trial_index));

  std::vector<WienerEstimate> estimates;
  estimates.reserve(p1);

  if (config.oracle_mode) {
    report.lambda = 0.0;
    for (int i = 0; i < p1; ++i) estimates.push_back(exact_wiener(ctx.population_psd.psd, i));
    report.node_errors = Eigen::VectorXd::Zero(p1);
  } else {
    const double lambda =
        lambda_override ? *lambda_override : lambda_for(config, ctx, n);
    report.lambda = lambda;
    if (n > static_cast<long long>(std::numeric_limits<int>::max())) {
      throw std::invalid_argument("run_trial(): n exceeds the supported trajectory count");
    }
    const TrajectoryBatch batch =
        simulate(ctx.model, ctx.graph, config.regime, static_cast<int>(n), ctx.N, report.seed);

    report.node_errors.resize(p1);
    TrialDiagnostics diag;
    diag.eq11_all = true;
    diag.kappa_hat_min = std::numeric_limits<double>::infinity();
    int eq11_count = 0;

    for (int i = 0; i < p1; ++i) {
      try {
        const SpectralDesign design = build_design(batch, i, ctx.frequency);
        const WienerEstimate estimate = solve_regularized_wiener(design, lambda);
        const WienerEstimate oracle = to_design_scale(ctx.oracle_raw[i], design);
        const Eigen::VectorXcd delta = estimate.coefficients - oracle.coefficients;
        report.node_errors(i) = delta.norm();

        if (config.diagnostics) {
          const auto eq11 = diagnose_lambda_condition(design, oracle, lambda);
          if (eq11.holds) {
            ++eq11_count;
          } else {
            diag.eq11_all = false;
          }
          const auto re = diagnose_restricted_eigenvalue(design, oracle, 64,
                                                         derive_seed(report.seed, 1000 + i), &delta);
          diag.kappa_hat_min = std::min(diag.kappa_hat_min, re.kappa_hat);
          if (eq11.holds && re.kappa_hat > 0.0) {
            const double bound =
                (3.0 / re.kappa_hat) * lambda * std::sqrt(static_cast<double>(ctx.constants.d));
            const double ratio = bound > 0.0 ? delta.norm() / bound : 0.0;
            diag.prop31_worst_ratio = std::max(diag.prop31_worst_ratio, ratio);
            if (delta.norm() > bound + 1e-9) ++diag.prop31_violations;
          }
        }
        estimates.push_back(estimate);
      } catch (const std::exception& e) {
        throw std::runtime_error("run_trial(): node " + std::to_string(i) + ", trial " +
                                 std::to_string(trial_index) + ", n = " + std::to_string(n) +
                                 ": " + e.what());
      }
    }
    if (config.diagnostics) {
      diag.eq11_fraction = static_cast<double>(eq11_count) / p1;
      report.diagnostics = diag;
    }
  }

  report.recovered = threshold_topology(estimates, ctx.tau1, ctx.tau2);
  report.relative_error = relative_error_vs(report.recovered.E_hat, ctx.graph.edges());
  return report;
}

std::vector<TrialReport> run_trials(const ExperimentContext& ctx, const ExperimentConfig& config,
                                    long long n, std::optional<double> lambda_override) {
  const int trials = config.trials;
  std::vector<TrialReport> reports(trials);
  int threads = config.threads > 0 ? config.threads
                                   : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min(threads, trials));

  if (threads == 1) {
    for (int t = 0; t < trials; ++t) reports[t] = run_trial(ctx, config, n, t, lambda_override);
    return reports;
  }

  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> failures(threads);
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&, w]() {
      try {
        for (int t = next.fetch_add(1); t < trials; t = next.fetch_add(1)) {
          reports[t] = run_trial(ctx, config, n, t, lambda_override);
        }
      } catch (...) {
        failures[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  return reports;
}

namespace {

int count_exact(const std::vector<TrialReport>& reports) {
  int ok = 0;
  for (const auto& r : reports) {
    if (r.relative_error == 0) ++ok;
  }
  return ok;
}

}  // namespace

NminResult find_n_min(const ExperimentContext& ctx, const ExperimentConfig& config) {
  NminResult result;
  auto evaluate = [&](long long n) {
    const int ok = count_exact(run_trials(ctx, config, n));
    result.curve.emplace_back(n, ok);
    return ok == config.trials;
  };

  const long long lo = config.n_search_lo;
  const long long hi_limit = config.n_search_hi;
  std::vector<long long> candidates;
  for (long long n = lo; n < hi_limit; n *= 2) candidates.push_back(n);
  candidates.push_back(hi_limit);

  long long fail = 0;
  long long success = -1;
  for (const long long n : candidates) {
    if (evaluate(n)) {
      success = n;
      break;
    }
    fail = n;
  }
  if (success < 0) {
    result.found = false;
    return result;
  }
  if (success == lo) {
    result.found = true;
    result.n_min = lo;
    return result;
  }

  // Bisect (fail, success] down to ~6% granularity; trial outcomes are
  // random, so finer resolution is noise.
  long long lo_b = std::max(fail, lo);
  long long hi_b = success;
  while (hi_b - lo_b > std::max<long long>(1, lo_b / 16)) {
    const long long mid = lo_b + (hi_b - lo_b) / 2;
    if (evaluate(mid)) {
      hi_b = mid;
    } else {
      lo_b = mid;
    }
  }
  result.found = true;
  result.n_min = hi_b;
  return result;
}

std::vector<ComparisonRow> compare_baselines(const ExperimentContext& ctx,
                                             const ExperimentConfig& config,
                                             const std::vector<long long>& n_grid) {
  std::vector<ComparisonRow> rows;
  const int p1 = ctx.graph.node_count();
  for (const long long n : n_grid) {
    ComparisonRow row;
    row.n = n;
    double reg = 0.0, unreg = 0.0, cig = 0.0;
    for (int t = 0; t < config.trials; ++t) {
      const std::uint64_t seed = derive_seed(config.seed, static_cast<std::uint64_t>(t));
      const TrajectoryBatch batch =
          simulate(ctx.model, ctx.graph, config.regime, static_cast<int>(n), ctx.N, seed);
      std::vector<WienerEstimate> regularized, plain;
      for (int i = 0; i < p1; ++i) {
        const SpectralDesign design = build_design(batch, i, ctx.frequency);
        regularized.push_back(solve_regularized_wiener(design, lambda_for(config, ctx, n)));
        plain.push_back(unregularized_wiener(design));
      }
      const auto rec_reg = threshold_topology(regularized, ctx.tau1, ctx.tau2);
      const auto rec_plain = threshold_topology(plain, ctx.tau1, ctx.tau2);
      const NormalizedPsd emp = normalize_unit_diagonal(empirical_psd(batch, ctx.frequency));
      const EdgeSet cig_edges = cig_baseline(emp.psd, ctx.cig_threshold);
      reg += relative_error_vs(rec_reg.E_hat, ctx.graph.edges());
      unreg += relative_error_vs(rec_plain.E_hat, ctx.graph.edges());
      cig += relative_error_vs(cig_edges, ctx.graph.edges());
    }
    row.regularized = reg / config.trials;
    row.unregularized = unreg / config.trials;
    row.cig = cig / config.trials;
    rows.push_back(row);
  }
  return rows;
}

std::vector<LambdaSweepRow> sweep_lambda_grid(const ExperimentContext& ctx,
                                              const ExperimentConfig& config, long long n) {
  if (config.lambda.grid.empty()) {
    throw std::invalid_argument("sweep_lambda_grid(): empty lambda grid");
  }
  std::vector<LambdaSweepRow> rows;
  for (const double lambda : config.lambda.grid) {
    const auto reports = run_trials(ctx, config, n, lambda);
    LambdaSweepRow row;
    row.lambda = lambda;
    double acc = 0.0;
    for (const auto& r : reports) acc += r.relative_error;
    row.mean_relative_error = acc / reports.size();
    row.zero_error_trials = count_exact(reports);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace netlds
