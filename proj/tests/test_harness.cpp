#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "netlds/experiment.hpp"
#include "netlds/report.hpp"
#include "support.hpp"

using namespace netlds;

namespace {

ExperimentConfig desk_config() {
  ExperimentConfig c;
  c.graph.kind = "grid";
  c.graph.rows = 3;
  c.graph.cols = 3;
  c.regime = Regime::restart_record;
  c.frequency_harmonic = 2;
  c.epsilon = 0.05;
  c.lambda.kind = LambdaRuleKind::calibrated;
  c.trials = 4;
  c.seed = 3;
  return c;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_SUITE_BEGIN("harness");

TEST_CASE("config json round trip") {
  ExperimentConfig c = desk_config();
  c.n_values = {128, 256};
  c.lambda.kind = LambdaRuleKind::fixed;
  c.lambda.fixed_value = 0.07;
  c.out_dir = "somewhere";
  const std::string text = config_to_json_text(c);
  const ExperimentConfig back = config_from_json_text(text);
  CHECK(back.graph.rows == 3);
  CHECK(back.lambda.kind == LambdaRuleKind::fixed);
  CHECK(back.lambda.fixed_value == doctest::Approx(0.07));
  CHECK(back.n_values == std::vector<long long>{128, 256});
  CHECK(back.out_dir == "somewhere");
  CHECK(config_to_json_text(back) == text);
}

TEST_CASE("config validation rejects malformed input") {
  CHECK_THROWS_WITH_AS(config_from_json_text("{\"epsilon\": 0.7}"),
                       doctest::Contains("epsilon"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(config_from_json_text("{\"bogus\": 1}"),
                       doctest::Contains("unknown key"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(config_from_json_text("{\"lambda\": {\"rule\": \"nope\"}}"),
                       doctest::Contains("lambda rule"), std::invalid_argument);
  CHECK_THROWS_AS(config_from_json_text("not json"), std::invalid_argument);
}

TEST_CASE("context derives length, frequency and thresholds") {
  const ExperimentConfig c = desk_config();
  const ExperimentContext ctx = build_context(c);
  CHECK(ctx.graph.node_count() == 9);
  CHECK(ctx.N == bound_N_min(ctx.constants));
  CHECK(ctx.frequency ==
        doctest::Approx(2.0 * 3.14159265358979 * c.frequency_harmonic / ctx.N).epsilon(1e-6));
  CHECK(ctx.tau1 == doctest::Approx(ctx.constants.m));
  CHECK(ctx.tau2 == doctest::Approx(ctx.constants.m));
  CHECK(ctx.constants.delta_inv <= 0.7);
  CHECK(ctx.bounds_applicable);  // independent windows
  CHECK(ctx.oracle_raw.size() == 9);
}

TEST_CASE("consecutive bounds on small graphs are reported inapplicable") {
  ExperimentConfig c = desk_config();
  c.regime = Regime::consecutive;  // p = 8 < 16: constraint eps > 8/p fails
  const ExperimentContext ctx = build_context(c);
  CHECK(!ctx.bounds_applicable);
  CHECK(!ctx.bounds_message.empty());
  // the run itself still works
  const TrialReport r = run_trial(ctx, c, 256, 0);
  CHECK(r.n == 256);
}

TEST_CASE("oversized penalties empty the estimate and cost every edge") {
  ExperimentConfig c = desk_config();
  c.lambda.kind = LambdaRuleKind::fixed;
  c.lambda.fixed_value = 1e6;
  const ExperimentContext ctx = build_context(c);
  const TrialReport r = run_trial(ctx, c, 64, 0);
  CHECK(r.recovered.E_hat.empty());
  CHECK(r.relative_error == ctx.graph.edge_count());
}

TEST_CASE("oracle short-circuit recovers exactly at any sample count") {
  ExperimentConfig c = desk_config();
  c.oracle_mode = true;
  const ExperimentContext ctx = build_context(c);
  const TrialReport r = run_trial(ctx, c, 1, 0);
  CHECK(r.relative_error == 0);
  CHECK(r.recovered.E_hat == ctx.graph.edges());

  c.n_search_lo = 1;
  c.n_search_hi = 8;
  const NminResult nm = find_n_min(ctx, c);
  CHECK(nm.found);
  CHECK(nm.n_min == 1);
}

TEST_CASE("trials are deterministic in the seed and thread count") {
  ExperimentConfig c = desk_config();
  c.lambda.kind = LambdaRuleKind::fixed;
  c.lambda.fixed_value = 0.08;
  c.trials = 3;
  const ExperimentContext ctx = build_context(c);

  const TrialReport a = run_trial(ctx, c, 128, 1);
  const TrialReport b = run_trial(ctx, c, 128, 1);
  CHECK(a.seed == b.seed);
  CHECK(a.relative_error == b.relative_error);
  CHECK(a.node_errors == b.node_errors);
  CHECK(a.recovered.E_hat == b.recovered.E_hat);

  c.threads = 1;
  const auto serial = run_trials(ctx, c, 128);
  c.threads = 3;
  const auto parallel = run_trials(ctx, c, 128);
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t t = 0; t < serial.size(); ++t) {
    CHECK(serial[t].seed == parallel[t].seed);
    CHECK(serial[t].node_errors == parallel[t].node_errors);
    CHECK(serial[t].recovered.E_hat == parallel[t].recovered.E_hat);
  }
}

TEST_CASE("relative error counts the symmetric difference exactly") {
  ExperimentConfig c = desk_config();
  c.oracle_mode = true;
  ExperimentContext ctx = build_context(c);
  // overriding tau2 beyond every imaginary score suppresses all edges
  ExperimentConfig strict = c;
  strict.tau2_override = 10.0;
  const ExperimentContext strict_ctx = build_context(strict);
  const TrialReport r = run_trial(strict_ctx, strict, 1, 0);
  CHECK(r.recovered.E_hat.empty());
  CHECK(r.relative_error == ctx.graph.edge_count());
}

TEST_CASE("search reports the curve when the range never succeeds") {
  ExperimentConfig c = desk_config();
  c.lambda.kind = LambdaRuleKind::fixed;
  c.lambda.fixed_value = 1e6;  // nothing survives
  c.trials = 2;
  c.n_search_lo = 16;
  c.n_search_hi = 64;
  const ExperimentContext ctx = build_context(c);
  const NminResult nm = find_n_min(ctx, c);
  CHECK(!nm.found);
  CHECK(nm.n_min == -1);
  CHECK(nm.curve.size() == 3);  // 16, 32, 64
  for (const auto& [n, ok] : nm.curve) CHECK(ok == 0);
}

TEST_CASE("search returns the range start when it already succeeds") {
  ExperimentConfig c = desk_config();
  c.oracle_mode = true;
  c.n_search_lo = 4;
  c.n_search_hi = 64;
  const ExperimentContext ctx = build_context(c);
  const NminResult nm = find_n_min(ctx, c);
  CHECK(nm.found);
  CHECK(nm.n_min == 4);
  CHECK(nm.curve.size() == 1);
}

TEST_CASE("reports are byte-identical across reruns") {
  ExperimentConfig c = desk_config();
  c.lambda.kind = LambdaRuleKind::fixed;
  c.lambda.fixed_value = 0.08;
  c.trials = 3;
  c.out_dir = netlds::testing::temp_path("report_run");
  const ExperimentContext ctx = build_context(c);

  ensure_directory(c.out_dir);
  const auto reports = run_trials(ctx, c, 128);
  write_trials_csv(reports, c.out_dir + "/trials.csv");
  write_manifest(c.out_dir, c, ctx, {"trials.csv"});
  const std::string csv_once = slurp(c.out_dir + "/trials.csv");
  const std::string manifest_once = slurp(c.out_dir + "/manifest.json");

  const auto reports2 = run_trials(ctx, c, 128);
  write_trials_csv(reports2, c.out_dir + "/trials.csv");
  write_manifest(c.out_dir, c, ctx, {"trials.csv"});
  CHECK(slurp(c.out_dir + "/trials.csv") == csv_once);
  CHECK(slurp(c.out_dir + "/manifest.json") == manifest_once);
}

TEST_CASE("empty runs still produce a manifest") {
  ExperimentConfig c = desk_config();
  c.out_dir = netlds::testing::temp_path("empty_run");
  const ExperimentContext ctx = build_context(c);
  ensure_directory(c.out_dir);
  write_manifest(c.out_dir, c, ctx, {});
  const std::string manifest = slurp(c.out_dir + "/manifest.json");
  CHECK(manifest.find("\"files\": {}") != std::string::npos);
  CHECK(manifest.find("content_hash") != std::string::npos);
}

TEST_CASE("digest matches a known vector") {
  CHECK(sha1_hex("abc") == "a9993e364706816aba3e25717850c26c9cd0d89d");
  CHECK(sha1_hex("") == "da39a3ee5e6b4b0d3255bfef95601890afd80709");
}

TEST_CASE("plots are written with axes and series") {
  const std::string path = netlds::testing::temp_path("plot.svg");
  std::vector<PlotSeries> series(1);
  series[0].name = "errors";
  series[0].points = {{256, 4.0}, {1024, 1.0}, {4096, 0.25}};
  write_svg_plot(path, "errors vs n", "n", "error", series, true, true);
  const std::string svg = slurp(path);
  CHECK(svg.find("<svg") == 0);
  CHECK(svg.find("polyline") != std::string::npos);
  CHECK(svg.find("errors vs n") != std::string::npos);
}

TEST_CASE("bounds report carries the constants and applicability") {
  const ExperimentConfig c = desk_config();
  const ExperimentContext ctx = build_context(c);
  const std::string report = bounds_report_json(ctx, c);
  CHECK(report.find("model_hash") != std::string::npos);
  CHECK(report.find("\"d\": 8") != std::string::npos);
  CHECK(report.find("lambda_hi") != std::string::npos);
  CHECK(report.find("universal") != std::string::npos);
}

TEST_SUITE_END();
