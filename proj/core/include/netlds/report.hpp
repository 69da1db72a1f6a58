#pragma once

#include <string>
#include <vector>

#include "netlds/experiment.hpp"

namespace netlds {

/// Hex SHA-1 of a byte string (content addressing for run manifests).
std::string sha1_hex(const std::string& bytes);

/// Hex SHA-1 of the model's defining bytes (h, gain, MA coefficients).
std::string model_hash(const LdsModel& model);

struct SeriesPoint {
  double x = 0.0;
  double y = 0.0;
};

struct PlotSeries {
  std::string name;
  std::vector<SeriesPoint> points;
};

/// Minimal standalone SVG line chart; log-scaled axes are applied to the
/// data before drawing when requested.
void write_svg_plot(const std::string& path, const std::string& title, const std::string& x_label,
                    const std::string& y_label, const std::vector<PlotSeries>& series,
                    bool log_x = false, bool log_y = false);

/// One row per trial: seed, n, lambda, relative error, per-node error
/// summary and diagnostic columns when present.
void write_trials_csv(const std::vector<TrialReport>& reports, const std::string& path);

void write_nmin_csv(const NminResult& result, const std::string& path);

void write_comparison_csv(const std::vector<ComparisonRow>& rows, const std::string& path);

void write_lambda_sweep_csv(const std::vector<LambdaSweepRow>& rows, const std::string& path);

/// Table mirroring the n_min against log(p) axes: one row per graph size.
struct NminVsP {
  int p = 0;
  long long n_min = 0;
};
void write_nmin_vs_p_csv(const std::vector<NminVsP>& rows, const std::string& path);

/// Constants and sufficient thresholds as JSON, keyed by model hash,
/// regime and epsilon. Terms scaled by the unset universal constants are
/// flagged.
std::string bounds_report_json(const ExperimentContext& ctx, const ExperimentConfig& config);

/// Run manifest: config echo, derived context summary, and the SHA-1 of
/// every emitted file. Rewriting the same run yields identical bytes.
void write_manifest(const std::string& dir, const ExperimentConfig& config,
                    const ExperimentContext& ctx, const std::vector<std::string>& files);

/// Creates dir (recursively) if needed.
void ensure_directory(const std::string& dir);

}  // namespace netlds
