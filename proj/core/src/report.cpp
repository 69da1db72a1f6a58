#include "netlds/report.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace netlds {

using json = nlohmann::ordered_json;

namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("read_file_bytes(): cannot open " + path);
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("write_text(): cannot open " + path);
  }
  out << text;
  if (!out) {
    throw std::runtime_error("write_text(): write failed for " + path);
  }
}

}  // namespace

std::string sha1_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha1(), nullptr) != 1) {
    throw std::runtime_error("sha1_hex(): digest failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

std::string model_hash(const LdsModel& model) {
  std::string bytes;
  auto append = [&bytes](double v) {
    const char* p = reinterpret_cast<const char*>(&v);
    bytes.append(p, sizeof(double));
  };
  for (Eigen::Index i = 0; i < model.h.size(); ++i) append(model.h.data()[i]);
  for (Eigen::Index i = 0; i < model.noise_gain.size(); ++i) append(model.noise_gain(i));
  append(model.theta0);
  append(model.theta1);
  return sha1_hex(bytes);
}

void ensure_directory(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw std::runtime_error("ensure_directory(): cannot create " + dir + ": " + ec.message());
  }
}

void write_svg_plot(const std::string& path, const std::string& title, const std::string& x_label,
                    const std::string& y_label, const std::vector<PlotSeries>& series, bool log_x,
                    bool log_y) {
  constexpr double kWidth = 640, kHeight = 440;
  constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 55;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;

  auto tx = [log_x](double x) { return log_x ? std::log10(std::max(x, 1e-300)) : x; };
  auto ty = [log_y](double y) { return log_y ? std::log10(std::max(y, 1e-300)) : y; };

  double x_lo = 0, x_hi = 1, y_lo = 0, y_hi = 1;
  bool first = true;
  for (const auto& s : series) {
    for (const auto& pt : s.points) {
      const double x = tx(pt.x), y = ty(pt.y);
      if (first) {
        x_lo = x_hi = x;
        y_lo = y_hi = y;
        first = false;
      } else {
        x_lo = std::min(x_lo, x);
        x_hi = std::max(x_hi, x);
        y_lo = std::min(y_lo, y);
        y_hi = std::max(y_hi, y);
      }
    }
  }
  if (x_hi - x_lo < 1e-12) x_hi = x_lo + 1.0;
  if (y_hi - y_lo < 1e-12) y_hi = y_lo + 1.0;

  auto px = [&](double x) { return kLeft + (tx(x) - x_lo) / (x_hi - x_lo) * plot_w; };
  auto py = [&](double y) { return kTop + plot_h - (ty(y) - y_lo) / (y_hi - y_lo) * plot_h; };

  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b"};

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << title
      << "</text>\n";
  svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << plot_w << "\" height=\""
      << plot_h << "\" fill=\"none\" stroke=\"#444\"/>\n";

  // axis ticks: 5 per axis in transformed coordinates
  for (int t = 0; t <= 4; ++t) {
    const double fx = x_lo + (x_hi - x_lo) * t / 4.0;
    const double fy = y_lo + (y_hi - y_lo) * t / 4.0;
    const double gx = kLeft + plot_w * t / 4.0;
    const double gy = kTop + plot_h - plot_h * t / 4.0;
    const double label_x = log_x ? std::pow(10.0, fx) : fx;
    const double label_y = log_y ? std::pow(10.0, fy) : fy;
    char xbuf[32], ybuf[32];
    std::snprintf(xbuf, sizeof(xbuf), "%.4g", label_x);
    std::snprintf(ybuf, sizeof(ybuf), "%.4g", label_y);
    svg << "<line x1=\"" << gx << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << gx << "\" y2=\""
        << kTop + plot_h + 5 << "\" stroke=\"#444\"/>\n";
    svg << "<text x=\"" << gx << "\" y=\"" << kTop + plot_h + 20
        << "\" text-anchor=\"middle\" font-size=\"11\">" << xbuf << "</text>\n";
    svg << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << gy << "\" x2=\"" << kLeft << "\" y2=\"" << gy
        << "\" stroke=\"#444\"/>\n";
    svg << "<text x=\"" << kLeft - 8 << "\" y=\"" << gy + 4
        << "\" text-anchor=\"end\" font-size=\"11\">" << ybuf << "</text>\n";
  }
  svg << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 12
      << "\" text-anchor=\"middle\" font-size=\"13\">" << x_label << "</text>\n";
  svg << "<text x=\"16\" y=\"" << kTop + plot_h / 2
      << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
      << kTop + plot_h / 2 << ")\">" << y_label << "</text>\n";

  int color_index = 0;
  double legend_y = kTop + 14;
  for (const auto& s : series) {
    const char* color = kColors[color_index % 5];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\" points=\"";
    for (const auto& pt : s.points) svg << px(pt.x) << "," << py(pt.y) << " ";
    svg << "\"/>\n";
    for (const auto& pt : s.points) {
      svg << "<circle cx=\"" << px(pt.x) << "\" cy=\"" << py(pt.y) << "\" r=\"2.5\" fill=\"" << color
          << "\"/>\n";
    }
    svg << "<text x=\"" << kLeft + plot_w - 8 << "\" y=\"" << legend_y
        << "\" text-anchor=\"end\" font-size=\"12\" fill=\"" << color << "\">" << s.name
        << "</text>\n";
    legend_y += 16;
    ++color_index;
  }
  svg << "</svg>\n";
  write_text(path, svg.str());
}

void write_trials_csv(const std::vector<TrialReport>& reports, const std::string& path) {
  std::ostringstream out;
  out << "trial,seed,n,lambda,relative_error,mean_node_error,max_node_error,"
         "eq11_fraction,kappa_hat_min,prop31_worst_ratio,prop31_violations\n";
  for (std::size_t t = 0; t < reports.size(); ++t) {
    const auto& r = reports[t];
    const double mean_err = r.node_errors.size() > 0 ? r.node_errors.mean() : 0.0;
    const double max_err = r.node_errors.size() > 0 ? r.node_errors.maxCoeff() : 0.0;
    out << t << "," << r.seed << "," << r.n << "," << format_double(r.lambda) << ","
        << r.relative_error << "," << format_double(mean_err) << "," << format_double(max_err);
    if (r.diagnostics) {
      out << "," << format_double(r.diagnostics->eq11_fraction) << ","
          << format_double(r.diagnostics->kappa_hat_min) << ","
          << format_double(r.diagnostics->prop31_worst_ratio) << ","
          << r.diagnostics->prop31_violations;
    } else {
      out << ",,,,";
    }
    out << "\n";
  }
  write_text(path, out.str());
}

void write_nmin_csv(const NminResult& result, const std::string& path) {
  std::ostringstream out;
  out << "n,zero_error_trials\n";
  for (const auto& [n, ok] : result.curve) out << n << "," << ok << "\n";
  write_text(path, out.str());
}

void write_comparison_csv(const std::vector<ComparisonRow>& rows, const std::string& path) {
  std::ostringstream out;
  out << "n,regularized_mean_error,unregularized_mean_error,cig_mean_error\n";
  for (const auto& r : rows) {
    out << r.n << "," << format_double(r.regularized) << "," << format_double(r.unregularized)
        << "," << format_double(r.cig) << "\n";
  }
  write_text(path, out.str());
}

void write_lambda_sweep_csv(const std::vector<LambdaSweepRow>& rows, const std::string& path) {
  std::ostringstream out;
  out << "lambda,mean_relative_error,zero_error_trials\n";
  for (const auto& r : rows) {
    out << format_double(r.lambda) << "," << format_double(r.mean_relative_error) << ","
        << r.zero_error_trials << "\n";
  }
  write_text(path, out.str());
}

void write_nmin_vs_p_csv(const std::vector<NminVsP>& rows, const std::string& path) {
  std::ostringstream out;
  out << "p,log_p,n_min\n";
  for (const auto& r : rows) {
    out << r.p << "," << format_double(std::log(static_cast<double>(r.p))) << "," << r.n_min << "\n";
  }
  write_text(path, out.str());
}

std::string bounds_report_json(const ExperimentContext& ctx, const ExperimentConfig& config) {
  json j;
  j["model_hash"] = model_hash(ctx.model);
  j["regime"] = regime_name(config.regime);
  j["epsilon"] = config.epsilon;
  j["frequency"] = ctx.frequency;
  j["N"] = ctx.N;
  j["constants"] = {{"L", ctx.constants.L},
                    {"U", ctx.constants.U},
                    {"C", ctx.constants.C},
                    {"delta_inv", ctx.constants.delta_inv},
                    {"d", ctx.constants.d},
                    {"m", ctx.constants.m}};
  std::vector<double> mi(ctx.constants.m_i.data(), ctx.constants.m_i.data() + ctx.constants.m_i.size());
  j["constants"]["m_i"] = mi;
  j["bounds"] = {{"applicable", ctx.bounds_applicable},
                 {"lambda_lo", ctx.bounds.lambda_lo},
                 {"lambda_hi", ctx.bounds.lambda_hi},
                 {"n_min", ctx.bounds.n_min},
                 {"N_min", ctx.bounds.N_min},
                 {"kappa", ctx.bounds.kappa},
                 {"feasible", ctx.bounds.feasible},
                 {"epsilon_splits", {ctx.bounds.epsilon_splits[0], ctx.bounds.epsilon_splits[1],
                                     ctx.bounds.epsilon_splits[2]}}};
  if (!ctx.bounds_applicable) j["bounds"]["message"] = ctx.bounds_message;
  j["universal_constants"] = {
      {"c", ctx.bounds.universal.c},
      {"c_prime", ctx.bounds.universal.c_prime},
      {"note", "the first n_min term scales with unspecified universal constants; "
               "values reported here assume c = c' = 1"}};
  j["thresholds"] = {{"tau1", ctx.tau1}, {"tau2", ctx.tau2}};
  return j.dump(2) + "\n";
}

void write_manifest(const std::string& dir, const ExperimentConfig& config,
                    const ExperimentContext& ctx, const std::vector<std::string>& files) {
  json j;
  j["config"] = json::parse(config_to_json_text(config));
  j["model_hash"] = model_hash(ctx.model);
  j["derived"] = {{"nodes", ctx.graph.node_count()},
                  {"edges", ctx.graph.edge_count()},
                  {"strict_two_hop_pairs", ctx.two_hop.strict_two_hop.size()},
                  {"N", ctx.N},
                  {"frequency", ctx.frequency},
                  {"tau1", ctx.tau1},
                  {"tau2", ctx.tau2},
                  {"lambda_rule", lambda_rule_name(config.lambda.kind)},
                  {"theorem_applicable", ctx.bounds_applicable},
                  {"theorem_feasible", ctx.bounds.feasible}};
  json file_hashes = json::object();
  for (const auto& name : files) {
    file_hashes[name] = sha1_hex(read_file_bytes(dir + "/" + name));
  }
  j["files"] = file_hashes;
  std::string text = j.dump(2) + "\n";
  j["content_hash"] = sha1_hex(text);
  write_text(dir + "/manifest.json", j.dump(2) + "\n");
}

}  // namespace netlds
