#include "netlds/wiener.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace netlds {

WienerEstimate exact_wiener(const SpectralMatrix& psd, int node) {
  const int p1 = psd.node_count();
  if (node < 0 || node >= p1) {
    throw std::invalid_argument("exact_wiener(): node out of range");
  }
  assert_hermitian(psd.matrix, 1e-10, "exact_wiener()");

  Eigen::LLT<Eigen::MatrixXcd> llt(psd.matrix);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("exact_wiener(): spectral matrix is not positive definite");
  }
  const Eigen::MatrixXcd precision = llt.solve(Eigen::MatrixXcd::Identity(p1, p1));

  const std::vector<int> cols = design_column_nodes(node, p1);
  WienerEstimate out;
  out.node = node;
  out.lambda = 0.0;
  out.coefficients.resize(p1 - 1);
  const Complex pivot = precision(node, node);
  for (int l = 0; l < p1 - 1; ++l) {
    out.coefficients(l) = -precision(node, cols[l]) / pivot;
  }

  // Covariance route: regress the node's coefficient on the remaining
  // nodes' and require agreement with the precision formula.
  Eigen::MatrixXcd phi_rest(p1 - 1, p1 - 1);
  Eigen::VectorXcd phi_cross(p1 - 1);
  for (int a = 0; a < p1 - 1; ++a) {
    phi_cross(a) = psd.matrix(cols[a], node);
    for (int b = 0; b < p1 - 1; ++b) phi_rest(a, b) = psd.matrix(cols[a], cols[b]);
  }
  const Eigen::VectorXcd regression = phi_rest.llt().solve(phi_cross).conjugate();
  const double mismatch = (regression - out.coefficients).cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, out.coefficients.cwiseAbs().maxCoeff());
  if (mismatch > 1e-10 * scale) {
    throw std::runtime_error(
        "exact_wiener(): precision and covariance routes disagree (gap " +
        std::to_string(mismatch) + "); spectral matrix is ill-conditioned");
  }
  return out;
}

WienerEstimate to_design_scale(const WienerEstimate& raw, const SpectralDesign& design) {
  if (raw.node != design.node) {
    throw std::invalid_argument("to_design_scale(): estimate/design node mismatch");
  }
  if (raw.coefficients.size() != design.regressor_count()) {
    throw std::invalid_argument("to_design_scale(): coefficient count mismatch");
  }
  WienerEstimate out = raw;
  for (int l = 0; l < design.regressor_count(); ++l) {
    out.coefficients(l) = raw.coefficients(l) * design.column_scales(l) / design.response_scale;
  }
  return out;
}

WienerEstimate to_raw_scale(const WienerEstimate& estimate, const SpectralDesign& design) {
  if (estimate.node != design.node) {
    throw std::invalid_argument("to_raw_scale(): estimate/design node mismatch");
  }
  if (estimate.coefficients.size() != design.regressor_count()) {
    throw std::invalid_argument("to_raw_scale(): coefficient count mismatch");
  }
  WienerEstimate out = estimate;
  for (int l = 0; l < design.regressor_count(); ++l) {
    out.coefficients(l) = estimate.coefficients(l) * design.response_scale / design.column_scales(l);
  }
  return out;
}

EdgeSet cig_baseline(const SpectralMatrix& psd, double threshold) {
  const int p1 = psd.node_count();
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(psd.matrix);
  if (!lu.isInvertible()) {
    throw std::runtime_error("cig_baseline(): spectral matrix estimate is singular");
  }
  const Eigen::MatrixXcd precision = lu.inverse();
  EdgeSet out;
  for (int i = 0; i < p1; ++i) {
    for (int j = i + 1; j < p1; ++j) {
      if (std::abs(precision(i, j)) >= threshold) out.insert({i, j});
    }
  }
  return out;
}

RecoveryResult threshold_topology(const std::vector<WienerEstimate>& estimates, double tau1,
                                  double tau2) {
  const int p1 = static_cast<int>(estimates.size());
  if (p1 < 2) {
    throw std::invalid_argument("threshold_topology(): need estimates for at least two nodes");
  }
  std::vector<const WienerEstimate*> by_node(p1, nullptr);
  for (const auto& est : estimates) {
    if (est.node < 0 || est.node >= p1) {
      throw std::invalid_argument("threshold_topology(): estimate node " +
                                  std::to_string(est.node) + " out of range for " +
                                  std::to_string(p1) + " nodes");
    }
    by_node[est.node] = &est;
  }
  for (int i = 0; i < p1; ++i) {
    if (by_node[i] == nullptr) {
      throw std::invalid_argument("threshold_topology(): missing estimate for node " +
                                  std::to_string(i));
    }
    if (by_node[i]->coefficients.size() != p1 - 1) {
      throw std::invalid_argument("threshold_topology(): estimate for node " + std::to_string(i) +
                                  " has inconsistent length");
    }
  }

  // coefficient of node j inside node i's estimate
  auto coeff = [&](int i, int j) {
    const int l = j < i ? j : j - 1;
    return by_node[i]->coefficients(l);
  };

  RecoveryResult out;
  out.tau1 = tau1;
  out.tau2 = tau2;
  for (int i = 0; i < p1; ++i) {
    for (int j = i + 1; j < p1; ++j) {
      PairScore score;
      score.i = i;
      score.j = j;
      score.magnitude_score = std::abs(coeff(i, j)) + std::abs(coeff(j, i));
      score.imag_score = std::abs(coeff(i, j).imag()) + std::abs(coeff(j, i).imag());
      out.scores.push_back(score);
      if (score.magnitude_score >= tau1) {
        out.E_M_hat.insert({i, j});
        if (score.imag_score >= tau2) out.E_hat.insert({i, j});
      }
    }
  }
  return out;
}

double suggest_threshold_by_gap(std::vector<double> scores) {
  if (scores.size() < 2) {
    throw std::invalid_argument("suggest_threshold_by_gap(): need at least two scores");
  }
  std::sort(scores.begin(), scores.end());
  double best_gap = -1.0;
  double threshold = scores.back();
  for (std::size_t k = 0; k + 1 < scores.size(); ++k) {
    const double gap = scores[k + 1] - scores[k];
    if (gap > best_gap) {
      best_gap = gap;
      threshold = 0.5 * (scores[k] + scores[k + 1]);
    }
  }
  return threshold;
}

void export_recovery_csv(const RecoveryResult& result, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("export_recovery_csv(): cannot open " + path);
  }
  out << "i,j,magnitude_score,imag_score,in_E_M_hat,in_E_hat\n";
  char buf[64];
  for (const auto& s : result.scores) {
    const NodePair pr{s.i, s.j};
    out << (s.i + 1) << "," << (s.j + 1);
    std::snprintf(buf, sizeof(buf), "%.17g", s.magnitude_score);
    out << "," << buf;
    std::snprintf(buf, sizeof(buf), "%.17g", s.imag_score);
    out << "," << buf;
    out << "," << (result.E_M_hat.count(pr) ? 1 : 0) << "," << (result.E_hat.count(pr) ? 1 : 0)
        << "\n";
  }
  if (!out) {
    throw std::runtime_error("export_recovery_csv(): write failed for " + path);
  }
}

}  // namespace netlds
