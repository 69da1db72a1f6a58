#include "netlds/lds_model.hpp"

#include <Eigen/Eigenvalues>
#include <stdexcept>

#include "netlds/rng.hpp"

namespace netlds {

double LdsModel::spectral_radius() const {
  if (h.rows() == 0) return 0.0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(h, /*computeEigenvectors=*/false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

void LdsModel::validate() const {
  if (h.rows() != h.cols() || h.rows() < 1) {
    throw std::invalid_argument("LdsModel::validate(): h must be square and non-empty");
  }
  if (noise_gain.size() != h.rows()) {
    throw std::invalid_argument("LdsModel::validate(): noise_gain size mismatch");
  }
  if ((noise_gain.array() <= 0.0).any()) {
    throw std::invalid_argument("LdsModel::validate(): noise_gain entries must be > 0");
  }
  const double rho = spectral_radius();
  if (rho >= 1.0 - 1e-6) {
    throw std::invalid_argument(
        "LdsModel::validate(): spectral radius " + std::to_string(rho) +
        " >= 1 - 1e-6; states are not wide-sense stationary");
  }
  const int n = node_count();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const bool ij = h(i, j) != 0.0;
      const bool ji = h(j, i) != 0.0;
      if (ij != ji) {
        throw std::invalid_argument("LdsModel::validate(): off-diagonal support of h is not symmetric at (" +
                                    std::to_string(i) + "," + std::to_string(j) + ")");
      }
    }
  }
}

void LdsModel::validate_support(const Graph& g) const {
  if (g.node_count() != node_count()) {
    throw std::invalid_argument("LdsModel::validate_support(): node count mismatch");
  }
  const int n = node_count();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const bool weighted = h(i, j) != 0.0 || h(j, i) != 0.0;
      if (weighted != g.has_edge(i, j)) {
        throw std::invalid_argument("LdsModel::validate_support(): h support differs from graph at (" +
                                    std::to_string(i) + "," + std::to_string(j) + ")");
      }
    }
  }
}

Graph LdsModel::derived_graph() const {
  EdgeSet edges;
  const int n = node_count();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (h(i, j) != 0.0 || h(j, i) != 0.0) edges.insert({i, j});
    }
  }
  return Graph(n, std::move(edges));
}

namespace {

void rescale_to_radius(Eigen::MatrixXd& h, double target_rho) {
  if (target_rho <= 0.0) return;
  Eigen::EigenSolver<Eigen::MatrixXd> es(h, false);
  const double rho = es.eigenvalues().cwiseAbs().maxCoeff();
  if (rho > 0.0) h *= target_rho / rho;
}

}  // namespace

LdsModel model_from_rule(const Graph& g, const WeightRule& rule) {
  const int n = g.node_count();
  LdsModel model;
  model.h = Eigen::MatrixXd::Zero(n, n);
  model.h.diagonal().setConstant(rule.self_weight);
  for (const auto& [i, j] : g.edges()) {
    model.h(i, j) = rule.coupling * (1.0 + rule.asymmetry);
    model.h(j, i) = rule.coupling * (1.0 - rule.asymmetry);
  }
  rescale_to_radius(model.h, rule.target_rho);
  model.noise_gain = Eigen::VectorXd::Constant(n, rule.gain);
  model.theta0 = rule.theta0;
  model.theta1 = rule.theta1;
  model.validate();
  model.validate_support(g);
  return model;
}

LdsModel random_stable_model(const Graph& g, std::uint64_t seed, double rho_target,
                             double theta0, double theta1) {
  const int n = g.node_count();
  CounterRng rng(derive_seed(seed, 0x6d6f64656cULL));
  auto uniform = [&rng](double lo, double hi) { return lo + (hi - lo) * rng.next_unit(); };

  LdsModel model;
  model.h = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) model.h(i, i) = uniform(0.1, 0.5);
  for (const auto& [i, j] : g.edges()) {
    model.h(i, j) = uniform(0.2, 1.0);
    model.h(j, i) = uniform(0.2, 1.0);
  }
  rescale_to_radius(model.h, rho_target);
  model.noise_gain = Eigen::VectorXd::NullaryExpr(n, [&](Eigen::Index) { return uniform(0.8, 1.25); });
  model.theta0 = theta0;
  model.theta1 = theta1;
  model.validate();
  return model;
}

}  // namespace netlds
