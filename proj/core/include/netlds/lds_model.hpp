#pragma once

#include <Eigen/Core>
#include <cstdint>

#include "netlds/graph.hpp"

namespace netlds {

/// First-order networked linear dynamics
///   x(k+1) = h x(k) + e(k),
/// driven per node by an order-1 moving average of unit-variance
/// Gaussian innovations,
///   e_i(k) = gain_i * (theta0 w_i(k) + theta1 w_i(k-1)),
/// with innovations independent across nodes.
///
/// The off-diagonal support of h must be symmetric as a pattern (the two
/// directed weights h_ij, h_ji may differ) and equals the edge set of the
/// interaction graph.
struct LdsModel {
  Eigen::MatrixXd h;           // (p+1) x (p+1) weighted adjacency incl. diagonal
  Eigen::VectorXd noise_gain;  // per-node positive scale
  double theta0 = 1.0;
  double theta1 = 0.0;

  int node_count() const { return static_cast<int>(h.rows()); }

  double spectral_radius() const;

  /// Stability and shape checks. Throws on spectral radius >= 1 - 1e-6,
  /// non-positive gains, or an asymmetric off-diagonal support pattern.
  void validate() const;

  /// Throws if the off-diagonal support of h differs from g's edges.
  void validate_support(const Graph& g) const;

  /// Graph read off the off-diagonal support of h.
  Graph derived_graph() const;
};

/// Deterministic weight rule used by the experiment harness: every edge
/// (i, j) with i < j gets h_ij = w (1 + asymmetry), h_ji = w (1 - asymmetry),
/// h_ii = self_weight, and the whole matrix is rescaled so the spectral
/// radius equals target_rho when target_rho > 0.
struct WeightRule {
  double self_weight = 0.2;
  double coupling = 0.08;
  double asymmetry = 0.7;
  double target_rho = 0.45;  // <= 0 disables rescaling
  double theta0 = 1.0;
  double theta1 = -0.3;
  double gain = 1.0;
};

LdsModel model_from_rule(const Graph& g, const WeightRule& rule);

/// Random stable model for tests: diagonal and both directed weights drawn
/// independently, then rescaled to the requested spectral radius.
LdsModel random_stable_model(const Graph& g, std::uint64_t seed, double rho_target = 0.6,
                             double theta0 = 1.0, double theta1 = -0.3);

}  // namespace netlds
