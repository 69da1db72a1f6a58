#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <filesystem>
#include <string>

#include "netlds/graph.hpp"
#include "netlds/lds_model.hpp"

namespace netlds::testing {

// Canonical 3-node chain model used across suites: asymmetric couplings,
// mildly uneven gains, stable.
inline LdsModel chain3_model() {
  LdsModel model;
  model.h = Eigen::MatrixXd::Zero(3, 3);
  model.h << 0.30, 0.25, 0.00,
             0.15, 0.25, 0.20,
             0.00, 0.30, 0.35;
  model.noise_gain = Eigen::VectorXd::Ones(3);
  model.noise_gain << 1.0, 1.1, 0.9;
  model.theta0 = 1.0;
  model.theta1 = -0.3;
  model.validate();
  return model;
}

inline Graph chain3_graph() { return chain_graph(3); }

// Scratch directory for file round-trip tests.
inline std::string temp_path(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "netlds_tests";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

inline double rel_gap(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace netlds::testing
