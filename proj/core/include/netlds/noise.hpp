#pragma once

#include <Eigen/Core>
#include <cstdint>

#include "netlds/lds_model.hpp"
#include "netlds/rng.hpp"

namespace netlds {

/// Key of the innovation stream feeding one node within one trajectory.
/// Streams are independent across (seed, node, trajectory) triples and do
/// not depend on generation order.
std::uint64_t innovation_stream_key(std::uint64_t seed, int node, std::uint64_t trajectory);

/// Per-node MA(1) exogenous input generator:
///   e_i(k) = gain_i * (theta0 w_i(k) + theta1 w_i(k-1)),
/// where w_i are unit-variance Gaussian innovations from the node's stream.
/// The stream's first draw supplies w_i(-1), so e is stationary from k = 0.
class MaNoiseStream {
 public:
  MaNoiseStream(double gain, double theta0, double theta1, std::uint64_t key);

  double next();

 private:
  double gain_, theta0_, theta1_;
  GaussianStream stream_;
  double prev_w_;
};

/// Rows k = 0..length-1 of the exogenous input e(k) for every node, using
/// the trajectory's innovation streams.
Eigen::MatrixXd sample_noise(const LdsModel& model, int length, std::uint64_t seed,
                             std::uint64_t trajectory = 0);

}  // namespace netlds
