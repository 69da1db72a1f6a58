#include "netlds/noise.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace netlds {

double GaussianStream::next() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = rng_.next_unit();
  const double u2 = rng_.next_unit();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(angle);
  has_spare_ = true;
  return r * std::cos(angle);
}

std::uint64_t innovation_stream_key(std::uint64_t seed, int node, std::uint64_t trajectory) {
  const std::uint64_t a = derive_seed(seed, static_cast<std::uint64_t>(node) + 1);
  return derive_seed(a, trajectory + 0x9d5ULL);
}

MaNoiseStream::MaNoiseStream(double gain, double theta0, double theta1, std::uint64_t key)
    : gain_(gain), theta0_(theta0), theta1_(theta1), stream_(key) {
  prev_w_ = stream_.next();  // w(-1)
}

double MaNoiseStream::next() {
  const double w = stream_.next();
  const double e = gain_ * (theta0_ * w + theta1_ * prev_w_);
  prev_w_ = w;
  return e;
}

Eigen::MatrixXd sample_noise(const LdsModel& model, int length, std::uint64_t seed,
                             std::uint64_t trajectory) {
  if (length < 1) {
    throw std::invalid_argument("sample_noise(): length must be >= 1");
  }
  const int n = model.node_count();
  Eigen::MatrixXd e(length, n);
  for (int i = 0; i < n; ++i) {
    MaNoiseStream stream(model.noise_gain(i), model.theta0, model.theta1,
                         innovation_stream_key(seed, i, trajectory));
    for (int k = 0; k < length; ++k) e(k, i) = stream.next();
  }
  return e;
}

}  // namespace netlds
