#include "netlds/simulate.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "netlds/noise.hpp"

namespace netlds {

int burn_in_length(const LdsModel& model) {
  const double rho = model.spectral_radius();
  if (rho <= 0.0) return 2;  // MA(1) memory only
  const int k = static_cast<int>(std::ceil(std::log(1e-8) / std::log(rho)));
  return std::max(k, 2);
}

namespace {

// Advances x through `steps` updates x <- h x + e(k), recording the last
// `record` states into out. Streams supply one e row per step.
void run_segment(const LdsModel& model, std::vector<MaNoiseStream>& streams, std::int64_t steps,
                 std::int64_t record, Eigen::VectorXd& x, Eigen::VectorXd& e, double* out) {
  const int p1 = model.node_count();
  const std::int64_t skip = steps - record;
  for (std::int64_t k = 0; k < steps; ++k) {
    for (int i = 0; i < p1; ++i) e(i) = streams[i].next();
    x = model.h * x + e;
    if (k >= skip) {
      double* row = out + static_cast<std::size_t>(k - skip) * p1;
      for (int i = 0; i < p1; ++i) row[i] = x(i);
    }
  }
}

}  // namespace

TrajectoryBatch simulate(const LdsModel& model, const Graph& graph, Regime regime, int n, int N,
                         std::uint64_t seed) {
  model.validate();
  model.validate_support(graph);
  if (n < 1 || N < 1) {
    throw std::invalid_argument("simulate(): n and N must be >= 1");
  }

  const int p1 = model.node_count();
  const int burn = burn_in_length(model);
  std::vector<double> data(static_cast<std::size_t>(n) * N * p1);

  Eigen::VectorXd x(p1), e(p1);
  auto make_streams = [&](std::uint64_t trajectory) {
    std::vector<MaNoiseStream> streams;
    streams.reserve(p1);
    for (int i = 0; i < p1; ++i) {
      streams.emplace_back(model.noise_gain(i), model.theta0, model.theta1,
                           innovation_stream_key(seed, i, trajectory));
    }
    return streams;
  };

  if (regime == Regime::restart_record) {
    for (int r = 0; r < n; ++r) {
      auto streams = make_streams(static_cast<std::uint64_t>(r));
      x.setZero();
      run_segment(model, streams, burn + N, N, x, e, data.data() + static_cast<std::size_t>(r) * N * p1);
    }
  } else {
    auto streams = make_streams(0);
    x.setZero();
    const std::int64_t total = static_cast<std::int64_t>(n) * N;
    run_segment(model, streams, burn + total, total, x, e, data.data());
  }

  return TrajectoryBatch(regime, n, N, p1, seed, burn, std::move(data));
}

}  // namespace netlds
