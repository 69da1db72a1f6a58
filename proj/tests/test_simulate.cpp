#include <doctest.h>

#include <Eigen/Dense>
#include <fstream>

#include "netlds/autocorr.hpp"
#include "netlds/noise.hpp"
#include "netlds/simulate.hpp"
#include "netlds/trajectory.hpp"
#include "support.hpp"

using namespace netlds;
using netlds::testing::chain3_graph;
using netlds::testing::chain3_model;

namespace {

LdsModel white_model(int nodes, double theta1 = 0.0) {
  LdsModel m;
  m.h = Eigen::MatrixXd::Zero(nodes, nodes);
  m.noise_gain = Eigen::VectorXd::Ones(nodes);
  m.theta0 = 1.0;
  m.theta1 = theta1;
  return m;
}

// Sample autocovariance at a lag of one scalar series.
double sample_autocov(const Eigen::VectorXd& x, int lag) {
  const int n = static_cast<int>(x.size());
  double acc = 0.0;
  for (int k = 0; k + lag < n; ++k) acc += x(k) * x(k + lag);
  return acc / (n - lag);
}

}  // namespace

TEST_SUITE_BEGIN("simulate");

TEST_CASE("exogenous input matches order-1 moving-average autocovariances") {
  const auto model = white_model(2, -0.3);
  const int len = 200000;
  const Eigen::MatrixXd e = sample_noise(model, len, 99);
  for (int i = 0; i < 2; ++i) {
    const Eigen::VectorXd col = e.col(i);
    // gamma(0) = theta0^2 + theta1^2, gamma(1) = theta0 theta1, gamma(2) = 0
    CHECK(sample_autocov(col, 0) == doctest::Approx(1.09).epsilon(0.03));
    CHECK(sample_autocov(col, 1) == doctest::Approx(-0.3).epsilon(0.06));
    CHECK(std::abs(sample_autocov(col, 2)) < 4.0 / std::sqrt(static_cast<double>(len)) * 1.2);
  }
}

TEST_CASE("white exogenous input has vanishing lag-1 autocovariance") {
  const auto model = white_model(1, 0.0);
  const int len = 100000;
  const Eigen::MatrixXd e = sample_noise(model, len, 7);
  CHECK(std::abs(sample_autocov(e.col(0), 1)) < 4.0 / std::sqrt(static_cast<double>(len)));
}

TEST_CASE("decoupled white model records i.i.d. standard normal samples") {
  const auto model = white_model(3);
  const Graph g(3, {});
  const int n = 16, N = 4096;
  const TrajectoryBatch batch = simulate(model, g, Regime::restart_record, n, N, 21);
  const double total = static_cast<double>(n) * N;

  Eigen::VectorXd all(n * N);
  double lag1 = 0.0;
  int lag1_count = 0;
  for (int r = 0; r < n; ++r) {
    for (int k = 0; k < N; ++k) {
      all(r * N + k) = batch.value(r, k, 0);
      if (k + 1 < N) {
        lag1 += batch.value(r, k, 0) * batch.value(r, k + 1, 0);
        ++lag1_count;
      }
    }
  }
  CHECK(std::abs(all.mean()) < 4.0 / std::sqrt(total));
  CHECK(all.squaredNorm() / total == doctest::Approx(1.0).epsilon(0.05));
  CHECK(std::abs(lag1 / lag1_count) < 4.0 / std::sqrt(total));
}

TEST_CASE("restarted trajectories are uncorrelated across records") {
  const auto model = chain3_model();
  const Graph g = chain3_graph();
  const int N = 8192;
  const TrajectoryBatch batch = simulate(model, g, Regime::restart_record, 2, N, 5);
  for (int i = 0; i < 3; ++i) {
    double cross = 0.0;
    double v0 = 0.0, v1 = 0.0;
    for (int k = 0; k < N; ++k) {
      cross += batch.value(0, k, i) * batch.value(1, k, i);
      v0 += batch.value(0, k, i) * batch.value(0, k, i);
      v1 += batch.value(1, k, i) * batch.value(1, k, i);
    }
    const double corr = cross / std::sqrt(v0 * v1);
    CHECK(std::abs(corr) < 4.0 / std::sqrt(static_cast<double>(N)));
  }
}

TEST_CASE("consecutive run reproduces the analytic lag-1 autocovariance") {
  const auto model = chain3_model();
  const Graph g = chain3_graph();
  const int n = 64, N = 512;
  const TrajectoryBatch batch = simulate(model, g, Regime::consecutive, n, N, 17);
  const AutocorrSequence seq = analytic_autocorr(model, 1);

  const long long T = static_cast<long long>(n) * N;
  Eigen::MatrixXd lag1 = Eigen::MatrixXd::Zero(3, 3);
  for (long long k = 0; k + 1 < T; ++k) {
    const int r0 = static_cast<int>(k / N), k0 = static_cast<int>(k % N);
    const int r1 = static_cast<int>((k + 1) / N), k1 = static_cast<int>((k + 1) % N);
    Eigen::Vector3d a, b;
    for (int i = 0; i < 3; ++i) {
      a(i) = batch.value(r1, k1, i);
      b(i) = batch.value(r0, k0, i);
    }
    lag1 += a * b.transpose();
  }
  lag1 /= static_cast<double>(T - 1);
  const double tol = 5.0 * spectral_norm(seq.at(0)) / std::sqrt(static_cast<double>(T));
  CHECK(spectral_norm(Eigen::MatrixXd(lag1 - seq.at(1))) < tol);
}

TEST_CASE("long consecutive run converges to the stationary covariance") {
  const auto model = chain3_model();
  const Graph g = chain3_graph();
  const int n = 256, N = 256;
  const TrajectoryBatch batch = simulate(model, g, Regime::consecutive, n, N, 23);
  const AutocorrSequence seq = analytic_autocorr(model, 0);

  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(3, 3);
  for (int r = 0; r < n; ++r) {
    const auto traj = batch.trajectory(r);
    cov += traj * traj.transpose();
  }
  const double T = static_cast<double>(n) * N;
  cov /= T;
  const double tol = 5.0 * spectral_norm(seq.at(0)) / std::sqrt(T);
  CHECK(spectral_norm(Eigen::MatrixXd(cov - seq.at(0))) < tol);
}

TEST_CASE("single-trajectory batches agree across regimes") {
  const auto model = chain3_model();
  const Graph g = chain3_graph();
  const TrajectoryBatch a = simulate(model, g, Regime::restart_record, 1, 257, 31);
  const TrajectoryBatch b = simulate(model, g, Regime::consecutive, 1, 257, 31);
  CHECK(a.data() == b.data());
}

TEST_CASE("identical seeds reproduce bit-identical batches") {
  const auto model = chain3_model();
  const Graph g = chain3_graph();
  const TrajectoryBatch a = simulate(model, g, Regime::consecutive, 8, 64, 11);
  const TrajectoryBatch b = simulate(model, g, Regime::consecutive, 8, 64, 11);
  CHECK(a.data() == b.data());
  const TrajectoryBatch c = simulate(model, g, Regime::consecutive, 8, 64, 12);
  CHECK(a.data() != c.data());
}

TEST_CASE("unstable and mismatched models are rejected") {
  LdsModel model = chain3_model();
  model.h(0, 0) = 1.2;
  CHECK_THROWS_AS(simulate(model, chain3_graph(), Regime::consecutive, 1, 8, 1),
                  std::invalid_argument);

  // support mismatch: model says chain, graph says triangle
  EdgeSet tri{{0, 1}, {0, 2}, {1, 2}};
  CHECK_THROWS_AS(simulate(chain3_model(), Graph(3, tri), Regime::consecutive, 1, 8, 1),
                  std::invalid_argument);

  LdsModel asym = chain3_model();
  asym.h(0, 1) = 0.0;  // breaks pattern symmetry
  CHECK_THROWS_AS(asym.validate(), std::invalid_argument);
}

TEST_CASE("batch file round trip is lossless") {
  const auto model = chain3_model();
  const TrajectoryBatch batch = simulate(model, chain3_graph(), Regime::consecutive, 4, 33, 77);
  const auto path = netlds::testing::temp_path("batch.wtb");
  save_batch(batch, path);
  const TrajectoryBatch loaded = load_batch(path);
  CHECK(loaded.data() == batch.data());
  CHECK(loaded.regime() == batch.regime());
  CHECK(loaded.seed() == batch.seed());
  CHECK(loaded.burn_in() == batch.burn_in());
  CHECK(loaded.trajectory_count() == 4);
  CHECK(loaded.samples_per_trajectory() == 33);

  const TrajectoryBatch other = simulate(model, chain3_graph(), Regime::restart_record, 4, 33, 77);
  save_batch(other, path);
  CHECK(load_batch(path).regime() == Regime::restart_record);
}

TEST_CASE("truncated batch files are rejected") {
  const auto model = chain3_model();
  const TrajectoryBatch batch = simulate(model, chain3_graph(), Regime::consecutive, 2, 16, 3);
  const auto path = netlds::testing::temp_path("trunc.wtb");
  save_batch(batch, path);

  std::ifstream in(path, std::ios::binary);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  in.close();
  std::ofstream out(path, std::ios::binary);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size() / 2));
  out.close();
  CHECK_THROWS_AS(load_batch(path), std::runtime_error);

  std::ofstream bad(path, std::ios::binary);
  bad << "XXXX";
  bad.close();
  CHECK_THROWS_AS(load_batch(path), std::runtime_error);
}

TEST_CASE("csv export writes one row per sample") {
  const auto model = chain3_model();
  const TrajectoryBatch batch = simulate(model, chain3_graph(), Regime::consecutive, 2, 5, 3);
  const auto path = netlds::testing::temp_path("batch.csv");
  export_batch_csv(batch, path);
  std::ifstream in(path);
  int lines = 0;
  std::string line;
  while (std::getline(in, line)) ++lines;
  CHECK(lines == 1 + 2 * 5);
}

TEST_SUITE_END();
