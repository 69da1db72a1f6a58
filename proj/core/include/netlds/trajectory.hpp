#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

namespace netlds {

enum class Regime : std::uint8_t { restart_record = 0, consecutive = 1 };

const char* regime_name(Regime regime);
Regime regime_from_name(const std::string& name);

/// n recorded trajectories of N samples over p1 nodes. Data is stored
/// row-major as [trajectory][sample][node] and is immutable after creation.
///
/// In the consecutive regime the n trajectories are contiguous slices of a
/// single run; in the restart regime each has its own burn-in and
/// independent innovation streams.
class TrajectoryBatch {
 public:
  TrajectoryBatch(Regime regime, int n, int N, int p1, std::uint64_t seed, int burn_in,
                  std::vector<double> data);

  Regime regime() const { return regime_; }
  int trajectory_count() const { return n_; }
  int samples_per_trajectory() const { return N_; }
  int node_count() const { return p1_; }
  std::uint64_t seed() const { return seed_; }
  int burn_in() const { return burn_in_; }
  const std::vector<double>& data() const { return data_; }

  double value(int trajectory, int sample, int node) const {
    return data_[(static_cast<std::size_t>(trajectory) * N_ + sample) * p1_ + node];
  }

  /// Trajectory r as a (p1 x N) matrix view; column k is the state x(k).
  Eigen::Map<const Eigen::MatrixXd> trajectory(int r) const {
    return Eigen::Map<const Eigen::MatrixXd>(data_.data() + static_cast<std::size_t>(r) * N_ * p1_,
                                             p1_, N_);
  }

 private:
  Regime regime_;
  int n_, N_, p1_;
  std::uint64_t seed_;
  int burn_in_;
  std::vector<double> data_;
};

/// Binary batch format: magic "WTB1", then a little-endian header
/// {regime:u8, n:u32, N:u32, p1:u32, seed:u64, burn_in:u32}, then
/// n*N*p1 doubles in row-major [trajectory][sample][node] order.
void save_batch(const TrajectoryBatch& batch, const std::string& path);
TrajectoryBatch load_batch(const std::string& path);

/// CSV export: header "trajectory,sample,node_0,..,node_<p>", one row per
/// (trajectory, sample).
void export_batch_csv(const TrajectoryBatch& batch, const std::string& path);

}  // namespace netlds
