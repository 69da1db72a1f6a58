#include "netlds/trajectory.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace netlds {

namespace {

constexpr char kMagic[4] = {'W', 'T', 'B', '1'};

template <typename T>
void write_le(std::ofstream& out, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  char buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
  out.write(buf, sizeof(T));
}

template <typename T>
T read_le(std::ifstream& in, const char* field) {
  char buf[sizeof(T)];
  in.read(buf, sizeof(T));
  if (in.gcount() != static_cast<std::streamsize>(sizeof(T))) {
    throw std::runtime_error(std::string("load_batch(): truncated header field ") + field);
  }
  T value;
  std::memcpy(&value, buf, sizeof(T));
  return value;
}

}  // namespace

const char* regime_name(Regime regime) {
  return regime == Regime::restart_record ? "iid" : "consecutive";
}

Regime regime_from_name(const std::string& name) {
  if (name == "iid" || name == "restart_record" || name == "restart") return Regime::restart_record;
  if (name == "consecutive") return Regime::consecutive;
  throw std::invalid_argument("regime_from_name(): unknown regime '" + name + "'");
}

TrajectoryBatch::TrajectoryBatch(Regime regime, int n, int N, int p1, std::uint64_t seed,
                                 int burn_in, std::vector<double> data)
    : regime_(regime), n_(n), N_(N), p1_(p1), seed_(seed), burn_in_(burn_in), data_(std::move(data)) {
  if (n < 1 || N < 1 || p1 < 1) {
    throw std::invalid_argument("TrajectoryBatch(): n, N, p1 must be >= 1");
  }
  const std::size_t expected = static_cast<std::size_t>(n) * N * p1;
  if (data_.size() != expected) {
    throw std::invalid_argument("TrajectoryBatch(): data size " + std::to_string(data_.size()) +
                                " does not match n*N*p1 = " + std::to_string(expected));
  }
}

void save_batch(const TrajectoryBatch& batch, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("save_batch(): cannot open " + path);
  }
  out.write(kMagic, 4);
  write_le<std::uint8_t>(out, static_cast<std::uint8_t>(batch.regime()));
  write_le<std::uint32_t>(out, static_cast<std::uint32_t>(batch.trajectory_count()));
  write_le<std::uint32_t>(out, static_cast<std::uint32_t>(batch.samples_per_trajectory()));
  write_le<std::uint32_t>(out, static_cast<std::uint32_t>(batch.node_count()));
  write_le<std::uint64_t>(out, batch.seed());
  write_le<std::uint32_t>(out, static_cast<std::uint32_t>(batch.burn_in()));
  out.write(reinterpret_cast<const char*>(batch.data().data()),
            static_cast<std::streamsize>(batch.data().size() * sizeof(double)));
  if (!out) {
    throw std::runtime_error("save_batch(): write failed for " + path);
  }
}

TrajectoryBatch load_batch(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("load_batch(): cannot open " + path);
  }
  char magic[4];
  in.read(magic, 4);
  if (in.gcount() != 4 || std::memcmp(magic, kMagic, 4) != 0) {
    throw std::runtime_error("load_batch(): bad magic in " + path);
  }
  const auto regime_raw = read_le<std::uint8_t>(in, "regime");
  if (regime_raw > 1) {
    throw std::runtime_error("load_batch(): unknown regime tag " + std::to_string(regime_raw));
  }
  const auto n = read_le<std::uint32_t>(in, "n");
  const auto N = read_le<std::uint32_t>(in, "N");
  const auto p1 = read_le<std::uint32_t>(in, "p1");
  const auto seed = read_le<std::uint64_t>(in, "seed");
  const auto burn_in = read_le<std::uint32_t>(in, "burn_in");
  const std::size_t count = static_cast<std::size_t>(n) * N * p1;
  std::vector<double> data(count);
  in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(count * sizeof(double)));
  if (in.gcount() != static_cast<std::streamsize>(count * sizeof(double))) {
    throw std::runtime_error("load_batch(): truncated data section in " + path);
  }
  return TrajectoryBatch(static_cast<Regime>(regime_raw), static_cast<int>(n), static_cast<int>(N),
                         static_cast<int>(p1), seed, static_cast<int>(burn_in), std::move(data));
}

void export_batch_csv(const TrajectoryBatch& batch, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("export_batch_csv(): cannot open " + path);
  }
  out << "trajectory,sample";
  for (int i = 0; i < batch.node_count(); ++i) out << ",node_" << i;
  out << "\n";
  char buf[32];
  for (int r = 0; r < batch.trajectory_count(); ++r) {
    for (int k = 0; k < batch.samples_per_trajectory(); ++k) {
      out << r << "," << k;
      for (int i = 0; i < batch.node_count(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", batch.value(r, k, i));
        out << "," << buf;
      }
      out << "\n";
    }
  }
  if (!out) {
    throw std::runtime_error("export_batch_csv(): write failed for " + path);
  }
}

}  // namespace netlds
