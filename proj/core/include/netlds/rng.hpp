#pragma once

#include <cstdint>

namespace netlds {

// splitmix64 output mixer. Used as the basis of all randomness in the
// library so that results do not depend on the platform's <random>
// distributions.
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derives an independent stream seed from a master seed and an index.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64_mix(splitmix64_mix(master) ^ (index * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL));
}

// Counter-based uniform stream: the i-th output is a pure function of
// (key, i), so streams can be generated in any order.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  std::uint64_t next_u64() { return splitmix64_mix(key_ + (counter_++) * 0x9e3779b97f4a7c15ULL); }

  // Uniform in (0, 1]; never returns 0 so log() is safe.
  double next_unit() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1p-53;
  }

  std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// Standard normal draws via Box-Muller on the counter stream.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t key) : rng_(key) {}

  double next();

 private:
  CounterRng rng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace netlds
