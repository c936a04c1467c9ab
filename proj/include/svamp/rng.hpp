#pragma once

#include <cstdint>
#include <random>

namespace svamp {

/// splitmix64 finalizer; used to derive independent stream seeds.
std::uint64_t mix_seed(std::uint64_t x);

/// Seed for sub-stream `index` of a master seed (trials, devices, adversary).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

// Thin wrapper over mt19937_64. Only the engine's raw output is used so the
// produced streams are identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p_one) { return uniform() < p_one; }

  int bit(double p_one) { return bernoulli(p_one) ? 1 : 0; }

  /// Uniform integer in [0, bound) by rejection.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

}  // namespace svamp
