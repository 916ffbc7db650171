#pragma once

#include <cstdint>
#include <random>

namespace ocsmatch {

/// Mixes a 64-bit value (splitmix64 finalizer).
std::uint64_t mix64(std::uint64_t x);

/// Derives the seed of trial `index` from a master seed. Trials get
/// independent streams regardless of the order they are executed in.
std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t index);

/// Random source used by the selectors. Conversions from raw engine output
/// are spelled out so that streams are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(mix64(seed)) {}

  void reseed(std::uint64_t seed) { engine_.seed(mix64(seed)); }

  bool coin() { return (engine_() >> 63) != 0; }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return uniform() < p; }

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
};

}  // namespace ocsmatch
