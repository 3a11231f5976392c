#pragma once

#include <cstdint>
#include <random>

namespace bellkit {

/// Mixes a 64-bit word with the SplitMix64 finalizer.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed of sub-stream `stream` under master `seed`:
/// splitmix64(seed ^ splitmix64(stream)). Part of the reproducibility
/// contract, do not change.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

/// Deterministic random stream: std::mt19937_64 seeded with one 64-bit word.
///
/// Doubles are built from the top 53 bits of one engine output, so every
/// draw consumes exactly one engine step and sequences are identical across
/// standard libraries (unlike std::uniform_real_distribution).
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static Rng substream(std::uint64_t seed, std::uint64_t stream) {
    return Rng(derive_seed(seed, stream));
  }

  /// Uniform on [0, 1).
  double uniform() noexcept {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) noexcept { return uniform() < p; }

  std::uint64_t next() noexcept { return engine_(); }

private:
  std::mt19937_64 engine_;
};

}  // namespace bellkit
