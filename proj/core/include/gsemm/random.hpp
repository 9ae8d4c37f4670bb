#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace gsemm {

/// Seeded generator with platform-independent derived draws.
///
/// std:: distributions are implementation-defined, so the few draws this
/// library needs are mapped from raw mt19937_64 output by hand. That keeps
/// trajectories and capacity tables bit-identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// +1 or -1 with equal probability.
  double sign() { return (engine_() >> 63) != 0 ? 1.0 : -1.0; }

  /// Uniform integer in [0, bound). Rejection sampling, no modulo bias.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

/// Mixes a master seed with a list of stream identifiers (splitmix64 chain).
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> stream);

}  // namespace gsemm
