#pragma once

#include <cstdint>
#include <random>

namespace xweb {

/// Seeded generator with platform-independent draws. std::mt19937_64 has a
/// standardized output sequence; the distributions in <random> do not, so the
/// integer/real mappings below are spelled out to keep generated warehouses
/// byte-identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Generator for an independent named stream derived from a master seed.
  static Rng derive(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [lo, hi] (inclusive). Requires lo <= hi.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  /// Uniform real in [0, 1) with 53 bits of resolution.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// True with probability p (p outside [0,1] saturates).
  bool bernoulli(double p) { return uniform01() < p; }

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer; used to decorrelate derived seeds.
std::uint64_t mix64(std::uint64_t x);

}  // namespace xweb
