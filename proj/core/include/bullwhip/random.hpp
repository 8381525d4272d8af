#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace bullwhip {

/// xoshiro256++ generator with jump support.
///
/// Streams for (replication, lane) pairs are carved out of one seeded state
/// with `long_jump` (2^192 draws) per replication and `jump` (2^128 draws)
/// per lane, so two distinct streams cannot overlap unless one of them
/// consumes 2^128 values. Variates are produced by hand-written transforms
/// rather than <random> distributions so a seed gives the same sequence on
/// every standard library.
class RandomSource {
 public:
  using result_type = std::uint64_t;

  explicit RandomSource(std::uint64_t seed);

  /// Stream `lane` of replication `replication` derived from `seed`.
  static RandomSource stream(std::uint64_t seed, std::uint64_t replication,
                             std::uint64_t lane);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() { return next(); }
  std::uint64_t next();

  /// Advance by 2^128 draws.
  void jump();
  /// Advance by 2^192 draws.
  void long_jump();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01();
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi);
  /// Uniform integer on the closed range [lo, hi]; unbiased.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  /// Standard normal (Marsaglia polar method).
  double normal();

  std::uint64_t seed() const { return seed_; }

 private:
  std::array<std::uint64_t, 4> s_{};
  std::uint64_t seed_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace bullwhip
