#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "dcki/common.hpp"

namespace dcki {

/// Named random streams. Every consumer of randomness draws from its own
/// stream so that adding draws in one place never shifts another.
enum class Purpose : std::uint64_t {
  kPartition = 1,
  kAnchorSelect = 2,
  kSmote = 3,
  kObfuscator = 4,
  kMlpInit = 5,
  kMlpSplit = 6,
  kMlpShuffle = 7,
  kAttackEval = 8,
  kSynthetic = 9,
  kOracle = 10,
  kTest = 11,
};

/// Counter-based 64-bit generator: the n-th output (n = 1, 2, ...) is
/// splitmix64_mix(key + n * 0x9E3779B97F4A7C15), i.e. splitmix64 seeded with
/// `key`. Streams are split by
/// deriving the key from (seed, purpose, index):
///
///   k0  = mix(seed ^ 0x6A09E667F3BCC909)
///   k1  = mix(k0 ^ purpose * 0x9E3779B97F4A7C15)
///   key = mix(k1 ^ (index * 0xBF58476D1CE4E5B9 + 1))
///
/// where `index` is typically the party id (0 when unused).
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t key) noexcept : key_(key) {}

  static CounterRng stream(std::uint64_t seed, Purpose purpose,
                           std::uint64_t index = 0) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept;

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() noexcept;
  double uniform(double lo, double hi) noexcept;
  /// Unbiased uniform integer in [0, n).
  std::uint64_t uniform_index(std::uint64_t n) noexcept;
  double normal() noexcept;

  /// Split off an independent child stream.
  CounterRng split(std::uint64_t index) noexcept;

  [[nodiscard]] std::uint64_t key() const noexcept { return key_; }
  [[nodiscard]] std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t splitmix64_mix(std::uint64_t z) noexcept;

/// Fisher-Yates permutation of 0..n-1.
std::vector<Index> random_permutation(Index n, CounterRng& rng);

/// k distinct indices from 0..n-1, in draw order.
std::vector<Index> sample_without_replacement(Index n, Index k,
                                              CounterRng& rng);

Matrix random_normal(Index rows, Index cols, CounterRng& rng);

/// Haar-distributed n x k matrix with orthonormal columns.
Matrix random_orthonormal(Index n, Index k, CounterRng& rng);

}  // namespace dcki
