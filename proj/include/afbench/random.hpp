#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <random>
#include <vector>

#include "afbench/matrix.hpp"

namespace afbench {

/// SplitMix64 finalizer. Used to derive seeds; bijective on 64-bit values.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Folds a list of 64-bit words into one seed with mix64. Order-sensitive.
std::uint64_t derive_seed(std::initializer_list<std::uint64_t> words) noexcept;

/// Deterministic random stream.
///
/// Engine: std::mt19937_64 seeded with mix64(seed). Its output sequence is
/// fixed by the C++ standard, but the standard distributions are not, so all
/// distributions here are written out by hand:
///   uniform01   (raw >> 11) * 2^-53, in [0, 1)
///   normal      Box-Muller on two uniforms, the sine half cached for the next draw
///   index(n)    rejection sampling on the top of the 64-bit range
/// A stream is single-owner; parallel work should use child(i).
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }

  /// Independent stream seeded from (seed, index).
  [[nodiscard]] RandomStream child(std::uint64_t index) const;

  std::uint64_t next_u64();
  double uniform01();
  double uniform(double lo, double hi);
  double normal();
  /// Uniform integer in [0, n). n must be positive.
  std::size_t index(std::size_t n);

  /// Fisher-Yates permutation of 0..n-1.
  std::vector<std::size_t> permutation(std::size_t n);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::optional<double> spare_normal_;
};

/// rows x cols draws from [lo, hi). lo == hi yields a constant matrix.
Matrix rng_uniform(RandomStream& s, double lo, double hi, std::size_t rows, std::size_t cols);
Matrix rng_normal(RandomStream& s, double mean, double stddev, std::size_t rows, std::size_t cols);
/// Entries are 1 with probability keep_prob, else 0.
Matrix rng_bernoulli_mask(RandomStream& s, double keep_prob, std::size_t rows, std::size_t cols);

}  // namespace afbench
