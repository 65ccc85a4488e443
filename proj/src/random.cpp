#include "afbench/random.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "afbench/error.hpp"

namespace afbench {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::initializer_list<std::uint64_t> words) noexcept {
  std::uint64_t h = 0x6A09E667F3BCC908ULL;
  for (std::uint64_t w : words) h = mix64(h ^ mix64(w));
  return h;
}

RandomStream::RandomStream(std::uint64_t seed) : seed_(seed), engine_(mix64(seed)) {}

RandomStream RandomStream::child(std::uint64_t index) const {
  return RandomStream(derive_seed({seed_, index}));
}

std::uint64_t RandomStream::next_u64() { return engine_(); }

double RandomStream::uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform(double lo, double hi) {
  if (!(lo <= hi)) {
    throw DomainError("uniform: lo (" + std::to_string(lo) + ") exceeds hi (" +
                      std::to_string(hi) + ")");
  }
  if (lo == hi) return lo;
  const double v = lo + (hi - lo) * uniform01();
  // Rounding can land exactly on hi for wide intervals.
  return v < hi ? v : std::nextafter(hi, lo);
}

double RandomStream::normal() {
  if (spare_normal_) {
    const double v = *spare_normal_;
    spare_normal_.reset();
    return v;
  }
  const double u1 = 1.0 - uniform01();  // (0, 1]
  const double u2 = uniform01();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_normal_ = radius * std::sin(angle);
  return radius * std::cos(angle);
}

std::size_t RandomStream::index(std::size_t n) {
  if (n == 0) throw DomainError("index: empty range");
  const std::uint64_t bound = n;
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return static_cast<std::size_t>(x % bound);
}

std::vector<std::size_t> RandomStream::permutation(std::size_t n) {
  std::vector<std::size_t> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = i;
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = index(i);
    std::swap(p[i - 1], p[j]);
  }
  return p;
}

Matrix rng_uniform(RandomStream& s, double lo, double hi, std::size_t rows, std::size_t cols) {
  if (!(lo <= hi)) {
    throw DomainError("rng_uniform: lo (" + std::to_string(lo) + ") exceeds hi (" +
                      std::to_string(hi) + ")");
  }
  Matrix m(rows, cols);
  for (double& v : m.values()) v = s.uniform(lo, hi);
  return m;
}

Matrix rng_normal(RandomStream& s, double mean, double stddev, std::size_t rows, std::size_t cols) {
  if (!(stddev >= 0.0)) {
    throw DomainError("rng_normal: negative standard deviation " + std::to_string(stddev));
  }
  Matrix m(rows, cols);
  for (double& v : m.values()) v = mean + stddev * s.normal();
  return m;
}

Matrix rng_bernoulli_mask(RandomStream& s, double keep_prob, std::size_t rows, std::size_t cols) {
  if (!(keep_prob >= 0.0 && keep_prob <= 1.0)) {
    throw DomainError("rng_bernoulli_mask: keep_prob " + std::to_string(keep_prob) +
                      " outside [0, 1]");
  }
  Matrix m(rows, cols);
  for (double& v : m.values()) v = s.uniform01() < keep_prob ? 1.0 : 0.0;
  return m;
}

}  // namespace afbench
