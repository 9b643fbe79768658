#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "mlipuq/errors.hpp"

namespace mlipuq {

/// Mixes a 64-bit value through one splitmix64 round.  Used both to expand
/// user seeds into engine state and to derive per-purpose child seeds, so a
/// run seeded with s and a run seeded with s+1 share no streams.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Deterministic random source.  Wraps std::mt19937_64 but implements the
/// variate transforms (uniform doubles, Gaussians, shuffles, subset draws)
/// itself, because the standard library's distribution objects are not
/// bit-reproducible across implementations and seeded runs here must be.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  /// Child generator whose stream is independent of this one; `purpose`
  /// distinguishes siblings derived from the same parent seed.
  static Rng derive(std::uint64_t seed, std::uint64_t purpose) {
    return Rng(splitmix64(seed) ^ splitmix64(purpose * 0x2545f4914f6cdd1dULL + 1));
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n).  Uses rejection to avoid modulo bias.
  std::uint64_t uniform_index(std::uint64_t n) {
    if (n == 0) throw ContractViolation("Rng::uniform_index: n must be positive");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v = next_u64();
    while (v >= limit) v = next_u64();
    return v % n;
  }

  /// Standard normal via Box-Muller; caches the second variate of each pair.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  /// In-place Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T> &v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(uniform_index(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  /// Draws k distinct indices from [0, n) via a partial Fisher-Yates pass.
  /// The result order is the draw order, not sorted.
  std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k) {
    if (k > n)
      throw ContractViolation("Rng::sample_without_replacement: k exceeds n");
    std::vector<std::size_t> pool(n);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(uniform_index(n - i));
      std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    return pool;
  }

  /// Draws k indices from [0, n) with replacement.
  std::vector<std::size_t> sample_with_replacement(std::size_t n, std::size_t k) {
    if (n == 0) throw ContractViolation("Rng::sample_with_replacement: empty range");
    std::vector<std::size_t> out(k);
    for (auto &v : out) v = static_cast<std::size_t>(uniform_index(n));
    return out;
  }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace mlipuq
