#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace normgrid {

/// Deterministic 64-bit generator (splitmix64). All randomness in the library
/// flows through this type with explicitly passed seeds, so every result is
/// reproducible bit-for-bit across platforms, runs and thread counts. The
/// standard-library distributions are avoided on purpose: their outputs are
/// implementation-defined.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n), n >= 1, via 128-bit multiply (bias < 2^-64).
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * n) >> 64);
  }

  /// Standard normal via Box-Muller; pinned here (not std::) for determinism.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 1.0 - uniform();  // (0, 1]
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.28318530717958647692528676655900577 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  /// k distinct indices from [0, n), ascending order (partial Fisher-Yates).
  std::vector<std::size_t> sample_without_replacement(std::size_t n,
                                                      std::size_t k);

  /// Independent child stream for item `index`; independent of call order, so
  /// parallel loops can draw per-item streams and stay thread-count invariant.
  static SplitMix64 derive(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 g(seed ^ (0x9E3779B97F4A7C15ull * (index + 1)));
    g.next();
    return g;
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

inline std::vector<std::size_t> SplitMix64::sample_without_replacement(
    std::size_t n, std::size_t k) {
  std::vector<std::size_t> pool(n);
  for (std::size_t i = 0; i < n; ++i) pool[i] = i;
  for (std::size_t i = 0; i < k && i < n; ++i) {
    std::size_t j = i + static_cast<std::size_t>(below(n - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k < n ? k : n);
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace normgrid
