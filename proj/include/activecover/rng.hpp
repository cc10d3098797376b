#pragma once

// Deterministic randomness. Everything is built on the splitmix64 stream
// (Steele, Lea & Vigna): 64-bit state advanced by the golden-gamma constant
// and finalized with two xor-shift-multiply rounds. All randomness in the
// library flows from explicit seeds; there is no ambient entropy. Integer
// outputs are platform-independent bit for bit; floating-point mappings use
// IEEE-754 doubles only.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "activecover/errors.hpp"

namespace activecover {

// splitmix64 output finalizer: xor-shift-multiply rounds with shifts 30/27/31.
constexpr std::uint64_t splitmix64_finalize(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Mixes two words into one under 64-bit wraparound; derives per-trial seeds
// and per-stream sub-seeds. mix64(a, b) = finalize(a + (b+1) * golden gamma).
constexpr std::uint64_t mix64(std::uint64_t a, std::uint64_t b) noexcept {
  return splitmix64_finalize(a + (b + 1) * 0x9E3779B97F4A7C15ull);
}

// Stream ids keeping independent consumers of the same user-facing seed
// decorrelated: dataset sampling and learner decisions each get a stream.
inline constexpr std::uint64_t kStreamDataset = 0;
inline constexpr std::uint64_t kStreamLearner = 1;

class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : state_(mix64(seed, stream)) {}

  std::uint64_t next_u64() noexcept {
    state_ += 0x9E3779B97F4A7C15ull;
    return splitmix64_finalize(state_);
  }

  // Uniform on [0, 1) with 53 random bits.
  double next_double() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Unbiased uniform integer in [0, bound) via rejection below 2^64 mod bound.
  std::uint64_t next_below(std::uint64_t bound) {
    if (bound == 0) throw ArgumentError("next_below: bound must be positive");
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  // Standard normal deviate, Marsaglia polar method; the second value of each
  // generated pair is cached and returned by the next call.
  double next_normal() noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * next_double() - 1.0;
      v = 2.0 * next_double() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double scale = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * scale;
    has_spare_ = true;
    return u * scale;
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// First m entries of a seeded uniform shuffle of {0, ..., n-1} (partial
// Fisher-Yates); m = n yields a full random permutation.
inline std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t m,
                                                           Rng& rng) {
  if (m > n) throw ArgumentError("sample_without_replacement: m exceeds n");
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < m && i + 1 < n; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.next_below(n - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(m);
  return idx;
}

}  // namespace activecover
