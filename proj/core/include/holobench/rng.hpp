#pragma once

#include <cstdint>
#include <span>

namespace holo {

/// Counter-based 64-bit generator. Draw i (0-based) of a stream with key k is
///
///   mix64(k + (i + 1) * 0x9E3779B97F4A7C15)
///
/// where mix64 is the SplitMix64 finalizer (xor-shift 30/27/31 with the two
/// published multipliers). Output depends only on (key, counter), so a seed
/// reproduces bit-identically on every platform. Independent streams come
/// from `split`, which hashes a stream id into a fresh key.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed = 0) noexcept : key_(seed) {}

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t counter() const noexcept { return counter_; }

  std::uint64_t next_u64() noexcept;

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Uniform on the open interval (0, 1).
  double uniform_open() noexcept;
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  /// Standard normal by Box-Muller on open uniforms; both variates are used.
  double normal() noexcept;
  /// Unbiased integer in [0, n) (Lemire's multiply-shift with rejection). n > 0.
  std::uint64_t uniform_index(std::uint64_t n) noexcept;
  /// +1 or -1 with equal probability.
  double sign() noexcept { return (next_u64() >> 63) ? 1.0 : -1.0; }

  /// A generator on an independent stream derived from this key and `stream`.
  CounterRng split(std::uint64_t stream) const noexcept;

  template <class T>
  void shuffle(std::span<T> items) noexcept {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(uniform_index(i));
      std::swap(items[i - 1], items[j]);
    }
  }

  static std::uint64_t mix64(std::uint64_t z) noexcept;

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace holo
