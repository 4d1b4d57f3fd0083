#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace bricklayer {

/// Identifies one reproducible random stream: a master seed plus a stream
/// (replicate) index. Streams with distinct keys are statistically
/// independent; the same key always reproduces the same stream.
struct StreamKey {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  friend bool operator==(const StreamKey&, const StreamKey&) = default;
};

/// SplitMix64 finalizer. Used to derive stream families from a master seed.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Key for replicate `replicate` of stream family `family` under `seed`.
/// Family 0 is the plain master seed, so StreamKey{seed, r} == family_key(seed, 0, r).
constexpr StreamKey family_key(std::uint64_t seed, std::uint64_t family,
                               std::uint64_t replicate) noexcept {
  if (family == 0) return {seed, replicate};
  return {splitmix64(seed ^ splitmix64(family)), replicate};
}

/// Philox4x32-10 block function (Salmon, Moraes, Dror, Shaw; SC'11).
/// Stateless: maps (counter, key) to 128 pseudo-random bits.
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter ctr, Key key) noexcept;
};

/// Counter-based generator over a single stream.
///
/// The Philox key is the 64-bit seed; the 128-bit counter is
/// (stream index, block index). Each block yields two 64-bit outputs.
/// Satisfies UniformRandomBitGenerator.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(StreamKey key) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept;

  /// Uniform double in the open interval (0, 1), 53-bit resolution.
  double uniform_open() noexcept;

  StreamKey key() const noexcept { return key_; }

 private:
  void refill() noexcept;

  StreamKey key_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int remaining_ = 0;
};

}  // namespace bricklayer
