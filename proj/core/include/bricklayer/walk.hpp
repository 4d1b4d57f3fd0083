#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bricklayer/rng.hpp"

namespace bricklayer {

/// Lattice path of a simple random walk started at 0.
///
/// Invariants: positions[0] == 0 and consecutive positions differ by exactly
/// one. Immutable once constructed.
class WalkPath {
 public:
  /// Validates the invariants; throws std::invalid_argument on violation.
  static WalkPath from_positions(std::vector<std::int64_t> positions,
                                 StreamKey seed = {});

  StreamKey seed() const noexcept { return seed_; }
  std::int64_t n_steps() const noexcept {
    return static_cast<std::int64_t>(positions_.size()) - 1;
  }
  std::span<const std::int64_t> positions() const noexcept { return positions_; }
  std::int64_t operator[](std::int64_t k) const { return positions_[k]; }

  /// Path with every increment negated.
  WalkPath negated() const;

 private:
  friend WalkPath simulate_walk(std::int64_t, StreamKey);
  WalkPath(std::vector<std::int64_t> positions, StreamKey seed)
      : seed_(seed), positions_(std::move(positions)) {}

  StreamKey seed_;
  std::vector<std::int64_t> positions_;
};

/// Simulates `n_steps` fair +-1 steps. Each 64-bit draw of the stream
/// supplies 64 steps, least significant bit first (set bit = +1).
WalkPath simulate_walk(std::int64_t n_steps, StreamKey seed);

/// Generates walk increments one at a time from a stream, in the same order
/// simulate_walk consumes them.
class StepSource {
 public:
  explicit StepSource(StreamKey key) : rng_(key) {}

  int next() noexcept {
    if (bits_left_ == 0) {
      word_ = rng_();
      bits_left_ = 64;
    }
    const int step = (word_ & 1u) ? 1 : -1;
    word_ >>= 1;
    --bits_left_;
    return step;
  }

 private:
  CounterRng rng_;
  std::uint64_t word_ = 0;
  int bits_left_ = 0;
};

/// Incrementally maintained visit counts, stored densely by offset from the
/// lowest site seen so far. Grows geometrically in either direction.
class OccupationCounter {
 public:
  /// Records one visit to `site` and returns the updated count there.
  std::int64_t add(std::int64_t site);
  std::int64_t count(std::int64_t site) const noexcept;

  std::int64_t total() const noexcept { return total_; }
  bool empty() const noexcept { return total_ == 0; }
  std::int64_t min_site() const noexcept { return lo_; }
  std::int64_t max_site() const noexcept { return hi_; }

 private:
  void ensure(std::int64_t site);

  std::int64_t origin_ = 0;  // site stored at counts_[0]
  std::vector<std::int64_t> counts_;
  std::int64_t lo_ = 0;
  std::int64_t hi_ = -1;
  std::int64_t total_ = 0;
};

/// Visit counts L(j, k) of a walk through a fixed step k. The initial block at
/// site 0 counts, so total() == k + 1.
class OccupationField {
 public:
  std::int64_t count(std::int64_t site) const noexcept;
  std::int64_t total() const noexcept { return total_; }
  std::int64_t min_site() const noexcept { return min_site_; }
  std::int64_t max_site() const noexcept {
    return min_site_ + static_cast<std::int64_t>(counts_.size()) - 1;
  }
  /// Dense counts for sites min_site()..max_site().
  std::span<const std::int64_t> counts() const noexcept { return counts_; }

 private:
  friend OccupationField occupation_field(const WalkPath&, std::int64_t);

  std::int64_t min_site_ = 0;
  std::vector<std::int64_t> counts_;
  std::int64_t total_ = 0;
};

/// Throws std::out_of_range unless 0 <= up_to_step <= path.n_steps().
OccupationField occupation_field(const WalkPath& path, std::int64_t up_to_step);

struct BrickEntry {
  std::int64_t step;
  std::int64_t site;
  std::int64_t height;

  friend bool operator==(const BrickEntry&, const BrickEntry&) = default;
};

/// Block k sits at (positions[k], running count at that site through step k).
using DiscreteBrickTrace = std::vector<BrickEntry>;

DiscreteBrickTrace discrete_brick_trace(const WalkPath& path);

}  // namespace bricklayer
