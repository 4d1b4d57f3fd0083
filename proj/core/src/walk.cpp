#include "bricklayer/walk.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace bricklayer {

WalkPath WalkPath::from_positions(std::vector<std::int64_t> positions, StreamKey seed) {
  if (positions.empty() || positions.front() != 0) {
    throw std::invalid_argument("walk path must start at site 0");
  }
  for (std::size_t k = 1; k < positions.size(); ++k) {
    const auto diff = positions[k] - positions[k - 1];
    if (diff != 1 && diff != -1) {
      throw std::invalid_argument("walk increment at step " + std::to_string(k) +
                                  " is not +-1");
    }
  }
  return WalkPath(std::move(positions), seed);
}

WalkPath WalkPath::negated() const {
  std::vector<std::int64_t> flipped(positions_.size());
  std::transform(positions_.begin(), positions_.end(), flipped.begin(),
                 [](std::int64_t p) { return -p; });
  return WalkPath(std::move(flipped), seed_);
}

WalkPath simulate_walk(std::int64_t n_steps, StreamKey seed) {
  if (n_steps < 0) throw std::invalid_argument("n_steps must be non-negative");
  std::vector<std::int64_t> positions(static_cast<std::size_t>(n_steps) + 1);
  positions[0] = 0;
  CounterRng rng(seed);
  std::int64_t k = 0;
  std::int64_t x = 0;
  while (k < n_steps) {
    std::uint64_t word = rng();
    const std::int64_t take = std::min<std::int64_t>(64, n_steps - k);
    for (std::int64_t b = 0; b < take; ++b) {
      x += (word & 1u) ? 1 : -1;
      word >>= 1;
      positions[static_cast<std::size_t>(++k)] = x;
    }
  }
  return WalkPath(std::move(positions), seed);
}

void OccupationCounter::ensure(std::int64_t site) {
  const auto size = static_cast<std::int64_t>(counts_.size());
  if (size == 0) {
    origin_ = site - 8;
    counts_.assign(17, 0);
    return;
  }
  if (site < origin_) {
    const std::int64_t grow = std::max(origin_ - site, size);
    counts_.insert(counts_.begin(), static_cast<std::size_t>(grow), 0);
    origin_ -= grow;
  } else if (site >= origin_ + size) {
    const std::int64_t grow = std::max(site - origin_ - size + 1, size);
    counts_.resize(static_cast<std::size_t>(size + grow), 0);
  }
}

std::int64_t OccupationCounter::add(std::int64_t site) {
  ensure(site);
  if (total_ == 0) {
    lo_ = hi_ = site;
  } else {
    lo_ = std::min(lo_, site);
    hi_ = std::max(hi_, site);
  }
  ++total_;
  return ++counts_[static_cast<std::size_t>(site - origin_)];
}

std::int64_t OccupationCounter::count(std::int64_t site) const noexcept {
  const auto idx = site - origin_;
  if (idx < 0 || idx >= static_cast<std::int64_t>(counts_.size())) return 0;
  return counts_[static_cast<std::size_t>(idx)];
}

std::int64_t OccupationField::count(std::int64_t site) const noexcept {
  const auto idx = site - min_site_;
  if (idx < 0 || idx >= static_cast<std::int64_t>(counts_.size())) return 0;
  return counts_[static_cast<std::size_t>(idx)];
}

OccupationField occupation_field(const WalkPath& path, std::int64_t up_to_step) {
  if (up_to_step < 0 || up_to_step > path.n_steps()) {
    throw std::out_of_range("up_to_step " + std::to_string(up_to_step) +
                            " outside [0, " + std::to_string(path.n_steps()) + "]");
  }
  const auto visited = path.positions().first(static_cast<std::size_t>(up_to_step) + 1);
  const auto [lo, hi] = std::minmax_element(visited.begin(), visited.end());
  OccupationField field;
  field.min_site_ = *lo;
  field.counts_.assign(static_cast<std::size_t>(*hi - *lo + 1), 0);
  for (const auto site : visited) ++field.counts_[static_cast<std::size_t>(site - *lo)];
  field.total_ = up_to_step + 1;
  return field;
}

DiscreteBrickTrace discrete_brick_trace(const WalkPath& path) {
  DiscreteBrickTrace trace;
  trace.reserve(path.positions().size());
  OccupationCounter counter;
  std::int64_t k = 0;
  for (const auto site : path.positions()) {
    trace.push_back({k++, site, counter.add(site)});
  }
  return trace;
}

}  // namespace bricklayer
