#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "bricklayer/local_time.hpp"
#include "bricklayer/rng.hpp"
#include "bricklayer/walk.hpp"

namespace bricklayer {

struct CurvePoint {
  double t;
  double x;
  double h;

  friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

/// Time-ordered samples of K(t) = (B(t), l(B(t), t)).
struct BricklayerTrace {
  std::vector<CurvePoint> points;
  std::int64_t n = 1;
  Estimator estimator = Estimator::occupation;
};

struct TraceOptions {
  Estimator estimator = Estimator::occupation;
  /// Band half-width; non-positive selects default_eps(n). Band only.
  double eps = 0.0;
  /// Evaluate the band estimator at every stride-th step. Band only.
  std::int64_t stride = 1;
};

/// Point k is (k/n, S(k)/sqrt(n), height). With the occupation estimator the
/// height is the running visit count at the current site over sqrt(n),
/// maintained in O(1) per step.
BricklayerTrace build_trace(const WalkPath& path, std::int64_t n,
                            const TraceOptions& options = {});

/// Maps every (t, x, h) to (t, c x, d h). Requires c != 0 and d > 0.
BricklayerTrace scale_trace(const BricklayerTrace& trace, double c, double d);

/// Area under the band-estimator wall profile y -> d l(y/c, t) over the
/// scaled axis c y. Each segment's contribution is the exact area of its
/// trapezoid in y, so the result equals |c| d t up to summation rounding.
double wall_area(const ScaledPath& path, double t, double eps, double c = 1.0,
                 double d = 1.0);

/// All pairs (i < j) with x_i == x_j and h_i > h_j.
std::vector<std::pair<std::size_t, std::size_t>> fill_order_check(
    const BricklayerTrace& trace);

/// Rectangle [x_lo, x_hi] x [0, h_hi] of the upper half plane.
struct Window {
  double x_lo = -1.0;
  double x_hi = 1.0;
  double h_hi = 0.5;
};

struct CoverageReport {
  Window window;
  double delta = 0.0;
  std::int64_t columns = 0;  // cells along x
  std::int64_t rows = 0;     // cells along h
  std::int64_t covered_count = 0;
  std::int64_t total_count = 0;
  /// Indexed column * rows + row; empty when the cell was never hit.
  std::vector<std::optional<double>> first_cover_time;
  std::int64_t steps_used = 0;
  bool budget_exhausted = false;

  bool complete() const noexcept { return covered_count == total_count; }
};

/// Extends the walk of `seed` one step at a time, marking the cell of each
/// occupation-estimator trace point, until every cell of the window is hit
/// or `step_budget` steps have been taken. Cells are half-open except along
/// the window's upper and right edges.
CoverageReport coverage_check(StreamKey seed, const Window& window, double delta,
                              std::int64_t step_budget, std::int64_t n);

}  // namespace bricklayer
