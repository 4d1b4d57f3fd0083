#include "bricklayer/curve.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace bricklayer {
namespace {

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double v) noexcept {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

std::int64_t cell_count(double extent, double delta) {
  const double ratio = extent / delta;
  const double nearest = std::nearbyint(ratio);
  if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, ratio)) {
    return std::max<std::int64_t>(1, static_cast<std::int64_t>(nearest));
  }
  return static_cast<std::int64_t>(std::ceil(ratio));
}

}  // namespace

BricklayerTrace build_trace(const WalkPath& path, std::int64_t n, const TraceOptions& options) {
  if (n < 1) throw std::invalid_argument("scale n must be at least 1");
  const double root_n = std::sqrt(static_cast<double>(n));
  const double dn = static_cast<double>(n);
  BricklayerTrace trace;
  trace.n = n;
  trace.estimator = options.estimator;

  if (options.estimator == Estimator::occupation) {
    trace.points.reserve(path.positions().size());
    OccupationCounter counter;
    std::int64_t k = 0;
    for (const auto site : path.positions()) {
      const auto height = counter.add(site);
      trace.points.push_back({static_cast<double>(k++) / dn,
                              static_cast<double>(site) / root_n,
                              static_cast<double>(height) / root_n});
    }
    return trace;
  }

  if (options.stride < 1) throw std::invalid_argument("stride must be at least 1");
  const double eps = options.eps > 0.0 ? options.eps : default_eps(n);
  if (path.n_steps() == 0) {
    trace.points.push_back({0.0, 0.0, 0.0});
    return trace;
  }
  const auto scaled = donsker_rescale(path, n);
  const auto knots = scaled.knots();
  for (std::int64_t k = 0; k <= path.n_steps(); k += options.stride) {
    const Knot& knot = knots[static_cast<std::size_t>(k)];
    trace.points.push_back({knot.t, knot.x, band_local_time(scaled, knot.x, knot.t, eps)});
  }
  return trace;
}

BricklayerTrace scale_trace(const BricklayerTrace& trace, double c, double d) {
  if (c == 0.0 || !std::isfinite(c)) throw std::invalid_argument("c must be nonzero");
  if (!(d > 0.0) || !std::isfinite(d)) throw std::invalid_argument("d must be positive");
  BricklayerTrace scaled = trace;
  for (auto& p : scaled.points) {
    p.x *= c;
    p.h *= d;
  }
  return scaled;
}

double wall_area(const ScaledPath& path, double t, double eps, double c, double d) {
  if (!(t >= 0.0) || t > path.horizon()) throw std::invalid_argument("time outside path horizon");
  if (!(eps > 0.0)) throw std::invalid_argument("band half-width must be positive");
  if (c == 0.0 || !std::isfinite(c)) throw std::invalid_argument("c must be nonzero");
  if (!(d > 0.0) || !std::isfinite(d)) throw std::invalid_argument("d must be positive");

  const double stretch = std::abs(c);
  const double band = 2.0 * eps;
  CompensatedSum area;
  const auto knots = path.knots();
  for (std::size_t i = 0; i + 1 < knots.size() && knots[i].t < t; ++i) {
    const Knot& p = knots[i];
    const Knot& q = knots[i + 1];
    double tau = q.t - p.t;
    double b = q.x;
    if (q.t > t) {
      b = p.x + (t - p.t) / (q.t - p.t) * (q.x - p.x);
      tau = t - p.t;
    }
    const double lo = std::min(p.x, b);
    const double hi = std::max(p.x, b);
    const double span = hi - lo;
    if (span == 0.0) {
      // Flat piece: an indicator of width 2 eps and height tau.
      area.add(d * tau * (stretch * band) / band);
      continue;
    }
    // Overlap length |[lo, hi] ∩ (y - eps, y + eps)| is a trapezoid in y.
    const double p1 = stretch * (lo - eps);
    const double p2 = stretch * std::min(lo + eps, hi - eps);
    const double p3 = stretch * std::max(lo + eps, hi - eps);
    const double p4 = stretch * (hi + eps);
    const double plateau = std::min(span, band);
    const double trapezoid = 0.5 * plateau * ((p4 - p1) + (p3 - p2));
    area.add(d * (tau / span) * trapezoid / band);
  }
  return area.value();
}

std::vector<std::pair<std::size_t, std::size_t>> fill_order_check(const BricklayerTrace& trace) {
  const auto& pts = trace.points;
  std::vector<std::size_t> order(pts.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return pts[a].x < pts[b].x; });

  std::vector<std::pair<std::size_t, std::size_t>> violations;
  std::size_t begin = 0;
  while (begin < order.size()) {
    std::size_t end = begin + 1;
    while (end < order.size() && pts[order[end]].x == pts[order[begin]].x) ++end;
    double running_max = pts[order[begin]].h;
    for (std::size_t jj = begin + 1; jj < end; ++jj) {
      const std::size_t j = order[jj];
      if (pts[j].h < running_max) {
        for (std::size_t ii = begin; ii < jj; ++ii) {
          if (pts[order[ii]].h > pts[j].h) violations.emplace_back(order[ii], j);
        }
      }
      running_max = std::max(running_max, pts[j].h);
    }
    begin = end;
  }
  std::sort(violations.begin(), violations.end());
  return violations;
}

CoverageReport coverage_check(StreamKey seed, const Window& window, double delta,
                              std::int64_t step_budget, std::int64_t n) {
  if (!std::isfinite(window.x_lo) || !std::isfinite(window.x_hi) ||
      !std::isfinite(window.h_hi) || !(window.x_lo < window.x_hi) || !(window.h_hi > 0.0)) {
    throw std::invalid_argument("degenerate coverage window");
  }
  if (!(delta > 0.0)) throw std::invalid_argument("cell size must be positive");
  if (step_budget < 1) throw std::invalid_argument("step budget must be at least 1");
  if (n < 1) throw std::invalid_argument("scale n must be at least 1");

  CoverageReport report;
  report.window = window;
  report.delta = delta;
  report.columns = cell_count(window.x_hi - window.x_lo, delta);
  report.rows = cell_count(window.h_hi, delta);
  if (report.columns > (std::int64_t{1} << 26) / report.rows) {
    throw std::invalid_argument("coverage grid too fine");
  }
  report.total_count = report.columns * report.rows;
  report.first_cover_time.assign(static_cast<std::size_t>(report.total_count), std::nullopt);

  const double root_n = std::sqrt(static_cast<double>(n));
  const double dn = static_cast<double>(n);
  const auto visit = [&](std::int64_t k, std::int64_t site, std::int64_t height) {
    const double x = static_cast<double>(site) / root_n;
    const double h = static_cast<double>(height) / root_n;
    if (x < window.x_lo || x > window.x_hi || h > window.h_hi) return;
    const auto col = std::min(report.columns - 1,
                              static_cast<std::int64_t>((x - window.x_lo) / delta));
    const auto row = std::min(report.rows - 1, static_cast<std::int64_t>(h / delta));
    auto& cell = report.first_cover_time[static_cast<std::size_t>(col * report.rows + row)];
    if (!cell) {
      cell = static_cast<double>(k) / dn;
      ++report.covered_count;
    }
  };

  OccupationCounter counter;
  StepSource steps(seed);
  std::int64_t site = 0;
  visit(0, site, counter.add(site));
  std::int64_t k = 0;
  while (!report.complete() && k < step_budget) {
    site += steps.next();
    ++k;
    visit(k, site, counter.add(site));
  }
  report.steps_used = k;
  report.budget_exhausted = !report.complete();
  return report;
}

}  // namespace bricklayer
