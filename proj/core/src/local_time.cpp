#include "bricklayer/local_time.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace bricklayer {
namespace {

// Calls fn(a, b, duration) for each linear piece of the path on [0, t].
template <class Fn>
void for_each_segment(const ScaledPath& path, double t, Fn&& fn) {
  const auto knots = path.knots();
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const Knot& p = knots[i];
    const Knot& q = knots[i + 1];
    if (p.t >= t) break;
    if (q.t <= t) {
      fn(p.x, q.x, q.t - p.t);
    } else {
      const double frac = (t - p.t) / (q.t - p.t);
      fn(p.x, p.x + frac * (q.x - p.x), t - p.t);
      break;
    }
  }
}

void check_time(const ScaledPath& path, double t) {
  if (!(t >= 0.0) || t > path.horizon()) {
    throw std::invalid_argument("time " + std::to_string(t) + " outside [0, " +
                                std::to_string(path.horizon()) + "]");
  }
}

void check_eps(double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw std::invalid_argument("band half-width must be positive");
  }
}

void check_levels(std::span<const double> levels) {
  if (levels.empty()) throw std::invalid_argument("level grid is empty");
  for (std::size_t i = 1; i < levels.size(); ++i) {
    if (!(levels[i] > levels[i - 1])) {
      throw std::invalid_argument("level grid must be strictly increasing");
    }
  }
}

}  // namespace

ScaledPath ScaledPath::from_knots(std::vector<Knot> knots, std::int64_t n) {
  if (knots.empty()) throw std::invalid_argument("path needs at least one knot");
  if (knots.front().t != 0.0) throw std::invalid_argument("path must start at time 0");
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (!(knots[i].t > knots[i - 1].t)) {
      throw std::invalid_argument("knot times must be strictly increasing");
    }
  }
  return ScaledPath(std::move(knots), n);
}

double ScaledPath::operator()(double u) const {
  if (!(u >= 0.0) || u > horizon()) throw std::out_of_range("time outside path horizon");
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), u,
                                   [](double v, const Knot& k) { return v < k.t; });
  if (it == knots_.end()) return knots_.back().x;
  const Knot& q = *it;
  const Knot& p = *(it - 1);
  return p.x + (u - p.t) / (q.t - p.t) * (q.x - p.x);
}

double ScaledPath::min_value(double t) const {
  double lo = knots_.front().x;
  for_each_segment(*this, t, [&](double, double b, double) { lo = std::min(lo, b); });
  return lo;
}

double ScaledPath::max_value(double t) const {
  double hi = knots_.front().x;
  for_each_segment(*this, t, [&](double, double b, double) { hi = std::max(hi, b); });
  return hi;
}

ScaledPath ScaledPath::negated() const {
  std::vector<Knot> flipped(knots_);
  for (auto& k : flipped) k.x = -k.x;
  return ScaledPath(std::move(flipped), n_);
}

ScaledPath donsker_rescale(const WalkPath& path, std::int64_t n) {
  if (n < 1) throw std::invalid_argument("scale n must be at least 1");
  if (path.n_steps() < 1) throw std::invalid_argument("rescaling needs at least one step");
  const double root_n = std::sqrt(static_cast<double>(n));
  const double dn = static_cast<double>(n);
  std::vector<Knot> knots;
  knots.reserve(path.positions().size());
  std::int64_t k = 0;
  for (const auto site : path.positions()) {
    knots.push_back({static_cast<double>(k++) / dn, static_cast<double>(site) / root_n});
  }
  return ScaledPath::from_knots(std::move(knots), n);
}

double default_eps(std::int64_t n) {
  if (n < 1) throw std::invalid_argument("scale n must be at least 1");
  return std::pow(static_cast<double>(n), -0.25);
}

std::int64_t step_index(std::int64_t n, double t) {
  const double nt = static_cast<double>(n) * t;
  const double nearest = std::nearbyint(nt);
  if (std::abs(nt - nearest) <= 1e-9 * std::max(1.0, std::abs(nt))) {
    return static_cast<std::int64_t>(nearest);
  }
  return static_cast<std::int64_t>(std::ceil(nt));
}

std::int64_t nearest_site(double y, std::int64_t n) {
  const double v = y * std::sqrt(static_cast<double>(n));
  const double mag = std::abs(v);
  double site = std::floor(mag);
  if (mag - site > 0.5) site += 1.0;
  return static_cast<std::int64_t>(std::copysign(site, v));
}

double band_local_time(const ScaledPath& path, double y, double t, double eps) {
  check_time(path, t);
  check_eps(eps);
  const double lo_band = y - eps;
  const double hi_band = y + eps;
  double measure = 0.0;
  for_each_segment(path, t, [&](double a, double b, double tau) {
    if (a == b) {
      if (std::abs(a - y) < eps) measure += tau;
      return;
    }
    const double lo = std::min(a, b);
    const double hi = std::max(a, b);
    const double overlap = std::min(hi, hi_band) - std::max(lo, lo_band);
    if (overlap > 0.0) measure += tau * (overlap / (hi - lo));
  });
  return measure / (2.0 * eps);
}

double occupation_local_time(const WalkPath& path, std::int64_t n, double y, double t) {
  if (n < 1) throw std::invalid_argument("scale n must be at least 1");
  const std::int64_t k = step_index(n, t);
  if (!(t >= 0.0) || k > path.n_steps()) {
    throw std::invalid_argument("time " + std::to_string(t) + " outside [0, n_steps/n]");
  }
  const std::int64_t site = nearest_site(y, n);
  std::int64_t visits = 0;
  for (const auto p : path.positions().first(static_cast<std::size_t>(k) + 1)) {
    visits += (p == site);
  }
  return static_cast<double>(visits) / std::sqrt(static_cast<double>(n));
}

Estimator parse_estimator(std::string_view tag) {
  if (tag == "band") return Estimator::band;
  if (tag == "occupation") return Estimator::occupation;
  throw std::invalid_argument("unknown estimator '" + std::string(tag) + "'");
}

std::string_view to_string(Estimator estimator) noexcept {
  return estimator == Estimator::band ? "band" : "occupation";
}

LocalTimeProfile band_profile(const ScaledPath& path, double t,
                              std::span<const double> levels, double eps) {
  check_time(path, t);
  check_eps(eps);
  check_levels(levels);

  struct Ramp {
    double pos;
    double slope;
  };
  struct Step {
    double pos;
    double jump;
  };
  std::vector<Ramp> ramps;
  std::vector<Step> steps_down;  // applied before queries at equal position
  std::vector<Step> steps_up;    // applied after queries at equal position
  ramps.reserve(4 * path.segment_count());

  for_each_segment(path, t, [&](double a, double b, double tau) {
    if (a == b) {
      steps_up.push_back({a - eps, tau});
      steps_down.push_back({a + eps, -tau});
      return;
    }
    const double lo = std::min(a, b);
    const double hi = std::max(a, b);
    const double w = tau / (hi - lo);
    ramps.push_back({lo - eps, w});
    ramps.push_back({lo + eps, -w});
    ramps.push_back({hi - eps, -w});
    ramps.push_back({hi + eps, w});
  });

  const auto by_pos = [](const auto& l, const auto& r) { return l.pos < r.pos; };
  std::sort(ramps.begin(), ramps.end(), by_pos);
  std::sort(steps_down.begin(), steps_down.end(), by_pos);
  std::sort(steps_up.begin(), steps_up.end(), by_pos);

  LocalTimeProfile profile{t, {levels.begin(), levels.end()}, {}, Estimator::band, eps};
  profile.values.assign(levels.size(), 0.0);

  const double inf = std::numeric_limits<double>::infinity();
  std::size_t ir = 0, id = 0, iu = 0, iq = 0;
  double value = 0.0;
  double slope = 0.0;
  double cursor = ramps.empty() ? 0.0 : ramps.front().pos;
  if (!steps_up.empty()) cursor = std::min(cursor, steps_up.front().pos);

  const auto advance = [&](double pos) {
    value += slope * (pos - cursor);
    cursor = pos;
  };

  while (iq < levels.size()) {
    const double pr = ir < ramps.size() ? ramps[ir].pos : inf;
    const double pd = id < steps_down.size() ? steps_down[id].pos : inf;
    const double pu = iu < steps_up.size() ? steps_up[iu].pos : inf;
    const double pq = levels[iq];
    // Tie order at one position: step down, ramp, query, step up.
    if (pd <= pr && pd <= pq && pd <= pu) {
      advance(pd);
      value += steps_down[id++].jump;
    } else if (pr <= pq && pr <= pu) {
      advance(pr);
      slope += ramps[ir++].slope;
    } else if (pq <= pu) {
      advance(pq);
      profile.values[iq++] = std::max(0.0, value);
    } else {
      advance(pu);
      value += steps_up[iu++].jump;
    }
  }

  const double lo_range = path.min_value(t) - eps;
  const double hi_range = path.max_value(t) + eps;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i] <= lo_range || levels[i] >= hi_range) {
      profile.values[i] = 0.0;
    } else {
      profile.values[i] /= 2.0 * eps;
    }
  }
  return profile;
}

LocalTimeProfile occupation_profile(const WalkPath& path, std::int64_t n, double t,
                                    std::span<const double> levels) {
  if (n < 1) throw std::invalid_argument("scale n must be at least 1");
  check_levels(levels);
  const std::int64_t k = step_index(n, t);
  if (!(t >= 0.0) || k > path.n_steps()) {
    throw std::invalid_argument("time " + std::to_string(t) + " outside [0, n_steps/n]");
  }
  const auto field = occupation_field(path, k);
  const double root_n = std::sqrt(static_cast<double>(n));
  LocalTimeProfile profile{t, {levels.begin(), levels.end()}, {}, Estimator::occupation, 0.0};
  profile.values.reserve(levels.size());
  for (const double y : levels) {
    profile.values.push_back(static_cast<double>(field.count(nearest_site(y, n))) / root_n);
  }
  return profile;
}

LocalTimeProfile local_time_profile(const WalkPath& path, std::int64_t n, double t,
                                    std::span<const double> levels, double eps,
                                    Estimator estimator) {
  if (estimator == Estimator::occupation) return occupation_profile(path, n, t, levels);
  return band_profile(donsker_rescale(path, n), t, levels, eps);
}

}  // namespace bricklayer
