#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "bricklayer/walk.hpp"

namespace bricklayer {

struct Knot {
  double t;
  double x;
};

/// Continuous piecewise-linear path through a sequence of knots with strictly
/// increasing times starting at t = 0. A Donsker-rescaled walk is the special
/// case with knots (k/n, S(k)/sqrt(n)).
class ScaledPath {
 public:
  /// Throws std::invalid_argument if knots is empty, does not start at t = 0,
  /// or times are not strictly increasing.
  static ScaledPath from_knots(std::vector<Knot> knots, std::int64_t n = 0);

  /// Steps per unit time for rescaled walks; 0 for hand-built paths.
  std::int64_t n() const noexcept { return n_; }
  std::span<const Knot> knots() const noexcept { return knots_; }
  double horizon() const noexcept { return knots_.back().t; }
  std::size_t segment_count() const noexcept { return knots_.size() - 1; }

  /// Linear interpolation; throws std::out_of_range outside [0, horizon].
  double operator()(double u) const;

  double min_value(double t) const;
  double max_value(double t) const;

  ScaledPath negated() const;

 private:
  ScaledPath(std::vector<Knot> knots, std::int64_t n) : knots_(std::move(knots)), n_(n) {}

  std::vector<Knot> knots_;
  std::int64_t n_ = 0;
};

/// Knots (k/n, positions[k]/sqrt(n)). Throws std::invalid_argument for n < 1
/// or a zero-step path.
ScaledPath donsker_rescale(const WalkPath& path, std::int64_t n);

/// n^(-1/4): vanishes slower than the n^(-1/2) lattice spacing.
double default_eps(std::int64_t n);

/// ceil(n t), treating n t within 1e-9 relative of an integer as that integer.
std::int64_t step_index(std::int64_t n, double t);

/// round(y sqrt(n)) with ties toward zero.
std::int64_t nearest_site(double y, std::int64_t n);

/// (2 eps)^-1 Leb{u in [0, t] : |path(u) - y| < eps}, clipping each linear
/// segment against the band in closed form.
double band_local_time(const ScaledPath& path, double y, double t, double eps);

/// n^(-1/2) L(nearest_site(y), ceil(n t)).
double occupation_local_time(const WalkPath& path, std::int64_t n, double y, double t);

enum class Estimator { band, occupation };

Estimator parse_estimator(std::string_view tag);
std::string_view to_string(Estimator estimator) noexcept;

struct LocalTimeProfile {
  double t = 0;
  std::vector<double> levels;
  std::vector<double> values;
  Estimator estimator = Estimator::band;
  double eps = 0;
};

/// Band estimator at every level. Each segment contributes a trapezoid in y
/// built from four ramps; one sorted sweep over ramp breakpoints and levels
/// evaluates the whole profile in O((k + m) log(k + m)).
LocalTimeProfile band_profile(const ScaledPath& path, double t,
                              std::span<const double> levels, double eps);

LocalTimeProfile occupation_profile(const WalkPath& path, std::int64_t n, double t,
                                    std::span<const double> levels);

/// Dispatches on `estimator`. Levels must be non-empty and strictly increasing.
LocalTimeProfile local_time_profile(const WalkPath& path, std::int64_t n, double t,
                                    std::span<const double> levels, double eps,
                                    Estimator estimator);

}  // namespace bricklayer
