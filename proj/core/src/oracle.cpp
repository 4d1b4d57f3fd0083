#include "bricklayer/oracle.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "bricklayer/local_time.hpp"
#include "bricklayer/walk.hpp"

namespace bricklayer {
namespace {

constexpr double kTruncation = 10.0;  // in units of sqrt(t)

// Stream families; see family_key.
constexpr std::uint64_t kLhsFamily = 1;
constexpr std::uint64_t kReversalFamily = 2;
constexpr std::uint64_t kMaximumFamily = 3;
constexpr std::uint64_t kSignFamily = 4;

void check_t(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw std::domain_error("time must be positive");
}

void check_s(double s) {
  if (!(s >= 0.0)) throw std::domain_error("height must be non-negative");
}

}  // namespace

double joint_density(double y, double s, double t) {
  check_t(t);
  check_s(s);
  const double r = std::abs(y) + s;
  return r / std::sqrt(2.0 * std::numbers::pi * t * t * t) * std::exp(-r * r / (2.0 * t));
}

double marginal_level(double y, double t) {
  check_t(t);
  return std::exp(-y * y / (2.0 * t)) / std::sqrt(2.0 * std::numbers::pi * t);
}

double marginal_height(double s, double t) {
  check_t(t);
  check_s(s);
  return std::sqrt(2.0 / (std::numbers::pi * t)) * std::exp(-s * s / (2.0 * t));
}

double mean_height(double t) {
  check_t(t);
  return std::sqrt(2.0 * t / std::numbers::pi);
}

double reflection_tail(double x, double s, double t) {
  check_t(t);
  if (!(s > 0.0)) throw std::domain_error("reflection tail needs s > 0");
  if (!(x < s)) throw std::domain_error("reflection tail needs x < s");
  const double r = 2.0 * s - x;
  return std::exp(-r * r / (2.0 * t)) / std::sqrt(2.0 * std::numbers::pi * t);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tolerance) {
  if (a == b) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 20,
                                                                       tolerance);
}

double integrate_2d(const std::function<double(double, double)>& f, double y0, double y1,
                    double s0, double s1, double tolerance) {
  return integrate(
      [&](double y) { return integrate([&](double s) { return f(y, s); }, s0, s1, tolerance); },
      y0, y1, tolerance);
}

double DensityModel::rectangle_probability(double y0, double y1, double s0, double s1) const {
  check_t(t);
  const double cap = kTruncation * std::sqrt(t);
  y0 = std::clamp(y0, -cap, cap);
  y1 = std::clamp(y1, -cap, cap);
  s0 = std::clamp(s0, 0.0, cap);
  s1 = std::clamp(s1, 0.0, cap);
  if (!(y1 > y0) || !(s1 > s0)) return 0.0;
  const auto f = [this](double y, double s) { return joint_density(y, s, t); };
  // The |y| kink is integrated on each side separately.
  if (y0 < 0.0 && y1 > 0.0) {
    return integrate_2d(f, y0, 0.0, s0, s1) + integrate_2d(f, 0.0, y1, s0, s1);
  }
  return integrate_2d(f, y0, y1, s0, s1);
}

IdentitySide parse_identity_side(std::string_view tag) {
  if (tag == "lhs") return IdentitySide::lhs;
  if (tag == "reversal") return IdentitySide::reversal;
  if (tag == "levy") return IdentitySide::levy;
  if (tag == "signed") return IdentitySide::signed_levy;
  throw std::invalid_argument("unknown identity side '" + std::string(tag) + "'");
}

std::string_view to_string(IdentitySide side) noexcept {
  switch (side) {
    case IdentitySide::lhs: return "lhs";
    case IdentitySide::reversal: return "reversal";
    case IdentitySide::levy: return "levy";
    case IdentitySide::signed_levy: return "signed";
  }
  return "?";
}

SamplePair sample_identity_replicate(double t, std::uint64_t seed, std::int64_t n,
                                     IdentitySide side, std::uint64_t replicate,
                                     SignMode signs) {
  if (!(t > 0.0)) throw std::invalid_argument("time must be positive");
  if (n < 1) throw std::invalid_argument("scale n must be at least 1");
  const std::int64_t steps = step_index(n, t);
  const double root_n = std::sqrt(static_cast<double>(n));

  switch (side) {
    case IdentitySide::lhs: {
      StepSource source(family_key(seed, kLhsFamily, replicate));
      OccupationCounter counter;
      std::int64_t site = 0;
      counter.add(site);
      for (std::int64_t k = 0; k < steps; ++k) counter.add(site += source.next());
      return {static_cast<double>(site) / root_n,
              static_cast<double>(counter.count(site)) / root_n};
    }
    case IdentitySide::reversal: {
      StepSource source(family_key(seed, kReversalFamily, replicate));
      std::int64_t site = 0;
      std::int64_t zeros = 1;
      for (std::int64_t k = 0; k < steps; ++k) zeros += ((site += source.next()) == 0);
      return {static_cast<double>(site) / root_n, static_cast<double>(zeros) / root_n};
    }
    case IdentitySide::levy:
    case IdentitySide::signed_levy: {
      StepSource source(family_key(seed, kMaximumFamily, replicate));
      std::int64_t site = 0;
      std::int64_t top = 0;
      for (std::int64_t k = 0; k < steps; ++k) top = std::max(top, site += source.next());
      double gap = static_cast<double>(top - site) / root_n;
      if (side == IdentitySide::signed_levy && signs == SignMode::random) {
        CounterRng sign(family_key(seed, kSignFamily, replicate));
        if (sign() & 1u) gap = -gap;
      }
      return {gap, static_cast<double>(top) / root_n};
    }
  }
  throw std::invalid_argument("unknown identity side");
}

std::vector<SamplePair> sample_identity_pair(double t, std::uint64_t seed, std::int64_t n,
                                             IdentitySide side, std::size_t replicates,
                                             SignMode signs) {
  std::vector<SamplePair> out;
  out.reserve(replicates);
  for (std::size_t r = 0; r < replicates; ++r) {
    out.push_back(sample_identity_replicate(t, seed, n, side, r, signs));
  }
  return out;
}

SamplePair sample_joint_exact(double t, StreamKey key) {
  check_t(t);
  CounterRng rng(key);
  std::normal_distribution<double> normal;
  const double b = std::sqrt(t) * normal(rng);
  const double u = rng.uniform_open();
  const double top = 0.5 * (b + std::sqrt(b * b - 2.0 * t * std::log(u)));
  const double gap = top - b;
  return {(rng() & 1u) ? -gap : gap, top};
}

}  // namespace bricklayer
