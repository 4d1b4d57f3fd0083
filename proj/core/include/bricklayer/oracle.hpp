#pragma once

#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

#include "bricklayer/rng.hpp"

namespace bricklayer {

// Fixed-time law of K(t) = (B(t), l(B(t), t)):
//
//   p_t(y, s) = (|y| + s) / sqrt(2 pi t^3) * exp(-(|y| + s)^2 / (2 t)),  s >= 0.
//
// Integrating out s gives the N(0, t) density, integrating out y gives the
// half-normal density of S(t). The density vanishes on the s = 0 boundary
// only at y = 0; marginal_height(0, t) is the positive half-normal value.

double joint_density(double y, double s, double t);
double marginal_level(double y, double t);
double marginal_height(double s, double t);
double mean_height(double t);

/// Density in x of Pr{B(t) in dx, S(t) >= s}, stated for x < s, s > 0.
double reflection_tail(double x, double s, double t);

struct DensityModel {
  double t = 1.0;

  double density(double y, double s) const { return joint_density(y, s, t); }
  /// Mass of [y0, y1] x [s0, s1] by adaptive quadrature. Infinite edges are
  /// truncated at |y| + s <= 10 sqrt(t).
  double rectangle_probability(double y0, double y1, double s0, double s1) const;
};

/// Adaptive Gauss-Kronrod quadrature on a finite interval.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tolerance = 1e-12);

/// Nested adaptive quadrature over [y0, y1] x [s0, s1].
double integrate_2d(const std::function<double(double, double)>& f, double y0, double y1,
                    double s0, double s1, double tolerance = 1e-12);

struct SamplePair {
  double first;
  double second;
};

/// Sides of the transformation chain relating (B(t), l(B(t), t)) to the
/// running maximum.
///   lhs      (B(t), l(B(t), t))        from the walk's own occupation count
///   reversal (B(t), l(0, t))
///   levy     (S(t) - B(t), S(t))       S the running maximum
///   signed   ((S(t) - B(t)) I, S(t))  I an independent fair sign
enum class IdentitySide { lhs, reversal, levy, signed_levy };

IdentitySide parse_identity_side(std::string_view tag);
std::string_view to_string(IdentitySide side) noexcept;

/// Sign stream for the signed side. `all_plus` is a test hook that makes the
/// signed side coincide with the levy side.
enum class SignMode { random, all_plus };

/// One pair per replicate r = 0..replicates-1 from walks of ceil(n t) steps,
/// rescaled by n^(-1/2). lhs and reversal use their own walk families; levy
/// and signed share one so that they differ only by the sign.
std::vector<SamplePair> sample_identity_pair(double t, std::uint64_t seed, std::int64_t n,
                                             IdentitySide side, std::size_t replicates,
                                             SignMode signs = SignMode::random);

/// Replicate `replicate` of sample_identity_pair.
SamplePair sample_identity_replicate(double t, std::uint64_t seed, std::int64_t n,
                                     IdentitySide side, std::uint64_t replicate,
                                     SignMode signs = SignMode::random);

/// Exact draw of ((S(t) - B(t)) I, S(t)) for Brownian motion: B = sqrt(t) Z and
/// S sampled from its conditional law given B by inversion. Distributed with
/// density joint_density(., ., t).
SamplePair sample_joint_exact(double t, StreamKey key);

}  // namespace bricklayer
