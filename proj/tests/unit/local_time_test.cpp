#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "bricklayer/local_time.hpp"
#include "bricklayer/oracle.hpp"
#include "bricklayer/stats.hpp"

namespace bricklayer {
namespace {

WalkPath path_of(std::vector<std::int64_t> p) { return WalkPath::from_positions(std::move(p)); }

ScaledPath constant_zero(double horizon) {
  return ScaledPath::from_knots({{0.0, 0.0}, {horizon, 0.0}});
}

// Midpoint-rule occupation measure on a fine time grid; error O(du).
double brute_band(const ScaledPath& path, double y, double t, double eps, int cells) {
  const double du = t / cells;
  double measure = 0.0;
  for (int i = 0; i < cells; ++i) {
    if (std::abs(path((i + 0.5) * du) - y) < eps) measure += du;
  }
  return measure / (2.0 * eps);
}

TEST(DonskerRescale, IdentityScale) {
  const auto p = donsker_rescale(path_of({0, 1}), 1);
  ASSERT_EQ(p.knots().size(), 2u);
  EXPECT_DOUBLE_EQ(p.knots()[1].t, 1.0);
  EXPECT_DOUBLE_EQ(p.knots()[1].x, 1.0);
  EXPECT_DOUBLE_EQ(p.horizon(), 1.0);
}

TEST(DonskerRescale, QuarterScale) {
  const auto p = donsker_rescale(path_of({0, 1, 0, -1}), 4);
  const std::vector<Knot> expected{{0, 0}, {0.25, 0.5}, {0.5, 0}, {0.75, -0.5}};
  ASSERT_EQ(p.knots().size(), expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    EXPECT_DOUBLE_EQ(p.knots()[i].t, expected[i].t);
    EXPECT_DOUBLE_EQ(p.knots()[i].x, expected[i].x);
  }
  EXPECT_DOUBLE_EQ(p.horizon(), 0.75);
}

TEST(DonskerRescale, MidpointIsMeanOfKnots) {
  const auto p = donsker_rescale(simulate_walk(50, {1, 0}), 7);
  for (std::size_t k = 0; k + 1 < p.knots().size(); ++k) {
    const auto& a = p.knots()[k];
    const auto& b = p.knots()[k + 1];
    EXPECT_NEAR(p(0.5 * (a.t + b.t)), 0.5 * (a.x + b.x), 1e-12);
    EXPECT_NEAR(std::abs(b.x - a.x), 1.0 / std::sqrt(7.0), 1e-12);
  }
}

TEST(DonskerRescale, InvalidArguments) {
  EXPECT_THROW(donsker_rescale(path_of({0, 1}), 0), std::invalid_argument);
  EXPECT_THROW(donsker_rescale(path_of({0}), 1), std::invalid_argument);
}

TEST(BandLocalTime, ConstantPathFullyInsideBand) {
  EXPECT_DOUBLE_EQ(band_local_time(constant_zero(1.0), 0.0, 1.0, 0.5), 1.0);
}

TEST(BandLocalTime, BandNeverEntered) {
  EXPECT_DOUBLE_EQ(band_local_time(constant_zero(1.0), 10.0, 1.0, 0.5), 0.0);
  EXPECT_DOUBLE_EQ(band_local_time(constant_zero(3.0), 10.0, 2.5, 0.5), 0.0);
}

TEST(BandLocalTime, SingleSegmentClipping) {
  const auto p = ScaledPath::from_knots({{0.0, 0.0}, {1.0, 1.0}});
  // Time in (0.25, 0.75) is 0.5; divided by 2 eps = 0.5.
  EXPECT_DOUBLE_EQ(band_local_time(p, 0.5, 1.0, 0.25), 1.0);
  // Partial segment up to t = 0.5 spends 0.25 in the band.
  EXPECT_DOUBLE_EQ(band_local_time(p, 0.5, 0.5, 0.25), 0.5);
}

TEST(BandLocalTime, ArgumentErrors) {
  const auto p = constant_zero(1.0);
  EXPECT_THROW(band_local_time(p, 0.0, 1.5, 0.1), std::invalid_argument);
  EXPECT_THROW(band_local_time(p, 0.0, -0.1, 0.1), std::invalid_argument);
  EXPECT_THROW(band_local_time(p, 0.0, 1.0, 0.0), std::invalid_argument);
  EXPECT_THROW(band_local_time(p, 0.0, 1.0, -1.0), std::invalid_argument);
}

TEST(BandLocalTime, AgreesWithFineGridOracle) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto path = donsker_rescale(simulate_walk(200, {seed, 0}), 100);
    for (const double y : {-0.3, 0.0, 0.17, 0.42}) {
      for (const double t : {0.5, 1.333, 2.0}) {
        const double exact = band_local_time(path, y, t, 0.15);
        // 2e5 cells: the grid misclassifies at most ~2 crossings of width du per segment.
        EXPECT_NEAR(exact, brute_band(path, y, t, 0.15, 200000), 2e-3);
      }
    }
  }
}

TEST(BandLocalTime, MonotoneInTime) {
  const auto path = donsker_rescale(simulate_walk(5000, {3, 0}), 1000);
  for (const double y : {-0.5, 0.0, 0.3}) {
    double prev = 0.0;
    for (double t = 0.0; t <= 5.0; t += 0.0371) {
      const double v = band_local_time(path, y, t, 0.1);
      ASSERT_GE(v, prev);
      prev = v;
    }
  }
}

TEST(OccupationLocalTime, InitialBlockOnly) {
  const auto w = simulate_walk(100, {1, 0});
  EXPECT_DOUBLE_EQ(occupation_local_time(w, 25, 0.0, 0.0), 1.0 / 5.0);
}

TEST(OccupationLocalTime, HandCount) {
  const auto w = path_of({0, 1, 0, -1});
  // ceil(4 * 0.75) = 3 steps, L(0, 3) = 2, scaled by 1/sqrt(4).
  EXPECT_DOUBLE_EQ(occupation_local_time(w, 4, 0.0, 0.75), 1.0);
  EXPECT_THROW(occupation_local_time(w, 4, 0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(occupation_local_time(w, 0, 0.0, 0.5), std::invalid_argument);
}

TEST(OccupationLocalTime, UnvisitedLevelIsZero) {
  const auto w = simulate_walk(1000, {2, 0});
  EXPECT_DOUBLE_EQ(occupation_local_time(w, 100, 1000.0, 1.0), 0.0);
}

TEST(LevelSnapping, NearestSiteTiesTowardZero) {
  EXPECT_EQ(nearest_site(0.25, 100), 2);   // 2.5
  EXPECT_EQ(nearest_site(-0.25, 100), -2);
  EXPECT_EQ(nearest_site(0.26, 100), 3);
  EXPECT_EQ(nearest_site(-0.26, 100), -3);
  EXPECT_EQ(nearest_site(0.37, 10000), 37);
}

TEST(LevelSnapping, StepIndexToleratesRounding) {
  EXPECT_EQ(step_index(10, 0.3), 3);
  EXPECT_EQ(step_index(10, 0.31), 4);
  EXPECT_EQ(step_index(1'000'000, 0.25), 250'000);
  EXPECT_EQ(step_index(3, 0.0), 0);
}

TEST(LocalTimeProfile, ZeroTime) {
  const auto w = simulate_walk(100, {5, 0});
  const std::vector<double> grid{-0.5, 0.0, 0.06, 0.5};
  const auto occ = local_time_profile(w, 100, 0.0, grid, 0.1, Estimator::occupation);
  EXPECT_EQ(occ.values, (std::vector<double>{0.0, 0.1, 0.0, 0.0}));
  const auto band = local_time_profile(w, 100, 0.0, grid, 0.1, Estimator::band);
  for (const double v : band.values) EXPECT_EQ(v, 0.0);
}

TEST(LocalTimeProfile, GridErrors) {
  const auto w = simulate_walk(10, {5, 0});
  const std::vector<double> empty;
  const std::vector<double> unsorted{0.0, -1.0};
  EXPECT_THROW(local_time_profile(w, 4, 1.0, empty, 0.1, Estimator::band),
               std::invalid_argument);
  EXPECT_THROW(local_time_profile(w, 4, 1.0, unsorted, 0.1, Estimator::occupation),
               std::invalid_argument);
}

TEST(BandProfile, MatchesPointwiseEvaluation) {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const auto w = simulate_walk(20000, {seed, 9});
    const auto path = donsker_rescale(w, 10000);
    const double eps = default_eps(10000);
    std::vector<double> grid;
    for (int i = 0; i <= 400; ++i) grid.push_back(-2.0 + 4.0 * i / 400.0);
    // Levels exactly on ramp breakpoints.
    for (int j = -30; j <= 30; ++j) grid.push_back(j / 100.0 + eps);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    for (const double t : {0.0, 0.5, 1.23456, 2.0}) {
      const auto profile = band_profile(path, t, grid, eps);
      for (std::size_t i = 0; i < grid.size(); ++i) {
        ASSERT_NEAR(profile.values[i], band_local_time(path, grid[i], t, eps), 1e-10)
            << "seed " << seed << " t " << t << " y " << grid[i];
      }
    }
  }
}

TEST(BandProfile, FlatSegmentsUseOpenBand) {
  const auto p = ScaledPath::from_knots({{0.0, 0.0}, {1.0, 0.0}, {2.0, 1.0}, {3.0, 1.0}});
  const std::vector<double> grid{-0.5, -0.25, 0.0, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5};
  const auto profile = band_profile(p, 3.0, grid, 0.25);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_NEAR(profile.values[i], band_local_time(p, grid[i], 3.0, 0.25), 1e-14) << grid[i];
  }
}

TEST(BandProfile, VanishesOutsideRange) {
  const auto path = donsker_rescale(simulate_walk(4000, {6, 0}), 1000);
  const double eps = 0.05;
  const double lo = path.min_value(4.0) - eps;
  const double hi = path.max_value(4.0) + eps;
  const std::vector<double> grid{lo - 1.0, lo, hi, hi + 1.0};
  const auto profile = band_profile(path, 4.0, grid, eps);
  for (const double v : profile.values) EXPECT_EQ(v, 0.0);
}

TEST(BandProfile, FubiniAreaByTrapezoid) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto path = donsker_rescale(simulate_walk(10000, {seed, 3}), 10000);
    const double eps = default_eps(10000);
    for (const double t : {0.3, 1.0}) {
      const double lo = path.min_value(t) - eps;
      const double hi = path.max_value(t) + eps;
      const double h = eps / 8.0;
      std::vector<double> grid;
      for (double y = lo; y <= hi + h; y += h) grid.push_back(y);
      const auto profile = band_profile(path, t, grid, eps);
      double area = 0.0;
      for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        area += 0.5 * (profile.values[i] + profile.values[i + 1]) * (grid[i + 1] - grid[i]);
      }
      EXPECT_NEAR(area, t, 1e-3 * t);
    }
  }
}

TEST(BandProfile, NegationReflectsProfile) {
  const auto path = donsker_rescale(simulate_walk(8000, {12, 0}), 4000);
  std::vector<double> grid;
  for (int i = 0; i <= 200; ++i) grid.push_back(-1.5 + 3.0 * i / 200.0);
  std::vector<double> mirrored(grid.rbegin(), grid.rend());
  for (auto& y : mirrored) y = -y;
  const auto a = band_profile(path, 2.0, grid, 0.08);
  const auto b = band_profile(path.negated(), 2.0, mirrored, 0.08);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_NEAR(a.values[i], b.values[grid.size() - 1 - i], 1e-12);
  }
}

TEST(BandProfile, NonDecreasingAcrossTimes) {
  const auto path = donsker_rescale(simulate_walk(10000, {13, 0}), 10000);
  std::vector<double> grid;
  for (int i = 0; i <= 100; ++i) grid.push_back(-1.0 + 0.02 * i);
  auto prev = band_profile(path, 0.0, grid, 0.1);
  for (const double t : {0.1, 0.25, 0.5, 0.9, 1.0}) {
    const auto cur = band_profile(path, t, grid, 0.1);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      ASSERT_GE(cur.values[i], prev.values[i] - 1e-12);
    }
    prev = cur;
  }
}

// Knight scaling: n^-1/2 L(0, n) against exact draws of l(0, 1) = S(1) (Lévy).
TEST(OccupationLocalTime, KnightLawMatchesLevyConstruction) {
  constexpr std::size_t kReplicates = 2000;
  constexpr std::int64_t kN = 10000;
  std::vector<double> walk_values;
  std::vector<double> exact_values;
  for (std::size_t r = 0; r < kReplicates; ++r) {
    const auto w = simulate_walk(kN, {777, r});
    walk_values.push_back(occupation_local_time(w, kN, 0.0, 1.0));
    exact_values.push_back(sample_joint_exact(1.0, {778, r}).second);
  }
  const auto ks = ks_two_sample(walk_values, exact_values);
  EXPECT_GT(ks.p_value, 0.001) << "D = " << ks.statistic;
}

}  // namespace
}  // namespace bricklayer
