#include <gtest/gtest.h>

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <numbers>

#include "bricklayer/oracle.hpp"
#include "bricklayer/stats.hpp"

namespace bricklayer {
namespace {

// Closed-form mass of [y0, y1] x [s0, s1] under the joint density. On y >= 0
// the density is -d/du phi_t(u) at u = y + s, so the double integral
// telescopes into normal CDF differences. Negative y reflects.
double closed_form_quadrant(double y0, double y1, double s0, double s1, double t) {
  const boost::math::normal_distribution<double> normal(0.0, std::sqrt(t));
  const auto cdf = [&](double u) { return boost::math::cdf(normal, u); };
  return (cdf(y1 + s0) - cdf(y0 + s0)) - (cdf(y1 + s1) - cdf(y0 + s1));
}

double closed_form_rectangle(double y0, double y1, double s0, double s1, double t) {
  double mass = 0.0;
  if (y1 > 0.0) mass += closed_form_quadrant(std::max(y0, 0.0), y1, s0, s1, t);
  if (y0 < 0.0) mass += closed_form_quadrant(std::max(-y1, 0.0), -y0, s0, s1, t);
  return mass;
}

std::vector<double> seconds(const std::vector<SamplePair>& v) {
  std::vector<double> out;
  for (const auto& p : v) out.push_back(p.second);
  return out;
}

TEST(JointDensity, Examples) {
  EXPECT_EQ(joint_density(0.0, 0.0, 1.0), 0.0);
  EXPECT_NEAR(joint_density(0.0, 1.0, 1.0), std::exp(-0.5) / std::sqrt(2.0 * std::numbers::pi),
              1e-15);
  EXPECT_NEAR(joint_density(0.0, 1.0, 1.0), 0.24197, 1e-5);
  for (const double y : {0.1, 0.7, 2.3}) {
    EXPECT_EQ(joint_density(y, 0.4, 1.7), joint_density(-y, 0.4, 1.7));
  }
}

TEST(JointDensity, DomainErrors) {
  EXPECT_THROW(joint_density(0.0, 1.0, 0.0), std::domain_error);
  EXPECT_THROW(joint_density(0.0, 1.0, -1.0), std::domain_error);
  EXPECT_THROW(joint_density(0.0, -0.1, 1.0), std::domain_error);
  EXPECT_THROW(marginal_level(0.0, 0.0), std::domain_error);
  EXPECT_THROW(marginal_height(-1.0, 1.0), std::domain_error);
  EXPECT_THROW(mean_height(0.0), std::domain_error);
}

TEST(Marginals, ClosedFormValues) {
  EXPECT_NEAR(marginal_level(0.0, 1.0), 1.0 / std::sqrt(2.0 * std::numbers::pi), 1e-15);
  EXPECT_NEAR(marginal_level(1.0, 1.0), 0.24197, 1e-5);
  EXPECT_EQ(marginal_level(1.3, 2.0), marginal_level(-1.3, 2.0));
  EXPECT_NEAR(marginal_height(0.0, 1.0), std::sqrt(2.0 / std::numbers::pi), 1e-15);
  EXPECT_NEAR(marginal_height(0.0, 1.0), 0.79788, 1e-5);
  EXPECT_NEAR(mean_height(1.0), 0.79788, 1e-5);
  EXPECT_NEAR(mean_height(4.0), 2.0 * mean_height(1.0), 1e-15);
  EXPECT_LT(mean_height(1e-12), 1e-6);
}

TEST(Marginals, HeightScalingRelation) {
  for (const double t : {0.25, 2.0, 9.0}) {
    for (const double s : {0.0, 0.3, 1.1, 2.5}) {
      EXPECT_NEAR(marginal_height(s, t), marginal_height(s / std::sqrt(t), 1.0) / std::sqrt(t),
                  1e-14);
    }
  }
}

TEST(Marginals, QuadratureAtFiftyPoints) {
  for (const double t : {1.0, 0.5, 3.0}) {
    const double cut = 10.0 * std::sqrt(t);
    for (int i = 0; i < 50; ++i) {
      const double y = -3.0 * std::sqrt(t) + 6.0 * std::sqrt(t) * i / 49.0;
      const double level = integrate([&](double s) { return joint_density(y, s, t); }, 0.0,
                                     std::max(0.0, cut - std::abs(y)));
      ASSERT_NEAR(level, marginal_level(y, t), 1e-8) << "y = " << y;

      const double s = 3.0 * std::sqrt(t) * i / 49.0;
      const double reach = std::max(0.0, cut - s);
      const double height = integrate([&](double v) { return joint_density(v, s, t); }, -reach,
                                      0.0) +
                            integrate([&](double v) { return joint_density(v, s, t); }, 0.0,
                                      reach);
      ASSERT_NEAR(height, marginal_height(s, t), 1e-8) << "s = " << s;
    }
  }
  const double level_07 = integrate([](double s) { return joint_density(0.7, s, 1.0); }, 0.0, 9.3);
  EXPECT_NEAR(level_07, marginal_level(0.7, 1.0), 1e-8);
  EXPECT_NEAR(integrate([](double s) { return marginal_height(s, 1.0); }, 0.0, 10.0), 1.0, 1e-8);
}

TEST(DensityModel, NormalizationAndMoment) {
  for (const double t : {1.0, 0.3, 2.5}) {
    const DensityModel model{t};
    const double inf = std::numeric_limits<double>::infinity();
    EXPECT_NEAR(model.rectangle_probability(-inf, inf, 0.0, inf), 1.0, 1e-6);
    const double cut = 10.0 * std::sqrt(t);
    const auto weighted = [&](double y, double s) { return s * joint_density(y, s, t); };
    const double moment =
        integrate_2d(weighted, -cut, 0.0, 0.0, cut) + integrate_2d(weighted, 0.0, cut, 0.0, cut);
    EXPECT_NEAR(moment, mean_height(t), 1e-6);
  }
}

TEST(DensityModel, RectanglesMatchClosedForm) {
  const double inf = std::numeric_limits<double>::infinity();
  for (const double t : {1.0, 0.7}) {
    const DensityModel model{t};
    const std::vector<double> ys{-inf, -1.2, -0.3, 0.0, 0.45, 1.9, inf};
    const std::vector<double> ss{0.0, 0.2, 0.8, 1.5, inf};
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < ys.size(); ++i) {
      for (std::size_t j = 0; j + 1 < ss.size(); ++j) {
        const double quad = model.rectangle_probability(ys[i], ys[i + 1], ss[j], ss[j + 1]);
        EXPECT_NEAR(quad, closed_form_rectangle(ys[i], ys[i + 1], ss[j], ss[j + 1], t), 1e-9);
        total += quad;
      }
    }
    EXPECT_NEAR(total, 1.0, 1e-9);
  }
}

TEST(ReflectionTail, Examples) {
  const double t = 1.3;
  const boost::math::normal_distribution<double> normal(0.0, std::sqrt(t));
  EXPECT_NEAR(reflection_tail(0.0, 0.8, t), boost::math::pdf(normal, 1.6), 1e-15);
  for (const double x : {-1.0, 0.0, 0.5}) {
    double prev = reflection_tail(x, std::max(x, 0.0) + 0.01, t);
    for (double s = std::max(x, 0.0) + 0.02; s < 3.0; s += 0.05) {
      const double cur = reflection_tail(x, s, t);
      EXPECT_LT(cur, prev);
      prev = cur;
    }
  }
  EXPECT_THROW(reflection_tail(1.0, 1.0, t), std::domain_error);
  EXPECT_THROW(reflection_tail(2.0, 1.0, t), std::domain_error);
  EXPECT_THROW(reflection_tail(-1.0, 0.0, t), std::domain_error);
}

// -d/ds of the tail is the joint density of (B, S); mapping to (S - B, S) and
// splitting the mass over a fair sign gives the bricklayer density.
TEST(ReflectionTail, DerivationChainReproducesDensity) {
  for (const double t : {1.0, 0.4}) {
    for (const double y : {-1.1, -0.2, 0.3, 0.9}) {
      for (const double s : {0.1, 0.6, 1.4}) {
        const double x = s - std::abs(y);
        const double h = 1e-5;
        const double derivative =
            (reflection_tail(x, s + h, t) - reflection_tail(x, s - h, t)) / (2.0 * h);
        EXPECT_NEAR(0.5 * -derivative, joint_density(y, s, t), 1e-8);
      }
    }
  }
}

TEST(IdentitySides, ParseTags) {
  EXPECT_EQ(parse_identity_side("lhs"), IdentitySide::lhs);
  EXPECT_EQ(parse_identity_side("reversal"), IdentitySide::reversal);
  EXPECT_EQ(parse_identity_side("levy"), IdentitySide::levy);
  EXPECT_EQ(parse_identity_side("signed"), IdentitySide::signed_levy);
  EXPECT_THROW(parse_identity_side("rhs"), std::invalid_argument);
  for (const auto side : {IdentitySide::lhs, IdentitySide::reversal, IdentitySide::levy,
                          IdentitySide::signed_levy}) {
    EXPECT_EQ(parse_identity_side(to_string(side)), side);
  }
}

TEST(IdentitySides, AllPlusSignsReduceToLevy) {
  const auto levy = sample_identity_pair(1.0, 42, 400, IdentitySide::levy, 200);
  const auto plus =
      sample_identity_pair(1.0, 42, 400, IdentitySide::signed_levy, 200, SignMode::all_plus);
  ASSERT_EQ(levy.size(), plus.size());
  for (std::size_t i = 0; i < levy.size(); ++i) {
    EXPECT_EQ(levy[i].first, plus[i].first);
    EXPECT_EQ(levy[i].second, plus[i].second);
  }
}

TEST(IdentitySides, LevyFirstCoordinateNonNegative) {
  for (const auto& p : sample_identity_pair(1.0, 9, 1000, IdentitySide::levy, 500)) {
    EXPECT_GE(p.first, 0.0);
    EXPECT_GE(p.second, 0.0);
  }
}

TEST(IdentitySides, SignedFlipsSignsRoughlyHalfTheTime) {
  const auto v = sample_identity_pair(1.0, 3, 100, IdentitySide::signed_levy, 4000);
  std::size_t negative = 0;
  std::size_t nonzero = 0;
  for (const auto& p : v) {
    if (p.first != 0.0) ++nonzero;
    if (p.first < 0.0) ++negative;
  }
  EXPECT_NEAR(static_cast<double>(negative) / static_cast<double>(nonzero), 0.5,
              5.0 * 0.5 / std::sqrt(static_cast<double>(nonzero)));
}

TEST(IdentitySides, ReplicateMatchesBatch) {
  const auto batch = sample_identity_pair(0.5, 11, 300, IdentitySide::lhs, 20);
  for (std::size_t r = 0; r < batch.size(); ++r) {
    const auto one = sample_identity_replicate(0.5, 11, 300, IdentitySide::lhs, r);
    EXPECT_EQ(one.first, batch[r].first);
    EXPECT_EQ(one.second, batch[r].second);
  }
}

TEST(IdentitySides, LhsAndSignedHeightsAgreeInLaw) {
  const auto lhs = sample_identity_pair(1.0, 2024, 10000, IdentitySide::lhs, 2000);
  const auto sgn = sample_identity_pair(1.0, 2024, 10000, IdentitySide::signed_levy, 2000);
  const auto ks = ks_two_sample(seconds(lhs), seconds(sgn));
  EXPECT_GT(ks.p_value, 0.001) << "D = " << ks.statistic;
}

TEST(ExactSampler, Deterministic) {
  const auto a = sample_joint_exact(1.0, {5, 6});
  const auto b = sample_joint_exact(1.0, {5, 6});
  EXPECT_EQ(a.first, b.first);
  EXPECT_EQ(a.second, b.second);
  EXPECT_GE(a.second, 0.0);
}

TEST(ExactSampler, MatchesClosedFormRectangles) {
  const double t = 1.7;
  const auto binning = equiprobable_binning(t);
  std::vector<double> probs;
  for (std::size_t i = 0; i < binning.y_bins(); ++i) {
    for (std::size_t j = 0; j < binning.s_bins(); ++j) {
      probs.push_back(closed_form_rectangle(binning.y_edges[i], binning.y_edges[i + 1],
                                            binning.s_edges[j], binning.s_edges[j + 1], t));
    }
  }
  std::vector<SamplePair> samples;
  for (std::uint64_t r = 0; r < 100000; ++r) samples.push_back(sample_joint_exact(t, {77, r}));
  const auto chi2 = chi2_gof_2d(samples, binning, probs);
  EXPECT_NEAR(chi2.probability_sum, 1.0, 1e-9);
  EXPECT_GT(chi2.p_value, 0.001) << "chi2 = " << chi2.statistic;

  double mean_s = 0.0;
  for (const auto& p : samples) mean_s += p.second;
  mean_s /= static_cast<double>(samples.size());
  EXPECT_NEAR(mean_s, mean_height(t), 5.0 * std::sqrt(t * (1.0 - 2.0 / std::numbers::pi) / 1e5));
}

}  // namespace
}  // namespace bricklayer
