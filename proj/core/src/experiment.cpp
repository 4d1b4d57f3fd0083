#include "bricklayer/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "bricklayer/local_time.hpp"
#include "bricklayer/oracle.hpp"

namespace bricklayer {
namespace {

constexpr std::uint64_t kExactFamily = 5;
constexpr std::uint64_t kCalibrationFamily = 6;
constexpr double kAreaTolerance = 1e-9;       // relative to |c| d t
constexpr double kCoverageRequired = 0.9;     // fraction of replicates fully covered

using Params = std::vector<std::pair<std::string, ParamValue>>;

Params common_params(const ExperimentConfig& config) {
  return {
      {"n", config.n},
      {"t", config.t},
      {"eps", config.resolved_eps()},
      {"replicates", config.replicates},
      {"alpha", config.alpha},
  };
}

std::vector<SamplePair> identity_samples(const ExperimentConfig& config, IdentitySide side) {
  return parallel_map(static_cast<std::size_t>(config.replicates), config.threads,
                      [&](std::size_t r) {
                        return sample_identity_replicate(config.t, config.seed, config.n, side,
                                                         r);
                      });
}

std::vector<double> firsts(std::span<const SamplePair> v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& p : v) out.push_back(p.first);
  return out;
}

std::vector<double> seconds(std::span<const SamplePair> v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& p : v) out.push_back(p.second);
  return out;
}

std::vector<double> sums(std::span<const SamplePair> v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& p : v) out.push_back(std::abs(p.first) + p.second);
  return out;
}

// KS per coordinate and on |first| + second; p is the smallest of the three.
TestReport compare_sides(const ExperimentConfig& config, std::string name,
                         std::span<const SamplePair> a, std::span<const SamplePair> b) {
  const auto first = ks_two_sample(firsts(a), firsts(b));
  const auto second = ks_two_sample(seconds(a), seconds(b));
  const auto summed = ks_two_sample(sums(a), sums(b));

  TestReport report;
  report.test_name = std::move(name);
  report.statistic = std::max({first.statistic, second.statistic, summed.statistic});
  report.p_value = std::min({first.p_value, second.p_value, summed.p_value});
  report.n_samples = static_cast<std::int64_t>(a.size() + b.size());
  report.seed = config.seed;
  report.params = common_params(config);
  report.params.emplace_back("ks_first", std::vector<double>{first.statistic, first.p_value});
  report.params.emplace_back("ks_second", std::vector<double>{second.statistic, second.p_value});
  report.params.emplace_back("ks_summed", std::vector<double>{summed.statistic, summed.p_value});
  report.pass = *report.p_value > config.alpha;
  return report;
}

TestReport run_area(const ExperimentConfig& config) {
  const auto walk = simulate_walk(step_index(config.n, config.t), {config.seed, 0});
  const auto scaled = donsker_rescale(walk, config.n);
  const double eps = config.resolved_eps();
  const double area = wall_area(scaled, config.t, eps, config.c, config.d);
  const double target = std::abs(config.c) * config.d * config.t;

  TestReport report;
  report.test_name = "area";
  report.statistic = std::abs(area - target);
  report.n_samples = 1;
  report.seed = config.seed;
  report.params = common_params(config);
  report.params.emplace_back("c", config.c);
  report.params.emplace_back("d", config.d);
  report.params.emplace_back("area", area);
  report.params.emplace_back("tolerance", kAreaTolerance * target);
  report.pass = report.statistic <= kAreaTolerance * target;
  return report;
}

TestReport run_density(const ExperimentConfig& config) {
  const auto samples = identity_samples(config, IdentitySide::lhs);
  // Walk sites after k steps share the parity of k, so first coordinates sit
  // on a lattice of spacing 2/sqrt(n); heights on multiples of 1/sqrt(n).
  const double root_n = std::sqrt(static_cast<double>(config.n));
  const auto steps = step_index(config.n, config.t);
  const Lattice y_lattice{2.0 / root_n, static_cast<double>(steps % 2) / root_n};
  const Lattice s_lattice{1.0 / root_n, 0.0};
  const auto binning =
      snap_to_lattice(equiprobable_binning(config.t), y_lattice, s_lattice);
  const DensityModel model{config.t};
  const auto chi2 = chi2_gof_2d(samples, model, binning);

  TestReport report;
  report.test_name = "density";
  report.statistic = chi2.statistic;
  report.p_value = chi2.p_value;
  report.n_samples = static_cast<std::int64_t>(samples.size());
  report.seed = config.seed;
  report.params = common_params(config);
  report.params.emplace_back("binning", std::string("12x12 equiprobable, lattice-snapped"));
  report.params.emplace_back("kept_bins", static_cast<std::int64_t>(chi2.kept_bins));
  report.params.emplace_back("dof", static_cast<std::int64_t>(chi2.dof));
  report.params.emplace_back("probability_sum", chi2.probability_sum);
  report.pass = chi2.p_value > config.alpha;
  return report;
}

TestReport run_knight(const ExperimentConfig& config) {
  // occupation_local_time(0, t) is the reversal side's height.
  const auto walks = identity_samples(config, IdentitySide::reversal);
  const auto exact = parallel_map(
      static_cast<std::size_t>(config.replicates), config.threads, [&](std::size_t r) {
        return sample_joint_exact(config.t, family_key(config.seed, kExactFamily, r)).second;
      });
  const auto ks = ks_two_sample(seconds(walks), exact);

  TestReport report;
  report.test_name = "knight";
  report.statistic = ks.statistic;
  report.p_value = ks.p_value;
  report.n_samples = static_cast<std::int64_t>(2 * walks.size());
  report.seed = config.seed;
  report.params = common_params(config);
  report.params.emplace_back("level", 0.0);
  report.pass = ks.p_value > config.alpha;
  return report;
}

TestReport run_coverage(const ExperimentConfig& config) {
  const auto runs = parallel_map(
      static_cast<std::size_t>(config.replicates), config.threads, [&](std::size_t r) {
        return coverage_check({config.seed, r}, config.window, config.delta, config.step_budget,
                              config.n);
      });
  std::int64_t complete = 0;
  std::vector<double> cover_times;
  std::vector<double> covered_fraction;
  for (const auto& run : runs) {
    covered_fraction.push_back(static_cast<double>(run.covered_count) /
                               static_cast<double>(run.total_count));
    if (run.complete()) {
      ++complete;
      double last = 0.0;
      for (const auto& cell : run.first_cover_time) last = std::max(last, *cell);
      cover_times.push_back(last);
    }
  }

  TestReport report;
  report.test_name = "coverage";
  report.statistic = static_cast<double>(complete) / static_cast<double>(config.replicates);
  report.n_samples = config.replicates;
  report.seed = config.seed;
  report.params = common_params(config);
  report.params.emplace_back("window", std::vector<double>{config.window.x_lo, config.window.x_hi,
                                                           0.0, config.window.h_hi});
  report.params.emplace_back("delta", config.delta);
  report.params.emplace_back("step_budget", config.step_budget);
  report.params.emplace_back("required_fraction", kCoverageRequired);
  report.params.emplace_back("full_cover_times", cover_times);
  report.params.emplace_back("covered_fraction", covered_fraction);
  report.pass = report.statistic >= kCoverageRequired;
  return report;
}

}  // namespace

ExperimentId parse_experiment(std::string_view name) {
  if (name == "area") return ExperimentId::area;
  if (name == "density") return ExperimentId::density;
  if (name == "reversal" || name == "identity-reversal") return ExperimentId::identity_reversal;
  if (name == "levy" || name == "identity-levy") return ExperimentId::identity_levy;
  if (name == "signed" || name == "identity-signed") return ExperimentId::identity_signed;
  if (name == "knight") return ExperimentId::knight;
  if (name == "coverage") return ExperimentId::coverage;
  throw std::invalid_argument("unknown experiment '" + std::string(name) + "'");
}

std::string_view to_string(ExperimentId id) noexcept {
  switch (id) {
    case ExperimentId::area: return "area";
    case ExperimentId::density: return "density";
    case ExperimentId::identity_reversal: return "identity-reversal";
    case ExperimentId::identity_levy: return "identity-levy";
    case ExperimentId::identity_signed: return "identity-signed";
    case ExperimentId::knight: return "knight";
    case ExperimentId::coverage: return "coverage";
  }
  return "?";
}

double ExperimentConfig::resolved_eps() const { return eps ? *eps : default_eps(n); }

void ExperimentConfig::validate() const {
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("t must be positive");
  if (eps && !(*eps > 0.0)) throw std::invalid_argument("eps must be positive");
  if (replicates < 1) throw std::invalid_argument("replicates must be at least 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
  if (c == 0.0 || !std::isfinite(c)) throw std::invalid_argument("c must be nonzero");
  if (!(d > 0.0) || !std::isfinite(d)) throw std::invalid_argument("d must be positive");
  if (id == ExperimentId::coverage) {
    if (!(window.x_lo < window.x_hi) || !(window.h_hi > 0.0)) {
      throw std::invalid_argument("degenerate coverage window");
    }
    if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
    if (step_budget < 1) throw std::invalid_argument("step budget must be at least 1");
  }
  if (id == ExperimentId::density && replicates < 500) {
    throw std::invalid_argument("density experiment needs at least 500 replicates");
  }
}

TestReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  switch (config.id) {
    case ExperimentId::area:
      return run_area(config);
    case ExperimentId::density:
      return run_density(config);
    case ExperimentId::identity_reversal:
      return compare_sides(config, "identity-reversal",
                           identity_samples(config, IdentitySide::lhs),
                           identity_samples(config, IdentitySide::reversal));
    case ExperimentId::identity_levy: {
      auto reversal = identity_samples(config, IdentitySide::reversal);
      for (auto& p : reversal) p.first = std::abs(p.first);
      return compare_sides(config, "identity-levy", reversal,
                           identity_samples(config, IdentitySide::levy));
    }
    case ExperimentId::identity_signed:
      return compare_sides(config, "identity-signed",
                           identity_samples(config, IdentitySide::reversal),
                           identity_samples(config, IdentitySide::signed_levy));
    case ExperimentId::knight:
      return run_knight(config);
    case ExperimentId::coverage:
      return run_coverage(config);
  }
  throw std::invalid_argument("unknown experiment");
}

std::int64_t null_calibration_rejections(std::int64_t runs, std::int64_t samples_per_run,
                                         double t, std::uint64_t seed, double alpha,
                                         unsigned threads) {
  if (runs < 1 || samples_per_run < 1) throw std::invalid_argument("runs and samples must be >= 1");
  const DensityModel model{t};
  const auto binning = equiprobable_binning(t);
  const auto probs = cell_probabilities(model, binning);
  const auto rejected = parallel_map(
      static_cast<std::size_t>(runs), threads, [&](std::size_t run) {
        std::vector<SamplePair> samples;
        samples.reserve(static_cast<std::size_t>(samples_per_run));
        const auto base = static_cast<std::uint64_t>(run) * static_cast<std::uint64_t>(samples_per_run);
        for (std::int64_t j = 0; j < samples_per_run; ++j) {
          samples.push_back(sample_joint_exact(
              t, family_key(seed, kCalibrationFamily, base + static_cast<std::uint64_t>(j))));
        }
        return chi2_gof_2d(samples, binning, probs).p_value <= alpha ? 1 : 0;
      });
  std::int64_t total = 0;
  for (const int r : rejected) total += r;
  return total;
}

}  // namespace bricklayer
