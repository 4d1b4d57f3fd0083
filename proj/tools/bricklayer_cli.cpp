// bricklayer: simulate the random bricklayer and run verification experiments.
//
// Exit codes: 0 success / pass, 1 statistical failure, 2 usage or I/O error.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "bricklayer/curve.hpp"
#include "bricklayer/experiment.hpp"
#include "bricklayer/io.hpp"
#include "bricklayer/local_time.hpp"
#include "bricklayer/walk.hpp"

namespace {

using namespace bricklayer;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr std::int64_t kMaxDefaultRows = 100'000;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::optional<std::int64_t> n_steps;
  std::int64_t n = 10'000;
  double t = 1.0;
  std::optional<double> eps;
  std::uint64_t seed = 1;
  std::optional<std::int64_t> replicates;
  double x_lo = -1.0;
  double x_hi = 1.0;
  double h_hi = 0.5;
  double delta = 0.05;
  std::int64_t budget = 100'000'000;
  double c = 1.0;
  double d = 1.0;
  std::string output = "-";
  std::string format = "csv";
  double alpha = 0.001;
  std::optional<std::int64_t> stride;
  std::string estimator = "occupation";
  std::int64_t levels = 101;
  std::optional<double> y_lo;
  std::optional<double> y_hi;
  unsigned threads = 0;
  std::string experiment;
};

std::int64_t resolved_steps(const Options& o) {
  const auto steps = o.n_steps ? *o.n_steps : step_index(o.n, o.t);
  if (steps < 0) throw UsageError("--n-steps must be non-negative");
  return steps;
}

void emit(const Options& o, const std::string& text) {
  if (o.output == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(o.output, std::ios::binary);
  if (!out) throw UsageError("cannot open output file '" + o.output + "'");
  out << text;
  if (!out.flush()) throw UsageError("failed writing '" + o.output + "'");
}

int cmd_walk(const Options& o) {
  const auto walk = simulate_walk(resolved_steps(o), {o.seed, 0});
  const auto table = brick_trace_table(discrete_brick_trace(walk), o.stride.value_or(1));
  emit(o, to_string(table, parse_format(o.format)));
  return kExitPass;
}

int cmd_curve(const Options& o) {
  if (o.n < 1) throw UsageError("--n must be at least 1");
  const auto steps = resolved_steps(o);
  const auto stride = o.stride.value_or(
      std::max<std::int64_t>(1, (steps + kMaxDefaultRows - 2) / (kMaxDefaultRows - 1)));
  if (stride < 1) throw UsageError("--stride must be at least 1");
  TraceOptions options;
  options.estimator = parse_estimator(o.estimator);
  options.eps = o.eps.value_or(0.0);
  const auto walk = simulate_walk(steps, {o.seed, 0});
  Table table;
  if (options.estimator == Estimator::band) {
    options.stride = stride;
    table = curve_table(scale_trace(build_trace(walk, o.n, options), o.c, o.d));
  } else {
    table = curve_table(scale_trace(build_trace(walk, o.n, options), o.c, o.d), stride);
  }
  emit(o, to_string(table, parse_format(o.format)));
  return kExitPass;
}

int cmd_profile(const Options& o) {
  if (o.n < 1) throw UsageError("--n must be at least 1");
  if (o.levels < 1) throw UsageError("--levels must be at least 1");
  const auto steps = std::max<std::int64_t>(1, resolved_steps(o));
  const auto walk = simulate_walk(steps, {o.seed, 0});
  const auto estimator = parse_estimator(o.estimator);
  const double eps = o.eps.value_or(default_eps(o.n));
  const auto scaled = donsker_rescale(walk, o.n);
  const double lo = o.y_lo.value_or(scaled.min_value(o.t) - eps);
  const double hi = o.y_hi.value_or(scaled.max_value(o.t) + eps);
  std::vector<double> grid;
  if (o.levels == 1) {
    grid.push_back(lo);
  } else {
    for (std::int64_t i = 0; i < o.levels; ++i) {
      grid.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(o.levels - 1));
    }
  }
  const auto profile = local_time_profile(walk, o.n, o.t, grid, eps, estimator);
  emit(o, to_string(profile_table(profile), parse_format(o.format)));
  return kExitPass;
}

int cmd_verify(const Options& o) {
  ExperimentConfig config;
  config.id = parse_experiment(o.experiment);
  config.n = o.n;
  config.t = o.t;
  config.eps = o.eps;
  config.seed = o.seed;
  config.alpha = o.alpha;
  config.window = {o.x_lo, o.x_hi, o.h_hi};
  config.delta = o.delta;
  config.step_budget = o.budget;
  config.c = o.c;
  config.d = o.d;
  config.threads = o.threads;
  config.replicates =
      o.replicates.value_or(config.id == ExperimentId::coverage ? 10 : 2000);
  const auto report = run_experiment(config);
  emit(o, report_to_json(report));
  if (o.output != "-") {
    std::cerr << report.test_name << ": " << (report.pass ? "pass" : "fail") << '\n';
  }
  return report.pass ? kExitPass : kExitFail;
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--n", o.n, "Steps per unit time (scale)")->capture_default_str();
  cmd->add_option("--t", o.t, "Time horizon")->capture_default_str();
  cmd->add_option("--seed", o.seed, "Master seed")->capture_default_str();
  cmd->add_option("-o,--output", o.output, "Output path, '-' for stdout")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Random bricklayer simulation and verification"};
  app.require_subcommand(1);

  auto* walk = app.add_subcommand("walk", "Simulate a walk and write blocks (k, site, height)");
  add_common(walk, o);
  walk->add_option("--n-steps", o.n_steps, "Number of walk steps (default ceil(n t))");
  walk->add_option("--stride", o.stride, "Write every stride-th block");
  walk->add_option("--format", o.format, "csv or json")->capture_default_str();

  auto* curve = app.add_subcommand("curve", "Write the bricklayer curve (t, x, h)");
  add_common(curve, o);
  curve->add_option("--n-steps", o.n_steps, "Number of walk steps (default ceil(n t))");
  curve->add_option("--stride", o.stride, "Write every stride-th point");
  curve->add_option("--estimator", o.estimator, "occupation or band")->capture_default_str();
  curve->add_option("--eps", o.eps, "Band half-width (default n^-1/4)");
  curve->add_option("--c", o.c, "Horizontal scale factor")->capture_default_str();
  curve->add_option("--d", o.d, "Vertical scale factor")->capture_default_str();
  curve->add_option("--format", o.format, "csv or json")->capture_default_str();

  auto* profile = app.add_subcommand("profile", "Write the local time profile (y, local_time)");
  add_common(profile, o);
  profile->add_option("--n-steps", o.n_steps, "Number of walk steps (default ceil(n t))");
  profile->add_option("--estimator", o.estimator, "occupation or band")->capture_default_str();
  profile->add_option("--eps", o.eps, "Band half-width (default n^-1/4)");
  profile->add_option("--levels", o.levels, "Number of grid levels")->capture_default_str();
  profile->add_option("--y-lo", o.y_lo, "Lowest level (default path minimum - eps)");
  profile->add_option("--y-hi", o.y_hi, "Highest level (default path maximum + eps)");
  profile->add_option("--format", o.format, "csv or json")->capture_default_str();

  auto* verify = app.add_subcommand("verify", "Run a verification experiment, write a JSON report");
  add_common(verify, o);
  verify->add_option("experiment", o.experiment,
                     "area | density | reversal | levy | signed | knight | coverage")
      ->required();
  verify->add_option("--replicates", o.replicates, "Replicates (default 2000; coverage 10)");
  verify->add_option("--eps", o.eps, "Band half-width (default n^-1/4)");
  verify->add_option("--alpha", o.alpha, "Significance level")->capture_default_str();
  verify->add_option("--x-lo", o.x_lo, "Coverage window left edge")->capture_default_str();
  verify->add_option("--x-hi", o.x_hi, "Coverage window right edge")->capture_default_str();
  verify->add_option("--h-hi", o.h_hi, "Coverage window top edge")->capture_default_str();
  verify->add_option("--delta", o.delta, "Coverage cell size")->capture_default_str();
  verify->add_option("--budget", o.budget, "Coverage step budget")->capture_default_str();
  verify->add_option("--c", o.c, "Horizontal scale factor (area)")->capture_default_str();
  verify->add_option("--d", o.d, "Vertical scale factor (area)")->capture_default_str();
  verify->add_option("--threads", o.threads, "Worker threads, 0 = all cores");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*walk) return cmd_walk(o);
    if (*curve) return cmd_curve(o);
    if (*profile) return cmd_profile(o);
    if (*verify) return cmd_verify(o);
  } catch (const std::exception& e) {
    std::cerr << "bricklayer: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
