#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string_view>
#include <thread>
#include <vector>

#include "bricklayer/curve.hpp"
#include "bricklayer/stats.hpp"

namespace bricklayer {

enum class ExperimentId {
  area,
  density,
  identity_reversal,
  identity_levy,
  identity_signed,
  knight,
  coverage,
};

/// Accepts both the short CLI names (reversal, levy, signed) and the long
/// identity-* forms. Throws std::invalid_argument for anything else.
ExperimentId parse_experiment(std::string_view name);
std::string_view to_string(ExperimentId id) noexcept;

struct ExperimentConfig {
  ExperimentId id = ExperimentId::area;
  std::int64_t replicates = 2000;
  std::int64_t n = 10'000;
  double t = 1.0;
  std::optional<double> eps;  // default n^(-1/4)
  std::uint64_t seed = 1;
  double alpha = 0.001;
  Window window{};
  double delta = 0.05;
  std::int64_t step_budget = 100'000'000;
  double c = 1.0;
  double d = 1.0;
  unsigned threads = 0;  // 0 selects hardware concurrency

  double resolved_eps() const;
  /// Throws std::invalid_argument naming the first invalid field.
  void validate() const;
};

/// Runs the experiment; a pure function of the config.
TestReport run_experiment(const ExperimentConfig& config);

/// Null calibration of the chi-square harness: `runs` goodness-of-fit tests of
/// exact model samples (`samples_per_run` each) against the same model.
/// Returns the number of runs rejected at `alpha`.
std::int64_t null_calibration_rejections(std::int64_t runs, std::int64_t samples_per_run,
                                         double t, std::uint64_t seed, double alpha,
                                         unsigned threads = 0);

/// Evaluates fn(i) for i in [0, count) on up to `threads` workers and returns
/// the results in index order, so the output does not depend on scheduling.
template <class Fn>
auto parallel_map(std::size_t count, unsigned threads, Fn&& fn)
    -> std::vector<decltype(fn(std::size_t{}))> {
  using Result = decltype(fn(std::size_t{}));
  std::vector<Result> out(count);
  unsigned workers = threads == 0 ? std::thread::hardware_concurrency() : threads;
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(count)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += workers) out[i] = fn(i);
    });
  }
  pool.clear();  // joins
  return out;
}

}  // namespace bricklayer
