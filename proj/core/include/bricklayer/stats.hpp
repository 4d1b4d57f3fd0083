#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "bricklayer/oracle.hpp"

namespace bricklayer {

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
  bool exact = false;
};

/// Two-sample Kolmogorov-Smirnov test. The statistic handles ties by
/// comparing the ECDFs only after each distinct value. The p-value is exact
/// (lattice path count) when |a| |b| <= 10^4 and otherwise comes from the
/// Kolmogorov limit law at sqrt(m n / (m + n)) with the Stephens correction.
/// Throws std::invalid_argument if either sample is empty.
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

/// Pr{K > lambda} for the Kolmogorov distribution, series truncated at 100 terms.
double kolmogorov_survival(double lambda);

/// Exact Pr{D_{m,n} >= d} for continuous data under the null.
double ks_exact_survival(std::size_t m, std::size_t n, double d);

/// Pr{chi^2_dof > x}.
double chi_square_survival(double x, double dof);

/// Rectangular 2-D binning; the outermost edges extend to infinity when
/// counting samples.
struct Binning2d {
  std::vector<double> y_edges;
  std::vector<double> s_edges;

  std::size_t y_bins() const noexcept { return y_edges.size() - 1; }
  std::size_t s_bins() const noexcept { return s_edges.size() - 1; }
};

/// Edges at the marginal quantiles of the model: N(0, t) for y, half-normal
/// for s, outer edges at -inf/+inf and 0/+inf.
Binning2d equiprobable_binning(double t, std::size_t y_bins = 12, std::size_t s_bins = 12);

/// Sample values lie on offset + k spacing. Snapping moves each interior edge
/// to the nearest midpoint between lattice values so every bin contains whole
/// lattice cells.
struct Lattice {
  double spacing;
  double offset = 0.0;
};

/// Snaps interior edges on each axis and drops edges that collapse.
Binning2d snap_to_lattice(const Binning2d& binning, const Lattice& y_lattice,
                          const Lattice& s_lattice);

struct Chi2Result {
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t dof = 0;
  std::size_t kept_bins = 0;
  double probability_sum = 0.0;
};

/// Pearson statistic for observed vs expected counts of already-merged bins.
Chi2Result chi2_from_counts(std::span<const double> observed,
                            std::span<const double> probabilities, std::size_t n_samples);

/// Pearson goodness of fit of (y, s) samples against the model. Bin
/// probabilities come from quadrature of the joint density. Cells are taken
/// row-major (y outer, s inner) and consecutive cells are merged until every
/// group expects at least 5 samples; a short final group joins its
/// predecessor. Throws std::invalid_argument for fewer than 500 samples or
/// when merging leaves fewer than two groups.
Chi2Result chi2_gof_2d(std::span<const SamplePair> samples, const DensityModel& model,
                       const Binning2d& binning);

/// Model mass of every cell, row-major (y outer, s inner).
std::vector<double> cell_probabilities(const DensityModel& model, const Binning2d& binning);

/// As above with cell probabilities computed once by cell_probabilities.
Chi2Result chi2_gof_2d(std::span<const SamplePair> samples, const Binning2d& binning,
                       std::span<const double> cell_probs);

using ParamValue = std::variant<std::int64_t, double, std::string, std::vector<double>>;

/// Outcome of one verification experiment.
struct TestReport {
  std::string test_name;
  double statistic = 0.0;
  std::optional<double> p_value;  // absent for deterministic identities
  std::int64_t n_samples = 0;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, ParamValue>> params;
  bool pass = false;

  friend bool operator==(const TestReport&, const TestReport&) = default;
};

}  // namespace bricklayer
