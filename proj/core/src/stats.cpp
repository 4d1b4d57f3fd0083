#include "bricklayer/stats.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace bricklayer {
namespace {

constexpr std::size_t kExactLimit = 10'000;  // |a| |b| bound for the exact p-value
constexpr int kSeriesTerms = 100;
constexpr double kMinExpected = 5.0;
constexpr std::size_t kMinSamples = 500;

std::vector<double> sorted_copy(std::span<const double> v) {
  std::vector<double> out(v.begin(), v.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t bin_index(std::span<const double> edges, double v) {
  // Interior edges only; bins are [e_i, e_{i+1}) with unbounded ends.
  const auto interior = edges.subspan(1, edges.size() - 2);
  return static_cast<std::size_t>(std::upper_bound(interior.begin(), interior.end(), v) -
                                  interior.begin());
}

std::vector<double> snap_axis(const std::vector<double>& edges, const Lattice& lattice) {
  if (!(lattice.spacing > 0.0)) throw std::invalid_argument("lattice spacing must be positive");
  std::vector<double> out{edges.front()};
  for (std::size_t i = 1; i + 1 < edges.size(); ++i) {
    const double cell = std::round((edges[i] - lattice.offset) / lattice.spacing - 0.5);
    const double snapped = lattice.offset + (cell + 0.5) * lattice.spacing;
    if (snapped > out.back()) out.push_back(snapped);
  }
  if (edges.back() > out.back()) {
    out.push_back(edges.back());
  }
  return out;
}

}  // namespace

double kolmogorov_survival(double lambda) {
  if (!(lambda > 0.0)) return 1.0;
  double q = 0.0;
  if (lambda < 1.18) {
    // Theta-function form; converges quickly for small lambda.
    const double c = std::numbers::pi * std::numbers::pi / (8.0 * lambda * lambda);
    double sum = 0.0;
    for (int j = 1; j <= kSeriesTerms; ++j) {
      const double odd = 2.0 * j - 1.0;
      const double term = std::exp(-odd * odd * c);
      sum += term;
      if (term < 1e-300) break;
    }
    q = 1.0 - std::sqrt(2.0 * std::numbers::pi) / lambda * sum;
  } else {
    double sign = 1.0;
    for (int j = 1; j <= kSeriesTerms; ++j) {
      const double term = std::exp(-2.0 * j * j * lambda * lambda);
      q += sign * term;
      sign = -sign;
      if (term < 1e-300) break;
    }
    q *= 2.0;
  }
  return std::clamp(q, 0.0, 1.0);
}

double ks_exact_survival(std::size_t m, std::size_t n, double d) {
  if (m == 0 || n == 0) throw std::invalid_argument("sample sizes must be positive");
  if (!(d > 0.0)) return 1.0;
  const auto mi = static_cast<std::int64_t>(m);
  const auto ni = static_cast<std::int64_t>(n);
  // D is a multiple of 1 / (m n); count paths that keep |i n - j m| below d m n.
  const auto bound = static_cast<std::int64_t>(
      std::ceil(d * static_cast<double>(m) * static_cast<double>(n) - 1e-7));
  std::vector<double> paths(n + 1, 0.0);
  for (std::int64_t i = 0; i <= mi; ++i) {
    for (std::int64_t j = 0; j <= ni; ++j) {
      const bool inside = std::llabs(i * ni - j * mi) < bound;
      double& cell = paths[static_cast<std::size_t>(j)];
      if (!inside) {
        cell = 0.0;
      } else if (i == 0 && j == 0) {
        cell = 1.0;
      } else {
        // cell holds the (i-1, j) count; add (i, j-1).
        const double from_left = i > 0 ? cell : 0.0;
        const double from_below = j > 0 ? paths[static_cast<std::size_t>(j - 1)] : 0.0;
        cell = from_left + from_below;
      }
    }
  }
  // log C(m + n, m)
  const double log_total = std::lgamma(static_cast<double>(m + n) + 1.0) -
                           std::lgamma(static_cast<double>(m) + 1.0) -
                           std::lgamma(static_cast<double>(n) + 1.0);
  const double inside_fraction =
      paths[n] > 0.0 ? std::exp(std::log(paths[n]) - log_total) : 0.0;
  return std::clamp(1.0 - inside_fraction, 0.0, 1.0);
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("KS test needs non-empty samples");
  const auto sa = sorted_copy(a);
  const auto sb = sorted_copy(b);
  const double m = static_cast<double>(sa.size());
  const double n = static_cast<double>(sb.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < sa.size() && j < sb.size()) {
    const double v = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] == v) ++i;
    while (j < sb.size() && sb[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / m - static_cast<double>(j) / n));
  }
  // Once one sample is exhausted the gap only shrinks toward zero.

  KsResult result;
  result.statistic = d;
  if (sa.size() * sb.size() <= kExactLimit) {
    result.exact = true;
    result.p_value = ks_exact_survival(sa.size(), sb.size(), d);
  } else {
    const double en = std::sqrt(m * n / (m + n));
    result.p_value = kolmogorov_survival((en + 0.12 + 0.11 / en) * d);
  }
  return result;
}

double chi_square_survival(double x, double dof) {
  if (!(dof > 0.0)) throw std::invalid_argument("degrees of freedom must be positive");
  if (!(x > 0.0)) return 1.0;
  return boost::math::gamma_q(0.5 * dof, 0.5 * x);
}

Binning2d equiprobable_binning(double t, std::size_t y_bins, std::size_t s_bins) {
  if (!(t > 0.0)) throw std::invalid_argument("time must be positive");
  if (y_bins < 1 || s_bins < 1) throw std::invalid_argument("need at least one bin per axis");
  const boost::math::normal_distribution<double> normal(0.0, std::sqrt(t));
  const double inf = std::numeric_limits<double>::infinity();
  Binning2d binning;
  binning.y_edges.push_back(-inf);
  for (std::size_t i = 1; i < y_bins; ++i) {
    binning.y_edges.push_back(
        boost::math::quantile(normal, static_cast<double>(i) / static_cast<double>(y_bins)));
  }
  binning.y_edges.push_back(inf);
  binning.s_edges.push_back(0.0);
  for (std::size_t j = 1; j < s_bins; ++j) {
    const double p = static_cast<double>(j) / static_cast<double>(s_bins);
    binning.s_edges.push_back(boost::math::quantile(normal, 0.5 * (1.0 + p)));
  }
  binning.s_edges.push_back(inf);
  return binning;
}

Binning2d snap_to_lattice(const Binning2d& binning, const Lattice& y_lattice,
                          const Lattice& s_lattice) {
  return {snap_axis(binning.y_edges, y_lattice), snap_axis(binning.s_edges, s_lattice)};
}

Chi2Result chi2_from_counts(std::span<const double> observed,
                            std::span<const double> probabilities, std::size_t n_samples) {
  if (observed.size() != probabilities.size() || observed.size() < 2) {
    throw std::invalid_argument("need matching observed/probability vectors of length >= 2");
  }
  Chi2Result result;
  const double total = static_cast<double>(n_samples);
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double expected = total * probabilities[i];
    const double diff = observed[i] - expected;
    result.statistic += diff * diff / expected;
    result.probability_sum += probabilities[i];
  }
  result.kept_bins = observed.size();
  result.dof = observed.size() - 1;
  result.p_value = chi_square_survival(result.statistic, static_cast<double>(result.dof));
  return result;
}

std::vector<double> cell_probabilities(const DensityModel& model, const Binning2d& binning) {
  if (binning.y_edges.size() < 2 || binning.s_edges.size() < 2) {
    throw std::invalid_argument("binning needs at least one bin per axis");
  }
  const std::size_t ny = binning.y_bins();
  const std::size_t ns = binning.s_bins();
  std::vector<double> probs(ny * ns);
  for (std::size_t i = 0; i < ny; ++i) {
    for (std::size_t j = 0; j < ns; ++j) {
      probs[i * ns + j] = model.rectangle_probability(binning.y_edges[i], binning.y_edges[i + 1],
                                                      binning.s_edges[j], binning.s_edges[j + 1]);
    }
  }
  return probs;
}

Chi2Result chi2_gof_2d(std::span<const SamplePair> samples, const DensityModel& model,
                       const Binning2d& binning) {
  const auto probs = cell_probabilities(model, binning);
  return chi2_gof_2d(samples, binning, probs);
}

Chi2Result chi2_gof_2d(std::span<const SamplePair> samples, const Binning2d& binning,
                       std::span<const double> cell_probs) {
  if (samples.size() < kMinSamples) {
    throw std::invalid_argument("chi-square test needs at least 500 samples");
  }
  if (binning.y_edges.size() < 2 || binning.s_edges.size() < 2) {
    throw std::invalid_argument("binning needs at least one bin per axis");
  }
  const std::size_t ns = binning.s_bins();
  if (cell_probs.size() != binning.y_bins() * ns) {
    throw std::invalid_argument("cell probabilities do not match the binning");
  }

  std::vector<double> cell_counts(cell_probs.size(), 0.0);
  for (const auto& p : samples) {
    cell_counts[bin_index(binning.y_edges, p.first) * ns + bin_index(binning.s_edges, p.second)] +=
        1.0;
  }

  const double total = static_cast<double>(samples.size());
  std::vector<double> observed;
  std::vector<double> probs;
  double acc_count = 0.0;
  double acc_prob = 0.0;
  for (std::size_t c = 0; c < cell_counts.size(); ++c) {
    acc_count += cell_counts[c];
    acc_prob += cell_probs[c];
    if (acc_prob * total >= kMinExpected) {
      observed.push_back(acc_count);
      probs.push_back(acc_prob);
      acc_count = acc_prob = 0.0;
    }
  }
  if (acc_prob > 0.0 || acc_count > 0.0) {
    if (observed.empty()) {
      throw std::invalid_argument("binning cannot reach expected count >= 5");
    }
    observed.back() += acc_count;
    probs.back() += acc_prob;
  }
  if (observed.size() < 2) {
    throw std::invalid_argument("binning cannot reach expected count >= 5 in two bins");
  }
  return chi2_from_counts(observed, probs, samples.size());
}

}  // namespace bricklayer
