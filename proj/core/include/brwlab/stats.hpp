#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "brwlab/point_measure.hpp"

namespace brwlab {

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value
/// Q(sqrt(m n / (m + n)) D), small-sample corrected. Throws on empty input.
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

/// One-sample Kolmogorov-Smirnov test against a continuous CDF.
KsResult ks_one_sample(std::span<const double> x, const std::function<double(double)>& cdf);

/// Kolmogorov survival function Q(x) = 2 sum_{k>=1} (-1)^{k-1} e^{-2 k^2 x^2}.
double kolmogorov_survival(double x);

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;  // sample standard deviation / sqrt(count); 0 for a single value
  std::size_t count = 0;
};
MeanSe mean_se(std::span<const double> x);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};
/// Ordinary least squares y = intercept + slope x. Needs two distinct x.
LineFit least_squares(std::span<const double> x, std::span<const double> y);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double v) const { return lo <= v && v <= hi; }
};

/// Percentile interval of `statistic` over `resamples` bootstrap resamples of
/// the indices 0..count-1.
std::vector<double> bootstrap(std::size_t count, std::size_t resamples, std::uint64_t seed,
                              const std::function<double(std::span<const std::size_t>)>& statistic);
Interval percentile_interval(std::vector<double> values, double level);

struct CstarEstimate {
  double c_hat = 0.0;
  double slope = 0.0;
  Interval c_ci;
  Interval slope_ci;
  std::vector<double> grid;         // window levels x
  std::vector<double> mean_counts;  // mean number of atoms <= x
};

struct CstarOptions {
  std::size_t grid_points = 16;
  std::size_t resamples = 1000;
  double level = 0.95;
  std::uint64_t seed = 1;
  double max_mean_count = 50.0;  // a window where counts exceed this is in the bulk
  std::size_t min_samples = 100;
};

/// Fits log E #{atoms <= x} = log c + slope x over x in [a, b]. The slope should
/// be close to 1 and c_hat = exp(intercept); both come with bootstrap
/// intervals over the samples. Throws std::invalid_argument for too few
/// samples, a window reaching past the measures' ceilings or into the bulk,
/// and a window point with no atoms at all.
CstarEstimate estimate_cstar(std::span<const PointMeasure> samples, std::pair<double, double> window,
                             const CstarOptions& options = {});

}  // namespace brwlab
