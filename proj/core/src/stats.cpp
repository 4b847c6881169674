#include "brwlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "brwlab/rng.hpp"

namespace brwlab {

double kolmogorov_survival(double x) {
  if (!(x > 0.0)) return 1.0;
  if (x < 1.18) {
    // Jacobi-transformed series, fast for small x.
    const double pi2 = std::numbers::pi * std::numbers::pi;
    double sum = 0.0;
    for (int k = 1; k <= 50; ++k) {
      const double odd = 2.0 * k - 1.0;
      const double term = std::exp(-odd * odd * pi2 / (8.0 * x * x));
      sum += term;
      if (term < 1e-17 * sum) break;
    }
    return std::clamp(1.0 - std::sqrt(2.0 * std::numbers::pi) / x * sum, 0.0, 1.0);
  }
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    sum += sign * term;
    if (term < 1e-17) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: both samples must be non-empty");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double m = static_cast<double>(x.size());
  const double n = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / m - static_cast<double>(j) / n));
  }
  KsResult out;
  out.statistic = d;
  const double en = std::sqrt(m * n / (m + n));
  out.p_value = kolmogorov_survival((en + 0.12 + 0.11 / en) * d);
  return out;
}

KsResult ks_one_sample(std::span<const double> x, const std::function<double(double)>& cdf) {
  if (x.empty()) throw std::invalid_argument("ks_one_sample: empty sample");
  std::vector<double> s(x.begin(), x.end());
  std::sort(s.begin(), s.end());
  const double n = static_cast<double>(s.size());
  double d = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double f = cdf(s[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  const double en = std::sqrt(n);
  return {d, kolmogorov_survival((en + 0.12 + 0.11 / en) * d)};
}

MeanSe mean_se(std::span<const double> x) {
  MeanSe out;
  out.count = x.size();
  if (x.empty()) return out;
  double sum = 0.0;
  for (double v : x) sum += v;
  out.mean = sum / static_cast<double>(x.size());
  if (x.size() > 1) {
    double ss = 0.0;
    for (double v : x) ss += (v - out.mean) * (v - out.mean);
    out.se = std::sqrt(ss / static_cast<double>(x.size() - 1) / static_cast<double>(x.size()));
  }
  return out;
}

LineFit least_squares(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("least_squares: need >= 2 paired points");
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("least_squares: x values are all equal");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  return fit;
}

std::vector<double> bootstrap(std::size_t count, std::size_t resamples, std::uint64_t seed,
                              const std::function<double(std::span<const std::size_t>)>& statistic) {
  if (count == 0) throw std::invalid_argument("bootstrap: no data");
  StreamRng rng(derive_key(seed, 0x626f6f74ULL));
  std::vector<std::size_t> idx(count);
  std::vector<double> out;
  out.reserve(resamples);
  for (std::size_t r = 0; r < resamples; ++r) {
    for (auto& i : idx) i = std::min(count - 1, static_cast<std::size_t>(rng.uniform() * static_cast<double>(count)));
    out.push_back(statistic(idx));
  }
  return out;
}

Interval percentile_interval(std::vector<double> values, double level) {
  std::erase_if(values, [](double v) { return !std::isfinite(v); });
  if (values.empty()) throw std::invalid_argument("percentile_interval: no finite values");
  std::sort(values.begin(), values.end());
  auto quantile = [&](double p) {
    const double h = p * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
  };
  const double tail = 0.5 * (1.0 - level);
  return {quantile(tail), quantile(1.0 - tail)};
}

CstarEstimate estimate_cstar(std::span<const PointMeasure> samples, std::pair<double, double> window,
                             const CstarOptions& options) {
  const auto [a, b] = window;
  if (samples.size() < options.min_samples) {
    throw std::invalid_argument("estimate_cstar: need at least " + std::to_string(options.min_samples) + " samples");
  }
  if (!(a < b) || options.grid_points < 2) throw std::invalid_argument("estimate_cstar: window needs a < b");
  for (const auto& s : samples) {
    if (s.ceiling() && b > *s.ceiling()) {
      throw std::invalid_argument("estimate_cstar: window top exceeds the sampled range of the measures");
    }
  }
  CstarEstimate out;
  const std::size_t g = options.grid_points;
  for (std::size_t i = 0; i < g; ++i) out.grid.push_back(a + (b - a) * static_cast<double>(i) / static_cast<double>(g - 1));

  std::vector<std::vector<double>> counts(samples.size(), std::vector<double>(g));
  for (std::size_t s = 0; s < samples.size(); ++s) {
    for (std::size_t i = 0; i < g; ++i) counts[s][i] = static_cast<double>(samples[s].count_at_most(out.grid[i]));
  }
  auto fit_from = [&](std::span<const std::size_t> idx, std::vector<double>* means) -> LineFit {
    std::vector<double> logm(g, 0.0);
    for (std::size_t i = 0; i < g; ++i) {
      double sum = 0.0;
      for (auto s : idx) sum += counts[s][i];
      logm[i] = sum / static_cast<double>(idx.size());
    }
    if (means) *means = logm;
    for (auto& v : logm) {
      if (!(v > 0.0)) return {NAN, NAN};
      v = std::log(v);
    }
    return least_squares(out.grid, logm);
  };

  std::vector<std::size_t> all(samples.size());
  for (std::size_t s = 0; s < all.size(); ++s) all[s] = s;
  const LineFit fit = fit_from(all, &out.mean_counts);
  for (double m : out.mean_counts) {
    if (!(m > 0.0)) throw std::invalid_argument("estimate_cstar: a window level has no atoms in any sample");
  }
  if (out.mean_counts.back() > options.max_mean_count) {
    throw std::invalid_argument("estimate_cstar: window reaches into the bulk (mean count " +
                                std::to_string(out.mean_counts.back()) + ")");
  }
  out.slope = fit.slope;
  out.c_hat = std::exp(fit.intercept);

  std::vector<double> slopes, cs;
  bootstrap(samples.size(), options.resamples, options.seed, [&](std::span<const std::size_t> idx) {
    const LineFit f = fit_from(idx, nullptr);
    slopes.push_back(f.slope);
    cs.push_back(std::exp(f.intercept));
    return f.slope;
  });
  out.slope_ci = percentile_interval(slopes, options.level);
  out.c_ci = percentile_interval(cs, options.level);
  return out;
}

}  // namespace brwlab
