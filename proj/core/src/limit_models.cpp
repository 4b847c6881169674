#include "brwlab/limit_models.hpp"

#include <boost/random/normal_distribution.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>

#include "brwlab/io_util.hpp"

namespace brwlab {

PointMeasure sample_ppp_exponential(double c, double level, StreamRng& rng, double max_expected_atoms) {
  if (!(c > 0.0) || !std::isfinite(c)) throw std::invalid_argument("sample_ppp_exponential: c must be positive");
  if (std::isnan(level)) throw std::invalid_argument("sample_ppp_exponential: level is NaN");
  const double mean = c * std::exp(level);
  if (!(mean <= max_expected_atoms)) {
    throw std::length_error("sample_ppp_exponential: window too high, expected " + std::to_string(mean) +
                            " atoms");
  }
  std::vector<double> atoms;
  if (mean > 0.0) {
    std::poisson_distribution<long> count(mean);
    const long k = count(rng);
    atoms.reserve(static_cast<std::size_t>(k));
    for (long i = 0; i < k; ++i) atoms.push_back(level + std::log(rng.uniform()));
  }
  return PointMeasure(std::move(atoms), std::isfinite(level) ? std::optional<double>(level) : std::nullopt);
}

Label sequential_mark(std::size_t atom_index, StreamRng&) {
  return Label{static_cast<std::uint32_t>(atom_index + 1)};
}

void SdpppSpec::validate() const {
  if (!(intensity_c > 0.0) || !std::isfinite(intensity_c)) throw std::invalid_argument("SDPPP intensity must be positive");
  if (!std::isfinite(shift) || !std::isfinite(window_top)) throw std::invalid_argument("SDPPP shift/window must be finite");
  if (!mark) throw std::invalid_argument("SDPPP needs a mark sampler");
}

MarkedPointMeasure sample_sdppp(const SdpppSpec& spec, StreamRng& rng) {
  spec.validate();
  // Decorations are >= 0, so only Poisson atoms below window_top - shift can
  // put anything into the window.
  const StreamRng base(rng());
  StreamRng ppp_rng = base.split(0);
  const auto ppp = sample_ppp_exponential(spec.intensity_c, spec.window_top - spec.shift, ppp_rng,
                                          spec.max_expected_atoms);
  std::vector<MarkedAtom> atoms;
  for (std::size_t i = 0; i < ppp.size(); ++i) {
    StreamRng atom_rng = base.split(i + 1);
    const double xi = ppp.atoms()[i];
    Label mark = spec.mark(i, atom_rng);
    if (!spec.decoration) {
      atoms.push_back({std::move(mark), xi + spec.shift});
      continue;
    }
    const PointMeasure d = spec.decoration(atom_rng);
    if (d.empty() || d.min() != 0.0) throw std::logic_error("decoration sample must have minimum exactly 0");
    for (double x : d.atoms()) {
      const double v = (xi + x) + spec.shift;
      if (v <= spec.window_top) atoms.push_back({mark, v});
    }
  }
  return MarkedPointMeasure(std::move(atoms), spec.window_top);
}

DecorationSampler empirical_decorations(std::vector<PointMeasure> pool) {
  if (pool.empty()) throw std::invalid_argument("empirical_decorations: empty pool");
  for (const auto& d : pool) {
    if (d.empty() || d.min() != 0.0) throw std::invalid_argument("empirical_decorations: every sample needs min 0");
  }
  return [pool = std::move(pool)](StreamRng& rng) {
    const auto i = std::min(pool.size() - 1, static_cast<std::size_t>(rng.uniform() * static_cast<double>(pool.size())));
    return pool[i];
  };
}

MarkSampler weighted_marks(const std::map<Label, double>& masses) {
  std::vector<Label> labels;
  std::vector<double> cumulative;
  double total = 0.0;
  for (const auto& [label, mass] : masses) {
    if (!(mass > 0.0)) continue;
    total += mass;
    labels.push_back(label);
    cumulative.push_back(total);
  }
  if (labels.empty()) throw std::invalid_argument("weighted_marks: no positive mass");
  return [labels = std::move(labels), cumulative = std::move(cumulative)](std::size_t, StreamRng& rng) {
    const double u = rng.uniform() * cumulative.back();
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    const auto i = std::min(static_cast<std::size_t>(it - cumulative.begin()), labels.size() - 1);
    return labels[i];
  };
}

void MassPartition::validate() const {
  if (!(truncation_residual >= 0.0)) throw std::logic_error("MassPartition: negative residual");
  double sum = truncation_residual;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!(weights[i] > 0.0)) throw std::logic_error("MassPartition: non-positive weight");
    if (i > 0 && weights[i] > weights[i - 1]) throw std::logic_error("MassPartition: weights not sorted");
    sum += weights[i];
  }
  if (std::abs(sum - 1.0) > 1e-12) throw std::logic_error("MassPartition: masses do not sum to 1");
}

void MassPartition::write_json(std::ostream& out) const {
  out << "{\"weights\":[";
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (i) out << ',';
    out << format_double(weights[i]);
  }
  out << "],\"truncation_residual\":" << format_double(truncation_residual) << '}';
}

namespace {

// Marsaglia-Tsang gamma variates driven by a ziggurat normal; shapes below 1
// use the G(a) = G(a + 1) U^{1/a} boost.
class GammaSampler {
 public:
  double operator()(StreamRng& rng, double shape) {
    double boost_factor = 1.0;
    if (shape < 1.0) {
      boost_factor = std::pow(rng.uniform(), 1.0 / shape);
      shape += 1.0;
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal_(rng);
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = rng.uniform();
      const double x2 = x * x;
      if (u < 1.0 - 0.0331 * x2 * x2 || std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) {
        return d * v * boost_factor;
      }
    }
  }

 private:
  boost::random::normal_distribution<double> normal_;
};

// Stick breaking for PD(alpha, 0); hands each positive piece to `emit` and
// returns the unbroken remainder.
template <typename Emit>
double break_sticks(double alpha, double truncation_eps, StreamRng& rng, Emit&& emit) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("sample_pd: alpha must lie in (0, 1)");
  if (!(truncation_eps > 0.0)) throw std::invalid_argument("sample_pd: truncation_eps must be positive");
  constexpr std::size_t max_sticks = 100'000'000;
  GammaSampler gamma;
  double rest = 1.0;
  for (std::size_t k = 1;; ++k) {
    const double g1 = gamma(rng, 1.0 - alpha);
    const double g2 = gamma(rng, static_cast<double>(k) * alpha);
    const double v = g1 + g2 > 0.0 ? g1 / (g1 + g2) : 0.0;
    const double next = rest * (1.0 - v);
    const double p = rest - next;
    if (p > 0.0) emit(p);
    rest = next;
    const double omitted_square = rest * rest * (1.0 - alpha) / (1.0 + static_cast<double>(k) * alpha);
    if (omitted_square < truncation_eps || rest == 0.0) break;
    if (k >= max_sticks) throw std::runtime_error("sample_pd: truncation_eps needs too many sticks");
  }
  return rest;
}

}  // namespace

double beta_variate(double a, double b, StreamRng& rng) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("beta_variate: shapes must be positive");
  GammaSampler gamma;
  const double x = gamma(rng, a);
  const double y = gamma(rng, b);
  return x + y > 0.0 ? x / (x + y) : 0.0;
}

MassPartition sample_pd(double alpha, double truncation_eps, StreamRng& rng) {
  MassPartition out;
  out.truncation_residual = break_sticks(alpha, truncation_eps, rng, [&](double p) { out.weights.push_back(p); });
  std::sort(out.weights.begin(), out.weights.end(), std::greater<>());
  return out;
}

PdOverlap sample_pd_overlap(double alpha, double truncation_eps, StreamRng& rng) {
  double squares = 0.0;
  const double rest = break_sticks(alpha, truncation_eps, rng, [&](double p) { squares += p * p; });
  return {squares, rest * rest};
}

PdOverlap pd_overlap(const MassPartition& partition) {
  PdOverlap out;
  for (double w : partition.weights) out.value += w * w;
  out.error_bound = partition.truncation_residual * partition.truncation_residual;
  return out;
}

std::map<Label, double> sample_gibbs_limit(double beta, double c_beta, double z_infty, StreamRng& rng,
                                           const GibbsLimitOptions& options) {
  if (!(beta > 1.0)) throw std::invalid_argument("sample_gibbs_limit: beta must exceed 1");
  if (!(c_beta > 0.0) || !(z_infty > 0.0)) throw std::invalid_argument("sample_gibbs_limit: c_beta and z_infty must be positive");
  if (!(options.tolerance > 0.0)) throw std::invalid_argument("sample_gibbs_limit: tolerance must be positive");
  const double zb = std::pow(z_infty, beta);
  std::map<Label, double> out;
  double arrival = 0.0;
  double total = 0.0;
  for (std::size_t i = 1;; ++i) {
    // Ascending atoms of PPP(c e^x dx) are log(Gamma_i / c), Gamma_i the
    // arrival times of a unit-rate Poisson process.
    arrival -= std::log(rng.uniform());
    const double xi = std::log(arrival / c_beta);
    const double mass = zb * std::exp(-beta * xi);
    out.emplace_hint(out.end(), Label{static_cast<std::uint32_t>(i)}, mass);
    total += mass;
    const double rest = zb * c_beta * std::exp((1.0 - beta) * xi) / (beta - 1.0);
    if (rest <= options.tolerance * total) break;
    if (i >= options.max_atoms) {
      throw std::runtime_error("sample_gibbs_limit: tolerance not reached within max_atoms; loosen it");
    }
  }
  return out;
}

std::vector<double> normalized_sorted(const std::map<Label, double>& masses) {
  std::vector<double> out;
  out.reserve(masses.size());
  double total = 0.0;
  for (const auto& [label, m] : masses) {
    out.push_back(m);
    total += m;
  }
  for (auto& m : out) m /= total;
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

}  // namespace brwlab
