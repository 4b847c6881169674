#include "brwlab/overlap.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "brwlab/io_util.hpp"
#include "brwlab/simulate.hpp"

namespace brwlab {

double GibbsWeights::log_normalization() const { return log_scale + std::log(mantissa); }

double GibbsWeights::normalization() const { return std::exp(log_normalization()); }

GibbsWeights gibbs_weights(const Population& pop, double beta) {
  if (!(beta > 1.0)) throw std::invalid_argument("gibbs_weights: beta must exceed 1");
  if (pop.extinct()) throw ExtinctPopulation("gibbs_weights of an extinct population");
  const double mn = centering(pop.generation());
  const auto pos = pop.positions();

  GibbsWeights w;
  w.beta = beta;
  w.log_weights.resize(pos.size());
  double top = -INFINITY;
  for (std::size_t i = 0; i < pos.size(); ++i) {
    w.log_weights[i] = beta * (mn - pos[i]);
    top = std::max(top, w.log_weights[i]);
  }
  if (!std::isfinite(top)) {
    throw std::domain_error("gibbs_weights: weights not representable; use log-domain positions");
  }
  w.log_scale = top;
  w.normalized.resize(pos.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < pos.size(); ++i) {
    w.normalized[i] = std::exp(w.log_weights[i] - top);
    sum += w.normalized[i];
  }
  w.mantissa = sum;
  for (auto& q : w.normalized) q /= sum;
  return w;
}

double OverlapMeasure::total() const {
  double t = 0.0;
  for (double m : mass) t += m;
  return t;
}

void OverlapMeasure::write_csv(std::ostream& out) const {
  out << "depth,rescaled_depth,mass\n";
  for (int j = 0; j <= n; ++j) {
    out << j << ',' << format_double(rescaled_depth(j)) << ',' << format_double(mass[static_cast<std::size_t>(j)])
        << '\n';
  }
}

namespace {

// Generic pair aggregation: leaf values x_u; for every node w the cross
// term sum_{c != c'} X_c X_c' over its children, accumulated by depth.
// Children of a node are contiguous, so a running prefix sum gives the
// cross term without cancellation.
template <typename T>
std::vector<T> pair_mass_by_depth(const Population& pop, std::vector<T> leaf) {
  const int n = pop.generation();
  std::vector<T> by_depth(static_cast<std::size_t>(n) + 1, T{});
  for (const auto& x : leaf) by_depth[static_cast<std::size_t>(n)] += x * x;
  std::vector<T> up;
  for (int g = n; g >= 1; --g) {
    const auto& lv = pop.level(g);
    up.assign(pop.level(g - 1).size(), T{});
    T cross{};
    for (std::size_t i = 0; i < lv.size(); ++i) {
      auto& s = up[lv.parent[i]];
      cross += 2 * leaf[i] * s;
      s += leaf[i];
    }
    by_depth[static_cast<std::size_t>(g - 1)] = cross;
    leaf.swap(up);
  }
  return by_depth;
}

}  // namespace

OverlapMeasure overlap_measure(const Population& pop, const GibbsWeights& weights) {
  if (weights.normalized.size() != pop.size()) throw std::invalid_argument("overlap_measure: weights do not match");
  OverlapMeasure om;
  om.n = pop.generation();
  om.mass = pair_mass_by_depth(pop, weights.normalized);
  return om;
}

OverlapMeasure overlap_measure(const Population& pop, double beta) {
  return overlap_measure(pop, gibbs_weights(pop, beta));
}

int depth_floor(double t, int n) {
  // Tolerate t*n landing a hair below an integer through rounding.
  return static_cast<int>(std::floor(t * n + 1e-9));
}

double overlap_tail(const OverlapMeasure& om, double t) {
  const int first = depth_floor(t, om.n) + 1;
  double tail = 0.0;
  for (int j = std::max(first, 0); j <= om.n; ++j) tail += om.mass[static_cast<std::size_t>(j)];
  return tail;
}

LambdaDelta lambda_delta(const OverlapMeasure& om, int k, double t) {
  const int last = depth_floor(t, om.n);
  if (k < 0 || k > last) throw std::invalid_argument("lambda_delta: need 0 <= k <= t n");
  LambdaDelta out;
  for (int j = k; j <= om.n; ++j) {
    const double m = om.mass[static_cast<std::size_t>(j)];
    out.lambda += m;
    if (j <= last) out.delta += m;
  }
  return out;
}

LambdaDelta lambda_delta(const Population& pop, double beta, int k, double t) {
  return lambda_delta(overlap_measure(pop, beta), k, t);
}

double entangled_R(const Population& pop, double beta, int k) {
  const int n = pop.generation();
  if (k < 0 || 2 * k > n) throw std::invalid_argument("entangled_R: need 0 <= 2k <= n");
  const auto w = gibbs_weights(pop, beta);
  const auto om = overlap_measure(pop, w);
  double mid = 0.0;
  for (int j = k; j <= n - k; ++j) mid += om.mass[static_cast<std::size_t>(j)];
  return std::exp(2.0 * w.log_normalization()) * mid;
}

std::uint64_t genealogy_dichotomy(const Population& pop, double z, int k) {
  const int n = pop.generation();
  if (k < 0 || 2 * k > n) throw std::invalid_argument("genealogy_dichotomy: need 0 <= 2k <= n");
  if (pop.extinct()) return 0;
  const double level = centering(n) + z;
  std::vector<std::uint64_t> leaf;
  leaf.reserve(pop.size());
  for (double v : pop.positions()) leaf.push_back(v <= level ? 1 : 0);
  auto by_depth = pair_mass_by_depth(pop, std::move(leaf));
  std::uint64_t ordered = 0;
  // Depth n only holds the diagonal u = v.
  for (int j = k; j <= std::min(n - k, n - 1); ++j) ordered += by_depth[static_cast<std::size_t>(j)];
  return ordered / 2;
}

double gibbs_ball_mass(const Population& pop, double beta, const Label& u) {
  const int depth = static_cast<int>(u.depth());
  if (depth > pop.generation()) throw std::invalid_argument("gibbs_ball_mass: |u| exceeds n");
  auto idx = pop.find(u);
  if (!idx || pop.extinct()) return 0.0;
  const double mn = centering(pop.generation());
  const auto range = pop.descendants(depth, *idx, pop.generation());
  const auto pos = pop.positions();
  double total = 0.0;
  for (std::size_t i = range.begin; i < range.end; ++i) total += std::exp(beta * (mn - pos[i]));
  return total;
}

}  // namespace brwlab
