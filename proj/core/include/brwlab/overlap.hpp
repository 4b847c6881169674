#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "brwlab/label.hpp"
#include "brwlab/population.hpp"

namespace brwlab {

/// Gibbs weights e^{beta (m_n - V(u))} of the frontier, held relative to the
/// largest one: W_{n,beta} = mantissa * e^{log_scale} with mantissa in [1, N].
struct GibbsWeights {
  double beta = 0.0;
  double log_scale = 0.0;            // largest log-weight, beta (m_n - M_n)
  double mantissa = 0.0;             // sum of e^{log_weight - log_scale}
  std::vector<double> log_weights;   // beta (m_n - V(u)), frontier order
  std::vector<double> normalized;    // weights / W_{n,beta}

  double log_normalization() const;  // log W_{n,beta}
  double normalization() const;      // may overflow to +inf for extreme inputs
};

/// Throws ExtinctPopulation, std::invalid_argument for beta <= 1, and
/// std::domain_error when the weights cannot be represented.
GibbsWeights gibbs_weights(const Population& pop, double beta);

/// Two-particle overlap law: mass[j] is the Gibbs-squared weight of ordered
/// pairs (u, v), u = v included, whose common ancestor has depth j.
struct OverlapMeasure {
  int n = 0;
  std::vector<double> mass;  // size n + 1

  double rescaled_depth(int j) const { return static_cast<double>(j) / n; }
  double total() const;
  void write_csv(std::ostream& out) const;  // depth,rescaled_depth,mass
};

/// Subtree aggregation in one bottom-up pass over the stored genealogy.
OverlapMeasure overlap_measure(const Population& pop, double beta);
OverlapMeasure overlap_measure(const Population& pop, const GibbsWeights& weights);

/// Largest depth j with j/n <= t (integer split-depth grid).
int depth_floor(double t, int n);

/// omega((t, 1]): mass at depths j with j/n > t.
double overlap_tail(const OverlapMeasure& om, double t);

struct LambdaDelta {
  double lambda = 0.0;  // mass at depths >= k
  double delta = 0.0;   // mass at depths in [k, floor(t n)]
};

/// Requires k <= t n; throws std::invalid_argument otherwise.
LambdaDelta lambda_delta(const OverlapMeasure& om, int k, double t);
LambdaDelta lambda_delta(const Population& pop, double beta, int k, double t);

/// Unnormalized pair mass with split depth in [k, n-k]. Requires 2k <= n.
double entangled_R(const Population& pop, double beta, int k);

/// Unordered pairs u != v with V(u), V(v) <= m_n + z whose split depth lies
/// in [k, n-k]. Requires 2k <= n.
std::uint64_t genealogy_dichotomy(const Population& pop, double z, int k);

/// nu_{beta,n}(B(u)): sum of e^{beta (m_n - V)} over frontier descendants of u.
double gibbs_ball_mass(const Population& pop, double beta, const Label& u);

}  // namespace brwlab
