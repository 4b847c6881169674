#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "brwlab/label.hpp"
#include "brwlab/law.hpp"
#include "brwlab/overlap.hpp"
#include "brwlab/population.hpp"
#include "brwlab/simulate.hpp"

namespace brwlab::testing {

struct Node {
  std::uint32_t parent;
  std::uint32_t ordinal;
  double position;
};

// Builds a population from explicit generations; generation 0 is the root at 0.
inline Population hand_tree(const std::vector<std::vector<Node>>& generations, int mark_depth = 0) {
  std::vector<Generation> levels(1);
  levels[0].position = {0.0};
  for (const auto& nodes : generations) {
    Generation g;
    for (const auto& node : nodes) {
      g.parent.push_back(node.parent);
      g.ordinal.push_back(node.ordinal);
      g.position.push_back(node.position);
    }
    levels.push_back(std::move(g));
  }
  PopulationInfo info;
  info.law_id = "hand";
  info.mark_depth = mark_depth;
  return Population(std::move(levels), info);
}

inline Population exact_tree(const ReproductionLaw& law, int n, std::uint64_t seed, int mark_depth = 0) {
  SimulationRequest req;
  req.n = n;
  req.mode = SimulationMode::exact;
  req.seed = seed;
  req.mark_depth = mark_depth;
  return simulate(law, req);
}

inline std::vector<Label> frontier_labels(const Population& pop) {
  std::vector<Label> out;
  out.reserve(pop.size());
  for (std::size_t i = 0; i < pop.size(); ++i) out.push_back(pop.label(i));
  return out;
}

inline double node_position(const Population& pop, const Label& u) {
  const auto idx = pop.find(u);
  if (!idx) return NAN;
  return pop.level(static_cast<int>(u.depth())).position[*idx];
}

inline bool close_rel(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

struct BruteOverlap {
  std::vector<double> mass;  // normalized, per split depth
  double w = 0.0;            // W_{n,beta}
};

// O(N^2) reference over frontier labels and explicit weights.
inline BruteOverlap brute_overlap(const Population& pop, double beta) {
  const int n = pop.generation();
  const double mn = n > 0 ? centering(n) : 0.0;
  const auto labels = frontier_labels(pop);
  std::vector<double> w;
  double total = 0.0;
  for (double v : pop.positions()) {
    w.push_back(std::exp(beta * (mn - v)));
    total += w.back();
  }
  BruteOverlap out;
  out.w = total;
  out.mass.assign(static_cast<std::size_t>(n) + 1, 0.0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    for (std::size_t j = 0; j < labels.size(); ++j) {
      out.mass[mrca(labels[i], labels[j]).depth] += (w[i] / total) * (w[j] / total);
    }
  }
  return out;
}

// Surviving Poisson trees of depth 3..8 with at most 500 leaves.
inline std::vector<Population> random_trees(std::size_t count) {
  const PoissonExponentialLaw law(2.0);
  std::vector<Population> out;
  for (std::uint64_t seed = 1; out.size() < count; ++seed) {
    const int n = 3 + static_cast<int>(seed % 6);
    auto pop = exact_tree(law, n, seed);
    if (!pop.extinct() && pop.size() <= 500) out.push_back(std::move(pop));
  }
  return out;
}

}  // namespace brwlab::testing
