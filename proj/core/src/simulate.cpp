#include "brwlab/simulate.hpp"

#include <cmath>
#include <string>

#include "brwlab/rng.hpp"

namespace brwlab {

namespace {

// Removes nodes of earlier generations that have no descendant in the newest
// generation. Walks upward only while something was removed.
void drop_dead_ancestors(std::vector<Generation>& levels) {
  std::vector<std::uint32_t> remap;
  for (std::size_t d = levels.size() - 1; d >= 1; --d) {
    auto& child = levels[d];
    auto& lv = levels[d - 1];
    if (d - 1 == 0) break;  // the root stays
    remap.assign(lv.size(), 0);
    for (auto p : child.parent) remap[p] = 1;
    std::size_t kept = 0;
    for (std::size_t i = 0; i < lv.size(); ++i) {
      if (remap[i]) {
        remap[i] = static_cast<std::uint32_t>(kept);
        if (kept != i) {
          lv.position[kept] = lv.position[i];
          lv.parent[kept] = lv.parent[i];
          lv.ordinal[kept] = lv.ordinal[i];
        }
        ++kept;
      }
    }
    if (kept == lv.size()) break;
    lv.position.resize(kept);
    lv.parent.resize(kept);
    lv.ordinal.resize(kept);
    for (auto& p : child.parent) p = remap[p];
  }
}

}  // namespace

std::uint64_t root_key(std::uint64_t seed) { return derive_key(mix64(seed), 0x726f6f74ULL); }

Population simulate(const ReproductionLaw& law, const SimulationRequest& request) {
  const int n = request.n;
  if (n < 1) throw std::invalid_argument("simulate: n must be >= 1");
  if (request.mark_depth < 0) throw std::invalid_argument("simulate: cutoff k must be >= 0");
  const bool pruned = request.mode == SimulationMode::pruned;
  if (pruned) request.barrier.validate();

  if (!pruned) {
    if (auto m = law.moments()) {
      const double expected = std::pow(m->mean_offspring, n);
      if (expected > static_cast<double>(request.max_particles)) {
        throw MemoryBudgetExceeded("exact simulation to n=" + std::to_string(n) + " expects ~" +
                                   std::to_string(expected) +
                                   " particles, over the budget; use pruned mode");
      }
    }
  }

  std::vector<Generation> levels(1);
  levels.reserve(static_cast<std::size_t>(n) + 1);
  levels[0].position = {0.0};
  std::vector<std::uint64_t> keys{root_key(request.seed)};
  std::vector<std::uint64_t> next_keys;
  std::vector<double> displacements;
  bool extinct = false;

  for (int g = 0; g < n; ++g) {
    Generation next;
    const auto& cur = levels.back();
    const double lo = pruned ? request.barrier.lower(n, g + 1) : -INFINITY;
    const double hi = pruned ? request.barrier.upper(n, g + 1) : INFINITY;
    for (std::size_t i = 0; i < cur.size(); ++i) {
      StreamRng rng(keys[i]);
      law.sample(rng, displacements);
      for (std::size_t c = 0; c < displacements.size(); ++c) {
        const double x = cur.position[i] + displacements[c];
        if (x < lo || x > hi) continue;
        const auto ordinal = static_cast<std::uint32_t>(c + 1);
        next.position.push_back(x);
        next.parent.push_back(static_cast<std::uint32_t>(i));
        next.ordinal.push_back(ordinal);
        next_keys.push_back(derive_key(keys[i], ordinal));
      }
      if (next.size() > request.max_particles) {
        throw MemoryBudgetExceeded("generation " + std::to_string(g + 1) + " exceeds " +
                                   std::to_string(request.max_particles) + " particles" +
                                   (pruned ? "; tighten the barrier tube" : "; use pruned mode"));
      }
    }
    levels.push_back(std::move(next));
    keys.swap(next_keys);
    next_keys.clear();
    if (levels.back().size() == 0) {
      extinct = true;
      levels.resize(static_cast<std::size_t>(n) + 1);
      break;
    }
    if (pruned) drop_dead_ancestors(levels);
  }

  PopulationInfo info;
  info.law_id = law.id();
  info.seed = request.seed;
  info.mode = request.mode;
  info.barrier = request.barrier;
  info.mark_depth = request.mark_depth;
  info.extinct = extinct;
  info.complete_history = !pruned;
  return Population(std::move(levels), std::move(info));
}

double centering(int n) {
  if (n < 1) throw std::invalid_argument("centering: n must be >= 1");
  return 1.5 * std::log(static_cast<double>(n));
}

Minimum minimum(const Population& pop) {
  if (pop.extinct()) throw ExtinctPopulation("minimum of an extinct population");
  const auto pos = pop.positions();
  std::size_t best = 0;
  // Frontier order is lexicographic label order, so the first strict
  // minimum found is the tie-break winner.
  for (std::size_t i = 1; i < pos.size(); ++i) {
    if (pos[i] < pos[best]) best = i;
  }
  return {pos[best], best, pop.label(best)};
}

}  // namespace brwlab
