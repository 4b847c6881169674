#include "brwlab/observables.hpp"

#include <cmath>
#include <stdexcept>

#include "brwlab/simulate.hpp"

namespace brwlab {

namespace {

void require_alive(const Population& pop, const char* what) {
  if (pop.extinct()) throw ExtinctPopulation(std::string(what) + " of an extinct population");
}

std::optional<double> shifted_ceiling(const Population& pop, double by) {
  if (auto c = pop.position_ceiling()) return *c - by;
  return std::nullopt;
}

// Sums `weight(V)` of the frontier into every node of generation k.
template <typename F>
std::vector<double> aggregate_to(const Population& pop, int k, F weight) {
  const int n = pop.generation();
  std::vector<double> acc(pop.positions().begin(), pop.positions().end());
  for (auto& x : acc) x = weight(x);
  for (int g = n; g > k; --g) {
    const auto& lv = pop.level(g);
    std::vector<double> up(pop.level(g - 1).size(), 0.0);
    for (std::size_t i = 0; i < lv.size(); ++i) up[lv.parent[i]] += acc[i];
    acc.swap(up);
  }
  return acc;
}

}  // namespace

MartingaleTrace martingales(const Population& pop, std::span<const double> betas) {
  if (!pop.info().complete_history) {
    throw std::invalid_argument("martingales need the complete generation history (exact mode)");
  }
  MartingaleTrace trace;
  trace.betas.assign(betas.begin(), betas.end());
  trace.W_beta.resize(betas.size());
  for (int g = 0; g <= pop.generation(); ++g) {
    const auto& pos = pop.level(g).position;
    const double mg = g == 0 ? 0.0 : centering(g);
    double w = 0.0, z = 0.0;
    std::vector<double> wb(betas.size(), 0.0);
    for (double v : pos) {
      const double e = std::exp(-v);
      w += e;
      z += v * e;
      for (std::size_t b = 0; b < betas.size(); ++b) wb[b] += std::exp(betas[b] * (mg - v));
    }
    trace.W.push_back(w);
    trace.Z.push_back(z);
    for (std::size_t b = 0; b < betas.size(); ++b) trace.W_beta[b].push_back(wb[b]);
  }
  return trace;
}

double critical_martingale(const Population& pop) {
  double w = 0.0;
  for (double v : pop.positions()) w += std::exp(-v);
  return w;
}

double derivative_martingale(const Population& pop) {
  double z = 0.0;
  for (double v : pop.positions()) z += v * std::exp(-v);
  return z;
}

double subtree_derivative(const Population& pop, const Label& u) {
  const int depth = static_cast<int>(u.depth());
  if (depth > pop.generation()) throw std::invalid_argument("subtree_derivative: |u| exceeds n");
  auto idx = pop.find(u);
  if (!idx) return 0.0;
  const double vu = pop.level(depth).position[*idx];
  const auto range = pop.descendants(depth, *idx, pop.generation());
  const auto pos = pop.positions();
  double z = 0.0;
  for (std::size_t i = range.begin; i < range.end; ++i) {
    const double d = pos[i] - vu;
    z += d * std::exp(-d);
  }
  return z;
}

double subtree_critical(const Population& pop, const Label& u) {
  const int depth = static_cast<int>(u.depth());
  if (depth > pop.generation()) throw std::invalid_argument("subtree_critical: |u| exceeds n");
  auto idx = pop.find(u);
  if (!idx) return 0.0;
  const double vu = pop.level(depth).position[*idx];
  const auto range = pop.descendants(depth, *idx, pop.generation());
  const auto pos = pop.positions();
  double w = 0.0;
  for (std::size_t i = range.begin; i < range.end; ++i) w += std::exp(vu - pos[i]);
  return w;
}

PointMeasure extremal_process(const Population& pop) {
  require_alive(pop, "extremal process");
  const double mn = centering(pop.generation());
  std::vector<double> atoms(pop.positions().begin(), pop.positions().end());
  for (auto& x : atoms) x -= mn;
  return PointMeasure(std::move(atoms), shifted_ceiling(pop, mn));
}

MarkedPointMeasure marked_extremal_process(const Population& pop, int k) {
  require_alive(pop, "marked extremal process");
  if (k < 0 || k > pop.generation()) throw std::invalid_argument("marked_extremal_process: k outside [0, n]");
  const double mn = centering(pop.generation());
  const auto pos = pop.positions();
  std::vector<MarkedAtom> atoms;
  atoms.reserve(pos.size());
  // Marks are shared by whole descendant blocks; build each label once.
  const auto& marks_level = pop.level(k);
  for (std::size_t a = 0; a < marks_level.size(); ++a) {
    const auto range = pop.descendants(k, a, pop.generation());
    if (range.empty()) continue;
    const Label mark = pop.node_label(k, a);
    for (std::size_t i = range.begin; i < range.end; ++i) atoms.push_back({mark, pos[i] - mn});
  }
  return MarkedPointMeasure(std::move(atoms), shifted_ceiling(pop, mn));
}

MarkedPointMeasure seen_from_min(const Population& pop) {
  require_alive(pop, "seen_from_min");
  const double mn = minimum(pop).value;
  const int k = pop.mark_depth();
  const auto pos = pop.positions();
  std::vector<MarkedAtom> atoms;
  atoms.reserve(pos.size());
  const auto& marks_level = pop.level(k);
  for (std::size_t a = 0; a < marks_level.size(); ++a) {
    const auto range = pop.descendants(k, a, pop.generation());
    if (range.empty()) continue;
    const Label mark = pop.node_label(k, a);
    for (std::size_t i = range.begin; i < range.end; ++i) atoms.push_back({mark, pos[i] - mn});
  }
  return MarkedPointMeasure(std::move(atoms), shifted_ceiling(pop, mn));
}

PointMeasure decoration_window(const Population& pop, int k) {
  require_alive(pop, "decoration window");
  const int n = pop.generation();
  if (k < 0 || k > n) throw std::invalid_argument("decoration_window: k outside [0, n]");
  const auto best = minimum(pop);
  const auto anc = pop.ancestor_index(best.index, k);
  const auto range = pop.descendants(k, anc, n);
  const auto pos = pop.positions();
  std::vector<double> atoms;
  atoms.reserve(range.size());
  for (std::size_t i = range.begin; i < range.end; ++i) atoms.push_back(pos[i] - best.value);
  return PointMeasure(std::move(atoms), shifted_ceiling(pop, best.value));
}

std::map<Label, double> critical_measure_masses(const Population& pop, int k) {
  if (k < 0 || k > pop.generation()) throw std::invalid_argument("critical_measure_masses: k outside [0, n]");
  const auto sums = aggregate_to(pop, k, [](double v) { return v * std::exp(-v); });
  std::map<Label, double> out;
  for (std::size_t a = 0; a < sums.size(); ++a) out.emplace(pop.node_label(k, a), sums[a]);
  return out;
}

}  // namespace brwlab
