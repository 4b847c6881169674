#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "brwlab/observables.hpp"
#include "brwlab/simulate.hpp"
#include "support.hpp"

using namespace brwlab;
using testing::Node;

namespace {

const GaussianBinaryLaw kLaw;

// Frontier descendants of u by label prefix, independent of the index ranges.
std::vector<std::size_t> descendants_by_label(const Population& pop, const Label& u) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < pop.size(); ++i) {
    if (ball_contains(u, pop.label(i))) out.push_back(i);
  }
  return out;
}

std::vector<Label> nodes_at(const Population& pop, int k) {
  std::vector<Label> out;
  for (std::size_t i = 0; i < pop.level(k).size(); ++i) out.push_back(pop.node_label(k, i));
  return out;
}

}  // namespace

TEST_CASE("martingales of tiny trees") {
  const auto root = testing::hand_tree({});
  CHECK(critical_martingale(root) == 1.0);
  CHECK(derivative_martingale(root) == 0.0);

  const double a = 0.7, b = -0.4;
  const auto two = testing::hand_tree({{{0, 1, a}, {0, 2, b}}});
  CHECK(critical_martingale(two) == doctest::Approx(std::exp(-a) + std::exp(-b)).epsilon(1e-15));
  CHECK(derivative_martingale(two) == doctest::Approx(a * std::exp(-a) + b * std::exp(-b)).epsilon(1e-15));

  const auto trace = martingales(two, std::vector<double>{2.0});
  CHECK(trace.W.front() == 1.0);
  CHECK(trace.Z.front() == 0.0);
  CHECK(trace.W.back() == critical_martingale(two));
  // W_{1,beta} with m_1 = 0.
  CHECK(trace.W_beta[0].back() == doctest::Approx(std::exp(-2 * a) + std::exp(-2 * b)));
}

TEST_CASE("martingale trace on deep runs: W_n falls, Z_n ends positive") {
  const int n = 14, reps = 400;
  std::vector<std::vector<double>> w(n + 1);
  std::vector<double> z;
  for (int r = 0; r < reps; ++r) {
    const auto trace = martingales(testing::exact_tree(kLaw, n, 300 + r));
    for (int g = 0; g <= n; ++g) w[g].push_back(trace.W[g]);
    z.push_back(trace.Z.back());
  }
  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
  };
  for (int g = 6; g <= n; g += 4) CHECK(median(w[g]) < median(w[g - 4]));
  CHECK(median(w[n]) < 0.5);
  CHECK(median(z) > 0.0);
}

TEST_CASE("martingales need the full history") {
  SimulationRequest req;
  req.n = 30;
  req.mode = SimulationMode::pruned;
  req.barrier = BarrierSpec{15.0, 17.0, 8.0, 2.0};
  CHECK_THROWS(martingales(simulate(kLaw, req)));
}

TEST_CASE("subtree martingales") {
  const auto pop = testing::exact_tree(kLaw, 9, 4);
  CHECK(subtree_derivative(pop, Label::root()) == doctest::Approx(derivative_martingale(pop)).epsilon(1e-13));
  CHECK(subtree_critical(pop, Label::root()) == doctest::Approx(critical_martingale(pop)).epsilon(1e-13));

  const auto line = testing::hand_tree({{{0, 1, 0.5}}, {{0, 1, 1.75}}});
  const double d = 1.75 - 0.5;
  CHECK(subtree_derivative(line, Label{1}) == doctest::Approx(d * std::exp(-d)));
  CHECK(subtree_derivative(line, Label{7}) == 0.0);
}

TEST_CASE("decomposition identities hold on every tree") {
  for (int r = 0; r < 50; ++r) {
    const int n = 6 + r % 11;  // n in 6..16
    const auto pop = testing::exact_tree(kLaw, n, 700 + r, 2);
    const double zn = derivative_martingale(pop);
    const double wn = critical_martingale(pop);
    for (int k : {1, n / 2, n - 1}) {
      double z_sum = 0.0, w_sum = 0.0;
      for (const auto& u : nodes_at(pop, k)) {
        const double vu = testing::node_position(pop, u);
        const double wu = subtree_critical(pop, u);
        z_sum += std::exp(-vu) * subtree_derivative(pop, u) + vu * std::exp(-vu) * wu;
        w_sum += std::exp(-vu) * wu;
      }
      CHECK(testing::close_rel(z_sum, zn, 1e-9));
      CHECK(testing::close_rel(w_sum, wn, 1e-9));

      const auto masses = critical_measure_masses(pop, k);
      const auto finer = critical_measure_masses(pop, k + 1);
      std::map<Label, double> children;
      for (const auto& [b, mb] : finer) children[b.parent()] += mb;
      double total = 0.0;
      for (const auto& [a, m] : masses) {
        total += m;
        CHECK(testing::close_rel(children[a], m, 1e-9));
      }
      CHECK(testing::close_rel(total, zn, 1e-9));
    }
  }
}

TEST_CASE("critical masses at k = 0") {
  const auto pop = testing::exact_tree(kLaw, 8, 12);
  const auto m = critical_measure_masses(pop, 0);
  REQUIRE(m.size() == 1);
  CHECK(m.begin()->first == Label::root());
  CHECK(m.begin()->second == doctest::Approx(derivative_martingale(pop)).epsilon(1e-13));
}

TEST_CASE("largest critical mass shrinks with k") {
  const int n = 16, reps = 40;
  std::vector<double> mean_max(6, 0.0);
  for (int r = 0; r < reps; ++r) {
    const auto pop = testing::exact_tree(kLaw, n, 1500 + r);
    const double zn = derivative_martingale(pop);
    for (int k = 0; k < 6; ++k) {
      double mx = 0.0;
      for (const auto& [a, m] : critical_measure_masses(pop, k)) mx = std::max(mx, std::abs(m));
      mean_max[k] += mx / std::abs(zn) / reps;
    }
  }
  for (int k = 1; k < 6; ++k) CHECK(mean_max[k] < mean_max[k - 1]);
}

TEST_CASE("extremal process") {
  const auto single = testing::hand_tree({{{0, 1, 1.25}}});
  const auto g1 = extremal_process(single);
  REQUIRE(g1.size() == 1);
  CHECK(g1.atoms()[0] == 1.25);

  const auto pop = testing::exact_tree(kLaw, 10, 31, 3);
  const auto gamma = extremal_process(pop);
  CHECK(gamma.size() == pop.size());
  CHECK(gamma.min() == minimum(pop).value - centering(10));
  CHECK(std::is_sorted(gamma.atoms().begin(), gamma.atoms().end()));
}

TEST_CASE("marked extremal process") {
  const int n = 9;
  const auto pop = testing::exact_tree(kLaw, n, 32);
  const auto gamma = extremal_process(pop);

  const auto m0 = marked_extremal_process(pop, 0);
  for (const auto& a : m0.atoms()) CHECK(a.mark == Label::root());
  CHECK(std::ranges::equal(m0.project().atoms(), gamma.atoms()));

  const auto mn = marked_extremal_process(pop, n);
  std::map<Label, int> seen;
  for (const auto& a : mn.atoms()) {
    CHECK(a.mark.depth() == static_cast<std::size_t>(n));
    CHECK(a.value == testing::node_position(pop, a.mark) - centering(n));
    ++seen[a.mark];
  }
  CHECK(seen.size() == pop.size());

  const auto m3 = marked_extremal_process(pop, 3);
  CHECK(std::ranges::equal(m3.project().atoms(), gamma.atoms()));
  std::map<Label, std::size_t> per_mark;
  for (const auto& a : m3.atoms()) ++per_mark[a.mark];
  for (const auto& [u, count] : per_mark) CHECK(count == descendants_by_label(pop, u).size());
}

TEST_CASE("seen from the minimum") {
  const auto single = testing::hand_tree({{{0, 1, -2.0}}});
  const auto s1 = seen_from_min(single);
  REQUIRE(s1.size() == 1);
  CHECK(s1.atoms()[0].value == 0.0);

  for (std::uint64_t seed = 40; seed < 60; ++seed) {
    const auto pop = testing::exact_tree(kLaw, 10, seed, 2);
    const auto s = seen_from_min(pop);
    CHECK(s.atoms().front().value == 0.0);
    const auto shifted = seen_from_min(pop.shifted(3.7));
    REQUIRE(shifted.size() == s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      CHECK(shifted.atoms()[i].mark == s.atoms()[i].mark);
      CHECK(std::abs(shifted.atoms()[i].value - s.atoms()[i].value) <= 1e-12);
    }
  }
}

TEST_CASE("decoration windows") {
  const int n = 10;
  const Trapezoid f{0.0, 3.0};
  for (std::uint64_t seed = 60; seed < 80; ++seed) {
    const auto pop = testing::exact_tree(kLaw, n, seed);
    const auto seen = seen_from_min(pop).project();
    CHECK(std::ranges::equal(decoration_window(pop, 0).atoms(), seen.atoms()));

    const auto top = decoration_window(pop, n);
    REQUIRE(top.size() == 1);
    CHECK(top.atoms()[0] == 0.0);

    // Brute force: positions relative to M_n of particles splitting from the
    // lexicographically first minimizer at depth >= k.
    const auto m = minimum(pop);
    for (int k = 0; k <= n; ++k) {
      std::vector<double> expected;
      for (std::size_t i = 0; i < pop.size(); ++i) {
        if (static_cast<int>(mrca(pop.label(i), m.label).depth) >= k) expected.push_back(pop.positions()[i] - m.value);
      }
      std::sort(expected.begin(), expected.end());
      const auto window = decoration_window(pop, k);
      CHECK(std::ranges::equal(window.atoms(), expected));
      CHECK(std::ranges::includes(seen.atoms(), window.atoms()));
      if (k > 0) CHECK(window.integrate(f) <= decoration_window(pop, k - 1).integrate(f));
    }
  }
}
