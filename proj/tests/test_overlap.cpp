#include <doctest.h>

#include <cmath>

#include "brwlab/overlap.hpp"
#include "brwlab/simulate.hpp"
#include "support.hpp"

using namespace brwlab;
using testing::brute_overlap;
using testing::random_trees;

namespace {

std::uint64_t brute_dichotomy(const Population& pop, double z, int k) {
  const int n = pop.generation();
  const double level = centering(n) + z;
  const auto labels = testing::frontier_labels(pop);
  std::uint64_t count = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    for (std::size_t j = i + 1; j < labels.size(); ++j) {
      if (pop.positions()[i] > level || pop.positions()[j] > level) continue;
      const int d = static_cast<int>(mrca(labels[i], labels[j]).depth);
      count += d >= k && d <= n - k;
    }
  }
  return count;
}

}  // namespace

TEST_CASE("Gibbs weight examples") {
  const auto single = testing::hand_tree({{{0, 1, 0.3}}});
  const auto g1 = gibbs_weights(single, 2.0);
  CHECK(g1.normalized == std::vector<double>{1.0});

  const auto equal = testing::hand_tree({{{0, 1, 0.3}, {0, 2, 0.3}}});
  const auto g2 = gibbs_weights(equal, 2.0);
  CHECK(g2.normalized[0] == g2.normalized[1]);

  const GaussianBinaryLaw law;
  const auto pop = testing::exact_tree(law, 8, 3);
  const auto b2 = gibbs_weights(pop, 2.0);
  const auto b4 = gibbs_weights(pop, 4.0);
  for (std::size_t i = 1; i < pop.size(); ++i) {
    const double r2 = b2.log_weights[i] - b2.log_weights[0];
    const double r4 = b4.log_weights[i] - b4.log_weights[0];
    CHECK(std::abs(r4 - 2.0 * r2) <= 1e-12 * std::max(1.0, std::abs(r4)));
  }
  double total = 0.0;
  for (double q : b2.normalized) total += q;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(b2.mantissa >= 1.0);
  CHECK(b2.mantissa <= static_cast<double>(pop.size()));
  CHECK_THROWS_AS(gibbs_weights(pop, 1.0), std::invalid_argument);
}

TEST_CASE("star tree overlap") {
  const auto star = testing::hand_tree({{{0, 1, 0.1}, {0, 2, -0.4}, {0, 3, 1.3}, {0, 4, 0.0}}});
  const double beta = 2.0;
  const auto w = gibbs_weights(star, beta);
  double sq = 0.0;
  for (double q : w.normalized) sq += q * q;
  const auto om = overlap_measure(star, beta);
  REQUIRE(om.mass.size() == 2);
  CHECK(om.mass[0] == doctest::Approx(1.0 - sq).epsilon(1e-14));
  CHECK(om.mass[1] == doctest::Approx(sq).epsilon(1e-14));
}

TEST_CASE("aggregation matches brute force on 100 random trees") {
  const auto trees = random_trees(100);
  for (const auto& pop : trees) {
    for (double beta : {1.5, 2.0, 4.0}) {
      const auto om = overlap_measure(pop, beta);
      const auto bf = brute_overlap(pop, beta);
      REQUIRE(om.mass.size() == bf.mass.size());
      for (std::size_t j = 0; j < om.mass.size(); ++j) CHECK(std::abs(om.mass[j] - bf.mass[j]) <= 1e-10);
      CHECK(std::abs(om.total() - 1.0) <= 1e-9);

      const auto w = gibbs_weights(pop, beta);
      double diag = 0.0;
      for (double q : w.normalized) diag += q * q;
      CHECK(om.mass.back() > 0.0);
      CHECK(std::abs(om.mass.back() - diag) <= 1e-12);
    }
  }
}

TEST_CASE("overlap tail") {
  const GaussianBinaryLaw law;
  const auto pop = testing::exact_tree(law, 10, 9);
  const auto om = overlap_measure(pop, 2.0);
  CHECK(overlap_tail(om, 1.0) == 0.0);
  CHECK(overlap_tail(om, 1.5) == 0.0);
  double prev = INFINITY;
  for (double t = 0.0; t < 1.0; t += 0.05) {
    const double tail = overlap_tail(om, t);
    CHECK(tail <= prev);
    prev = tail;
  }
  OverlapMeasure point{4, {0.0, 0.0, 0.0, 0.0, 1.0}};
  CHECK(overlap_tail(point, 0.2) == 1.0);
  CHECK(depth_floor(0.5, 128) == 64);
  CHECK(depth_floor(0.3, 10) == 3);
}

TEST_CASE("Lambda and Delta") {
  const auto trees = random_trees(30);
  for (const auto& pop : trees) {
    const int n = pop.generation();
    const auto om = overlap_measure(pop, 2.0);
    const auto bf = brute_overlap(pop, 2.0);
    CHECK(std::abs(lambda_delta(om, 0, 0.5).lambda - 1.0) <= 1e-12);
    for (double t : {0.3, 0.5, 1.0}) {
      for (int k = 0; k <= depth_floor(t, n); ++k) {
        const auto ld = lambda_delta(om, k, t);
        double lam = 0.0, del = 0.0;
        for (int j = k; j <= n; ++j) lam += bf.mass[j];
        for (int j = k; j <= depth_floor(t, n); ++j) del += bf.mass[j];
        CHECK(std::abs(ld.lambda - lam) <= 1e-10);
        CHECK(std::abs(ld.delta - del) <= 1e-10);
        const double tail = overlap_tail(om, t);
        CHECK(ld.lambda - ld.delta <= tail + 1e-12);
        CHECK(tail <= ld.lambda + 1e-12);
      }
    }
    CHECK_THROWS_AS(lambda_delta(om, n, 0.5), std::invalid_argument);
  }
}

TEST_CASE("entangled R") {
  const GaussianBinaryLaw law;
  const auto pop = testing::exact_tree(law, 12, 6);
  const double beta = 2.0;
  const auto bf = brute_overlap(pop, beta);
  CHECK(testing::close_rel(entangled_R(pop, beta, 0), bf.w * bf.w, 1e-9));
  double prev = INFINITY;
  for (int k = 0; k <= 6; ++k) {
    double mid = 0.0;
    for (int j = k; j <= 12 - k; ++j) mid += bf.mass[j];
    const double r = entangled_R(pop, beta, k);
    CHECK(testing::close_rel(r, bf.w * bf.w * mid, 1e-9));
    CHECK(r <= prev);
    prev = r;
  }
  CHECK_THROWS(entangled_R(pop, beta, 7));
}

TEST_CASE("genealogy dichotomy counts") {
  const GaussianBinaryLaw law;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto pop = testing::exact_tree(law, 10, seed);
    const double lowest = minimum(pop).value - centering(10);
    CHECK(genealogy_dichotomy(pop, lowest - 0.01, 0) == 0);
    for (double z : {0.0, 1.0, 3.0}) {
      for (int k = 0; k <= 5; ++k) CHECK(genealogy_dichotomy(pop, z, k) == brute_dichotomy(pop, z, k));
    }
    std::size_t qualifying = 0;
    for (double v : pop.positions()) qualifying += v <= centering(10) + 3.0;
    if (qualifying >= 2) CHECK(genealogy_dichotomy(pop, 3.0, 0) > 0);
  }
}

TEST_CASE("Gibbs ball masses") {
  const GaussianBinaryLaw law;
  const auto pop = testing::exact_tree(law, 9, 14);
  const double beta = 2.0;
  const double w = gibbs_weights(pop, beta).normalization();
  CHECK(testing::close_rel(gibbs_ball_mass(pop, beta, Label::root()), w, 1e-12));
  for (int k = 1; k <= 9; ++k) {
    double sum = 0.0;
    for (std::size_t i = 0; i < pop.level(k).size(); ++i) {
      const Label u = pop.node_label(k, i);
      const double m = gibbs_ball_mass(pop, beta, u);
      sum += m;
      if (k < 9) {
        CHECK(m >= gibbs_ball_mass(pop, beta, u.child(1)));
        CHECK(m >= gibbs_ball_mass(pop, beta, u.child(2)));
      }
    }
    CHECK(testing::close_rel(sum, w, 1e-12));
  }
  CHECK(gibbs_ball_mass(pop, beta, Label{1, 5}) == 0.0);
}

TEST_CASE("normalized Gibbs quantities ignore a global shift") {
  const GaussianBinaryLaw law;
  const auto pop = testing::exact_tree(law, 11, 15);
  const auto moved = pop.shifted(-7.25);
  const auto a = overlap_measure(pop, 2.0);
  const auto b = overlap_measure(moved, 2.0);
  for (std::size_t j = 0; j < a.mass.size(); ++j) CHECK(std::abs(a.mass[j] - b.mass[j]) <= 1e-12);
  const auto wa = gibbs_weights(pop, 2.0);
  const auto wb = gibbs_weights(moved, 2.0);
  for (std::size_t i = 0; i < pop.size(); ++i) CHECK(std::abs(wa.normalized[i] - wb.normalized[i]) <= 1e-12);
  CHECK(wb.log_normalization() - wa.log_normalization() == doctest::Approx(2.0 * 7.25).epsilon(1e-12));
}

TEST_CASE("pruned populations give the same overlap as the exact tree restricted to the tube") {
  const GaussianBinaryLaw law;
  SimulationRequest req;
  req.n = 14;
  req.seed = 5;
  req.mode = SimulationMode::pruned;
  req.barrier = BarrierSpec{3.0, 6.0, 3.0, 1.0};
  const auto pruned = simulate(law, req);
  const auto om = overlap_measure(pruned, 2.0);
  const auto bf = brute_overlap(pruned, 2.0);
  for (std::size_t j = 0; j < om.mass.size(); ++j) CHECK(std::abs(om.mass[j] - bf.mass[j]) <= 1e-10);
}
