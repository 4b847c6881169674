#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "brwlab/law.hpp"
#include "brwlab/observables.hpp"
#include "brwlab/population.hpp"
#include "brwlab/simulate.hpp"
#include "brwlab/stats.hpp"
#include "support.hpp"

using namespace brwlab;

namespace {

// Two children times the integral of x^p e^{-x} against the N(m, s2) density,
// by composite Simpson on m +- 14 s.
double gaussian_pair_moment(double m, double s2, int p) {
  const double s = std::sqrt(s2);
  const double lo = m - 14.0 * s, hi = m + 14.0 * s;
  const int steps = 40000;
  const double h = (hi - lo) / steps;
  auto f = [&](double x) {
    const double dens = std::exp(-0.5 * (x - m) * (x - m) / s2) / std::sqrt(2.0 * std::numbers::pi * s2);
    return std::pow(x, p) * std::exp(-x) * dens;
  };
  double sum = f(lo) + f(hi);
  for (int i = 1; i < steps; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(lo + i * h);
  return 2.0 * sum * h / 3.0;
}

const MomentCheck& check(const ValidationReport& r, const char* name) {
  const auto* c = r.find(name);
  REQUIRE(c != nullptr);
  return *c;
}

}  // namespace

TEST_CASE("Gaussian binary law sits in the boundary case") {
  const GaussianBinaryLaw law;
  const double s2 = 2.0 * std::log(2.0);
  CHECK(law.mean() == s2);
  CHECK(law.variance() == s2);
  const auto m = law.moments();
  REQUIRE(m);
  CHECK(std::abs(m->sum_exp - 1.0) <= 1e-12);
  CHECK(std::abs(m->sum_v_exp) <= 1e-12);
  CHECK(std::abs(m->sum_v2_exp - s2) <= 1e-12);

  SUBCASE("closed forms agree with quadrature") {
    CHECK(std::abs(gaussian_pair_moment(s2, s2, 0) - m->sum_exp) <= 1e-10);
    CHECK(std::abs(gaussian_pair_moment(s2, s2, 1) - m->sum_v_exp) <= 1e-10);
    CHECK(std::abs(gaussian_pair_moment(s2, s2, 2) - m->sum_v2_exp) <= 1e-10);
    const GaussianBinaryLaw other(0.3, 1.7);
    const auto mo = other.moments();
    CHECK(std::abs(gaussian_pair_moment(0.3, 1.7, 0) - mo->sum_exp) <= 1e-10);
    CHECK(std::abs(gaussian_pair_moment(0.3, 1.7, 1) - mo->sum_v_exp) <= 1e-10);
    CHECK(std::abs(gaussian_pair_moment(0.3, 1.7, 2) - mo->sum_v2_exp) <= 1e-10);
  }

  SUBCASE("validation passes with Monte Carlo inside 3 SE") {
    const auto r = validate_boundary(law, 100000, 1e-12);
    CHECK(r.pass);
    for (const char* name : {"sum_exp", "sum_v_exp", "sigma2"}) {
      const auto& c = check(r, name);
      CHECK(std::abs(c.estimate - *c.closed_form) <= 3.0 * c.standard_error);
    }
    CHECK(check(r, "sigma2").target == doctest::Approx(s2).epsilon(1e-15));
  }
}

TEST_CASE("laws outside the boundary case fail validation") {
  const DeterministicLaw zeros({0.0, 0.0});
  const auto r = validate_boundary(zeros, 1000, 1e-12);
  CHECK_FALSE(r.pass);
  CHECK_FALSE(check(r, "sum_exp").pass);

  const DeterministicLaw single({0.0});
  const auto s = validate_boundary(single, 1000, 1e-12);
  CHECK_FALSE(s.pass);
  CHECK_FALSE(check(s, "mean_offspring").pass);
}

TEST_CASE("Poisson exponential law is normalized by root solving") {
  const PoissonExponentialLaw law(2.0);
  const auto m = law.moments();
  REQUIRE(m);
  CHECK(std::abs(m->sum_exp - 1.0) <= 1e-10);
  CHECK(std::abs(m->sum_v_exp) <= 1e-10);
  CHECK(validate_boundary(law, 100000, 1e-10).pass);
  const double q = law.extinction_probability();
  CHECK(std::abs(q - std::exp(2.0 * (q - 1.0))) <= 1e-12);
  CHECK(q == doctest::Approx(0.2031878699).epsilon(1e-8));
}

TEST_CASE("centering") {
  CHECK(centering(1) == 0.0);
  CHECK(centering(100) == doctest::Approx(6.907755278982137).epsilon(1e-14));
  CHECK(centering(7) == doctest::Approx(2.9188652235829697).epsilon(1e-14));
  CHECK_THROWS(centering(0));
}

TEST_CASE("exact Gaussian binary trees have 2^n particles") {
  const GaussianBinaryLaw law;
  const auto pop = testing::exact_tree(law, 10, 5);
  CHECK(pop.size() == 1024);
  CHECK_FALSE(pop.extinct());
  CHECK(pop.generation() == 10);
  CHECK(pop.info().complete_history);
}

TEST_CASE("extinction gives an empty flagged population") {
  const PoissonExponentialLaw law(2.0);
  int extinct = 0;
  for (std::uint64_t seed = 1; seed <= 200 && extinct < 3; ++seed) {
    const auto pop = testing::exact_tree(law, 6, seed);
    if (pop.extinct()) {
      ++extinct;
      CHECK(pop.size() == 0);
      CHECK_THROWS_AS(minimum(pop), ExtinctPopulation);
      CHECK_THROWS_AS(extremal_process(pop), ExtinctPopulation);
    }
  }
  CHECK(extinct == 3);
}

TEST_CASE("pruned frontier is the barrier-respecting part of the exact frontier") {
  const GaussianBinaryLaw law;
  const int n = 18;
  for (std::uint64_t seed : {3ULL, 4ULL}) {
    SimulationRequest req;
    req.n = n;
    req.seed = seed;
    req.mode = SimulationMode::exact;
    const auto exact = simulate(law, req);
    req.mode = SimulationMode::pruned;
    // A narrow tube so pruning actually bites at this depth.
    req.barrier = BarrierSpec{2.0, 6.0, 3.0, 1.0};
    const auto pruned = simulate(law, req);
    CHECK_FALSE(pruned.info().complete_history);

    // Exact-mode oracle: walk every frontier path and apply the tube predicate.
    std::vector<std::pair<Label, double>> expected;
    for (std::size_t i = 0; i < exact.size(); ++i) {
      bool inside = true;
      for (int g = 1; g <= n && inside; ++g) {
        const double v = exact.level(g).position[exact.ancestor_index(i, g)];
        inside = req.barrier.lower(n, g) <= v && v <= req.barrier.upper(n, g);
      }
      if (inside) expected.emplace_back(exact.label(i), exact.positions()[i]);
    }
    REQUIRE(expected.size() == pruned.size());
    CHECK(pruned.size() < exact.size());
    for (std::size_t i = 0; i < pruned.size(); ++i) {
      CHECK(pruned.label(i) == expected[i].first);
      CHECK(pruned.positions()[i] == expected[i].second);
    }
  }
}

TEST_CASE("same seed replays byte for byte") {
  const GaussianBinaryLaw law;
  SimulationRequest req;
  req.n = 40;
  req.mode = SimulationMode::pruned;
  req.barrier = BarrierSpec{15.0, 17.0, 8.0, 2.0};
  req.seed = 99;
  req.mark_depth = 3;
  std::ostringstream a, b;
  simulate(law, req).write_snapshot(a);
  simulate(law, req).write_snapshot(b);
  CHECK(a.str() == b.str());

  std::istringstream in(a.str());
  const auto back = Population::read_snapshot(in);
  std::ostringstream c;
  back.write_snapshot(c);
  CHECK(c.str() == a.str());
  CHECK(back.info().seed == 99);
  CHECK(back.info().law_id == "gaussian_binary");
}

TEST_CASE("snapshot rejects corrupt input") {
  std::istringstream junk("not a snapshot");
  CHECK_THROWS(Population::read_snapshot(junk));
}

TEST_CASE("population CSV carries label, position and ancestor mark") {
  const GaussianBinaryLaw law;
  const auto pop = testing::exact_tree(law, 3, 8, 1);
  std::ostringstream out;
  pop.write_csv(out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "label,position,ancestor_mark");
  std::getline(in, line);
  CHECK(line.rfind("1.1.1,", 0) == 0);
  CHECK(line.substr(line.rfind(',') + 1) == "1");
}

TEST_CASE("pruned positions stay inside the tube") {
  const GaussianBinaryLaw law;
  SimulationRequest req;
  req.n = 60;
  req.mode = SimulationMode::pruned;
  req.barrier = BarrierSpec{15.0, 17.0, 8.0, 2.0};
  req.seed = 17;
  const auto pop = simulate(law, req);
  for (int g = 1; g <= req.n; ++g) {
    for (double v : pop.level(g).position) {
      CHECK(v >= req.barrier.lower(req.n, g));
      CHECK(v <= req.barrier.upper(req.n, g));
    }
  }
  REQUIRE(pop.position_ceiling());
  CHECK(*pop.position_ceiling() == req.barrier.upper(req.n, req.n));
}

TEST_CASE("particle budget is enforced") {
  const GaussianBinaryLaw law;
  SimulationRequest req;
  req.n = 12;
  req.max_particles = 1000;
  CHECK_THROWS_AS(simulate(law, req), MemoryBudgetExceeded);
}

TEST_CASE("minimum examples") {
  using testing::Node;
  const auto single = testing::hand_tree({{{0, 1, 3.2}}});
  CHECK(minimum(single).value == 3.2);
  CHECK(minimum(single).label == Label{1});

  const auto tie = testing::hand_tree({{{0, 1, 0.5}}, {{0, 1, 1.0}, {0, 2, 1.0}}});
  CHECK(minimum(tie).label == Label{1, 1});

  const GaussianBinaryLaw law;
  const auto pop = testing::exact_tree(law, 9, 3);
  const auto m = minimum(pop);
  for (double v : pop.positions()) CHECK(m.value <= v);
  CHECK(pop.positions()[m.index] == m.value);
}

TEST_CASE("continuing generation-k particles reproduces the law of direct simulation") {
  // Branching property: M_n = min_u (V(u) + M'_{n-k}) and W_n = sum_u e^{-V(u)} W'_{n-k}
  // with independent continuations.
  const GaussianBinaryLaw law;
  const int n = 8, k = 3, reps = 600;
  std::vector<double> direct_min, direct_w, glued_min, glued_w;
  for (int r = 0; r < reps; ++r) {
    const auto pop = testing::exact_tree(law, n, 1000 + r);
    direct_min.push_back(minimum(pop).value);
    direct_w.push_back(critical_martingale(pop));

    const auto top = testing::exact_tree(law, k, 50000 + r);
    double mn = INFINITY, w = 0.0;
    for (std::size_t i = 0; i < top.size(); ++i) {
      const auto sub = testing::exact_tree(law, n - k, 90000 + 16 * r + i);
      mn = std::min(mn, top.positions()[i] + minimum(sub).value);
      w += std::exp(-top.positions()[i]) * critical_martingale(sub);
    }
    glued_min.push_back(mn);
    glued_w.push_back(w);
  }
  CHECK(ks_two_sample(direct_min, glued_min).p_value > 0.01);
  CHECK(ks_two_sample(direct_w, glued_w).p_value > 0.01);
}
