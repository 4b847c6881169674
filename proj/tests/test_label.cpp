#include <doctest.h>

#include <random>
#include <unordered_set>

#include "brwlab/label.hpp"
#include "brwlab/law.hpp"
#include "support.hpp"

using namespace brwlab;

namespace {

// Psi(u) as an exact fraction num / 3^S with S the full ordinal sum.
struct Rational3 {
  unsigned __int128 num = 0;
  int exponent = 0;  // denominator 3^exponent
};

unsigned __int128 pow3(int e) {
  unsigned __int128 p = 1;
  for (int i = 0; i < e; ++i) p *= 3;
  return p;
}

Rational3 psi_exact(const Label& u) {
  int total = 0;
  for (auto x : u.path()) total += static_cast<int>(x);
  Rational3 r;
  r.exponent = total;
  int partial = 0;
  for (auto x : u.path()) {
    partial += static_cast<int>(x);
    r.num += 2 * pow3(total - partial);
  }
  return r;
}

long double to_real(const Rational3& r) {
  return static_cast<long double>(r.num) / static_cast<long double>(pow3(r.exponent));
}

Label random_label(std::mt19937_64& gen, int max_depth, int max_ordinal) {
  std::uniform_int_distribution<int> depth(0, max_depth);
  std::uniform_int_distribution<std::uint32_t> ord(1, static_cast<std::uint32_t>(max_ordinal));
  std::vector<std::uint32_t> path(static_cast<std::size_t>(depth(gen)));
  for (auto& x : path) x = ord(gen);
  return Label(std::move(path));
}

}  // namespace

TEST_CASE("label text form") {
  CHECK(Label::root().to_string() == "@");
  CHECK(Label{1, 2, 5}.to_string() == "1.2.5");
  CHECK(Label::parse("1.2.5") == Label{1, 2, 5});
  CHECK(Label::parse("@") == Label::root());
  CHECK_THROWS_AS(Label::parse(""), std::invalid_argument);
  CHECK_THROWS_AS(Label::parse("1..2"), std::invalid_argument);
  CHECK_THROWS_AS(Label::parse("0.1"), std::invalid_argument);
  CHECK_THROWS_AS(Label::parse("1.x"), std::invalid_argument);
  CHECK_THROWS_AS(Label({1, 0}), std::invalid_argument);
}

TEST_CASE("label navigation and order") {
  const Label u{3, 1, 4};
  CHECK(u.depth() == 3);
  CHECK(u.prefix(0) == Label::root());
  CHECK(u.prefix(2) == Label{3, 1});
  CHECK(u.prefix(10) == u);
  CHECK(u.parent() == Label{3, 1});
  CHECK(u.child(7) == Label{3, 1, 4, 7});
  CHECK_THROWS(Label::root().parent());
  CHECK(Label{1} < Label{1, 1});
  CHECK(Label{1, 2} < Label{2});
  CHECK(Label{1, 9} < Label{2, 1});
  std::unordered_set<Label> set{Label{1}, Label{1, 1}, Label{1}};
  CHECK(set.size() == 2);
}

TEST_CASE("psi_embed examples") {
  CHECK(psi_embed(Label::root()) == 0.0);
  CHECK(psi_embed(Label{1}) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(psi_embed(Label{1, 1}) == doctest::Approx(2.0 * (1.0 / 3 + 1.0 / 9)).epsilon(1e-15));
  CHECK(to_real(psi_exact(Label{1, 1})) == doctest::Approx(8.0 / 9.0));
}

TEST_CASE("psi_embed agrees with exact rationals") {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 2000; ++trial) {
    const Label u = random_label(gen, 8, 4);
    const long double exact = to_real(psi_exact(u));
    CHECK(std::abs(psi_embed(u) - static_cast<double>(exact)) <= 4e-16);
  }
}

TEST_CASE("psi_embed cell containment") {
  std::mt19937_64 gen(12);
  for (int trial = 0; trial < 2000; ++trial) {
    const Label u = random_label(gen, 5, 3);
    auto path = std::vector<std::uint32_t>(u.path().begin(), u.path().end());
    const Label tail = random_label(gen, 4, 3);
    path.insert(path.end(), tail.path().begin(), tail.path().end());
    const Label v(path);
    // |Psi(v) - Psi(u)| <= 3^{-sum u} in exact arithmetic.
    const auto pu = psi_exact(u);
    const auto pv = psi_exact(v);
    const int e = pv.exponent;
    const unsigned __int128 pu_scaled = pu.num * pow3(e - pu.exponent);
    const unsigned __int128 diff = pv.num > pu_scaled ? pv.num - pu_scaled : pu_scaled - pv.num;
    CHECK(diff <= pow3(e - pu.exponent));
  }
}

TEST_CASE("psi_embed saturates for deep labels") {
  std::vector<std::uint32_t> path(300, 2);
  const double deep = psi_embed(Label(path));
  CHECK(std::isfinite(deep));
  path.push_back(1);
  CHECK(psi_embed(Label(path)) == deep);
}

TEST_CASE("distance examples") {
  const Label u{2, 1};
  CHECK(distance(u, u) == 0.0);
  CHECK(distance(Label::root(), Label{1}) == doctest::Approx(2.0 / 3.0));
  CHECK(distance(Label{1}, Label{2}) == doctest::Approx(4.0 / 9.0));
}

TEST_CASE("mrca examples") {
  const auto r = mrca(Label{1, 2, 3}, Label{1, 2, 5});
  CHECK(r.ancestor == Label{1, 2});
  CHECK(r.depth == 2);
  const Label u{4, 1, 1};
  CHECK(mrca(u, u).ancestor == u);
  CHECK(mrca(u, u).depth == 3);
  CHECK(mrca(Label{1}, Label{2}).ancestor == Label::root());
  CHECK(mrca(Label{1}, Label{2}).depth == 0);
}

TEST_CASE("ball_contains examples") {
  CHECK(ball_contains(Label{1}, Label{1, 7, 2}));
  CHECK_FALSE(ball_contains(Label{1, 2}, Label{1}));
  CHECK(ball_contains(Label::root(), Label{5, 5}));
  CHECK(ball_contains(Label{3}, Label{3}));
}

TEST_CASE("ball and mrca properties on random labels") {
  std::mt19937_64 gen(13);
  for (int trial = 0; trial < 5000; ++trial) {
    // Short labels over few ordinals so prefixes and shared ancestry are common.
    const Label u = random_label(gen, 3, 2);
    const Label v = random_label(gen, 5, 2);
    const Label w = random_label(gen, 5, 2);
    CHECK(ball_contains(u, v) == (mrca(u, v).ancestor == u));
    if (ball_contains(u, v) && ball_contains(u, w)) CHECK(mrca(v, w).depth >= u.depth());
    CHECK(mrca(v, w).depth == mrca(v, w).ancestor.depth());
    CHECK(distance(v, w) == distance(w, v));
  }
}

TEST_CASE("mrca depth matches the population split depth") {
  const GaussianBinaryLaw law;
  const auto pop = testing::exact_tree(law, 7, 21);
  const auto labels = testing::frontier_labels(pop);
  for (std::size_t i = 0; i < labels.size(); i += 3) {
    for (std::size_t j = 0; j < labels.size(); j += 5) {
      CHECK(static_cast<int>(mrca(labels[i], labels[j]).depth) == pop.split_depth(i, j));
    }
  }
}
