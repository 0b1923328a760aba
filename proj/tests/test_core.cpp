#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "prefdisc/dataset.hpp"
#include "support.hpp"

using namespace prefdisc;
using testgen::random_softmax;
using testgen::standard_menus;

namespace {

SoftmaxParams make_params(std::vector<double> u, std::vector<double> alpha,
                          std::vector<double> lambda, std::vector<double> ts = {1.0}) {
  SoftmaxParams p;
  p.grid = TimeGrid(std::move(ts));
  p.u = std::move(u);
  p.alpha = std::move(alpha);
  p.lambda = std::move(lambda);
  return p;
}

}  // namespace

TEST_CASE("universe and menu validation") {
  CHECK_THROWS_AS(Universe({"a"}), Error);
  CHECK_THROWS_AS(Universe({"a", "a"}), Error);
  const Universe u({"a", "b", "c"});
  CHECK(u.index("c") == 2);
  CHECK_THROWS_AS(u.index("z"), Error);
  CHECK_THROWS_AS(Menu::of(u, std::vector<int>{}), Error);
  CHECK_THROWS_AS(Menu::of(u, std::vector<int>{0, 0}), Error);
  CHECK_THROWS_AS(Menu::of(u, std::vector<int>{0, 3}), Error);
  CHECK(Menu::of(u, std::vector<int>{2, 0}).members == std::vector<int>{0, 2});
}

TEST_CASE("choice probability formula") {
  const Universe u({"a", "b"});
  const auto p = make_params({1, 0}, {0, 0}, {1});
  const Menu ab = Menu::full(u);

  // sigmoid(1) to ten digits
  CHECK(softmax_prob(u, p, 1.0, ab, 0) == doctest::Approx(0.7310585786).epsilon(1e-10));
  CHECK(softmax_prob(u, p, 1.0, ab, 0) == doctest::Approx(1.0 / (1.0 + std::exp(-1.0))).epsilon(1e-15));

  SUBCASE("the zero point is uniform under zero bias") {
    const Universe u3 = Universe::numbered(3);
    const auto p3 = make_params({5, -2, 0.3}, {0, 0, 0}, {1});
    const Menu m = Menu::full(u3);
    for (int a = 0; a < 3; ++a)
      CHECK(softmax_prob(u3, p3, 0.0, m, a) == doctest::Approx(1.0 / 3).epsilon(1e-14));
  }

  SUBCASE("constant utility keeps every table at its zero-point value") {
    Rng rng(11);
    const Universe u4 = Universe::numbered(4);
    auto p4 = make_params({0.7, 0.7, 0.7, 0.7},
                          {0.5, -1.0, 2.0, 0.0}, {2.0, 0.5}, {1.0, 2.0});
    for (const Menu& m : standard_menus(u4))
      for (double t : {1.0, 2.0})
        for (int a : m.members)
          CHECK(softmax_prob(u4, p4, t, m, a) ==
                doctest::Approx(softmax_prob(u4, p4, 0.0, m, a)).epsilon(1e-13));
    (void)rng;
  }

  SUBCASE("errors") {
    CHECK_THROWS_AS(softmax_prob(u, p, 0.5, ab, 0), Error);   // t not on the grid
    CHECK_THROWS_AS(softmax_prob(u, p, 1.0, Menu::of(u, std::vector<int>{0}), 1), Error);  // a not in menu
  }

  SUBCASE("huge logits stay finite") {
    const auto pbig = make_params({700, -700}, {0, 0}, {1});
    const double q = softmax_prob(u, pbig, 1.0, ab, 0);
    CHECK(std::isfinite(q));
    CHECK(q == doctest::Approx(1.0));
  }
}

TEST_CASE("evidence stats") {
  SUBCASE("weight equals the scaled utility gap") {
    const Universe u({"a", "b"});
    const auto p = make_params({2, 0}, {0.4, -0.3}, {2});
    const auto s = evidence_stats(p, 1.0, 0, 1);
    CHECK(s.weight == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s.easiness == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s.strength == doctest::Approx(std::exp(1.0)).epsilon(1e-15));
    CHECK(s.log_odds == doctest::Approx(1.0 + 0.7).epsilon(1e-15));
  }

  SUBCASE("no deliberation change means zero weight") {
    const auto s = evidence_stats_from_probs(0.42, 0.58, 0.42, 0.58);
    CHECK(s.strength == doctest::Approx(1.0));
    CHECK(s.weight == 0.0);
    CHECK(s.easiness == 0.0);
  }

  SUBCASE("antisymmetry from a dataset") {
    Rng rng(3);
    const auto d = testgen::random_softmax_dataset(rng, 5, 3);
    for (double t : d.grid().deadlines)
      for (int a = 0; a < 5; ++a)
        for (int b = 0; b < 5; ++b) {
          if (a == b) continue;
          const double wab = evidence_stats(d, t, a, b).weight;
          const double wba = evidence_stats(d, t, b, a).weight;
          CHECK(wab == doctest::Approx(-wba).epsilon(1e-12));
        }
  }

  SUBCASE("degenerate probabilities are rejected") {
    CHECK_THROWS_AS(evidence_stats_from_probs(0.0, 1.0, 0.5, 0.5), Error);
    CHECK_THROWS_AS(evidence_stats_from_probs(1.0, 0.0, 0.5, 0.5), Error);
    CHECK_THROWS_AS(evidence_stats_from_probs(0.5, 0.5, 1.0, 0.0), Error);
  }
}

TEST_CASE("softmax evidence identity and additivity") {
  Rng rng(17);
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 3 + static_cast<int>(rng.uniform01() * 4);
    const Universe u = Universe::numbered(n);
    const auto p = random_softmax(rng, n, 3);
    const auto d = generate_exact(u, p, standard_menus(u));
    for (double t : p.grid.deadlines)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          if (a == b) continue;
          const double w = evidence_stats(d, t, a, b).weight;
          const double expected = (p.u[a] - p.u[b]) / p.lambda[p.grid.index_of(t)];
          CHECK(w == doctest::Approx(expected).epsilon(1e-12));
        }
    // telescoping over a chain of three
    const double t0 = p.grid.deadlines[0];
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) {
          if (a == b || b == c || a == c) continue;
          const double lhs = evidence_stats(d, t0, a, c).weight;
          const double rhs =
              evidence_stats(d, t0, a, b).weight + evidence_stats(d, t0, b, c).weight;
          CHECK(lhs == doctest::Approx(rhs).epsilon(1e-11));
        }
  }
}

TEST_CASE("binary odds are menu independent") {
  Rng rng(19);
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 3 + static_cast<int>(rng.uniform01() * 4);
    const Universe u = Universe::numbered(n);
    const auto p = random_softmax(rng, n, 2);
    const Menu full = Menu::full(u);
    for (double t : {0.0, p.grid.deadlines[0], p.grid.deadlines[1]}) {
      const auto table = softmax_table(u, p, t, full);
      for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
          const Menu ab = Menu::of(u, std::vector<int>{a, b});
          const double lhs = softmax_prob(u, p, t, ab, a) / softmax_prob(u, p, t, ab, b);
          const double rhs = table.prob(a) / table.prob(b);
          CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
        }
    }
  }
}

TEST_CASE("every generated table is a distribution on its menu") {
  Rng rng(23);
  for (int rep = 0; rep < 10; ++rep) {
    const int n = 2 + static_cast<int>(rng.uniform01() * 5);
    const Universe u = Universe::numbered(n);
    const auto p = random_softmax(rng, n, 3);
    for (const Menu& m : standard_menus(u))
      for (double t : {0.0, p.grid.deadlines[1]}) {
        const auto dist = softmax_table(u, p, t, m);  // ctor enforces sum within 1e-12
        double sum = 0;
        for (double x : dist.probs) sum += x;
        CHECK(std::abs(sum - 1.0) <= 1e-12);
      }
  }
}

TEST_CASE("revealed relations") {
  const Universe u({"a", "b", "c"});
  auto p = make_params({0, 1, 3}, {0.2, -0.1, 0.4}, {1});
  const auto d = generate_exact(u, p, standard_menus(u));
  const auto r = revealed_relations(d, 1.0);

  SUBCASE("utility order and gaps drive the three relations") {
    CHECK(r.pref.count({2, 1}));
    CHECK(r.pref.count({1, 0}));
    CHECK(r.pref.count({2, 0}));
    CHECK_FALSE(r.pref.count({0, 1}));
    CHECK(r.intensity.count({{2, 0}, {1, 0}}));   // gap 3 beats gap 1
    CHECK_FALSE(r.intensity.count({{1, 0}, {2, 0}}));
    CHECK(r.ease.count({{0, 2}, {0, 1}}));        // |3| easier than |1|
    CHECK_FALSE(r.ease.count({{0, 1}, {0, 2}}));
  }

  SUBCASE("relations match the utility oracle") {
    const auto oracle = relations_from_utility({0, 1, 3});
    CHECK(r.pref == oracle.pref);
    CHECK(r.intensity == oracle.intensity);
    CHECK(r.ease == oracle.ease);
  }

  SUBCASE("tables equal to their zero-point reveal nothing") {
    auto pc = make_params({1, 1, 1}, {0.2, -0.1, 0.4}, {1});
    ChoiceDataset dc(u, pc.grid, ChoiceDataset::Kind::exact);
    for (const Menu& m : standard_menus(u)) {
      const auto zero = softmax_table(u, pc, 0.0, m);
      dc.add_table(0.0, m, zero.probs);
      dc.add_table(1.0, m, zero.probs);
    }
    const auto rc = revealed_relations(dc, 1.0);
    CHECK(rc.pref.empty());
    CHECK(rc.intensity.size() == 0);
    CHECK(rc.ease.empty());
  }

  SUBCASE("a priori homogeneous data reduces to the classical revealed preference") {
    auto ph = make_params({0, 1, 3}, {0, 0, 0}, {1});
    const auto dh = generate_exact(u, ph, standard_menus(u));
    const auto rh = revealed_relations(dh, 1.0);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        if (a == b) continue;
        const bool classical = dh.binary(1.0, a, b) > dh.binary(1.0, b, a);
        CHECK(rh.pref.count({a, b}) == (classical ? 1u : 0u));
      }
  }
}

TEST_CASE("duality between preference-ease and intensity") {
  SUBCASE("forward map matches the utility-generated intensity, n = 3") {
    const auto rel = relations_from_utility({0, 1, 3});
    CHECK(duality_map(rel.pref, rel.ease, 3) == rel.intensity);
  }

  SUBCASE("empty relations map to empty relations") {
    const auto rel = relations_from_utility({2, 2, 2, 2});
    CHECK(rel.pref.empty());
    CHECK(duality_map(rel.pref, rel.ease, 4).empty());
    const auto [pref, ease] = duality_inverse({}, 4);
    CHECK(pref.empty());
    CHECK(ease.empty());
  }

  SUBCASE("roundtrip on a 4-point utility") {
    const auto rel = relations_from_utility({0, 1, 2, 5});
    const auto intensity = duality_map(rel.pref, rel.ease, 4);
    CHECK(intensity == rel.intensity);
    const auto [pref, ease] = duality_inverse(intensity, 4);
    CHECK(pref == rel.pref);
    CHECK(ease == rel.ease);
  }

  SUBCASE("roundtrip with ties in the utility") {
    const auto rel = relations_from_utility({0.5, 0.5, -1, 2});
    const auto intensity = duality_map(rel.pref, rel.ease, 4);
    CHECK(intensity == rel.intensity);
    const auto [pref, ease] = duality_inverse(rel.intensity, 4);
    CHECK(pref == rel.pref);
    CHECK(ease == rel.ease);
  }

  SUBCASE("two alternatives are not enough") {
    CHECK_THROWS_AS(duality_map({}, {}, 2), Error);
    CHECK_THROWS_AS(duality_inverse({}, 2), Error);
  }
}

TEST_CASE("limit rule") {
  const Universe u({"a", "b", "c"});

  SUBCASE("bias splits the argmax set") {
    auto p = make_params({0, 1, 1}, {0, 0, std::log(3.0)}, {1});
    const auto dist = limit_rule(u, p, Menu::full(u));
    CHECK(dist.probs[0] == 0.0);
    CHECK(dist.probs[1] == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(dist.probs[2] == doctest::Approx(0.75).epsilon(1e-14));
  }

  SUBCASE("unique maximizer takes everything") {
    auto p = make_params({0, 2, 1}, {5, -5, 0}, {1});
    const auto dist = limit_rule(u, p, Menu::full(u));
    CHECK(dist.probs[1] == 1.0);
    CHECK(dist.probs[0] == 0.0);
    CHECK(dist.probs[2] == 0.0);
  }

  SUBCASE("binary limit is an indicator of the utility order") {
    Rng rng(31);
    const Universe u5 = Universe::numbered(5);
    const auto p = random_softmax(rng, 5, 1);
    for (int a = 0; a < 5; ++a)
      for (int b = 0; b < 5; ++b) {
        if (a == b) continue;
        const auto dist = limit_rule(u5, p, Menu::of(u5, std::vector<int>{a, b}));
        if (p.u[a] > p.u[b]) CHECK(dist.prob(a) == 1.0);
        if (p.u[a] < p.u[b]) CHECK(dist.prob(a) == 0.0);
      }
  }

  SUBCASE("softmax converges to the limit rule as noise vanishes") {
    Rng rng(37);
    for (int rep = 0; rep < 10; ++rep) {
      const int n = 2 + static_cast<int>(rng.uniform01() * 4);
      const Universe un = Universe::numbered(n);
      SoftmaxParams p;
      p.grid = TimeGrid({1.0});
      p.lambda = {1e-3};
      for (int i = 0; i < n; ++i) {
        // utility gaps of at least 0.1 between distinct levels
        p.u.push_back(0.1 * static_cast<int>(rng.uniform01() * 20));
        p.alpha.push_back(testgen::uniform_in(rng, -2, 2));
      }
      for (const Menu& m : standard_menus(un)) {
        const auto lim = limit_rule(un, p, m);
        for (int a : m.members)
          CHECK(std::abs(softmax_prob(un, p, 1.0, m, a) - lim.prob(a)) < 1e-6);
      }
    }
  }
}

TEST_CASE("decreasing noise stochastically improves payoffs") {
  Rng rng(41);
  for (int rep = 0; rep < 10; ++rep) {
    const int n = 3 + static_cast<int>(rng.uniform01() * 4);
    const Universe u = Universe::numbered(n);
    const auto p = random_softmax(rng, n, 4);  // lambda decreasing by construction
    for (const Menu& m : standard_menus(u)) {
      for (int i = 0; i + 1 < p.grid.size(); ++i) {
        const double t = p.grid.deadlines[i];
        const double s = p.grid.deadlines[i + 1];
        const auto pt = softmax_table(u, p, t, m);
        const auto ps = softmax_table(u, p, s, m);
        for (int a : m.members) {
          const double ubar = p.u[a];
          double mass_t = 0, mass_s = 0;
          for (int b : m.members)
            if (p.u[b] > ubar) {
              mass_t += pt.prob(b);
              mass_s += ps.prob(b);
            }
          CHECK(mass_s >= mass_t - 1e-12);
        }
      }
    }
  }
}
