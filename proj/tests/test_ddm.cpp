#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "prefdisc/ddm.hpp"
#include "support.hpp"

using namespace prefdisc;

namespace {

DdmSpec binary_spec(double delta, double zeta, double beta) {
  DdmSpec spec(Universe::numbered(2), {delta, 0.0}, beta);
  if (zeta != 0.0) spec.set_zeta(0, 1, zeta);
  return spec;
}

// Slow high-precision evaluation of the acceptance probability in long double,
// used as the accuracy oracle for the expm1-based implementation.
long double acceptance_prob_ld(long double delta, long double zeta, long double beta) {
  if (delta == 0.0L) return (zeta + beta) / (2.0L * beta);
  const long double num = -std::expm1l(-(zeta + beta) * delta);
  const long double den = -std::expm1l(-2.0L * beta * delta);
  return num / den;
}

}  // namespace

TEST_CASE("acceptance probability closed form") {
  SUBCASE("symmetric unbiased case is a coin flip") {
    CHECK(acceptance_prob(binary_spec(0.0, 0.0, 1.3), 0, 1) == doctest::Approx(0.5).epsilon(1e-15));
  }

  SUBCASE("zero drift reduces to the barrier-distance ratio") {
    CHECK(acceptance_prob(binary_spec(0.0, 0.5, 1.0), 0, 1) == doctest::Approx(0.75).epsilon(1e-14));
  }

  SUBCASE("unbiased comparisons are logistic in the weighted gap") {
    const double p = acceptance_prob(binary_spec(1.0, 0.0, 0.849), 0, 1);
    CHECK(p == doctest::Approx(1.0 / (1.0 + std::exp(-0.849))).epsilon(1e-13));
    CHECK(p == doctest::Approx(0.70034).epsilon(1e-4));
  }

  SUBCASE("complementarity and range over a grid") {
    for (double beta : {0.849, 1.442, 3.0})
      for (double zr : {-0.9, -0.4, 0.0, 0.4, 0.9})
        for (double delta : {-30.0, -2.0, -1e-9, 0.0, 1e-9, 0.5, 2.0, 30.0}) {
          DdmSpec spec(Universe::numbered(2), {delta, 0.0}, beta);
          spec.set_zeta(0, 1, zr * beta);
          const double pa = acceptance_prob(spec, 0, 1);
          const double pb = acceptance_prob(spec, 1, 0);
          CHECK(pa > 0.0);
          CHECK(pa < 1.0);
          CHECK(pa + pb == doctest::Approx(1.0).epsilon(1e-12));
        }
  }

  SUBCASE("relative accuracy against a long double oracle") {
    for (double beta : {0.849, 1.442})
      for (double zr : {-0.7, 0.0, 0.6})
        for (double mag : {1e-12, 1e-9, 1e-7, 1e-5, 1e-3, 0.1, 1.0, 10.0, 50.0})
          for (double sign : {-1.0, 1.0}) {
            const double delta = sign * mag;
            const double zeta = zr * beta;
            const double got = acceptance_prob(binary_spec(delta, zeta, beta), 0, 1);
            const long double want = acceptance_prob_ld(delta, zeta, beta);
            CHECK(std::abs(static_cast<double>((got - want) / want)) < 1e-12);
          }
  }

  SUBCASE("continuity across the small-drift switch") {
    for (double beta : {0.849, 1.442})
      for (double zr : {-0.6, 0.0, 0.5}) {
        const double zeta = zr * beta;
        const double below = acceptance_prob(binary_spec(1e-8 * (1 - 1e-9), zeta, beta), 0, 1);
        const double above = acceptance_prob(binary_spec(1e-8 * (1 + 1e-9), zeta, beta), 0, 1);
        CHECK(std::abs(below - above) < 1e-10);
      }
  }

  SUBCASE("initial conditions must stay inside the barriers") {
    DdmSpec spec(Universe::numbered(2), {0, 0}, 1.0);
    CHECK_THROWS_AS(spec.set_zeta(0, 1, 1.0), Error);
    CHECK_THROWS_AS(spec.set_zeta(0, 1, -1.5), Error);
    spec.set_zeta(0, 1, 0.3);
    CHECK(spec.zeta(1, 0) == -0.3);
  }
}

TEST_CASE("sampled comparisons match the closed form") {
  // moderate-bias cells at dt=1e-4, where discretization bias is far below
  // the Monte Carlo band at this sample size (the full calibrated grid runs
  // in the acceptance suite)
  const int n = 8'000;
  Rng rng(101);
  for (double beta : {0.849, 1.442})
    for (double zeta : {0.0, 0.4})
      for (double delta : {0.0, 1.0}) {
        DdmSpec spec(Universe::numbered(2), {delta, 0.0}, beta);
        if (zeta != 0.0) spec.set_zeta(0, 1, zeta);
        int wins = 0;
        for (int i = 0; i < n; ++i)
          if (sample_comparison(spec, 0, 1, rng, 1e-4).winner == 0) ++wins;
        const double p = acceptance_prob(spec, 0, 1);
        const double se = std::sqrt(p * (1 - p) / n);
        INFO("beta " << beta << " zeta " << zeta << " delta " << delta);
        CHECK(std::abs(wins / static_cast<double>(n) - p) <= 3.25 * se);
      }
}

TEST_CASE("zero-drift mean response time is half the squared threshold") {
  const int n = 10'000;
  Rng rng(103);
  for (double beta : {0.849, 1.442}) {
    const DdmSpec spec = binary_spec(0.0, 0.0, beta);
    double sum_rt = 0;
    for (int i = 0; i < n; ++i) sum_rt += sample_comparison(spec, 0, 1, rng, 1e-4).rt;
    const double want = beta * beta / 2.0;
    CHECK(std::abs(sum_rt / n - want) / want < 0.05);
  }
}

TEST_CASE("sampling is deterministic given seed and dt") {
  const DdmSpec spec = binary_spec(0.7, 0.2, 1.1);
  Rng r1(7), r2(7);
  for (int i = 0; i < 50; ++i) {
    const auto a = sample_comparison(spec, 0, 1, r1, 1e-3);
    const auto b = sample_comparison(spec, 0, 1, r2, 1e-3);
    CHECK(a.winner == b.winner);
    CHECK(a.rt == b.rt);
    CHECK(a.steps == b.steps);
  }
}

TEST_CASE("pathological steps hit the budget") {
  const DdmSpec spec = binary_spec(0.0, 0.0, 5.0);
  Rng rng(1);
  CHECK_THROWS_AS(sample_comparison(spec, 0, 1, rng, 1e-9, 1000), Error);
}

TEST_CASE("posterior update") {
  SUBCASE("uniform prior reduces to the logistic form") {
    for (double beta : {0.5, 1.0, 2.0})
      for (double delta : {-2.0, -0.3, 0.0, 1.5})
        CHECK(gibbs_posterior(delta, 0.0, beta, 0.5) ==
              doctest::Approx(1.0 / (1.0 + std::exp(-beta * delta))).epsilon(1e-13));
  }

  SUBCASE("equal utilities leave the prior untouched") {
    for (double pi : {0.1, 0.25, 0.5, 0.9})
      CHECK(gibbs_posterior(1.7, 1.7, 2.0, pi) == doctest::Approx(pi).epsilon(1e-13));
  }

  SUBCASE("hand value: unit gap, quarter prior") {
    const double e = std::exp(1.0);
    CHECK(gibbs_posterior(1.0, 0.0, 1.0, 0.25) == doctest::Approx(e / (3.0 + e)).epsilon(1e-13));
    CHECK(gibbs_posterior(1.0, 0.0, 1.0, 0.25) == doctest::Approx(0.47536).epsilon(1e-4));
  }

  SUBCASE("the posterior-to-prior odds ratio is the exponential of the weighted gap") {
    Rng rng(5);
    for (int rep = 0; rep < 200; ++rep) {
      const double va = testgen::uniform_in(rng, -2, 2);
      const double vb = testgen::uniform_in(rng, -2, 2);
      const double beta = testgen::uniform_in(rng, 0.2, 1.2);
      const double pi = testgen::uniform_in(rng, 0.02, 0.98);
      const double post = gibbs_posterior(va, vb, beta, pi);
      // recovering odds through 1-post costs eps/min(post,1-post) in precision
      const double lhs = post / (1 - post);
      const double rhs = std::exp(beta * (va - vb)) * pi / (1 - pi);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
  }
}

TEST_CASE("binary prior of an initial condition") {
  SUBCASE("no bias means a fair prior whatever the utilities") {
    for (double beta : {0.849, 1.442})
      for (double delta : {-3.0, -0.2, 0.0, 1.0, 25.0})
        CHECK(gibbs_prior_binary(binary_spec(delta, 0.0, beta), 0, 1) ==
              doctest::Approx(0.5).epsilon(1e-12));
  }

  SUBCASE("zero drift: prior equals the acceptance probability") {
    CHECK(gibbs_prior_binary(binary_spec(0.0, 0.5, 1.0), 0, 1) ==
          doctest::Approx(0.75).epsilon(1e-13));
  }

  SUBCASE("monotone in the initial condition; fair exactly at zero") {
    const double beta = 1.2, delta = 0.8;
    double prev = -1;
    for (double z = -0.9; z < 0.95; z += 0.15) {
      const double pi = gibbs_prior_binary(binary_spec(delta, z * beta, beta), 0, 1);
      CHECK(pi > prev);
      prev = pi;
      if (z > 0) CHECK(pi > 0.5);
      if (z < 0) CHECK(pi < 0.5);
    }
  }

  SUBCASE("the prior-posterior gap is bounded by a quarter of the weighted gap") {
    for (double beta : {0.3, 0.849, 1.442, 2.5})
      for (double zr : {-0.8, -0.3, 0.0, 0.4, 0.9})
        for (double delta : {-4.0, -1.0, -0.1, 0.05, 0.5, 2.0, 6.0}) {
          const DdmSpec spec = binary_spec(delta, zr * beta, beta);
          const double post = acceptance_prob(spec, 0, 1);
          const double prior = gibbs_prior_binary(spec, 0, 1);
          CHECK(std::abs(post - prior) <= beta / 4.0 * std::abs(delta) + 1e-12);
        }
  }
}

TEST_CASE("initial condition from a binary prior") {
  SUBCASE("fair prior means zero initial condition") {
    for (double beta : {0.5, 1.442})
      for (double delta : {-2.0, 0.0, 0.7})
        CHECK(zeta_from_prior_binary(delta, 0.0, beta, 0.5) == 0.0);
  }

  SUBCASE("zero drift inverts the barrier-distance ratio") {
    CHECK(zeta_from_prior_binary(1.0, 1.0, 1.0, 0.75) == doctest::Approx(0.5).epsilon(1e-13));
  }

  SUBCASE("bijection roundtrips to 1e-12 on random instances") {
    Rng rng(7);
    for (int rep = 0; rep < 500; ++rep) {
      const double beta = testgen::uniform_in(rng, 0.3, 2.5);
      const double va = testgen::uniform_in(rng, -3, 3);
      const double vb = testgen::uniform_in(rng, -3, 3);
      const double zeta = beta * testgen::uniform_in(rng, -0.98, 0.98);
      DdmSpec spec(Universe::numbered(2), {va, vb}, beta);
      spec.set_zeta(0, 1, zeta);
      const double pi = gibbs_prior_binary(spec, 0, 1);
      CHECK(zeta_from_prior_binary(va, vb, beta, pi) == doctest::Approx(zeta).epsilon(1e-12));

      const double pi2 = testgen::uniform_in(rng, 0.02, 0.98);
      const double z2 = zeta_from_prior_binary(va, vb, beta, pi2);
      CHECK(std::abs(z2) < beta);
      DdmSpec spec2(Universe::numbered(2), {va, vb}, beta);
      spec2.set_zeta(0, 1, z2);
      CHECK(gibbs_prior_binary(spec2, 0, 1) == doctest::Approx(pi2).epsilon(1e-12));
    }
  }
}

TEST_CASE("transitivity of initial conditions") {
  SUBCASE("no bias is transitive for any utilities") {
    Rng rng(9);
    for (int rep = 0; rep < 20; ++rep) {
      const int n = 3 + static_cast<int>(rng.uniform01() * 4);
      std::vector<double> v(n);
      for (double& x : v) x = testgen::uniform_in(rng, -3, 3);
      const DdmSpec spec(Universe::numbered(n), v, testgen::uniform_in(rng, 0.4, 2.0));
      CHECK(is_transitive(spec).transitive);
    }
  }

  SUBCASE("equal utilities with a cyclic bias are intransitive") {
    DdmSpec spec(Universe::numbered(3), {0, 0, 0}, 1.0);
    spec.set_zeta(0, 1, 0.3);
    spec.set_zeta(1, 2, 0.3);
    spec.set_zeta(0, 2, -0.3);  // the cycle 0>1>2>0 favored throughout
    const auto rep = is_transitive(spec);
    CHECK_FALSE(rep.transitive);
    CHECK(rep.worst_residual > 0.1);
  }

  SUBCASE("equal utilities with equal pairwise biases are intransitive") {
    DdmSpec spec(Universe::numbered(3), {0, 0, 0}, 1.0);
    spec.set_zeta(0, 1, 0.3);
    spec.set_zeta(1, 2, 0.3);
    spec.set_zeta(0, 2, 0.3);
    CHECK_FALSE(is_transitive(spec).transitive);
  }

  SUBCASE("initial conditions built from a global prior are transitive") {
    Rng rng(11);
    for (int rep = 0; rep < 20; ++rep) {
      const int n = 3 + static_cast<int>(rng.uniform01() * 4);
      const Universe u = Universe::numbered(n);
      std::vector<double> v(n);
      for (double& x : v) x = testgen::uniform_in(rng, -3, 3);
      const auto pi = testgen::random_simplex(rng, n);
      const DdmSpec spec = zeta_from_global_prior(u, v, 1.442, pi);
      CHECK(is_transitive(spec, 1e-9).transitive);
    }
  }

  SUBCASE("two alternatives are vacuously transitive") {
    CHECK(is_transitive(binary_spec(1.0, 0.5, 1.0)).transitive);
  }
}

TEST_CASE("global prior and initial conditions are mutually inverse") {
  SUBCASE("no bias yields the uniform prior") {
    const DdmSpec spec(Universe::numbered(4), {0.5, -1, 2, 0}, 1.0);
    const auto prior = prior_from_transitive_zeta(spec);
    for (double p : prior.probs) CHECK(p == doctest::Approx(0.25).epsilon(1e-12));
  }

  SUBCASE("uniform prior yields no bias; two alternatives reduce to the binary map") {
    const Universe u2 = Universe::numbered(2);
    const auto spec2 = zeta_from_global_prior(u2, {1.0, 0.3}, 0.9, {0.3, 0.7});
    CHECK(spec2.zeta(0, 1) ==
          doctest::Approx(zeta_from_prior_binary(1.0, 0.3, 0.9, 0.3)).epsilon(1e-13));

    const Universe u3 = Universe::numbered(3);
    const auto spec3 = zeta_from_global_prior(u3, {1, 2, 3}, 1.3, {1.0 / 3, 1.0 / 3, 1.0 / 3});
    for (int a = 0; a < 3; ++a)
      for (int b = a + 1; b < 3; ++b) CHECK(spec3.zeta(a, b) == 0.0);
  }

  SUBCASE("roundtrip through a 5-point prior") {
    Rng rng(13);
    for (int rep = 0; rep < 30; ++rep) {
      const int n = 5;
      const Universe u = Universe::numbered(n);
      std::vector<double> v(n);
      for (double& x : v) x = testgen::uniform_in(rng, -2, 2);
      const auto pi = testgen::random_simplex(rng, n);
      const DdmSpec spec = zeta_from_global_prior(u, v, testgen::uniform_in(rng, 0.4, 2.0), pi);
      const auto back = prior_from_transitive_zeta(spec, 1e-8);
      for (int i = 0; i < n; ++i) CHECK(std::abs(back.probs[i] - pi[i]) < 1e-10);
    }
  }

  SUBCASE("binary conditionals of the global prior match the binary map") {
    Rng rng(15);
    const int n = 5;
    const Universe u = Universe::numbered(n);
    std::vector<double> v(n);
    for (double& x : v) x = testgen::uniform_in(rng, -2, 2);
    const DdmSpec spec = zeta_from_global_prior(u, v, 1.1, testgen::random_simplex(rng, n));
    const auto prior = prior_from_transitive_zeta(spec);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        if (a == b) continue;
        const double cond = prior.probs[a] / (prior.probs[a] + prior.probs[b]);
        CHECK(cond == doctest::Approx(gibbs_prior_binary(spec, a, b)).epsilon(1e-10));
      }
  }

  SUBCASE("global monotonicity: sign of the bias orders the prior") {
    Rng rng(17);
    for (int rep = 0; rep < 10; ++rep) {
      const int n = 4;
      const Universe u = Universe::numbered(n);
      std::vector<double> v(n);
      for (double& x : v) x = testgen::uniform_in(rng, -2, 2);
      const DdmSpec spec = zeta_from_global_prior(u, v, 1.0, testgen::random_simplex(rng, n));
      const auto prior = prior_from_transitive_zeta(spec);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          if (a == b) continue;
          CHECK((spec.zeta(a, b) >= 0) == (prior.probs[a] >= prior.probs[b]));
        }
    }
  }

  SUBCASE("an intransitive spec is rejected") {
    DdmSpec spec(Universe::numbered(3), {0, 0, 0}, 1.0);
    spec.set_zeta(0, 1, 0.3);
    spec.set_zeta(1, 2, 0.3);
    spec.set_zeta(0, 2, -0.3);
    CHECK_THROWS_AS(prior_from_transitive_zeta(spec), Error);
  }
}

TEST_CASE("the posterior maximizes expected gain net of relative entropy") {
  Rng rng(19);
  for (int rep = 0; rep < 6; ++rep) {
    const double va = testgen::uniform_in(rng, -2, 2);
    const double vb = testgen::uniform_in(rng, -2, 2);
    const double beta = testgen::uniform_in(rng, 0.4, 2.0);
    const double pi = testgen::uniform_in(rng, 0.1, 0.9);

    auto objective = [&](double xi) {
      const double gain = va * xi + vb * (1 - xi) - (va * pi + vb * (1 - pi));
      const double rel_ent = xi * std::log(xi / pi) + (1 - xi) * std::log((1 - xi) / (1 - pi));
      return gain - rel_ent / beta;
    };

    double best_xi = 0, best = -1e300;
    for (double xi = 1e-6; xi < 1.0; xi += 1e-6) {
      const double f = objective(xi);
      if (f > best) {
        best = f;
        best_xi = xi;
      }
    }
    CHECK(std::abs(best_xi - gibbs_posterior(va, vb, beta, pi)) < 2e-6);
  }
}
