#pragma once

#include <array>
#include <cstdint>
#include <tuple>

#include "prefdisc/core.hpp"
#include "prefdisc/rng.hpp"

namespace prefdisc {

// Binary drift-diffusion comparison: drift v(a)-v(b), diffusion sqrt(2),
// absorbing barriers at +-beta, start zeta(a,b). zeta is stored only for
// pairs a < b in universe order; the reverse entry is the negation, so
// antisymmetry holds by construction.
class DdmSpec {
 public:
  DdmSpec(Universe universe, std::vector<double> v, double beta);  // unbiased

  static DdmSpec with_zeta(Universe universe, std::vector<double> v, double beta,
                           const std::vector<std::tuple<int, int, double>>& entries);

  const Universe& universe() const { return universe_; }
  const std::vector<double>& v() const { return v_; }
  double beta() const { return beta_; }
  double zeta(int a, int b) const;
  void set_zeta(int a, int b, double value);  // validates |value| < beta
  double delta(int a, int b) const { return v_[a] - v_[b]; }
  bool unbiased() const;

 private:
  int pack(int a, int b) const;  // index for a < b

  Universe universe_;
  std::vector<double> v_;
  double beta_;
  std::vector<double> zeta_;  // upper triangle, a < b
};

// Probability that the proposal's barrier is hit first, in closed form.
// Uses expm1 throughout; drifts below 1e-8 in magnitude take a series branch
// that meets the closed form to ~1e-16 at the switch.
double acceptance_prob(const DdmSpec& spec, int a, int b);

struct ComparisonOutcome {
  int winner = -1;
  double rt = 0;             // seconds, equals steps * dt
  std::uint64_t steps = 0;
};

// Euler-Maruyama sampling of one comparison: Z += delta*dt + sqrt(2 dt) N(0,1)
// from zeta(a,b), absorbed at the first step with |Z| >= beta. Deterministic
// given (stream state, dt).
ComparisonOutcome sample_comparison(const DdmSpec& spec, int a, int b, Rng& rng, double dt = 1e-4,
                                    std::uint64_t max_steps = 1'000'000'000ULL);

// Posterior choice probability after accumulating evidence beta at utility
// gap v_a - v_b, starting from prior pi_ab.
double gibbs_posterior(double v_a, double v_b, double beta, double pi_ab);

// The prior whose posterior under the rule above equals the DDM acceptance
// probability; the probabilistic rendering of the initial condition.
double gibbs_prior_binary(const DdmSpec& spec, int a, int b);

// Inverse of the map above: the initial condition in (-beta, beta) whose
// binary prior is pi_ab.
double zeta_from_prior_binary(double v_a, double v_b, double beta, double pi_ab);

// Cycle-product balance of acceptance probabilities over all triples,
// checked in log space.
struct TransitivityReport {
  bool transitive = true;
  double worst_residual = 0;
  std::array<int, 3> worst_triple{-1, -1, -1};
};

TransitivityReport is_transitive(const DdmSpec& spec, double tol = 1e-9);

// Fully supported prior over a menu.
struct GibbsPrior {
  Menu menu;
  std::vector<double> probs;
};

// Global prior of a transitive spec on a menu: the unique distribution whose
// binary conditionals reproduce every gibbs_prior_binary. Reference-pinned to
// the menu's first member, then normalized.
GibbsPrior prior_from_transitive_zeta(const DdmSpec& spec, const Menu& menu, double tol = 1e-9);
GibbsPrior prior_from_transitive_zeta(const DdmSpec& spec, double tol = 1e-9);

// Initial condition realizing a given fully supported global prior; the
// output is transitive and antisymmetric with all entries inside (-beta, beta).
DdmSpec zeta_from_global_prior(const Universe& universe, const std::vector<double>& v, double beta,
                               const std::vector<double>& pi);

namespace detail {
// g(x, y) = ln((e^y e^x + 1) / (e^y e^-x + 1)) / x - 1, with the x -> 0 limit
// tanh(y/2); maps R^2 into (-1, 1). zeta = beta * g(beta*delta, logit(pi)).
double gibbs_g(double x, double y);
}  // namespace detail

}  // namespace prefdisc
