#include "prefdisc/ddm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace prefdisc {

namespace {

constexpr double kDriftSwitch = 1e-8;

double softplus(double x) {
  return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

// Nudge a probability that rounded onto a boundary back into the open
// interval; the exact value is always strictly inside it.
double clamp_open01(double p) {
  if (p >= 1.0) return std::nextafter(1.0, 0.0);
  if (p <= 0.0) return std::numeric_limits<double>::min();
  return p;
}

}  // namespace

DdmSpec::DdmSpec(Universe universe, std::vector<double> v, double beta)
    : universe_(std::move(universe)), v_(std::move(v)), beta_(beta) {
  if (static_cast<int>(v_.size()) != universe_.size())
    fail(errc::invalid_argument, "v must cover the whole universe");
  if (!(beta_ > 0)) fail(errc::invalid_argument, "beta must be strictly positive");
  zeta_.assign(static_cast<std::size_t>(universe_.size()) * (universe_.size() - 1) / 2, 0.0);
}

DdmSpec DdmSpec::with_zeta(Universe universe, std::vector<double> v, double beta,
                           const std::vector<std::tuple<int, int, double>>& entries) {
  DdmSpec spec(std::move(universe), std::move(v), beta);
  for (const auto& [a, b, z] : entries) spec.set_zeta(a, b, z);
  return spec;
}

int DdmSpec::pack(int a, int b) const {
  const int n = universe_.size();
  if (a < 0 || b < 0 || a >= n || b >= n || a == b)
    fail(errc::invalid_argument, "initial condition needs two distinct alternatives");
  const int i = std::min(a, b), j = std::max(a, b);
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

double DdmSpec::zeta(int a, int b) const {
  const double z = zeta_[pack(a, b)];
  return a < b ? z : -z;
}

void DdmSpec::set_zeta(int a, int b, double value) {
  if (!(std::abs(value) < beta_))
    fail(errc::invalid_argument, "initial condition must lie strictly inside (-beta, beta)");
  zeta_[pack(a, b)] = a < b ? value : -value;
}

bool DdmSpec::unbiased() const {
  return std::all_of(zeta_.begin(), zeta_.end(), [](double z) { return z == 0.0; });
}

double acceptance_prob(const DdmSpec& spec, int a, int b) {
  const double beta = spec.beta();
  const double c = spec.zeta(a, b) + beta;  // distance from the rejection barrier
  const double delta = spec.delta(a, b);

  if (std::abs(delta) < kDriftSwitch) {
    // Second-order expansion about zero drift; meets the expm1 branch to ~1e-16.
    const double lin = beta - 0.5 * c;
    const double quad = c * c / 6.0 + beta * beta / 3.0 - 0.5 * beta * c;
    return clamp_open01(c / (2.0 * beta) * (1.0 + delta * (lin + delta * quad)));
  }
  if (delta > 0) {
    // Both arguments nonpositive: no overflow, full relative precision.
    return clamp_open01(std::expm1(-c * delta) / std::expm1(-2.0 * beta * delta));
  }
  const double m = -delta;
  if (2.0 * beta * m <= 700.0)
    return clamp_open01(std::expm1(c * m) / std::expm1(2.0 * beta * m));
  // Arguments too large to exponentiate; factor out the dominant exponential.
  return clamp_open01(std::exp((c - 2.0 * beta) * m) * (-std::expm1(-c * m)) /
                      (-std::expm1(-2.0 * beta * m)));
}

ComparisonOutcome sample_comparison(const DdmSpec& spec, int a, int b, Rng& rng, double dt,
                                    std::uint64_t max_steps) {
  if (!(dt > 0)) fail(errc::invalid_argument, "dt must be positive");
  const double beta = spec.beta();
  const double drift = spec.delta(a, b) * dt;
  const double sigma = std::sqrt(2.0 * dt);
  double z = spec.zeta(a, b);
  for (std::uint64_t n = 1; n <= max_steps; ++n) {
    z += drift + sigma * rng.normal();
    if (z >= beta) return ComparisonOutcome{a, static_cast<double>(n) * dt, n};
    if (z <= -beta) return ComparisonOutcome{b, static_cast<double>(n) * dt, n};
  }
  fail(errc::runaway, "comparison exceeded the step budget; dt or beta is pathological");
}

double gibbs_posterior(double v_a, double v_b, double beta, double pi_ab) {
  if (!(pi_ab > 0) || !(pi_ab < 1)) fail(errc::invalid_argument, "prior must lie in (0,1)");
  const double x = std::log1p(-pi_ab) - std::log(pi_ab) - beta * (v_a - v_b);
  return 1.0 / (1.0 + std::exp(x));
}

double gibbs_prior_binary(const DdmSpec& spec, int a, int b) {
  const double pa = acceptance_prob(spec, a, b);
  const double pb = acceptance_prob(spec, b, a);
  const double x = spec.beta() * spec.delta(a, b) - (std::log(pa) - std::log(pb));
  return 1.0 / (1.0 + std::exp(x));
}

namespace detail {

double gibbs_g(double x, double y) {
  if (x < 0) x = -x;                             // g is even in x
  if (y < 0) return -gibbs_g(x, -y);             // and odd in y
  if (x < 1e-6) {
    const double s = 1.0 / (1.0 + std::exp(-y));
    return std::tanh(0.5 * y) + x * x * (s * (1.0 - s) * (1.0 - 2.0 * s) / 3.0);
  }
  if (x <= 1.0) {
    // ln((e^{y+x}+1)/(e^{y-x}+1)) = 2x + log1p(-2 e^-y sinh(x) / (1 + e^{x-y})),
    // which avoids the cancellation of differencing two softplus values.
    const double t = -2.0 * std::exp(-y) * std::sinh(x) / (1.0 + std::exp(x - y));
    return 1.0 + std::log1p(t) / x;
  }
  return (softplus(y + x) - softplus(y - x)) / x - 1.0;
}

}  // namespace detail

double zeta_from_prior_binary(double v_a, double v_b, double beta, double pi_ab) {
  if (!(pi_ab > 0) || !(pi_ab < 1)) fail(errc::invalid_argument, "prior must lie in (0,1)");
  const double y = std::log(pi_ab) - std::log1p(-pi_ab);
  return beta * detail::gibbs_g(beta * (v_a - v_b), y);
}

TransitivityReport is_transitive(const DdmSpec& spec, double tol) {
  const int n = spec.universe().size();
  TransitivityReport rep;
  if (n < 3) return rep;  // vacuously transitive
  std::vector<std::vector<double>> lp(n, std::vector<double>(n, 0.0));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (a != b) lp[a][b] = std::log(acceptance_prob(spec, a, b));
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c) {
        const double fwd = lp[b][a] + lp[c][b] + lp[a][c];
        const double bwd = lp[c][a] + lp[b][c] + lp[a][b];
        const double res = std::abs(fwd - bwd);
        if (res > rep.worst_residual) {
          rep.worst_residual = res;
          rep.worst_triple = {a, b, c};
        }
      }
  rep.transitive = rep.worst_residual <= tol;
  return rep;
}

GibbsPrior prior_from_transitive_zeta(const DdmSpec& spec, const Menu& menu, double tol) {
  const auto check = is_transitive(spec, tol);
  if (!check.transitive)
    fail(errc::numeric_precondition, "initial condition is not transitive (worst cycle residual " +
                                         std::to_string(check.worst_residual) + ")");
  const int ref = menu.members.front();
  std::vector<double> logpi(menu.members.size(), 0.0);
  for (std::size_t i = 1; i < menu.members.size(); ++i) {
    const int a = menu.members[i];
    logpi[i] = std::log(acceptance_prob(spec, a, ref)) - std::log(acceptance_prob(spec, ref, a)) -
               spec.beta() * spec.delta(a, ref);
  }
  const double z = detail::logsumexp(logpi);
  std::vector<double> probs(logpi.size());
  for (std::size_t i = 0; i < probs.size(); ++i) probs[i] = std::exp(logpi[i] - z);
  return GibbsPrior{menu, std::move(probs)};
}

GibbsPrior prior_from_transitive_zeta(const DdmSpec& spec, double tol) {
  return prior_from_transitive_zeta(spec, Menu::full(spec.universe()), tol);
}

DdmSpec zeta_from_global_prior(const Universe& universe, const std::vector<double>& v, double beta,
                               const std::vector<double>& pi) {
  if (pi.size() != static_cast<std::size_t>(universe.size()))
    fail(errc::invalid_argument, "prior must cover the whole universe");
  for (double p : pi)
    if (!(p > 0)) fail(errc::invalid_argument, "prior must have full support");
  DdmSpec spec(universe, v, beta);
  for (int a = 0; a < universe.size(); ++a)
    for (int b = a + 1; b < universe.size(); ++b) {
      const double y = std::log(pi[a]) - std::log(pi[b]);
      spec.set_zeta(a, b, beta * detail::gibbs_g(beta * (v[a] - v[b]), y));
    }
  return spec;
}

}  // namespace prefdisc
