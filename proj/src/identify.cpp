#include "prefdisc/identify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace prefdisc {

namespace {

double default_tol(const ChoiceDataset& d) {
  if (d.kind() == ChoiceDataset::Kind::exact) return 1e-9;
  const double n = d.min_count();
  return std::isfinite(n) && n > 0 ? 3.0 / std::sqrt(n) : 1e-9;
}

double mean(const std::vector<double>& xs) {
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

// Residuals are measured relative to the magnitude of the compared value, so
// a rescaled parameter set (huge utilities, tiny noise) is judged by the same
// yardstick as a unit-scale one.
double rel_gap(double got, double want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

bool is_constant_vector(const std::vector<double>& xs, double tol) {
  const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
  return *hi - *lo <= tol;
}

// Prior log-odds of x against b, straight off the t = 0 binary table.
double log_odds0(const ChoiceDataset& d, int x, int b) {
  const double p = d.binary(0.0, x, b);
  const double q = d.binary(0.0, b, x);
  if (!(p > 1e-300) || !(q > 1e-300)) fail(errc::degenerate_odds, "degenerate prior odds");
  return std::log(p) - std::log(q);
}

// Scale fitted on pairwise differences, so location freedom cannot leak in.
std::optional<double> fit_scale(const std::vector<double>& target, const std::vector<double>& base) {
  double num = 0, den = 0;
  for (std::size_t i = 0; i < base.size(); ++i)
    for (std::size_t j = i + 1; j < base.size(); ++j) {
      const double db = base[i] - base[j];
      num += (target[i] - target[j]) * db;
      den += db * db;
    }
  if (den == 0) return std::nullopt;
  return num / den;
}

}  // namespace

ConstancyResult detect_constant(const ChoiceDataset& d, std::optional<double> tol_opt) {
  const double tol = tol_opt.value_or(default_tol(d));
  const int n = d.universe().size();
  ConstancyResult res;
  for (double t : d.grid().deadlines)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        if (a == b) continue;
        const double pt = d.binary(t, a, b);
        const double p0 = d.binary(0.0, a, b);
        if (pt > p0 + tol) {
          res.constant = false;
          const double w = evidence_stats(d, t, a, b).weight;
          if (w > res.max_weight) {
            res.max_weight = w;
            res.anchor = Anchor{a, b, t};
          }
        }
      }
  return res;
}

IdentifiedParams identify_at(const ChoiceDataset& d, const Anchor& anchor) {
  const int n = d.universe().size();
  const auto& labels = d.universe();
  const double w_hat = evidence_stats(d, anchor.t, anchor.a, anchor.b).weight;
  if (!(w_hat > 0))
    fail(errc::invalid_argument, "anchor weight must be positive");

  IdentifiedParams out;
  out.anchor = anchor;
  out.constant = false;
  out.params.grid = d.grid();
  out.params.u.assign(n, 0.0);
  out.params.alpha.assign(n, 0.0);
  for (int x = 0; x < n; ++x) {
    if (x == anchor.b) continue;
    out.params.u[x] = evidence_stats(d, anchor.t, x, anchor.b).weight / w_hat;
    out.params.alpha[x] = log_odds0(d, x, anchor.b);
  }
  out.params.lambda.resize(d.grid().size());
  for (int i = 0; i < d.grid().size(); ++i) {
    const double t = d.grid().deadlines[i];
    const double w_t = evidence_stats(d, t, anchor.a, anchor.b).weight;
    if (!(w_t > 0))
      fail(errc::not_softmax,
           "noise would be nonpositive at t=" + std::to_string(t) + " for anchor pair (" +
               labels.label(anchor.a) + "," + labels.label(anchor.b) +
               "): the process reverses a revealed preference across deadlines");
    out.params.lambda[i] = 1.0 / w_t;
  }
  return out;
}

IdentifiedParams identify(const ChoiceDataset& d) {
  const auto scan = detect_constant(d);
  if (scan.constant) {
    const int n = d.universe().size();
    IdentifiedParams out;
    out.constant = true;
    out.anchor = Anchor{-1, 0, 0};
    out.params.grid = d.grid();
    out.params.u.assign(n, 0.0);
    out.params.alpha.assign(n, 0.0);
    for (int x = 1; x < n; ++x) out.params.alpha[x] = log_odds0(d, x, 0);
    return out;
  }
  return identify_at(d, scan.anchor);
}

EquivalenceReport params_equivalent(const SoftmaxParams& p, const SoftmaxParams& q, double tol) {
  if (p.u.size() != q.u.size() || p.alpha.size() != q.alpha.size())
    fail(errc::invalid_argument, "parameter sets live on different universes");
  if (p.grid.deadlines != q.grid.deadlines)
    fail(errc::invalid_argument, "parameter sets live on different grids");

  EquivalenceReport rep;
  const bool p_const = is_constant_vector(p.u, tol);
  const bool q_const = is_constant_vector(q.u, tol);
  if (p_const != q_const) {
    rep.equivalent = false;
    rep.max_residual = std::numeric_limits<double>::infinity();
    return rep;
  }

  if (p_const) {
    // Both constant: only the bias is pinned down, up to location.
    rep.k = 1;
    rep.h = 0;
    rep.l = mean(q.alpha) - mean(p.alpha);
    double r = 0;
    for (std::size_t i = 0; i < p.alpha.size(); ++i)
      r = std::max(r, std::abs(q.alpha[i] - p.alpha[i] - rep.l));
    rep.max_residual = r;
    rep.equivalent = r <= tol;
    return rep;
  }

  const auto k = fit_scale(q.u, p.u);
  if (!k || !(*k > 0)) {
    rep.equivalent = false;
    rep.max_residual = std::numeric_limits<double>::infinity();
    return rep;
  }
  rep.k = *k;
  rep.h = mean(q.u) - rep.k * mean(p.u);
  rep.l = mean(q.alpha) - mean(p.alpha);
  double r = 0;
  for (std::size_t i = 0; i < p.u.size(); ++i) {
    r = std::max(r, rel_gap(rep.k * p.u[i] + rep.h, q.u[i]));
    r = std::max(r, rel_gap(p.alpha[i] + rep.l, q.alpha[i]));
  }
  if (!p.lambda.empty() && !q.lambda.empty()) {
    // scaling u by k means the noise scales by k as well (beta = 1/lambda by k^-1)
    for (std::size_t i = 0; i < p.lambda.size(); ++i)
      r = std::max(r, rel_gap(rep.k * p.lambda[i], q.lambda[i]));
  }
  rep.max_residual = r;
  rep.equivalent = r <= tol;
  return rep;
}

CrossValidation cross_validate(const SoftmaxParams& behavioral, const NeuralParams& neural,
                               double tol) {
  const std::size_t n = behavioral.u.size();
  if (neural.v.size() != n || neural.mu.size() != n)
    fail(errc::invalid_argument, "neural components live on a different universe");
  if (neural.grid.deadlines != behavioral.grid.deadlines)
    fail(errc::invalid_argument, "neural components live on a different grid");
  if (neural.beta.size() != neural.grid.deadlines.size())
    fail(errc::invalid_argument, "beta map must cover the grid");
  double mu_sum = 0;
  for (double m : neural.mu) {
    if (!(m > 0)) fail(errc::invalid_argument, "invalid neural bias: mu must be strictly positive");
    mu_sum += m;
  }
  if (std::abs(mu_sum - 1.0) > 1e-9)
    fail(errc::invalid_argument, "invalid neural bias: mu must sum to 1");

  CrossValidation rep;
  double r = 0;

  const bool u_const = is_constant_vector(behavioral.u, tol);
  const bool v_const = is_constant_vector(neural.v, tol);
  if (u_const != v_const) {
    rep.equivalent = false;
    rep.max_residual = std::numeric_limits<double>::infinity();
    return rep;
  }
  if (!u_const) {
    const auto k = fit_scale(neural.v, behavioral.u);
    if (!k || !(*k > 0)) {
      rep.equivalent = false;
      rep.max_residual = std::numeric_limits<double>::infinity();
      return rep;
    }
    rep.k = *k;
  } else if (!behavioral.lambda.empty()) {
    // Utility carries no scale information; recover k from the noise map.
    double acc = 0;
    for (std::size_t i = 0; i < neural.beta.size(); ++i)
      acc += 1.0 / (neural.beta[i] * behavioral.lambda[i]);
    rep.k = acc / static_cast<double>(neural.beta.size());
  }
  rep.h = mean(neural.v) - rep.k * mean(behavioral.u);
  for (std::size_t i = 0; i < n; ++i)
    r = std::max(r, rel_gap(rep.k * behavioral.u[i] + rep.h, neural.v[i]));

  double log_j = 0;
  for (std::size_t i = 0; i < n; ++i) log_j += std::log(neural.mu[i]) - behavioral.alpha[i];
  log_j /= static_cast<double>(n);
  rep.j = std::exp(log_j);
  for (std::size_t i = 0; i < n; ++i)
    r = std::max(r, std::abs(std::log(neural.mu[i]) - behavioral.alpha[i] - log_j));

  if (!behavioral.lambda.empty()) {
    for (std::size_t i = 0; i < neural.beta.size(); ++i)
      r = std::max(r, rel_gap(1.0 / (rep.k * behavioral.lambda[i]), neural.beta[i]));
  }

  rep.max_residual = r;
  rep.equivalent = r <= tol;
  return rep;
}

}  // namespace prefdisc
