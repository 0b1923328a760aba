#include "prefdisc/axioms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace prefdisc {

namespace {

constexpr std::size_t kMaxWitnesses = 64;

void add_witness(AxiomReport& r, Witness w) {
  r.verdict = Verdict::fail;
  if (r.witnesses.size() < kMaxWitnesses) r.witnesses.push_back(std::move(w));
}

std::vector<std::string> labels_of(const Universe& u, std::initializer_list<int> alts) {
  std::vector<std::string> out;
  for (int a : alts) out.push_back(u.label(a));
  return out;
}

// (t, s) pairs the consistency axioms quantify over: increasing pairs on an
// ordered grid, all distinct pairs otherwise.
std::vector<std::pair<double, double>> time_pairs(const TimeGrid& g) {
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 0; i < g.deadlines.size(); ++i)
    for (std::size_t j = 0; j < g.deadlines.size(); ++j) {
      if (g.ordered ? (i < j) : (i != j)) out.emplace_back(g.deadlines[i], g.deadlines[j]);
    }
  return out;
}

// Weight of evidence for every ordered pair at one deadline.
std::vector<std::vector<double>> weight_matrix(const ChoiceDataset& d, double t) {
  const int n = d.universe().size();
  std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      const double wab = evidence_stats(d, t, a, b).weight;
      w[a][b] = wab;
      w[b][a] = -wab;
    }
  return w;
}

double scaled_tol(const ChoiceDataset& d, double exact, double c) {
  if (d.kind() == ChoiceDataset::Kind::exact) return exact;
  const double n = d.min_count();
  return std::isfinite(n) && n > 0 ? c / std::sqrt(n) : exact;
}

}  // namespace

double AxiomOptions::choice_tol(const ChoiceDataset& d) const {
  return scaled_tol(d, tol_choice_exact, c_choice);
}
double AxiomOptions::w_tol(const ChoiceDataset& d) const {
  return scaled_tol(d, tol_w_exact, c_w);
}
double AxiomOptions::ratio_tol(const ChoiceDataset& d) const {
  return scaled_tol(d, tol_ratio_exact, c_ratio);
}

AxiomReport check_positivity(const ChoiceDataset& d, const AxiomOptions& opt) {
  AxiomReport r;
  r.axiom = "Positivity";
  r.tolerance = opt.tol_pos;
  const auto& u = d.universe();
  bool small_sample = false;
  for (double t : d.times())
    for (int a = 0; a < u.size(); ++a)
      for (int b = a + 1; b < u.size(); ++b) {
        const auto& tab = d.table(t, Menu{{a, b}});
        for (int x : {a, b}) {
          const double p = tab.dist.prob(x);
          if (!(p > opt.tol_pos)) {
            add_witness(r, Witness{t, 0, labels_of(u, {x, x == a ? b : a}), p, opt.tol_pos, ""});
            if (tab.total > 0 && p < 1.0 / (2.0 * tab.total)) small_sample = true;
          }
        }
      }
  if (small_sample)
    r.warnings.push_back(
        "zero cells are below half the sampling resolution; the sample may be too small to "
        "distinguish a true zero from a rare event");
  return r;
}

AxiomReport check_choice_axiom(const ChoiceDataset& d, const AxiomOptions& opt) {
  AxiomReport r;
  r.axiom = "Choice Axiom";
  r.tolerance = opt.choice_tol(d);
  const auto& u = d.universe();
  bool any_large_menu = false;
  for (const auto& [key, tab] : d.tables()) {
    const auto& [t, members] = key;
    if (members.size() > 2) any_large_menu = true;
    for (std::size_t i = 0; i < members.size(); ++i)
      for (std::size_t j = i + 1; j < members.size(); ++j) {
        const int a = members[i], b = members[j];
        const double lhs = d.binary(t, a, b) * tab.dist.prob(b);
        const double rhs = d.binary(t, b, a) * tab.dist.prob(a);
        const double scale = std::max(lhs, rhs);
        if (std::abs(lhs - rhs) > r.tolerance * scale)
          add_witness(r, Witness{t, 0, labels_of(u, {a, b}), lhs, rhs, "p(a,b)p(b,A) vs p(b,a)p(a,A)"});
      }
  }
  if (!any_large_menu && r.verdict == Verdict::pass)
    r.note = "vacuous: no menu with more than two alternatives";
  return r;
}

std::vector<double> fit_luce(const ChoiceDataset& d, double t, int ref) {
  const int n = d.universe().size();
  if (ref < 0 || ref >= n) fail(errc::invalid_argument, "reference alternative outside universe");
  std::vector<double> v(n, 0.0);
  for (int x = 0; x < n; ++x) {
    if (x == ref) continue;
    const double p = d.binary(t, x, ref);
    const double q = d.binary(t, ref, x);
    if (!(p > 1e-300) || !(q > 1e-300)) fail(errc::degenerate_odds, "degenerate odds in Luce fit");
    v[x] = std::log(p) - std::log(q);
  }
  return v;
}

std::vector<AxiomReport> check_consistency(const ChoiceDataset& d, const AxiomOptions& opt) {
  AxiomReport intensity, preference, ease;
  intensity.axiom = "Intensity Consistency";
  preference.axiom = "Preference Consistency";
  ease.axiom = "Ease Consistency";
  const double eps = opt.w_tol(d);
  for (auto* r : {&intensity, &preference, &ease}) {
    r->tolerance = eps;
    r->verdict = Verdict::pass;
  }
  if (d.grid().size() < 2) {
    for (auto* r : {&intensity, &preference, &ease}) {
      r->verdict = Verdict::not_applicable;
      r->note = "needs at least two deadlines";
    }
    return {intensity, preference, ease};
  }

  const auto& u = d.universe();
  const int n = u.size();
  std::map<double, std::vector<std::vector<double>>> w;
  for (double t : d.grid().deadlines) w[t] = weight_matrix(d, t);

  // Ordered pairs in a fixed scan order, for quadruple deduplication.
  std::vector<OrderedPair> pairs;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (a != b) pairs.push_back({a, b});

  for (const auto& [t, s] : time_pairs(d.grid())) {
    const auto& wt = w[t];
    const auto& ws = w[s];

    for (std::size_t i = 0; i < pairs.size(); ++i)
      for (std::size_t j = i + 1; j < pairs.size(); ++j) {
        const auto [a, b] = pairs[i];
        const auto [c, dd] = pairs[j];
        const double gt = wt[a][b] - wt[c][dd];
        const double gs = ws[a][b] - ws[c][dd];
        if (std::abs(gt) <= eps || std::abs(gs) <= eps) continue;  // tie band
        if ((gt > 0) != (gs > 0))
          add_witness(intensity, Witness{t, s, labels_of(u, {a, b, c, dd}), gt, gs,
                                         "w_t(a,b)-w_t(c,d) vs w_s(a,b)-w_s(c,d)"});
      }

    for (const auto& [a, b] : pairs)
      if (wt[a][b] > eps && !(ws[a][b] > -eps))
        add_witness(preference, Witness{t, s, labels_of(u, {a, b}), wt[a][b], ws[a][b],
                                        "w_t(a,b) vs w_s(a,b)"});

    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int dd = c + 1; dd < n; ++dd) {
            if (a == c && b == dd) continue;
            const double es_gap = std::abs(ws[a][b]) - std::abs(ws[c][dd]);
            const double et_gap = std::abs(wt[a][b]) - std::abs(wt[c][dd]);
            if (es_gap > eps && et_gap <= -eps)
              add_witness(ease, Witness{t, s, labels_of(u, {a, b, c, dd}), es_gap, et_gap,
                                        "e_s(a,b)-e_s(c,d) vs e_t(a,b)-e_t(c,d)"});
          }
  }
  return {intensity, preference, ease};
}

AxiomReport check_decreasing_error_rate(const ChoiceDataset& d,
                                        const std::optional<SoftmaxParams>& fit,
                                        const AxiomOptions& opt) {
  AxiomReport r;
  r.axiom = "Decreasing Error Rate";
  const double eps = opt.w_tol(d);
  r.tolerance = eps;
  if (!d.grid().ordered) {
    r.verdict = Verdict::not_applicable;
    r.note = "needs an ordered grid";
    return r;
  }
  if (d.grid().size() < 2) {
    r.verdict = Verdict::not_applicable;
    r.note = "needs at least two deadlines";
    return r;
  }
  const auto& u = d.universe();
  const int n = u.size();
  for (const auto& [t, s] : time_pairs(d.grid()))
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        if (a == b) continue;
        const double pt = d.binary(t, a, b);
        const double p0 = d.binary(0.0, a, b);
        const double ps = d.binary(s, a, b);
        if (pt > p0 + eps && !(ps >= pt - eps))
          add_witness(r, Witness{t, s, labels_of(u, {a, b}), pt, ps, "p_t(a,b) vs p_s(a,b)"});
      }
  const bool der_pass = r.verdict == Verdict::pass;
  r.details.emplace_back("decreasing_error_rate", der_pass ? "pass" : "fail");

  if (fit) {
    fit->validate(n);
    bool lambda_dec = true;
    const auto& lam = fit->lambda;
    if (lam.size() == d.grid().deadlines.size()) {
      for (std::size_t i = 0; i + 1 < lam.size(); ++i)
        if (lam[i + 1] > lam[i] + eps * std::max(1.0, std::abs(lam[i]))) lambda_dec = false;
    }
    r.details.emplace_back("lambda_decreasing", lambda_dec ? "pass" : "fail");

    // Above-threshold choice mass must grow with the deadline on every menu.
    bool dominance = true;
    for (const auto& [t, s] : time_pairs(d.grid()))
      for (const auto& [key, tab] : d.tables()) {
        if (key.first != t) continue;
        const Menu menu{key.second};
        if (!d.has(s, menu)) continue;
        const auto& tab_s = d.table(s, menu);
        std::vector<double> levels;
        for (int a : menu.members) levels.push_back(fit->u[a]);
        for (double ubar : levels) {
          double mass_t = 0, mass_s = 0;
          for (std::size_t i = 0; i < menu.members.size(); ++i)
            if (fit->u[menu.members[i]] > ubar) {
              mass_t += tab.dist.probs[i];
              mass_s += tab_s.dist.probs[i];
            }
          if (!(mass_s >= mass_t - eps)) dominance = false;
        }
      }
    r.details.emplace_back("payoff_stochastic_dominance", dominance ? "pass" : "fail");

    const bool agree = (der_pass == lambda_dec) && (der_pass == dominance);
    r.details.emplace_back("criteria_agree", agree ? "true" : "false");
    if (!agree)
      r.warnings.push_back("the error-rate, noise-monotonicity and dominance criteria disagree");
  }
  return r;
}

namespace {

// A ratio num/den with values inside the band snapped to zero.
struct Ratio {
  double num = 0, den = 0;
  bool undefined = false;  // 0/0
  int inf_sign = 0;        // +1 / -1 when den == 0, num != 0
};

Ratio classify(double num, double den, double band) {
  Ratio r;
  if (std::abs(num) <= band) num = 0;
  if (std::abs(den) <= band) den = 0;
  r.num = num;
  r.den = den;
  if (den == 0 && num == 0) r.undefined = true;
  else if (den == 0) r.inf_sign = num > 0 ? 1 : -1;
  return r;
}

// Both ratios defined and equal, to a relative tolerance in cross form.
bool ratios_agree(const Ratio& x, const Ratio& y, double tol) {
  if (x.inf_sign != 0 || y.inf_sign != 0) return x.inf_sign == y.inf_sign;
  const double lhs = x.num * y.den;
  const double rhs = y.num * x.den;
  return std::abs(lhs - rhs) <= tol * std::max(std::abs(lhs), std::abs(rhs));
}

void check_ratio_pair(AxiomReport& r, const Ratio& rt, const Ratio& rs, double t, double s,
                      std::vector<std::string> alts, const char* what) {
  if (rt.undefined && rs.undefined) return;  // neither side well defined
  if (rt.undefined || rs.undefined) {
    add_witness(r, Witness{t, s, std::move(alts), rt.undefined ? 0 : rt.num / (rt.den == 0 ? 1 : rt.den),
                           rs.undefined ? 0 : rs.num / (rs.den == 0 ? 1 : rs.den),
                           std::string(what) + ": defined on one side only"});
    return;
  }
  if (!ratios_agree(rt, rs, r.tolerance))
    add_witness(r, Witness{t, s, std::move(alts),
                           rt.inf_sign != 0 ? rt.inf_sign * std::numeric_limits<double>::max()
                                            : rt.num / (rt.den == 0 ? 1 : rt.den),
                           rs.inf_sign != 0 ? rs.inf_sign * std::numeric_limits<double>::max()
                                            : rs.num / (rs.den == 0 ? 1 : rs.den),
                           what});
}

}  // namespace

std::vector<AxiomReport> check_relative_invariance(const ChoiceDataset& d, const AxiomOptions& opt) {
  AxiomReport cre, crw, lri;
  cre.axiom = "Constant Relative Ease of Comparison";
  crw.axiom = "Constant Relative Weight of Evidence";
  lri.axiom = "Log-odds Ratio Invariance";
  const double tol = opt.ratio_tol(d);
  const double band = opt.w_tol(d);
  for (auto* r : {&cre, &crw, &lri}) {
    r->tolerance = tol;
    r->verdict = Verdict::pass;
  }
  if (d.grid().size() < 2) {
    for (auto* r : {&cre, &crw, &lri}) {
      r->verdict = Verdict::not_applicable;
      r->note = "needs at least two deadlines";
    }
    return {cre, crw, lri};
  }

  const auto& u = d.universe();
  const int n = u.size();
  std::map<double, std::vector<std::vector<double>>> w;
  for (double t : d.grid().deadlines) w[t] = weight_matrix(d, t);

  std::vector<OrderedPair> pairs;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (a != b) pairs.push_back({a, b});

  for (const auto& [t, s] : time_pairs(d.grid())) {
    const auto& wt = w[t];
    const auto& ws = w[s];

    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int dd = c + 1; dd < n; ++dd) {
            if (a == c && b == dd) continue;
            check_ratio_pair(cre,
                             classify(std::abs(wt[a][b]), std::abs(wt[c][dd]), band),
                             classify(std::abs(ws[a][b]), std::abs(ws[c][dd]), band), t, s,
                             labels_of(u, {a, b, c, dd}), "e(a,b)/e(c,d)");
          }

    for (std::size_t i = 0; i < pairs.size(); ++i)
      for (std::size_t j = i + 1; j < pairs.size(); ++j) {
        const auto [a, b] = pairs[i];
        const auto [c, dd] = pairs[j];
        check_ratio_pair(crw, classify(wt[a][b], wt[c][dd], band),
                         classify(ws[a][b], ws[c][dd], band), t, s,
                         labels_of(u, {a, b, c, dd}), "w(a,b)/w(c,d)");
      }

    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        if (a == b) continue;
        for (int c = 0; c < n; ++c) {
          if (c == a || c == b) continue;
          check_ratio_pair(lri, classify(wt[a][c], wt[b][c], band),
                           classify(ws[a][c], ws[b][c], band), t, s,
                           labels_of(u, {a, b, c}), "w(a,c)/w(b,c)");
        }
      }
  }
  return {cre, crw, lri};
}

std::vector<AxiomReport> run_all_axioms(const ChoiceDataset& d, const AxiomOptions& opt) {
  std::vector<AxiomReport> out;
  out.push_back(check_positivity(d, opt));
  out.push_back(check_choice_axiom(d, opt));
  for (auto& r : check_consistency(d, opt)) out.push_back(std::move(r));
  out.push_back(check_decreasing_error_rate(d, std::nullopt, opt));
  for (auto& r : check_relative_invariance(d, opt)) out.push_back(std::move(r));
  return out;
}

}  // namespace prefdisc
