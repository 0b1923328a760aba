#include "prefdisc/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace prefdisc {

namespace {

constexpr double kSumTol = 1e-12;
constexpr double kPositivityFloor = 1e-300;

}  // namespace

Universe::Universe(std::vector<std::string> labels) : labels_(std::move(labels)) {
  if (labels_.size() < 2) fail(errc::invalid_argument, "universe needs at least two alternatives");
  for (int i = 0; i < static_cast<int>(labels_.size()); ++i) {
    if (!by_label_.emplace(labels_[i], i).second)
      fail(errc::invalid_argument, "duplicate alternative label '" + labels_[i] + "'");
  }
}

int Universe::index(const std::string& label) const {
  auto it = by_label_.find(label);
  if (it == by_label_.end()) fail(errc::invalid_argument, "unknown alternative '" + label + "'");
  return it->second;
}

Universe Universe::numbered(int n) {
  std::vector<std::string> labels;
  labels.reserve(n);
  for (int i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  return Universe(std::move(labels));
}

Menu Menu::of(const Universe& u, std::vector<int> members) {
  if (members.empty()) fail(errc::invalid_argument, "menu must be nonempty");
  std::sort(members.begin(), members.end());
  if (std::adjacent_find(members.begin(), members.end()) != members.end())
    fail(errc::invalid_argument, "menu has duplicate members");
  if (members.front() < 0 || members.back() >= u.size())
    fail(errc::invalid_argument, "menu member outside universe");
  return Menu{std::move(members)};
}

Menu Menu::of(const Universe& u, const std::vector<std::string>& labels) {
  std::vector<int> m;
  m.reserve(labels.size());
  for (const auto& l : labels) m.push_back(u.index(l));
  return of(u, std::move(m));
}

Menu Menu::full(const Universe& u) {
  std::vector<int> m(u.size());
  for (int i = 0; i < u.size(); ++i) m[i] = i;
  return Menu{std::move(m)};
}

bool Menu::contains(int alt) const {
  return std::binary_search(members.begin(), members.end(), alt);
}

int Menu::position(int alt) const {
  auto it = std::lower_bound(members.begin(), members.end(), alt);
  if (it == members.end() || *it != alt)
    fail(errc::invalid_argument, "alternative " + std::to_string(alt) + " not in menu");
  return static_cast<int>(it - members.begin());
}

ChoiceDistribution::ChoiceDistribution(Menu m, std::vector<double> p)
    : menu(std::move(m)), probs(std::move(p)) {
  if (probs.size() != menu.members.size())
    fail(errc::invalid_argument, "distribution size does not match menu");
  double sum = 0;
  for (double x : probs) {
    if (!(x >= 0.0)) fail(errc::invalid_argument, "negative probability");
    sum += x;
  }
  if (std::abs(sum - 1.0) > kSumTol)
    fail(errc::invalid_argument, "probabilities sum to " + std::to_string(sum) + ", not 1");
}

TimeGrid::TimeGrid(std::vector<double> ts, bool ordered_flag)
    : deadlines(std::move(ts)), ordered(ordered_flag) {
  if (deadlines.empty()) fail(errc::invalid_argument, "time grid must be nonempty");
  for (std::size_t i = 0; i < deadlines.size(); ++i) {
    if (!(deadlines[i] > 0)) fail(errc::invalid_argument, "deadlines must be positive");
    if (ordered && i > 0 && !(deadlines[i] > deadlines[i - 1]))
      fail(errc::invalid_argument, "ordered grid must be strictly increasing");
  }
  if (!ordered) {
    auto copy = deadlines;
    std::sort(copy.begin(), copy.end());
    if (std::adjacent_find(copy.begin(), copy.end()) != copy.end())
      fail(errc::invalid_argument, "duplicate deadline");
  }
}

bool TimeGrid::contains(double t) const {
  return std::find(deadlines.begin(), deadlines.end(), t) != deadlines.end();
}

int TimeGrid::index_of(double t) const {
  auto it = std::find(deadlines.begin(), deadlines.end(), t);
  if (it == deadlines.end()) {
    std::ostringstream os;
    os << "deadline " << t << " not in grid";
    fail(errc::invalid_argument, os.str());
  }
  return static_cast<int>(it - deadlines.begin());
}

void SoftmaxParams::validate(int n) const {
  if (static_cast<int>(u.size()) != n || static_cast<int>(alpha.size()) != n)
    fail(errc::invalid_argument, "u and alpha must cover the whole universe");
  if (!lambda.empty()) {
    if (lambda.size() != grid.deadlines.size())
      fail(errc::invalid_argument, "lambda must be aligned with the grid");
    for (double l : lambda)
      if (!(l > 0)) fail(errc::invalid_argument, "lambda must be strictly positive");
  }
}

double SoftmaxParams::lambda_at(double t) const {
  if (lambda.empty()) fail(errc::invalid_argument, "noise is undefined for this parameter set");
  return lambda[grid.index_of(t)];
}

namespace detail {

double logsumexp(std::span<const double> xs) {
  double m = xs[0];
  for (double x : xs) m = std::max(m, x);
  double s = 0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

}  // namespace detail

namespace {

// Logits of the softmax process on the full universe at t (t = 0 -> alpha).
std::vector<double> logits_at(const Universe& uni, const SoftmaxParams& p, double t) {
  p.validate(uni.size());
  std::vector<double> l(p.alpha.begin(), p.alpha.end());
  if (t != 0.0) {
    const double lam = p.lambda_at(t);
    for (int i = 0; i < uni.size(); ++i) l[i] += p.u[i] / lam;
  }
  return l;
}

}  // namespace

double softmax_prob(const Universe& uni, const SoftmaxParams& p, double t, const Menu& menu, int a) {
  const int pos = menu.position(a);
  const auto l = logits_at(uni, p, t);
  double m = l[menu.members[0]];
  for (int b : menu.members) m = std::max(m, l[b]);
  double sum = 0;
  for (int b : menu.members) sum += std::exp(l[b] - m);
  return std::exp(l[menu.members[pos]] - m) / sum;
}

ChoiceDistribution softmax_table(const Universe& uni, const SoftmaxParams& p, double t, const Menu& menu) {
  const auto l = logits_at(uni, p, t);
  double m = l[menu.members[0]];
  for (int b : menu.members) m = std::max(m, l[b]);
  std::vector<double> probs(menu.members.size());
  double sum = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    probs[i] = std::exp(l[menu.members[i]] - m);
    sum += probs[i];
  }
  for (double& x : probs) x /= sum;
  return ChoiceDistribution(menu, std::move(probs));
}

EvidenceStats evidence_stats(const SoftmaxParams& p, double t, int a, int b) {
  if (a == b) fail(errc::invalid_argument, "evidence stats need distinct alternatives");
  const double dalpha = p.alpha[a] - p.alpha[b];
  // Weight of evidence for softmax is the scaled utility gap; log-odds add the bias gap.
  const double w = (t == 0.0) ? 0.0 : (p.u[a] - p.u[b]) / p.lambda_at(t);
  EvidenceStats s;
  s.weight = w;
  s.log_odds = w + dalpha;
  s.odds = std::exp(s.log_odds);
  s.strength = std::exp(w);
  s.easiness = std::abs(w);
  return s;
}

EvidenceStats evidence_stats_from_probs(double p_t_ab, double p_t_ba, double p0_ab, double p0_ba) {
  const double cells[4] = {p_t_ab, p_t_ba, p0_ab, p0_ba};
  for (double c : cells)
    if (!(c > kPositivityFloor))
      fail(errc::degenerate_odds, "binary probability at or below the positivity floor");
  EvidenceStats s;
  s.log_odds = std::log(p_t_ab) - std::log(p_t_ba);
  s.odds = p_t_ab / p_t_ba;
  const double l0 = std::log(p0_ab) - std::log(p0_ba);
  s.weight = s.log_odds - l0;
  s.strength = std::exp(s.weight);
  s.easiness = std::abs(s.weight);
  return s;
}

ChoiceDistribution limit_rule(const Universe& uni, const SoftmaxParams& p, const Menu& menu) {
  p.validate(uni.size());
  double umax = p.u[menu.members[0]];
  for (int a : menu.members) umax = std::max(umax, p.u[a]);
  // Exact ties only: the argmax set is determined by equality of doubles.
  double amax = -std::numeric_limits<double>::infinity();
  for (int a : menu.members)
    if (p.u[a] == umax) amax = std::max(amax, p.alpha[a]);
  double z = 0;
  for (int a : menu.members)
    if (p.u[a] == umax) z += std::exp(p.alpha[a] - amax);
  std::vector<double> probs(menu.members.size(), 0.0);
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const int a = menu.members[i];
    if (p.u[a] == umax) probs[i] = std::exp(p.alpha[a] - amax) / z;
  }
  return ChoiceDistribution(menu, std::move(probs));
}

namespace {

bool holds(const std::set<OrderedPair>& rel, int a, int b) { return rel.count({a, b}) > 0; }

OrderedPair canon(int a, int b) { return a < b ? OrderedPair{a, b} : OrderedPair{b, a}; }

bool ease_holds(const PairRelation& ease, OrderedPair ab, OrderedPair cd) {
  return ease.count({canon(ab.first, ab.second), canon(cd.first, cd.second)}) > 0;
}

}  // namespace

PairRelation duality_map(const std::set<OrderedPair>& pref, const PairRelation& ease, int n) {
  if (n < 3) fail(errc::unsupported_size, "duality needs at least three alternatives");
  PairRelation intensity;
  auto weakly = [&](int x, int y) { return !holds(pref, y, x); };  // not y > x
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (a == b) continue;
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          if (c == d) continue;
          const bool in =
              (weakly(a, b) && weakly(c, d) && ease_holds(ease, {a, b}, {c, d})) ||
              (holds(pref, a, b) && holds(pref, d, c)) ||
              (weakly(b, a) && weakly(d, c) && ease_holds(ease, {c, d}, {a, b}));
          if (in) intensity.insert({{a, b}, {c, d}});
        }
    }
  return intensity;
}

std::pair<std::set<OrderedPair>, PairRelation> duality_inverse(const PairRelation& intensity, int n) {
  if (n < 3) fail(errc::unsupported_size, "duality needs at least three alternatives");
  std::set<OrderedPair> pref;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (a == b) continue;
      bool all = true;
      for (int c = 0; c < n && all; ++c) {
        if (c == a || c == b) continue;
        if (!intensity.count({{a, c}, {b, c}})) all = false;
      }
      if (all) pref.insert({a, b});
    }

  // Max/min pairs of {a,b} under the derived preference; both orders qualify on a tie.
  auto extreme_pairs = [&](int a, int b) {
    std::vector<OrderedPair> out;
    if (holds(pref, a, b)) out.push_back({a, b});
    else if (holds(pref, b, a)) out.push_back({b, a});
    else {
      out.push_back({a, b});
      out.push_back({b, a});
    }
    return out;
  };

  PairRelation ease;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = c + 1; d < n; ++d) {
          if (a == c && b == d) continue;
          bool all = true;
          for (const auto& xy : extreme_pairs(a, b))
            for (const auto& zw : extreme_pairs(c, d))
              if (!intensity.count({xy, zw})) all = false;
          if (all) ease.insert({{a, b}, {c, d}});
        }
  return {std::move(pref), std::move(ease)};
}

RevealedRelations relations_from_utility(const std::vector<double>& u) {
  const int n = static_cast<int>(u.size());
  RevealedRelations r;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (a != b && u[a] > u[b]) r.pref.insert({a, b});
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (a == b) continue;
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          if (c == d) continue;
          if (u[a] - u[b] > u[c] - u[d]) r.intensity.insert({{a, b}, {c, d}});
        }
    }
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = c + 1; d < n; ++d) {
          if (a == c && b == d) continue;
          if (std::abs(u[a] - u[b]) > std::abs(u[c] - u[d])) r.ease.insert({{a, b}, {c, d}});
        }
  return r;
}

}  // namespace prefdisc
