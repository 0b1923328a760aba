#pragma once

#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "prefdisc/error.hpp"

namespace prefdisc {

// Ordered set of alternative labels. The label order is the canonical order
// used everywhere for tie enumeration, pair packing and serialization.
class Universe {
 public:
  explicit Universe(std::vector<std::string> labels);

  int size() const { return static_cast<int>(labels_.size()); }
  const std::string& label(int i) const { return labels_.at(i); }
  const std::vector<std::string>& labels() const { return labels_; }
  int index(const std::string& label) const;  // throws invalid_argument if unknown
  bool contains(const std::string& label) const { return by_label_.count(label) > 0; }

  // "0", "1", ..., "n-1"
  static Universe numbered(int n);

 private:
  std::vector<std::string> labels_;
  std::map<std::string, int> by_label_;
};

// Nonempty subset of a universe, stored as sorted unique indices.
struct Menu {
  std::vector<int> members;

  static Menu of(const Universe& u, std::vector<int> members);
  static Menu of(const Universe& u, const std::vector<std::string>& labels);
  static Menu full(const Universe& u);

  int size() const { return static_cast<int>(members.size()); }
  bool contains(int alt) const;
  int position(int alt) const;  // throws invalid_argument if absent
};

// Probability distribution supported on a menu; probs aligned with menu.members.
struct ChoiceDistribution {
  Menu menu;
  std::vector<double> probs;

  ChoiceDistribution() = default;
  ChoiceDistribution(Menu m, std::vector<double> p);  // validates sum within 1e-12

  double prob(int alt) const { return probs[menu.position(alt)]; }
};

// Deadlines T (strictly positive). The zero point is not stored: t = 0 is a
// distinguished value accepted by every deadline-indexed operation. When
// ordered is false, consistency checks compare all distinct deadline pairs
// instead of only increasing ones.
struct TimeGrid {
  std::vector<double> deadlines;
  bool ordered = true;

  TimeGrid() = default;
  explicit TimeGrid(std::vector<double> ts, bool ordered_flag = true);

  int size() const { return static_cast<int>(deadlines.size()); }
  bool contains(double t) const;
  int index_of(double t) const;  // throws invalid_argument if absent
};

// Softmax triple (u, alpha, lambda) over a universe of n alternatives and a
// time grid. lambda is aligned with grid.deadlines and may be empty for the
// constant process, whose choice probabilities never move off the t = 0 ones.
struct SoftmaxParams {
  TimeGrid grid;
  std::vector<double> u;
  std::vector<double> alpha;
  std::vector<double> lambda;

  void validate(int n) const;  // sizes and lambda > 0
  double lambda_at(double t) const;
};

// Odds book for an ordered pair (a, b) at a deadline: posterior odds and
// log-odds, plus the change relative to t = 0 (strength / weight of evidence)
// and its magnitude (degree of easiness).
struct EvidenceStats {
  double odds = 0;       // r_t(a,b)
  double log_odds = 0;   // l_t(a,b)
  double strength = 0;   // f_t(a,b) = r_t/r_0
  double weight = 0;     // w_t(a,b) = ln f_t
  double easiness = 0;   // e_t(a,b) = |w_t|
};

using OrderedPair = std::pair<int, int>;
using PairRelation = std::set<std::pair<OrderedPair, OrderedPair>>;

// The three relations a choice process reveals at a deadline. pref compares
// alternatives, intensity compares ordered pairs, ease compares unordered
// pairs (stored with the smaller index first).
struct RevealedRelations {
  std::set<OrderedPair> pref;
  PairRelation intensity;
  PairRelation ease;
};

// p_t(a, menu) for the softmax process; at t = 0 only the bias acts.
// Computed max-shifted, so any logits with |u/lambda + alpha| <= 700 are safe.
double softmax_prob(const Universe& u, const SoftmaxParams& p, double t, const Menu& menu, int a);
ChoiceDistribution softmax_table(const Universe& u, const SoftmaxParams& p, double t, const Menu& menu);

// Evidence stats computed from the closed form; exact in u, alpha, lambda.
EvidenceStats evidence_stats(const SoftmaxParams& p, double t, int a, int b);

// Evidence stats from the four binary cells (p_t(a,b), p_t(b,a), p_0(a,b),
// p_0(b,a)). Taking both cells of each table keeps full relative precision
// when one probability is close to one. Throws degenerate_odds if any cell is
// below the positivity floor (1e-300), so logs never produce infinities.
EvidenceStats evidence_stats_from_probs(double p_t_ab, double p_t_ba, double p0_ab, double p0_ba);

// Limit choice rule for vanishing noise: mass on argmax u, split by bias.
ChoiceDistribution limit_rule(const Universe& u, const SoftmaxParams& p, const Menu& menu);

// Duality between (preference, ease) and intensity, for relations that admit a
// common utility representation. Both directions require at least three
// alternatives; with two, the inverse's defining quantifier is vacuous.
PairRelation duality_map(const std::set<OrderedPair>& pref, const PairRelation& ease, int n);
std::pair<std::set<OrderedPair>, PairRelation> duality_inverse(const PairRelation& intensity, int n);

// Relations generated directly by a utility vector (test oracle and the
// representation the duality round-trips through).
RevealedRelations relations_from_utility(const std::vector<double>& u);

namespace detail {
double logsumexp(std::span<const double> xs);
}  // namespace detail

}  // namespace prefdisc
