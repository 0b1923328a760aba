#include "prefdisc/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace prefdisc {

namespace {

std::string key_name(const Universe& u, double t, const std::vector<int>& members) {
  std::ostringstream os;
  os << "(t=" << t << ", {";
  for (std::size_t i = 0; i < members.size(); ++i)
    os << (i ? "," : "") << u.label(members[i]);
  os << "})";
  return os.str();
}

}  // namespace

ChoiceDataset::ChoiceDataset(Universe universe, TimeGrid grid, Kind kind)
    : universe_(std::move(universe)), grid_(std::move(grid)), kind_(kind) {}

std::vector<double> ChoiceDataset::times() const {
  std::vector<double> ts{0.0};
  ts.insert(ts.end(), grid_.deadlines.begin(), grid_.deadlines.end());
  return ts;
}

void ChoiceDataset::check_time(double t) const {
  if (t != 0.0 && !grid_.contains(t)) {
    std::ostringstream os;
    os << "table time " << t << " is neither 0 nor a grid deadline";
    fail(errc::invalid_argument, os.str());
  }
}

void ChoiceDataset::add_table(double t, const Menu& menu, std::vector<double> probs) {
  check_time(t);
  Table tab{ChoiceDistribution(menu, std::move(probs)), {}, 0};
  tables_[Key{t, menu.members}] = std::move(tab);
}

void ChoiceDataset::add_counts(double t, const Menu& menu, std::vector<double> counts) {
  check_time(t);
  if (kind_ != Kind::empirical)
    fail(errc::invalid_argument, "counts can only be added to an empirical dataset");
  if (counts.size() != menu.members.size())
    fail(errc::invalid_argument, "counts size does not match menu");
  double total = 0;
  for (double c : counts) {
    if (!(c >= 0) || c != std::floor(c))
      fail(errc::invalid_argument, "counts must be nonnegative integers");
    total += c;
  }
  if (!(total > 0)) fail(errc::invalid_argument, "table has zero observations");
  std::vector<double> probs(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) probs[i] = counts[i] / total;
  Table tab{ChoiceDistribution(menu, std::move(probs)), std::move(counts), total};
  tables_[Key{t, menu.members}] = std::move(tab);
}

bool ChoiceDataset::has(double t, const Menu& menu) const {
  return tables_.count(Key{t, menu.members}) > 0;
}

const ChoiceDataset::Table& ChoiceDataset::table(double t, const Menu& menu) const {
  auto it = tables_.find(Key{t, menu.members});
  if (it == tables_.end())
    fail(errc::missing_data, "missing table " + key_name(universe_, t, menu.members));
  return it->second;
}

double ChoiceDataset::binary(double t, int a, int b) const {
  if (a == b) fail(errc::invalid_argument, "binary probability needs distinct alternatives");
  Menu m{{std::min(a, b), std::max(a, b)}};
  return table(t, m).dist.prob(a);
}

double ChoiceDataset::min_count() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& [k, tab] : tables_)
    if (tab.total > 0) m = std::min(m, tab.total);
  return m;
}

ChoiceDataset generate_exact(const Universe& u, const SoftmaxParams& p, const std::vector<Menu>& menus) {
  p.validate(u.size());
  ChoiceDataset d(u, p.grid, ChoiceDataset::Kind::exact);
  for (double t : d.times())
    for (const Menu& m : menus) d.add_table(t, m, softmax_table(u, p, t, m).probs);
  return d;
}

std::vector<Menu> binary_menus(const Universe& u) {
  std::vector<Menu> out;
  for (int a = 0; a < u.size(); ++a)
    for (int b = a + 1; b < u.size(); ++b) out.push_back(Menu{{a, b}});
  return out;
}

EvidenceStats evidence_stats(const ChoiceDataset& d, double t, int a, int b) {
  return evidence_stats_from_probs(d.binary(t, a, b), d.binary(t, b, a), d.binary(0.0, a, b),
                                   d.binary(0.0, b, a));
}

RevealedRelations revealed_relations(const ChoiceDataset& d, double t) {
  const int n = d.universe().size();
  std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      const double wab = evidence_stats(d, t, a, b).weight;
      w[a][b] = wab;
      w[b][a] = -wab;
    }
  RevealedRelations r;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (a != b && w[a][b] > 0) r.pref.insert({a, b});
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (a == b) continue;
      for (int c = 0; c < n; ++c)
        for (int dd = 0; dd < n; ++dd) {
          if (c == dd) continue;
          if (w[a][b] > w[c][dd]) r.intensity.insert({{a, b}, {c, dd}});
        }
    }
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int dd = c + 1; dd < n; ++dd) {
          if (a == c && b == dd) continue;
          if (std::abs(w[a][b]) > std::abs(w[c][dd])) r.ease.insert({{a, b}, {c, dd}});
        }
  return r;
}

}  // namespace prefdisc
