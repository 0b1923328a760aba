#pragma once

#include <map>
#include <optional>
#include <vector>

#include "prefdisc/core.hpp"

namespace prefdisc {

// Choice probabilities indexed by (t, menu) with t in {0} union the grid.
// Exact datasets carry probabilities only; empirical ones also keep the raw
// counts so checkers can scale their tolerance bands with the sample size.
class ChoiceDataset {
 public:
  enum class Kind { exact, empirical };

  struct Table {
    ChoiceDistribution dist;
    std::vector<double> counts;  // aligned with dist.probs; empty for exact data
    double total = 0;            // sum of counts; 0 for exact data
  };

  using Key = std::pair<double, std::vector<int>>;

  ChoiceDataset(Universe universe, TimeGrid grid, Kind kind = Kind::exact);

  const Universe& universe() const { return universe_; }
  const TimeGrid& grid() const { return grid_; }
  Kind kind() const { return kind_; }

  // All time points the dataset is indexed by: 0 followed by the grid.
  std::vector<double> times() const;

  void add_table(double t, const Menu& menu, std::vector<double> probs);
  void add_counts(double t, const Menu& menu, std::vector<double> counts);

  bool has(double t, const Menu& menu) const;
  const Table& table(double t, const Menu& menu) const;  // throws missing_data
  const std::map<Key, Table>& tables() const { return tables_; }

  // p_t(a, {a,b}); throws missing_data when the binary table is absent.
  double binary(double t, int a, int b) const;

  // Smallest table sample size (empirical data only).
  double min_count() const;

 private:
  void check_time(double t) const;

  Universe universe_;
  TimeGrid grid_;
  Kind kind_;
  std::map<Key, Table> tables_;
};

// Exact dataset generated by a softmax parameter set on the given menus,
// tabulated at t = 0 and every grid deadline.
ChoiceDataset generate_exact(const Universe& u, const SoftmaxParams& p, const std::vector<Menu>& menus);

// All two-element menus of the universe.
std::vector<Menu> binary_menus(const Universe& u);

// Evidence stats of an ordered pair read off the dataset's binary tables.
EvidenceStats evidence_stats(const ChoiceDataset& d, double t, int a, int b);

// The three revealed relations at a deadline, by exact comparison of weights.
RevealedRelations revealed_relations(const ChoiceDataset& d, double t);

}  // namespace prefdisc
