#pragma once

// Shared generators for the test suites. All randomness flows through
// prefdisc::Rng so every test is reproducible from its literal seed.

#include <vector>

#include "prefdisc/dataset.hpp"
#include "prefdisc/rng.hpp"

namespace testgen {

using namespace prefdisc;

inline double uniform_in(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * rng.uniform01();
}

// u and alpha in [-3, 3]; lambda strictly decreasing in (0.2, 3].
inline SoftmaxParams random_softmax(Rng& rng, int n, int n_deadlines) {
  SoftmaxParams p;
  std::vector<double> ts;
  for (int i = 0; i < n_deadlines; ++i) ts.push_back(i + 1.0);
  p.grid = TimeGrid(ts);
  for (int i = 0; i < n; ++i) {
    p.u.push_back(uniform_in(rng, -3.0, 3.0));
    p.alpha.push_back(uniform_in(rng, -3.0, 3.0));
  }
  double lam = uniform_in(rng, 1.5, 3.0);
  for (int i = 0; i < n_deadlines; ++i) {
    p.lambda.push_back(lam);
    lam *= uniform_in(rng, 0.3, 0.9);
  }
  return p;
}

// Menus for a dataset: all binary menus plus the full menu.
inline std::vector<Menu> standard_menus(const Universe& u) {
  auto menus = binary_menus(u);
  if (u.size() > 2) menus.push_back(Menu::full(u));
  return menus;
}

inline ChoiceDataset random_softmax_dataset(Rng& rng, int n, int n_deadlines) {
  const Universe u = Universe::numbered(n);
  const SoftmaxParams p = random_softmax(rng, n, n_deadlines);
  return generate_exact(u, p, standard_menus(u));
}

// Random full-support probability vector.
inline std::vector<double> random_simplex(Rng& rng, int n) {
  std::vector<double> p(n);
  double sum = 0;
  for (int i = 0; i < n; ++i) {
    p[i] = 0.05 + rng.uniform01();
    sum += p[i];
  }
  for (double& x : p) x /= sum;
  return p;
}

}  // namespace testgen
