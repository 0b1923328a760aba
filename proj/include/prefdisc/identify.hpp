#pragma once

#include <optional>

#include "prefdisc/dataset.hpp"

namespace prefdisc {

struct Anchor {
  int a = -1;
  int b = -1;
  double t = 0;
};

// Constancy scan: constant means no deadline moves any binary probability off
// its t = 0 value beyond the tolerance. When nonconstant, anchor is the
// (a, b, t) with the largest weight of evidence, in deterministic scan order.
struct ConstancyResult {
  bool constant = true;
  Anchor anchor;
  double max_weight = 0;
};

ConstancyResult detect_constant(const ChoiceDataset& d, std::optional<double> tol = std::nullopt);

struct IdentifiedParams {
  SoftmaxParams params;
  Anchor anchor;
  bool constant = false;
};

// Exact recovery of (u, alpha, lambda) from binary choice probabilities via
// weight-of-evidence ratios at the anchor pair. Normalization: u(anchor.b)=0,
// u(anchor.a)=1, alpha(anchor.b)=0. For a constant process u is identically 0,
// alpha is the t=0 log-odds against the first alternative and lambda is empty.
// Throws not_softmax when some deadline's anchor weight is nonpositive.
IdentifiedParams identify(const ChoiceDataset& d);
IdentifiedParams identify_at(const ChoiceDataset& d, const Anchor& anchor);

// Cardinal-equivalence test: q == (k u + h, alpha + l, k lambda) within tol,
// residuals measured relative to the magnitude of q's components.
struct EquivalenceReport {
  bool equivalent = false;
  double k = 1, h = 0, l = 0;
  double max_residual = 0;
};

EquivalenceReport params_equivalent(const SoftmaxParams& p, const SoftmaxParams& q, double tol = 1e-9);

// Neural counterpart (v, mu, beta) over the same universe and grid.
struct NeuralParams {
  TimeGrid grid;
  std::vector<double> v;
  std::vector<double> mu;    // strictly positive, sums to 1
  std::vector<double> beta;  // aligned with grid.deadlines
};

// Match behavioral to neural components: v = k u + h, mu = j e^alpha,
// beta = 1 / (k lambda). Reports (j, k, h) and the worst residual.
struct CrossValidation {
  bool equivalent = false;
  double j = 1, k = 1, h = 0;
  double max_residual = 0;
};

CrossValidation cross_validate(const SoftmaxParams& behavioral, const NeuralParams& neural,
                               double tol = 1e-9);

}  // namespace prefdisc
