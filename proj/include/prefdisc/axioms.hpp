#pragma once

#include <optional>
#include <string>
#include <vector>

#include "prefdisc/dataset.hpp"

namespace prefdisc {

enum class Verdict { pass, fail, not_applicable };

// One counterexample tuple. Re-evaluating lhs and rhs from the dataset at
// (t, s, alts) must reproduce the violated inequality.
struct Witness {
  double t = 0;
  double s = 0;  // second deadline when the axiom compares two; else 0
  std::vector<std::string> alts;
  double lhs = 0;
  double rhs = 0;
  std::string note;
};

struct AxiomReport {
  std::string axiom;
  Verdict verdict = Verdict::pass;
  std::vector<Witness> witnesses;
  double tolerance = 0;
  std::vector<std::string> warnings;
  std::string note;
  std::vector<std::pair<std::string, std::string>> details;

  bool passed() const { return verdict != Verdict::fail; }
};

// Tolerance knobs. Exact data uses the *_exact values; empirical data uses
// c / sqrt(n) with n the smallest sample size among the tables involved.
struct AxiomOptions {
  double tol_pos = 0.0;          // Positivity: probabilities must exceed this
  double tol_choice_exact = 1e-9;
  double c_choice = 4.0;
  double tol_w_exact = 1e-9;     // band on weights / probability gaps
  double c_w = 3.0;
  double tol_ratio_exact = 1e-9;
  double c_ratio = 5.0;

  double choice_tol(const ChoiceDataset& d) const;
  double w_tol(const ChoiceDataset& d) const;
  double ratio_tol(const ChoiceDataset& d) const;
};

// Binary probabilities strictly positive at every time point.
AxiomReport check_positivity(const ChoiceDataset& d, const AxiomOptions& opt = {});

// Menu-independence of binary odds, in the zero-safe product form
// p_t(a,b) p_t(b,A) = p_t(b,a) p_t(a,A).
AxiomReport check_choice_axiom(const ChoiceDataset& d, const AxiomOptions& opt = {});

// Per-deadline log-odds utility with v(ref) = 0; reproduces the tables when
// the Choice Axiom holds.
std::vector<double> fit_luce(const ChoiceDataset& d, double t, int ref);

// Intensity, Preference and Ease Consistency across deadlines. Quantities
// inside the tolerance band count as ties and never produce violations.
std::vector<AxiomReport> check_consistency(const ChoiceDataset& d, const AxiomOptions& opt = {});

// Error rates shrink as deadlines grow. When a fitted parameter set is given,
// also checks that its noise is decreasing and that above-threshold mass grows
// with the deadline on every provided menu, and reports whether the three
// criteria agree.
AxiomReport check_decreasing_error_rate(const ChoiceDataset& d,
                                        const std::optional<SoftmaxParams>& fit = std::nullopt,
                                        const AxiomOptions& opt = {});

// Constant Relative Ease, Constant Relative Weight of Evidence, and Log-odds
// Ratio Invariance: time-invariance of ratios wherever they are defined.
std::vector<AxiomReport> check_relative_invariance(const ChoiceDataset& d, const AxiomOptions& opt = {});

// Everything above in a fixed order (the audit surface).
std::vector<AxiomReport> run_all_axioms(const ChoiceDataset& d, const AxiomOptions& opt = {});

}  // namespace prefdisc
