#pragma once

#include <cstdint>
#include <string>

#include "prefdisc/ddm.hpp"

namespace prefdisc {

// Column-stochastic transition matrix over a menu: at(to, from) is the
// probability of moving to `to` conditional on being at `from`, positions
// indexed within the menu.
struct MarkovKernel {
  Menu menu;
  std::vector<double> entries;  // row-major, entries[to * n + from]

  int n() const { return menu.size(); }
  double at(int to, int from) const { return entries[static_cast<std::size_t>(to) * n() + from]; }
  double& at(int to, int from) { return entries[static_cast<std::size_t>(to) * n() + from]; }

  void validate_stochastic(double tol = 1e-12) const;
};

struct ExplorationSpec {
  enum class Topology { uniform, graph };
  Topology topology = Topology::uniform;
  std::vector<std::pair<int, int>> edges;  // menu positions, undirected; graph only
  double rho = 1.0;                        // exploration aversion; graph only
};

// Exploration matrix: uniform over the other alternatives, or proportional to
// d(a,b)^-rho with d the shortest-path distance on a connected graph. A single
// proportionality constant keeps the off-diagonal part symmetric; leftover
// column mass sits on the diagonal as a self-proposal.
MarkovKernel build_exploration(const Menu& menu, const ExplorationSpec& spec);

// Incumbent transition matrix: off-diagonal Q(a|b) * acceptance_prob(a,b),
// diagonal tops each column up to one.
MarkovKernel incumbent_matrix(const MarkovKernel& q, const DdmSpec& spec);

// Closed-form stationary distribution of the incumbent chain for a transitive
// spec: prior-weighted exponential of beta * v, computed max-shifted.
ChoiceDistribution stationary(const DdmSpec& spec, const Menu& menu);

// Power iteration from the uniform distribution until successive iterates are
// closer than tol in total variation. Independent oracle for `stationary`.
ChoiceDistribution stationary_oracle(const MarkovKernel& m, double tol = 1e-12,
                                     std::uint64_t max_iters = 1'000'000);

struct ReversibilityReport {
  bool reversible = true;
  double worst_residual = 0;
  std::pair<int, int> worst_pair{-1, -1};  // menu positions
};

// Detailed balance of (M, m): max |M(a|b) m(b) - M(b|a) m(a)| over pairs.
ReversibilityReport check_reversibility(const MarkovKernel& m, const ChoiceDistribution& dist,
                                        double tol = 1e-12);

struct TraceStep {
  int incumbent;   // universe index entering the comparison
  int proposal;    // universe index proposed
  int winner;      // universe index that won the comparison
  double elapsed;  // total time after this comparison
};

// One run of the deadline-terminated search: Markov proposals, sequential
// comparisons, incumbent at the deadline is chosen. The comparison in flight
// when the clock crosses the deadline is abandoned and the incumbent entering
// it is returned. Self-proposals consume no time and are redrawn.
struct RunTrace {
  std::vector<TraceStep> steps;
  int choice = -1;                  // universe index
  std::uint64_t iterations = 0;     // comparisons performed, including the abandoned one
  double total_time = 0;            // elapsed clock after the last comparison
  std::uint64_t total_ddm_steps = 0;
};

RunTrace run(const DdmSpec& spec, const MarkovKernel& q, const ChoiceDistribution& mu,
             double deadline, Rng& rng, double dt = 1e-4);

// One JSON object per comparison, newline separated.
std::string trace_to_json_lines(const RunTrace& trace, const Universe& u);

}  // namespace prefdisc
