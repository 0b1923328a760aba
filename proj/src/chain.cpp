#include "prefdisc/chain.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

namespace prefdisc {

void MarkovKernel::validate_stochastic(double tol) const {
  const int k = n();
  for (int from = 0; from < k; ++from) {
    double sum = 0;
    for (int to = 0; to < k; ++to) {
      if (!(at(to, from) >= 0)) fail(errc::invalid_argument, "negative transition probability");
      sum += at(to, from);
    }
    if (std::abs(sum - 1.0) > tol)
      fail(errc::invalid_argument, "column " + std::to_string(from) + " sums to " +
                                       std::to_string(sum) + ", not 1");
  }
}

namespace {

// All-pairs shortest-path distances by BFS; throws if the graph is disconnected.
std::vector<std::vector<int>> bfs_distances(int n, const std::vector<std::pair<int, int>>& edges) {
  std::vector<std::vector<int>> adj(n);
  for (const auto& [a, b] : edges) {
    if (a < 0 || b < 0 || a >= n || b >= n || a == b)
      fail(errc::invalid_argument, "bad graph edge");
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<std::vector<int>> dist(n, std::vector<int>(n, -1));
  for (int s = 0; s < n; ++s) {
    std::deque<int> queue{s};
    dist[s][s] = 0;
    while (!queue.empty()) {
      const int x = queue.front();
      queue.pop_front();
      for (int y : adj[x])
        if (dist[s][y] < 0) {
          dist[s][y] = dist[s][x] + 1;
          queue.push_back(y);
        }
    }
    for (int t = 0; t < n; ++t)
      if (dist[s][t] < 0) fail(errc::invalid_argument, "exploration graph is disconnected");
  }
  return dist;
}

}  // namespace

MarkovKernel build_exploration(const Menu& menu, const ExplorationSpec& spec) {
  const int n = menu.size();
  if (n < 2) fail(errc::invalid_argument, "exploration needs at least two alternatives");
  MarkovKernel q{menu, std::vector<double>(static_cast<std::size_t>(n) * n, 0.0)};

  if (spec.topology == ExplorationSpec::Topology::uniform) {
    for (int from = 0; from < n; ++from)
      for (int to = 0; to < n; ++to)
        if (to != from) q.at(to, from) = 1.0 / (n - 1);
    return q;
  }

  if (!(spec.rho >= 0)) fail(errc::invalid_argument, "rho must be nonnegative");
  const auto dist = bfs_distances(n, spec.edges);

  // One proportionality constant for the whole matrix: the largest value that
  // keeps every column sum at or below one. Per-column scaling would break
  // the symmetry of the off-diagonal part.
  double max_col = 0;
  for (int from = 0; from < n; ++from) {
    double col = 0;
    for (int to = 0; to < n; ++to)
      if (to != from) col += std::pow(static_cast<double>(dist[to][from]), -spec.rho);
    max_col = std::max(max_col, col);
  }
  const double k = 1.0 / max_col;
  for (int from = 0; from < n; ++from) {
    double col = 0;
    for (int to = 0; to < n; ++to)
      if (to != from) {
        q.at(to, from) = k * std::pow(static_cast<double>(dist[to][from]), -spec.rho);
        col += q.at(to, from);
      }
    q.at(from, from) = std::max(0.0, 1.0 - col);
  }
  return q;
}

MarkovKernel incumbent_matrix(const MarkovKernel& q, const DdmSpec& spec) {
  q.validate_stochastic();
  const int n = q.n();
  MarkovKernel m{q.menu, std::vector<double>(static_cast<std::size_t>(n) * n, 0.0)};
  for (int from = 0; from < n; ++from) {
    double col = 0;
    for (int to = 0; to < n; ++to) {
      if (to == from) continue;
      m.at(to, from) =
          q.at(to, from) * acceptance_prob(spec, q.menu.members[to], q.menu.members[from]);
      col += m.at(to, from);
    }
    m.at(from, from) = 1.0 - col;  // > 0: every acceptance probability is < 1
  }
  return m;
}

ChoiceDistribution stationary(const DdmSpec& spec, const Menu& menu) {
  const GibbsPrior prior = prior_from_transitive_zeta(spec, menu);
  std::vector<double> logm(menu.members.size());
  for (std::size_t i = 0; i < logm.size(); ++i)
    logm[i] = std::log(prior.probs[i]) + spec.beta() * spec.v()[menu.members[i]];
  const double z = detail::logsumexp(logm);
  std::vector<double> probs(logm.size());
  for (std::size_t i = 0; i < probs.size(); ++i) probs[i] = std::exp(logm[i] - z);
  return ChoiceDistribution(menu, std::move(probs));
}

ChoiceDistribution stationary_oracle(const MarkovKernel& m, double tol, std::uint64_t max_iters) {
  m.validate_stochastic();
  const int n = m.n();
  std::vector<double> cur(n, 1.0 / n), next(n, 0.0);
  for (std::uint64_t it = 0; it < max_iters; ++it) {
    for (int to = 0; to < n; ++to) {
      double acc = 0;
      for (int from = 0; from < n; ++from) acc += m.at(to, from) * cur[from];
      next[to] = acc;
    }
    double tv = 0;
    for (int i = 0; i < n; ++i) tv += std::abs(next[i] - cur[i]);
    tv *= 0.5;
    cur.swap(next);
    if (tv < tol) {
      // Renormalize away accumulated rounding before constructing.
      double sum = 0;
      for (double x : cur) sum += x;
      for (double& x : cur) x /= sum;
      return ChoiceDistribution(m.menu, std::move(cur));
    }
  }
  fail(errc::nonconvergence, "power iteration did not reach tolerance");
}

ReversibilityReport check_reversibility(const MarkovKernel& m, const ChoiceDistribution& dist,
                                        double tol) {
  if (dist.menu.members != m.menu.members)
    fail(errc::invalid_argument, "distribution and kernel menus differ");
  ReversibilityReport rep;
  const int n = m.n();
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      const double res = std::abs(m.at(a, b) * dist.probs[b] - m.at(b, a) * dist.probs[a]);
      if (res > rep.worst_residual) {
        rep.worst_residual = res;
        rep.worst_pair = {a, b};
      }
    }
  rep.reversible = rep.worst_residual <= tol;
  return rep;
}

RunTrace run(const DdmSpec& spec, const MarkovKernel& q, const ChoiceDistribution& mu,
             double deadline, Rng& rng, double dt) {
  if (!(deadline > 0)) fail(errc::invalid_argument, "deadline must be positive");
  if (mu.menu.members != q.menu.members)
    fail(errc::invalid_argument, "initial distribution and exploration menus differ");
  const int n = q.n();
  RunTrace trace;

  int b = static_cast<int>(rng.categorical(mu.probs));  // menu position
  if (n == 1) {
    trace.choice = q.menu.members[0];
    return trace;
  }

  // Guard against a column with no mass off the diagonal.
  for (int from = 0; from < n; ++from) {
    if (q.at(from, from) >= 1.0 - 1e-15)
      fail(errc::invalid_argument, "exploration column has no off-diagonal mass");
  }

  std::vector<double> column(n);
  double tau = 0;
  for (;;) {
    for (int to = 0; to < n; ++to) column[to] = q.at(to, b);
    int a;
    do {
      a = static_cast<int>(rng.categorical(column));
    } while (a == b);  // self-proposal: no comparison, no time

    const auto out =
        sample_comparison(spec, q.menu.members[a], q.menu.members[b], rng, dt);
    const double tau_next = tau + out.rt;
    trace.steps.push_back(TraceStep{q.menu.members[b], q.menu.members[a], out.winner, tau_next});
    ++trace.iterations;
    trace.total_ddm_steps += out.steps;
    if (tau_next > deadline) {
      trace.choice = q.menu.members[b];  // comparison in flight is abandoned
      trace.total_time = tau_next;
      return trace;
    }
    tau = tau_next;
    if (out.winner == q.menu.members[a]) b = a;
  }
}

std::string trace_to_json_lines(const RunTrace& trace, const Universe& u) {
  std::ostringstream os;
  os.precision(17);
  for (const auto& s : trace.steps) {
    os << "{\"incumbent\":\"" << u.label(s.incumbent) << "\",\"proposal\":\"" << u.label(s.proposal)
       << "\",\"winner\":\"" << u.label(s.winner) << "\",\"elapsed\":" << s.elapsed << "}\n";
  }
  return os.str();
}

}  // namespace prefdisc
