#include "prefdisc/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace prefdisc {

std::vector<double> SimulationConfig::resolved_v() const {
  const int n = static_cast<int>(labels.empty() ? v_values.size() : labels.size());
  if (v_rule == VRule::explicit_map) {
    if (v_values.empty()) fail(errc::invalid_argument, "explicit v requires values");
    return v_values;
  }
  if (n < 2) fail(errc::invalid_argument, "simulation needs at least two alternatives");
  std::vector<double> v(n);
  const double mid = (n - 1) / 2.0;
  for (int i = 0; i < n; ++i)
    v[i] = v_rule == VRule::linear ? i - mid : std::abs(i - mid);
  return v;
}

Universe SimulationConfig::resolved_universe() const {
  if (!labels.empty()) return Universe(labels);
  return Universe::numbered(static_cast<int>(resolved_v().size()));
}

namespace {

struct RepResult {
  int choice = 0;                 // menu position
  std::uint64_t iterations = 0;
  std::uint64_t ddm_steps = 0;
};

struct SimPieces {
  Universe universe;
  DdmSpec spec;
  MarkovKernel q;
  ChoiceDistribution mu;
  ChoiceDistribution target;
};

SimPieces assemble(const SimulationConfig& cfg) {
  Universe universe = cfg.resolved_universe();
  const auto v = cfg.resolved_v();
  if (v.size() != static_cast<std::size_t>(universe.size()))
    fail(errc::invalid_argument, "v does not cover the menu");
  const Menu menu = Menu::full(universe);

  DdmSpec spec = cfg.zeta_source == SimulationConfig::ZetaSource::zero
                     ? DdmSpec(universe, v, cfg.beta)
                     : zeta_from_global_prior(universe, v, cfg.beta, cfg.zeta_prior);

  MarkovKernel q = build_exploration(menu, cfg.exploration);

  std::vector<double> mu = cfg.mu;
  if (mu.empty()) mu.assign(menu.size(), 1.0 / menu.size());
  ChoiceDistribution mu_dist(menu, std::move(mu));

  ChoiceDistribution target = stationary(spec, menu);
  return SimPieces{std::move(universe), std::move(spec), std::move(q), std::move(mu_dist),
                   std::move(target)};
}

}  // namespace

SimulationReport simulate(const SimulationConfig& cfg, int threads) {
  if (cfg.replications < 1) fail(errc::invalid_argument, "need at least one replication");
  const SimPieces pieces = assemble(cfg);
  const int n = pieces.q.n();
  const std::uint64_t reps = cfg.replications;

  // One slot per replication; workers claim indices from a shared counter, so
  // the aggregate is independent of scheduling and thread count.
  std::vector<RepResult> results(reps);
  std::atomic<std::uint64_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::uint64_t r = next.fetch_add(1);
      if (r >= reps) return;
      Rng rng = Rng::for_replication(cfg.seed, r);
      RepResult& out = results[r];
      if (cfg.mode == SimulationConfig::Mode::control) {
        out.choice = static_cast<int>(rng.categorical(pieces.target.probs));
      } else {
        const RunTrace tr = run(pieces.spec, pieces.q, pieces.mu, cfg.deadline, rng, cfg.dt);
        out.choice = pieces.q.menu.position(tr.choice);
        out.iterations = tr.iterations;
        out.ddm_steps = tr.total_ddm_steps;
      }
    }
  };

  int nthreads = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  nthreads = std::max(1, std::min<int>(nthreads, 64));
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  SimulationReport rep;
  rep.config = cfg;
  rep.version = kVersion;
  rep.counts.assign(n, 0);
  std::uint64_t total_iters = 0, total_steps = 0;
  std::vector<std::uint64_t> iters(reps);
  for (std::uint64_t r = 0; r < reps; ++r) {
    rep.counts[results[r].choice]++;
    total_iters += results[r].iterations;
    total_steps += results[r].ddm_steps;
    iters[r] = results[r].iterations;
  }
  rep.empirical.resize(n);
  for (int i = 0; i < n; ++i) rep.empirical[i] = static_cast<double>(rep.counts[i]) / reps;
  rep.target = pieces.target.probs;

  rep.tv = 0;
  rep.chi2 = 0;
  for (int i = 0; i < n; ++i) {
    rep.tv += std::abs(rep.empirical[i] - rep.target[i]);
    const double expected = static_cast<double>(reps) * rep.target[i];
    const double diff = static_cast<double>(rep.counts[i]) - expected;
    rep.chi2 += diff * diff / expected;
  }
  rep.tv *= 0.5;

  rep.total_comparisons = total_iters;
  rep.mean_iterations = static_cast<double>(total_iters) / reps;
  std::sort(iters.begin(), iters.end());
  rep.median_iterations = reps % 2 == 1
                              ? static_cast<double>(iters[reps / 2])
                              : 0.5 * (iters[reps / 2 - 1] + iters[reps / 2]);
  rep.mean_rt = total_iters > 0
                    ? static_cast<double>(total_steps) * cfg.dt / static_cast<double>(total_iters)
                    : 0.0;
  return rep;
}

SimulationConfig preset(int sim_id) {
  if (sim_id < 1 || sim_id > 4) fail(errc::invalid_argument, "simulation id must be 1..4");
  SimulationConfig cfg;
  cfg.labels.clear();
  for (int i = 0; i < 8; ++i) cfg.labels.push_back(std::to_string(i));
  cfg.v_rule = (sim_id % 2 == 1) ? SimulationConfig::VRule::linear : SimulationConfig::VRule::vee;
  cfg.beta = sim_id <= 2 ? 0.849 : 1.442;
  cfg.deadline = sim_id <= 2 ? 4.0 : 12.0;
  cfg.replications = 10'000;
  cfg.dt = 1e-4;
  cfg.seed = 0;
  return cfg;
}

SimulationReport reproduce(int sim_id, std::uint64_t seed, int threads) {
  SimulationConfig cfg = preset(sim_id);
  cfg.seed = seed;
  return simulate(cfg, threads);
}

ChoiceDataset neural_process_dataset(const PipelineConfig& cfg) {
  Universe universe(cfg.labels);
  const int n = universe.size();
  if (cfg.v.size() != static_cast<std::size_t>(n))
    fail(errc::invalid_argument, "v does not cover the universe");
  if (cfg.beta.size() != cfg.grid.deadlines.size())
    fail(errc::invalid_argument, "beta map must cover the grid");
  for (double b : cfg.beta)
    if (!(b > 0)) fail(errc::invalid_argument, "beta must be strictly positive");

  std::vector<double> mu = cfg.mu;
  if (mu.empty()) mu.assign(n, 1.0 / n);
  if (mu.size() != static_cast<std::size_t>(n))
    fail(errc::invalid_argument, "mu does not cover the universe");
  double mu_sum = 0;
  for (double m : mu) {
    if (!(m > 0)) fail(errc::invalid_argument, "mu must be strictly positive");
    mu_sum += m;
  }
  for (double& m : mu) m /= mu_sum;

  std::vector<Menu> menus = cfg.menus;
  if (menus.empty()) {
    menus = binary_menus(universe);
    if (n > 2) menus.push_back(Menu::full(universe));
  }

  ChoiceDataset d(universe, cfg.grid, ChoiceDataset::Kind::exact);
  for (const Menu& menu : menus) {
    // t = 0: the prior conditioned on the menu.
    std::vector<double> p0(menu.size());
    double z0 = 0;
    for (int i = 0; i < menu.size(); ++i) z0 += mu[menu.members[i]];
    for (int i = 0; i < menu.size(); ++i) p0[i] = mu[menu.members[i]] / z0;
    d.add_table(0.0, menu, std::move(p0));

    for (std::size_t ti = 0; ti < cfg.grid.deadlines.size(); ++ti) {
      std::vector<double> logm(menu.size());
      for (int i = 0; i < menu.size(); ++i)
        logm[i] = std::log(mu[menu.members[i]]) + cfg.beta[ti] * cfg.v[menu.members[i]];
      const double z = detail::logsumexp(logm);
      std::vector<double> pt(menu.size());
      for (int i = 0; i < menu.size(); ++i) pt[i] = std::exp(logm[i] - z);
      d.add_table(cfg.grid.deadlines[ti], menu, std::move(pt));
    }
  }
  return d;
}

PipelineReport pipeline(const PipelineConfig& cfg) {
  if (cfg.grid.size() < 2)
    fail(errc::invalid_argument, "pipeline needs at least two deadlines");
  const ChoiceDataset d = neural_process_dataset(cfg);

  PipelineReport rep;
  rep.axioms = run_all_axioms(d);
  rep.axioms_pass =
      std::all_of(rep.axioms.begin(), rep.axioms.end(), [](const AxiomReport& r) { return r.passed(); });
  if (!rep.axioms_pass) return rep;

  rep.identified = identify(d);

  std::vector<double> mu = cfg.mu;
  if (mu.empty()) mu.assign(cfg.labels.size(), 1.0 / static_cast<double>(cfg.labels.size()));
  double mu_sum = 0;
  for (double m : mu) mu_sum += m;
  for (double& m : mu) m /= mu_sum;

  NeuralParams neural{cfg.grid, cfg.v, std::move(mu), cfg.beta};
  rep.cross = cross_validate(rep.identified.params, neural, 1e-9);
  return rep;
}

}  // namespace prefdisc
