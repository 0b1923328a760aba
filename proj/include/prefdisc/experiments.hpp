#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "prefdisc/axioms.hpp"
#include "prefdisc/chain.hpp"
#include "prefdisc/identify.hpp"

namespace prefdisc {

// Configuration of one Monte Carlo estimate of the deadline-choice
// distribution. Control mode samples the closed-form target directly instead
// of running the algorithm, isolating sampling noise from mixing error.
struct SimulationConfig {
  enum class VRule { linear, vee, explicit_map };
  enum class ZetaSource { zero, from_prior };
  enum class Mode { algorithm, control };

  std::vector<std::string> labels;  // the menu; defaults to "0".."n-1"
  VRule v_rule = VRule::linear;
  std::vector<double> v_values;     // used when v_rule == explicit_map
  double beta = 0.849;
  ZetaSource zeta_source = ZetaSource::zero;
  std::vector<double> zeta_prior;   // used when zeta_source == from_prior
  ExplorationSpec exploration;
  std::vector<double> mu;           // empty = uniform
  double deadline = 4.0;
  std::uint64_t replications = 10'000;
  std::uint64_t seed = 0;
  double dt = 1e-4;
  Mode mode = Mode::algorithm;

  std::vector<double> resolved_v() const;
  Universe resolved_universe() const;
};

struct SimulationReport {
  SimulationConfig config;
  std::vector<std::uint64_t> counts;   // by menu position, sums to replications
  std::vector<double> empirical;
  std::vector<double> target;          // stationary distribution
  double tv = 0;                       // total variation empirical vs target
  double chi2 = 0;
  double mean_iterations = 0;
  double median_iterations = 0;
  double mean_rt = 0;                  // seconds per comparison
  std::uint64_t total_comparisons = 0;
  std::string version;
};

// Runs the configured number of replications with one independent stream per
// replication. Byte-identical output for a fixed (config, seed), regardless
// of `threads` (0 = hardware concurrency).
SimulationReport simulate(const SimulationConfig& cfg, int threads = 0);

// The four calibrated presets: menu {0..7}, ten thousand runs, unbiased
// start, uniform exploration; linear or tent-shaped utility; threshold and
// deadline (0.849, 4 s) under high time pressure, (1.442, 12 s) under low.
SimulationConfig preset(int sim_id);
SimulationReport reproduce(int sim_id, std::uint64_t seed = 0, int threads = 0);

// Behavioral-vs-neural cross-validation on an exactly computed neural
// process: tabulate the stationary family over a deadline grid, audit it,
// identify the behavioral components, and match them to (v, mu, beta).
struct PipelineConfig {
  std::vector<std::string> labels;
  std::vector<double> v;
  std::vector<double> mu;      // empty = uniform
  TimeGrid grid;
  std::vector<double> beta;    // aligned with grid.deadlines
  std::vector<Menu> menus;     // empty = all binary menus plus the full menu
};

struct PipelineReport {
  std::vector<AxiomReport> axioms;
  bool axioms_pass = false;
  IdentifiedParams identified;
  CrossValidation cross;
};

PipelineReport pipeline(const PipelineConfig& cfg);

// The dataset the pipeline audits (exposed for tests).
ChoiceDataset neural_process_dataset(const PipelineConfig& cfg);

}  // namespace prefdisc
