// prefdisc: audit, identify and simulate deadline-indexed discrete choice.
//
// Exit codes: 0 ok, 1 I/O or schema error, 2 axiom failure, 3 the dataset is
// not a softmax process, 4 numeric precondition violation.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "prefdisc/json_io.hpp"

namespace {

using namespace prefdisc;

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitAxiomFail = 2;
constexpr int kExitNotSoftmax = 3;
constexpr int kExitNumeric = 4;

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case errc::io_error:
    case errc::schema_error:
      return kExitIo;
    case errc::not_softmax:
      return kExitNotSoftmax;
    default:
      return kExitNumeric;
  }
}

std::uint64_t env_seed_fallback() {
  if (const char* s = std::getenv("PREFDISC_SEED")) return std::strtoull(s, nullptr, 10);
  return 0;
}

void emit(const json& doc) { std::cout << doc.dump(2) << "\n"; }

int cmd_audit(const std::string& path) {
  const ChoiceDataset d = load_dataset(path);
  const auto reports = run_all_axioms(d);
  emit(axiom_reports_to_json(reports));
  for (const auto& r : reports)
    if (!r.passed()) return kExitAxiomFail;
  return kExitOk;
}

int cmd_identify(const std::string& path) {
  const ChoiceDataset d = load_dataset(path);
  const IdentifiedParams p = identify(d);
  emit(identified_to_json(p, d.universe()));
  return kExitOk;
}

int cmd_simulate(std::optional<int> sim_id, const std::string& config_path,
                 std::optional<std::uint64_t> seed, bool control, int threads,
                 const std::string& out_path, const std::string& csv_path) {
  SimulationConfig cfg;
  if (sim_id) {
    cfg = preset(*sim_id);
    cfg.seed = env_seed_fallback();
  } else if (!config_path.empty()) {
    const json raw = load_json_file(config_path);
    cfg = simulation_config_from_json(raw);
    if (!raw.contains("seed")) cfg.seed = env_seed_fallback();
  } else {
    fail(errc::invalid_argument, "simulate needs --sim or --config");
  }
  if (seed) cfg.seed = *seed;
  if (control) cfg.mode = SimulationConfig::Mode::control;

  const SimulationReport rep = simulate(cfg, threads);
  const json doc = simulation_report_to_json(rep);
  if (!out_path.empty()) write_text_file(out_path, doc.dump(2) + "\n");
  if (!csv_path.empty()) write_text_file(csv_path, simulation_report_to_csv(rep));
  emit(doc);
  return kExitOk;
}

int cmd_stationary(const std::string& spec_path, const std::vector<std::string>& menu_labels) {
  const DdmSpec spec = load_ddm(spec_path);
  const Menu menu = menu_labels.empty() ? Menu::full(spec.universe())
                                        : Menu::of(spec.universe(), menu_labels);
  const ChoiceDistribution m = stationary(spec, menu);
  json probs;
  for (std::size_t i = 0; i < m.probs.size(); ++i)
    probs[spec.universe().label(m.menu.members[i])] = m.probs[i];
  emit(json{{"version", kVersion}, {"stationary", probs}});
  return kExitOk;
}

int cmd_gibbs(const std::string& spec_path, bool to_prior, const std::string& prior_path) {
  const DdmSpec spec = load_ddm(spec_path);
  if (to_prior) {
    const GibbsPrior prior = prior_from_transitive_zeta(spec);
    emit(prior_to_json(prior, spec.universe()));
    return kExitOk;
  }
  const auto pi = prior_from_json(load_json_file(prior_path), spec.universe());
  const DdmSpec out = zeta_from_global_prior(spec.universe(), spec.v(), spec.beta(), pi);
  emit(ddm_to_json(out));
  return kExitOk;
}

int cmd_pipeline(const std::string& config_path) {
  const PipelineConfig cfg = pipeline_config_from_json(load_json_file(config_path));
  const PipelineReport rep = pipeline(cfg);
  emit(pipeline_report_to_json(rep, Universe(cfg.labels)));
  return rep.axioms_pass ? kExitOk : kExitAxiomFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deadline-indexed discrete choice: axioms, identification, DDM search"};
  app.require_subcommand(1);

  std::string dataset_path;
  auto* audit = app.add_subcommand("audit", "run every axiom check on a dataset");
  audit->add_option("dataset", dataset_path, "dataset JSON file")->required();

  std::string id_path;
  auto* ident = app.add_subcommand("identify", "recover (u, alpha, lambda) from a dataset");
  ident->add_option("dataset", id_path, "dataset JSON file")->required();

  std::optional<int> sim_id;
  std::string sim_config, sim_out, sim_csv;
  std::optional<std::uint64_t> sim_seed;
  bool sim_control = false;
  int sim_threads = 0;
  auto* sim = app.add_subcommand("simulate", "Monte Carlo choice distribution vs target");
  sim->add_option("--sim", sim_id, "preset id 1..4")->check(CLI::Range(1, 4));
  sim->add_option("--config", sim_config, "simulation config JSON");
  sim->add_option("--seed", sim_seed, "master seed (fallback: PREFDISC_SEED, then 0)");
  sim->add_option("--threads", sim_threads, "worker threads (0 = hardware)");
  sim->add_option("--out", sim_out, "write the JSON report here as well");
  sim->add_option("--csv", sim_csv, "write alternative,count,empirical,target CSV");
  sim->add_flag("--control", sim_control, "sample the closed-form target instead");

  std::string st_spec;
  std::vector<std::string> st_menu;
  auto* st = app.add_subcommand("stationary", "closed-form stationary distribution");
  st->add_option("--spec", st_spec, "DDM spec JSON")->required();
  st->add_option("--menu", st_menu, "menu labels (default: whole universe)")->delimiter(',');

  std::string gb_spec, gb_prior;
  bool gb_to_prior = false;
  auto* gb = app.add_subcommand("gibbs", "initial conditions <-> ex ante probabilities");
  gb->add_option("--spec", gb_spec, "DDM spec JSON")->required();
  gb->add_flag("--to-prior", gb_to_prior, "emit the global prior of the spec");
  gb->add_option("--from-prior", gb_prior, "emit a spec whose prior is this file");

  std::string pl_config;
  auto* pl = app.add_subcommand("pipeline", "audit, identify and cross-validate a neural process");
  pl->add_option("--config", pl_config, "pipeline config JSON")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*audit) return cmd_audit(dataset_path);
    if (*ident) return cmd_identify(id_path);
    if (*sim) return cmd_simulate(sim_id, sim_config, sim_seed, sim_control, sim_threads, sim_out, sim_csv);
    if (*st) return cmd_stationary(st_spec, st_menu);
    if (*gb) {
      if (gb_to_prior == gb_prior.empty())
        return cmd_gibbs(gb_spec, gb_to_prior, gb_prior);
      std::cerr << "gibbs needs exactly one of --to-prior / --from-prior\n";
      return kExitIo;
    }
    if (*pl) return cmd_pipeline(pl_config);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitIo;
}
