#pragma once

#include <string>

#include <json.hpp>

#include "prefdisc/experiments.hpp"

namespace prefdisc {

using json = nlohmann::json;

// Dataset document:
// {"universe": [labels], "deadlines": [t...], "ordered"?: bool,
//  "tables": [{"t": 0|deadline, "menu": [labels], "probs"|"counts": {label: value}}...]}
// Tables must be homogeneous: all "probs" (exact) or all "counts" (empirical).
// Per-table probabilities must sum to 1 within 1e-9.
ChoiceDataset dataset_from_json(const json& doc);
json dataset_to_json(const ChoiceDataset& d);
ChoiceDataset load_dataset(const std::string& path);

// DDM document: {"universe"?: [labels], "v": {label: value}, "beta": r,
//  "zeta": [[a, b, value], ...]} storing only pairs with a before b in
// universe order; omitted pairs start unbiased.
DdmSpec ddm_from_json(const json& doc);
json ddm_to_json(const DdmSpec& spec);
DdmSpec load_ddm(const std::string& path);

// Prior document: {"pi": {label: p}} over a spec's universe.
std::vector<double> prior_from_json(const json& doc, const Universe& u);
json prior_to_json(const GibbsPrior& prior, const Universe& u);

json axiom_report_to_json(const AxiomReport& r);
json axiom_reports_to_json(const std::vector<AxiomReport>& rs);
json identified_to_json(const IdentifiedParams& p, const Universe& u);
json cross_validation_to_json(const CrossValidation& cv);

SimulationConfig simulation_config_from_json(const json& doc);
json simulation_config_to_json(const SimulationConfig& cfg);
json simulation_report_to_json(const SimulationReport& rep);
std::string simulation_report_to_csv(const SimulationReport& rep);

PipelineConfig pipeline_config_from_json(const json& doc);
json pipeline_report_to_json(const PipelineReport& rep, const Universe& u);

json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace prefdisc
