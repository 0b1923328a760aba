#include "prefdisc/json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace prefdisc {

namespace {

[[noreturn]] void schema_fail(const std::string& where, const std::string& what) {
  fail(errc::schema_error, where + ": " + what);
}

const json& require(const json& doc, const char* key, const std::string& where) {
  auto it = doc.find(key);
  if (it == doc.end()) schema_fail(where, std::string("missing field '") + key + "'");
  return *it;
}

double require_number(const json& doc, const char* key, const std::string& where) {
  const json& v = require(doc, key, where);
  if (!v.is_number()) schema_fail(where + "/" + key, "expected a number");
  return v.get<double>();
}

std::vector<std::string> require_string_array(const json& v, const std::string& where) {
  if (!v.is_array()) schema_fail(where, "expected an array of strings");
  std::vector<std::string> out;
  for (const auto& x : v) {
    if (!x.is_string()) schema_fail(where, "expected an array of strings");
    out.push_back(x.get<std::string>());
  }
  return out;
}

}  // namespace

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::io_error, "cannot open '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    fail(errc::schema_error, "'" + path + "': " + e.what());
  }
  return doc;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) fail(errc::io_error, "cannot open '" + path + "' for writing");
  out << text;
  if (!out) fail(errc::io_error, "write to '" + path + "' failed");
}

ChoiceDataset dataset_from_json(const json& doc) {
  const std::string where = "/";
  Universe universe(require_string_array(require(doc, "universe", where), "/universe"));

  const json& jd = require(doc, "deadlines", where);
  if (!jd.is_array() || jd.empty()) schema_fail("/deadlines", "expected a nonempty array");
  std::vector<double> deadlines;
  for (const auto& x : jd) {
    if (!x.is_number()) schema_fail("/deadlines", "expected numbers");
    deadlines.push_back(x.get<double>());
  }
  const bool ordered = doc.value("ordered", true);
  TimeGrid grid(deadlines, ordered);

  const json& jt = require(doc, "tables", where);
  if (!jt.is_array() || jt.empty()) schema_fail("/tables", "expected a nonempty array");

  int n_probs = 0, n_counts = 0;
  for (const auto& t : jt) {
    if (t.contains("probs")) ++n_probs;
    if (t.contains("counts")) ++n_counts;
  }
  if (n_probs + n_counts != static_cast<int>(jt.size()) || (n_probs > 0 && n_counts > 0))
    schema_fail("/tables", "each table needs exactly one of 'probs'/'counts', uniformly");

  ChoiceDataset d(universe, grid,
                  n_counts > 0 ? ChoiceDataset::Kind::empirical : ChoiceDataset::Kind::exact);

  for (std::size_t i = 0; i < jt.size(); ++i) {
    const std::string here = "/tables/" + std::to_string(i);
    const json& tab = jt[i];
    const double t = require_number(tab, "t", here);
    if (t != 0.0 && !grid.contains(t)) schema_fail(here + "/t", "not 0 and not a deadline");
    const auto menu_labels = require_string_array(require(tab, "menu", here), here + "/menu");
    Menu menu = [&] {
      try {
        return Menu::of(universe, menu_labels);
      } catch (const Error& e) {
        schema_fail(here + "/menu", e.what());
      }
    }();

    const char* key = n_counts > 0 ? "counts" : "probs";
    const json& cells = require(tab, key, here);
    if (!cells.is_object()) schema_fail(here + "/" + key, "expected an object keyed by label");
    if (cells.size() != menu_labels.size())
      schema_fail(here + "/" + key, "must have exactly one entry per menu member");
    std::vector<double> values(menu.members.size());
    for (const auto& [label, v] : cells.items()) {
      if (!universe.contains(label) || !menu.contains(universe.index(label)))
        schema_fail(here + "/" + key, "label '" + label + "' is not in the menu");
      if (!v.is_number()) schema_fail(here + "/" + key + "/" + label, "expected a number");
      values[menu.position(universe.index(label))] = v.get<double>();
    }

    try {
      if (n_counts > 0) {
        d.add_counts(t, menu, std::move(values));
      } else {
        double sum = 0;
        for (double x : values) sum += x;
        if (std::abs(sum - 1.0) > 1e-9)
          schema_fail(here + "/probs", "probabilities sum to " + std::to_string(sum));
        // Normalize residual rounding from the file before the strict ctor.
        for (double& x : values) x /= sum;
        d.add_table(t, menu, std::move(values));
      }
    } catch (const Error& e) {
      if (e.code() == errc::schema_error) throw;
      schema_fail(here, e.what());
    }
  }
  return d;
}

json dataset_to_json(const ChoiceDataset& d) {
  json doc;
  doc["universe"] = d.universe().labels();
  doc["deadlines"] = d.grid().deadlines;
  doc["ordered"] = d.grid().ordered;
  json tables = json::array();
  for (const auto& [key, tab] : d.tables()) {
    json t;
    t["t"] = key.first;
    json menu = json::array();
    for (int a : key.second) menu.push_back(d.universe().label(a));
    t["menu"] = menu;
    json cells;
    for (std::size_t i = 0; i < key.second.size(); ++i) {
      const std::string& label = d.universe().label(key.second[i]);
      if (d.kind() == ChoiceDataset::Kind::empirical) cells[label] = tab.counts[i];
      else cells[label] = tab.dist.probs[i];
    }
    t[d.kind() == ChoiceDataset::Kind::empirical ? "counts" : "probs"] = cells;
    tables.push_back(t);
  }
  doc["tables"] = tables;
  return doc;
}

ChoiceDataset load_dataset(const std::string& path) { return dataset_from_json(load_json_file(path)); }

DdmSpec ddm_from_json(const json& doc) {
  const json& jv = require(doc, "v", "/");
  if (!jv.is_object() || jv.size() < 2) schema_fail("/v", "expected an object with >= 2 labels");

  std::vector<std::string> labels;
  if (doc.contains("universe")) {
    labels = require_string_array(doc["universe"], "/universe");
  } else {
    for (const auto& [label, v] : jv.items()) labels.push_back(label);  // sorted by key
  }
  Universe universe(labels);
  std::vector<double> v(universe.size());
  if (jv.size() != labels.size()) schema_fail("/v", "must cover exactly the universe");
  for (const auto& [label, val] : jv.items()) {
    if (!universe.contains(label)) schema_fail("/v", "label '" + label + "' not in universe");
    if (!val.is_number()) schema_fail("/v/" + label, "expected a number");
    v[universe.index(label)] = val.get<double>();
  }
  const double beta = require_number(doc, "beta", "/");

  std::vector<std::tuple<int, int, double>> entries;
  if (doc.contains("zeta")) {
    const json& jz = doc["zeta"];
    if (!jz.is_array()) schema_fail("/zeta", "expected an array of [a, b, value]");
    for (std::size_t i = 0; i < jz.size(); ++i) {
      const std::string here = "/zeta/" + std::to_string(i);
      const json& e = jz[i];
      if (!e.is_array() || e.size() != 3 || !e[0].is_string() || !e[1].is_string() ||
          !e[2].is_number())
        schema_fail(here, "expected [label, label, value]");
      const std::string la = e[0].get<std::string>(), lb = e[1].get<std::string>();
      if (!universe.contains(la) || !universe.contains(lb))
        schema_fail(here, "labels must be in the universe");
      const int a = universe.index(la), b = universe.index(lb);
      if (a >= b) schema_fail(here, "store each pair once, first label before second");
      entries.emplace_back(a, b, e[2].get<double>());
    }
  }
  try {
    return DdmSpec::with_zeta(std::move(universe), std::move(v), beta, entries);
  } catch (const Error& e) {
    schema_fail("/", e.what());
  }
}

json ddm_to_json(const DdmSpec& spec) {
  json doc;
  doc["universe"] = spec.universe().labels();
  json v;
  for (int i = 0; i < spec.universe().size(); ++i) v[spec.universe().label(i)] = spec.v()[i];
  doc["v"] = v;
  doc["beta"] = spec.beta();
  json zeta = json::array();
  for (int a = 0; a < spec.universe().size(); ++a)
    for (int b = a + 1; b < spec.universe().size(); ++b)
      if (spec.zeta(a, b) != 0.0)
        zeta.push_back(json::array(
            {spec.universe().label(a), spec.universe().label(b), spec.zeta(a, b)}));
  doc["zeta"] = zeta;
  return doc;
}

DdmSpec load_ddm(const std::string& path) { return ddm_from_json(load_json_file(path)); }

std::vector<double> prior_from_json(const json& doc, const Universe& u) {
  const json& jp = require(doc, "pi", "/");
  if (!jp.is_object() || jp.size() != static_cast<std::size_t>(u.size()))
    schema_fail("/pi", "expected one entry per universe label");
  std::vector<double> pi(u.size());
  double sum = 0;
  for (const auto& [label, v] : jp.items()) {
    if (!u.contains(label)) schema_fail("/pi", "unknown label '" + label + "'");
    if (!v.is_number()) schema_fail("/pi/" + label, "expected a number");
    pi[u.index(label)] = v.get<double>();
    sum += pi[u.index(label)];
  }
  if (std::abs(sum - 1.0) > 1e-9) schema_fail("/pi", "must sum to 1");
  return pi;
}

json prior_to_json(const GibbsPrior& prior, const Universe& u) {
  json pi;
  for (std::size_t i = 0; i < prior.probs.size(); ++i)
    pi[u.label(prior.menu.members[i])] = prior.probs[i];
  return json{{"pi", pi}};
}

namespace {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    default: return "not-applicable";
  }
}

}  // namespace

json axiom_report_to_json(const AxiomReport& r) {
  json doc;
  doc["axiom"] = r.axiom;
  doc["verdict"] = verdict_name(r.verdict);
  doc["tolerance"] = r.tolerance;
  json ws = json::array();
  for (const auto& w : r.witnesses) {
    json jw;
    jw["t"] = w.t;
    jw["s"] = w.s;
    jw["alternatives"] = w.alts;
    jw["lhs"] = w.lhs;
    jw["rhs"] = w.rhs;
    if (!w.note.empty()) jw["note"] = w.note;
    ws.push_back(jw);
  }
  doc["witnesses"] = ws;
  if (!r.warnings.empty()) doc["warnings"] = r.warnings;
  if (!r.note.empty()) doc["note"] = r.note;
  if (!r.details.empty()) {
    json det;
    for (const auto& [k, v] : r.details) det[k] = v;
    doc["details"] = det;
  }
  return doc;
}

json axiom_reports_to_json(const std::vector<AxiomReport>& rs) {
  json arr = json::array();
  bool all = true;
  for (const auto& r : rs) {
    arr.push_back(axiom_report_to_json(r));
    all = all && r.passed();
  }
  return json{{"version", kVersion}, {"reports", arr}, {"all_pass", all}};
}

json identified_to_json(const IdentifiedParams& p, const Universe& u) {
  json doc;
  doc["version"] = kVersion;
  doc["constant"] = p.constant;
  json ju, ja;
  for (int i = 0; i < u.size(); ++i) {
    ju[u.label(i)] = p.params.u[i];
    ja[u.label(i)] = p.params.alpha[i];
  }
  doc["u"] = ju;
  doc["alpha"] = ja;
  if (!p.constant) {
    json jl;
    for (int i = 0; i < p.params.grid.size(); ++i)
      jl.push_back(json::array({p.params.grid.deadlines[i], p.params.lambda[i]}));
    doc["lambda"] = jl;
    doc["anchor"] = json{{"a", u.label(p.anchor.a)}, {"b", u.label(p.anchor.b)}, {"t", p.anchor.t}};
  }
  return doc;
}

json cross_validation_to_json(const CrossValidation& cv) {
  return json{{"equivalent", cv.equivalent}, {"j", cv.j},
              {"k", cv.k},                   {"h", cv.h},
              {"max_residual", std::isfinite(cv.max_residual) ? cv.max_residual : 1e308}};
}

SimulationConfig simulation_config_from_json(const json& doc) {
  SimulationConfig cfg;
  if (doc.contains("labels")) {
    cfg.labels = require_string_array(doc["labels"], "/labels");
  } else {
    const int n = static_cast<int>(require_number(doc, "n", "/"));
    for (int i = 0; i < n; ++i) cfg.labels.push_back(std::to_string(i));
  }

  const json& jv = require(doc, "v", "/");
  if (jv.is_string()) {
    const std::string rule = jv.get<std::string>();
    if (rule == "linear") cfg.v_rule = SimulationConfig::VRule::linear;
    else if (rule == "vee") cfg.v_rule = SimulationConfig::VRule::vee;
    else schema_fail("/v", "unknown rule '" + rule + "' (use \"linear\", \"vee\" or a map)");
  } else if (jv.is_object()) {
    cfg.v_rule = SimulationConfig::VRule::explicit_map;
    cfg.v_values.assign(cfg.labels.size(), 0.0);
    Universe u(cfg.labels);
    if (jv.size() != cfg.labels.size()) schema_fail("/v", "must cover exactly the labels");
    for (const auto& [label, v] : jv.items()) {
      if (!u.contains(label)) schema_fail("/v", "unknown label '" + label + "'");
      cfg.v_values[u.index(label)] = v.get<double>();
    }
  } else {
    schema_fail("/v", "expected a rule name or a map");
  }

  cfg.beta = require_number(doc, "beta", "/");

  if (doc.contains("zeta")) {
    const json& jz = doc["zeta"];
    if (jz.is_string() && jz.get<std::string>() == "zero") {
      cfg.zeta_source = SimulationConfig::ZetaSource::zero;
    } else if (jz.is_object() && jz.contains("prior")) {
      cfg.zeta_source = SimulationConfig::ZetaSource::from_prior;
      Universe u(cfg.labels);
      cfg.zeta_prior = prior_from_json(json{{"pi", jz["prior"]}}, u);
    } else {
      schema_fail("/zeta", "expected \"zero\" or {\"prior\": {...}}");
    }
  }

  if (doc.contains("exploration")) {
    const json& je = doc["exploration"];
    const std::string topo = require(je, "topology", "/exploration").get<std::string>();
    if (topo == "uniform") {
      cfg.exploration.topology = ExplorationSpec::Topology::uniform;
    } else if (topo == "graph") {
      cfg.exploration.topology = ExplorationSpec::Topology::graph;
      cfg.exploration.rho = require_number(je, "rho", "/exploration");
      const json& edges = require(je, "edges", "/exploration");
      Universe u(cfg.labels);
      for (const auto& e : edges) {
        if (!e.is_array() || e.size() != 2) schema_fail("/exploration/edges", "expected pairs");
        cfg.exploration.edges.emplace_back(u.index(e[0].get<std::string>()),
                                           u.index(e[1].get<std::string>()));
      }
    } else {
      schema_fail("/exploration/topology", "expected \"uniform\" or \"graph\"");
    }
  }

  if (doc.contains("mu") && !doc["mu"].is_string()) {
    Universe u(cfg.labels);
    cfg.mu = prior_from_json(json{{"pi", doc["mu"]}}, u);
  }

  cfg.deadline = require_number(doc, "deadline", "/");
  cfg.replications = static_cast<std::uint64_t>(doc.value("replications", 10000.0));
  cfg.seed = static_cast<std::uint64_t>(doc.value("seed", 0.0));
  cfg.dt = doc.value("dt", 1e-4);
  const std::string mode = doc.value("mode", std::string("algorithm"));
  if (mode == "algorithm") cfg.mode = SimulationConfig::Mode::algorithm;
  else if (mode == "control") cfg.mode = SimulationConfig::Mode::control;
  else schema_fail("/mode", "expected \"algorithm\" or \"control\"");
  return cfg;
}

json simulation_config_to_json(const SimulationConfig& cfg) {
  json doc;
  doc["labels"] = cfg.labels;
  switch (cfg.v_rule) {
    case SimulationConfig::VRule::linear: doc["v"] = "linear"; break;
    case SimulationConfig::VRule::vee: doc["v"] = "vee"; break;
    case SimulationConfig::VRule::explicit_map: {
      json jv;
      for (std::size_t i = 0; i < cfg.labels.size(); ++i) jv[cfg.labels[i]] = cfg.v_values[i];
      doc["v"] = jv;
      break;
    }
  }
  doc["beta"] = cfg.beta;
  if (cfg.zeta_source == SimulationConfig::ZetaSource::zero) {
    doc["zeta"] = "zero";
  } else {
    json prior;
    for (std::size_t i = 0; i < cfg.labels.size(); ++i) prior[cfg.labels[i]] = cfg.zeta_prior[i];
    doc["zeta"] = json{{"prior", prior}};
  }
  if (cfg.exploration.topology == ExplorationSpec::Topology::uniform) {
    doc["exploration"] = json{{"topology", "uniform"}};
  } else {
    json edges = json::array();
    for (const auto& [a, b] : cfg.exploration.edges)
      edges.push_back(json::array({cfg.labels[a], cfg.labels[b]}));
    doc["exploration"] = json{{"topology", "graph"}, {"rho", cfg.exploration.rho}, {"edges", edges}};
  }
  if (!cfg.mu.empty()) {
    json mu;
    for (std::size_t i = 0; i < cfg.labels.size(); ++i) mu[cfg.labels[i]] = cfg.mu[i];
    doc["mu"] = mu;
  } else {
    doc["mu"] = "uniform";
  }
  doc["deadline"] = cfg.deadline;
  doc["replications"] = cfg.replications;
  doc["seed"] = cfg.seed;
  doc["dt"] = cfg.dt;
  doc["mode"] = cfg.mode == SimulationConfig::Mode::algorithm ? "algorithm" : "control";
  return doc;
}

json simulation_report_to_json(const SimulationReport& rep) {
  json doc;
  doc["version"] = rep.version;
  doc["config"] = simulation_config_to_json(rep.config);
  doc["seed"] = rep.config.seed;
  json counts, empirical, target;
  for (std::size_t i = 0; i < rep.counts.size(); ++i) {
    const std::string& label = rep.config.labels[i];
    counts[label] = rep.counts[i];
    empirical[label] = rep.empirical[i];
    target[label] = rep.target[i];
  }
  doc["counts"] = counts;
  doc["empirical"] = empirical;
  doc["target"] = target;
  doc["tv"] = rep.tv;
  doc["chi2"] = rep.chi2;
  doc["iterations"] = json{{"mean", rep.mean_iterations}, {"median", rep.median_iterations}};
  doc["mean_rt_per_comparison"] = rep.mean_rt;
  doc["total_comparisons"] = rep.total_comparisons;
  return doc;
}

std::string simulation_report_to_csv(const SimulationReport& rep) {
  std::ostringstream os;
  os.precision(17);
  os << "alternative,count,empirical,target\n";
  for (std::size_t i = 0; i < rep.counts.size(); ++i)
    os << rep.config.labels[i] << "," << rep.counts[i] << "," << rep.empirical[i] << ","
       << rep.target[i] << "\n";
  return os.str();
}

PipelineConfig pipeline_config_from_json(const json& doc) {
  PipelineConfig cfg;
  if (doc.contains("labels")) {
    cfg.labels = require_string_array(doc["labels"], "/labels");
  } else {
    const int n = static_cast<int>(require_number(doc, "n", "/"));
    for (int i = 0; i < n; ++i) cfg.labels.push_back(std::to_string(i));
  }
  Universe u(cfg.labels);

  const json& jv = require(doc, "v", "/");
  if (!jv.is_object() || jv.size() != cfg.labels.size())
    schema_fail("/v", "expected a map covering exactly the labels");
  cfg.v.assign(cfg.labels.size(), 0.0);
  for (const auto& [label, v] : jv.items()) {
    if (!u.contains(label)) schema_fail("/v", "unknown label '" + label + "'");
    cfg.v[u.index(label)] = v.get<double>();
  }

  if (doc.contains("mu") && !doc["mu"].is_string())
    cfg.mu = prior_from_json(json{{"pi", doc["mu"]}}, u);

  const json& jd = require(doc, "deadlines", "/");
  std::vector<double> deadlines;
  for (const auto& x : jd) deadlines.push_back(x.get<double>());
  cfg.grid = TimeGrid(deadlines, doc.value("ordered", true));

  const json& jb = require(doc, "betas", "/");
  for (const auto& x : jb) cfg.beta.push_back(x.get<double>());
  if (cfg.beta.size() != cfg.grid.deadlines.size())
    schema_fail("/betas", "must align with /deadlines");

  if (doc.contains("menus")) {
    for (const auto& m : doc["menus"])
      cfg.menus.push_back(Menu::of(u, require_string_array(m, "/menus")));
  }
  return cfg;
}

json pipeline_report_to_json(const PipelineReport& rep, const Universe& u) {
  json doc;
  doc["version"] = kVersion;
  doc["axioms"] = axiom_reports_to_json(rep.axioms);
  doc["axioms_pass"] = rep.axioms_pass;
  if (rep.axioms_pass) {
    doc["identified"] = identified_to_json(rep.identified, u);
    doc["cross_validation"] = cross_validation_to_json(rep.cross);
  }
  return doc;
}

}  // namespace prefdisc
