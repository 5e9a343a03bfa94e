#include "run_config.hpp"

#include <set>

namespace tzlab::cli {

using json = nlohmann::json;

namespace {

Tolerance tolerance_from(const json& j) {
  Tolerance t;
  t.total = j.value("total", t.total);
  t.dynamic = j.value("dynamic", t.dynamic);
  t.leakage = j.value("leakage", t.leakage);
  t.area = j.value("area", t.area);
  return t;
}

json tolerance_json(double total, double dynamic, double leakage, double area) {
  return {{"total", total}, {"dynamic", dynamic}, {"leakage", leakage}, {"area", area}};
}

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw Error(where + " must be a JSON object");
  for (const auto& [k, v] : j.items()) {
    if (!allowed.count(k)) throw Error("unknown key '" + k + "' in " + where);
  }
}

}  // namespace

Tolerance RunConfig::resolved_epsilon() const {
  if (epsilon_mode == "margins") return {margins.total, margins.dynamic, margins.leakage, margins.area};
  return epsilon;
}

TrojanTemplate parse_template(const json& j) {
  check_keys(j, {"kind", "k", "tap_arity"}, "template");
  TrojanTemplate t;
  const auto kind = j.value("kind", std::string("counter"));
  if (kind == "counter") {
    t.kind = TemplateKind::Counter;
  } else if (kind == "comparator") {
    t.kind = TemplateKind::Comparator;
  } else {
    throw Error("template kind must be 'counter' or 'comparator', got '" + kind + "'");
  }
  t.k = j.value("k", 3U);
  t.tap_arity = j.value("tap_arity", std::size_t{1});
  return t;
}

json template_json(const TrojanTemplate& t) {
  return {{"kind", t.kind == TemplateKind::Counter ? "counter" : "comparator"}, {"k", t.k}, {"tap_arity", t.tap_arity}};
}

void merge_json(RunConfig& cfg, const json& j) {
  check_keys(j,
             {"netlist", "lib", "out", "seeds", "workload_size", "coverage", "P_th", "epsilon", "margins",
              "p_e_safety_factor", "templates", "montecarlo_samples", "trigger_trials", "bespoke_patterns",
              "noise_sigma", "jobs"},
             "config");
  cfg.netlist = j.value("netlist", cfg.netlist);
  cfg.lib = j.value("lib", cfg.lib);
  cfg.out = j.value("out", cfg.out);
  if (j.contains("seeds")) {
    const auto& s = j["seeds"];
    check_keys(s, {"atpg", "bespoke", "montecarlo", "workload", "inject"}, "seeds");
    cfg.seeds.atpg = s.value("atpg", cfg.seeds.atpg);
    cfg.seeds.bespoke = s.value("bespoke", cfg.seeds.bespoke);
    cfg.seeds.montecarlo = s.value("montecarlo", cfg.seeds.montecarlo);
    cfg.seeds.workload = s.value("workload", cfg.seeds.workload);
    cfg.seeds.inject = s.value("inject", cfg.seeds.inject);
  }
  cfg.workload_size = j.value("workload_size", cfg.workload_size);
  cfg.coverage = j.value("coverage", cfg.coverage);
  cfg.p_th = j.value("P_th", cfg.p_th);
  if (j.contains("epsilon")) {
    const auto& e = j["epsilon"];
    if (e.is_number()) {
      cfg.epsilon_mode = "uniform";
      cfg.epsilon = Tolerance::uniform(e.get<double>());
    } else if (e.is_string() && e.get<std::string>() == "margins") {
      cfg.epsilon_mode = "margins";
    } else if (e.is_object()) {
      check_keys(e, {"total", "dynamic", "leakage", "area"}, "epsilon");
      cfg.epsilon_mode = "custom";
      cfg.epsilon = tolerance_from(e);
    } else {
      throw Error("epsilon must be a number, \"margins\" or an object");
    }
  }
  if (j.contains("margins")) {
    const auto& m = j["margins"];
    check_keys(m, {"total", "dynamic", "leakage", "area"}, "margins");
    cfg.margins.total = m.value("total", cfg.margins.total);
    cfg.margins.dynamic = m.value("dynamic", cfg.margins.dynamic);
    cfg.margins.leakage = m.value("leakage", cfg.margins.leakage);
    cfg.margins.area = m.value("area", cfg.margins.area);
  }
  cfg.p_e_safety_factor = j.value("p_e_safety_factor", cfg.p_e_safety_factor);
  if (j.contains("templates")) {
    cfg.templates.clear();
    for (const auto& t : j["templates"]) cfg.templates.push_back(parse_template(t));
    if (cfg.templates.empty()) throw Error("templates must not be empty");
  }
  cfg.montecarlo_samples = j.value("montecarlo_samples", cfg.montecarlo_samples);
  cfg.trigger_trials = j.value("trigger_trials", cfg.trigger_trials);
  cfg.bespoke_patterns = j.value("bespoke_patterns", cfg.bespoke_patterns);
  cfg.noise_sigma = j.value("noise_sigma", cfg.noise_sigma);
  cfg.jobs = j.value("jobs", cfg.jobs);

  if (!(cfg.p_th > 0.5 && cfg.p_th < 1)) throw Error("P_th must lie in (0.5, 1)");
  if (!(cfg.coverage > 0 && cfg.coverage <= 1)) throw Error("coverage must lie in (0, 1]");
  if (cfg.workload_size < 2) throw Error("workload_size must be at least 2");
}

json to_json(const RunConfig& cfg) {
  json templates = json::array();
  for (const auto& t : cfg.templates) templates.push_back(template_json(t));
  const auto eps = cfg.resolved_epsilon();
  return {{"netlist", cfg.netlist},
          {"lib", cfg.lib.empty() ? "builtin" : cfg.lib},
          {"out", cfg.out},
          {"seeds",
           {{"atpg", cfg.seeds.atpg},
            {"bespoke", cfg.seeds.bespoke},
            {"montecarlo", cfg.seeds.montecarlo},
            {"workload", cfg.seeds.workload},
            {"inject", cfg.seeds.inject}}},
          {"workload_size", cfg.workload_size},
          {"coverage", cfg.coverage},
          {"P_th", cfg.p_th},
          {"epsilon_mode", cfg.epsilon_mode},
          {"epsilon", tolerance_json(eps.total, eps.dynamic, eps.leakage, eps.area)},
          {"margins", tolerance_json(cfg.margins.total, cfg.margins.dynamic, cfg.margins.leakage, cfg.margins.area)},
          {"p_e_safety_factor", cfg.p_e_safety_factor},
          {"templates", templates},
          {"montecarlo_samples", cfg.montecarlo_samples},
          {"trigger_trials", cfg.trigger_trials},
          {"bespoke_patterns", cfg.bespoke_patterns},
          {"noise_sigma", cfg.noise_sigma},
          {"jobs", cfg.jobs}};
}

CellLibrary load_library(const RunConfig& cfg) {
  return cfg.lib.empty() ? CellLibrary::default_library() : CellLibrary::load(cfg.lib);
}

Workload make_workload(const RunConfig& cfg, std::size_t width) {
  return {"random-" + std::to_string(cfg.workload_size) + "-seed" + std::to_string(cfg.seeds.workload),
          PatternBlock::random(width, cfg.workload_size, cfg.seeds.workload)};
}

}  // namespace tzlab::cli
