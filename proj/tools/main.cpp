#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "run_config.hpp"
#include "tzlab/detector.hpp"
#include "tzlab/logicsim.hpp"
#include "tzlab/parallel.hpp"
#include "tzlab/probability.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace tzlab;
using namespace tzlab::cli;

namespace {

enum Exit : int { kOk = 0, kUsage = 1, kBounds = 2, kExhausted = 3, kFlagged = 4 };

// Stable file names inside the output directory.
constexpr const char* kProbCsv = "probability.csv";
constexpr const char* kCandCsv = "candidates.csv";
constexpr const char* kAnalyzeJson = "analyze.json";
constexpr const char* kAtpgPatterns = "atpg_patterns.txt";
constexpr const char* kAtpgJson = "atpg.json";
constexpr const char* kNPrime = "n_prime.bench";
constexpr const char* kSalvageJson = "salvage.json";
constexpr const char* kInfected = "n_infected.bench";
constexpr const char* kAttackSeq = "attacker_sequence.txt";
constexpr const char* kInjectJson = "injection.json";
constexpr const char* kAdditive = "n_additive.bench";
constexpr const char* kAdditiveJson = "injection_additive.json";
constexpr const char* kReportJson = "report.json";

struct Overrides {
  std::string config;
  std::string lib;
  std::string out;
  std::size_t jobs = 0;
  Seeds seeds;
  std::size_t workload_size = 0;
  double p_th = 0;
  std::string epsilon;
  double coverage = 0;
  std::uint64_t mc_samples = 0;
};

std::string out_path(const RunConfig& cfg, const std::string& file) { return (fs::path(cfg.out) / file).string(); }

void write_text(const std::string& path, const std::string& text) {
  fs::create_directories(fs::path(path).parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path);
  f << text;
}

std::string read_text(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_json(const RunConfig& cfg, const std::string& file, json j) {
  j["config"] = to_json(cfg);
  write_text(out_path(cfg, file), j.dump(2) + "\n");
}

Netlist load_netlist(const std::string& path) {
  if (path.empty()) throw Error("no netlist given (positional argument or \"netlist\" in --config)");
  return read_bench_file(path);
}

DefenderProfile load_defender(const RunConfig& cfg, const Netlist& n) {
  const auto path = out_path(cfg, kAtpgPatterns);
  if (!fs::exists(path)) throw Error("missing " + path + "; run `tzlab atpg` first");
  DefenderProfile d;
  TestPatternSet suite;
  suite.patterns = read_pattern_file(path, n.inputs().size());
  suite.seed = cfg.seeds.atpg;
  suite.target = cfg.coverage;
  d.suites.push_back(std::move(suite));
  d.margins = cfg.margins;
  return d;
}

std::string candidates_csv(const CandidateSet& cs) {
  std::string s = "net,tie_value,extremity\n";
  for (const auto& c : cs.c) {
    std::ostringstream line;
    line.precision(17);
    line << c.name << ',' << (c.tie_value ? 1 : 0) << ',' << c.extremity << '\n';
    s += line.str();
  }
  return s;
}

int cmd_analyze(const RunConfig& cfg, bool exact, bool montecarlo) {
  const auto n = load_netlist(cfg.netlist);
  const auto lib = load_library(cfg);
  SignalProbabilityMap map;
  std::vector<double> stderr_;
  std::string method = "propagate";
  if (exact) {
    map = exact_probs(n);
    method = "exact";
  } else if (montecarlo) {
    auto mc = monte_carlo_probs(n, cfg.montecarlo_samples, cfg.seeds.montecarlo);
    map = std::move(mc.map);
    stderr_ = std::move(mc.standard_error);
    method = "montecarlo";
  } else {
    map = propagate(n);
  }
  const auto cs = find_candidates(map, n, cfg.p_th);
  const auto cost = cost_report(n, lib, make_workload(cfg, n.inputs().size()));
  write_text(out_path(cfg, kProbCsv), probability_csv(n, map, method, stderr_));
  write_text(out_path(cfg, kCandCsv), candidates_csv(cs));
  write_json(cfg, kAnalyzeJson,
             {{"netlist", n.name()},
              {"inputs", n.inputs().size()},
              {"outputs", n.outputs().size()},
              {"gates", n.gate_count()},
              {"method", method},
              {"candidates", {{"P_th", cfg.p_th}, {"x", cs.x.size()}, {"y", cs.y.size()}, {"c", cs.c.size()}}},
              {"cost", json::parse(cost_json(cost))}});
  std::cout << n.name() << ": " << n.gate_count() << " gates, |C| = " << cs.c.size() << " at P_th " << cfg.p_th
            << ", area " << cost.area_ge() << " GE\n";
  return kOk;
}

int cmd_atpg(const RunConfig& cfg) {
  const auto n = load_netlist(cfg.netlist);
  const auto suite = generate_tests(n, {.target_coverage = cfg.coverage, .seed = cfg.seeds.atpg});
  write_pattern_file(suite.patterns, out_path(cfg, kAtpgPatterns));
  json undet = json::array();
  for (const auto& f : suite.undetectable) undet.push_back(describe(n, f));
  write_json(cfg, kAtpgJson,
             {{"netlist", n.name()},
              {"patterns", suite.patterns.count()},
              {"coverage", suite.coverage},
              {"target", suite.target},
              {"target_met", suite.target_met},
              {"draws", suite.draws},
              {"faults_total", suite.faults_total},
              {"faults_detectable", suite.faults_detectable},
              {"faults_detected", suite.faults_detected},
              {"undetectable", undet}});
  std::cout << suite.patterns.count() << " patterns, coverage " << suite.coverage << "\n";
  return kOk;
}

int cmd_salvage(const RunConfig& cfg) {
  const auto n = load_netlist(cfg.netlist);
  const auto def = load_defender(cfg, n);
  auto [np, r] = salvage(n, def, load_library(cfg), make_workload(cfg, n.inputs().size()), {.p_th = cfg.p_th});
  write_bench_file(np, out_path(cfg, kNPrime));
  write_json(cfg, kSalvageJson, json::parse(salvage_json(r)));
  std::cout << "E_g = " << r.eg() << " of |C| = " << r.candidates << ", area " << r.before.area_ge() << " -> "
            << r.after.area_ge() << " GE, verified " << (r.verified ? "yes" : "NO") << "\n";
  return r.verified ? kOk : kUsage;
}

int cmd_inject(const RunConfig& cfg, bool no_salvage) {
  const auto n = load_netlist(cfg.netlist);
  const auto def = load_defender(cfg, n);
  const auto lib = load_library(cfg);
  const auto w = make_workload(cfg, n.inputs().size());
  InjectOptions o;
  o.templates = cfg.templates;
  o.epsilon = cfg.resolved_epsilon();
  o.locations.safety_factor = cfg.p_e_safety_factor;
  o.seed = cfg.seeds.inject;
  o.trigger_trials = cfg.trigger_trials;
  Netlist host = n;
  if (no_salvage) {
    // Additive control: first template on the unsalvaged host, no budget.
    o.templates = {cfg.templates.front()};
    o.epsilon = Tolerance::uniform(std::numeric_limits<double>::infinity());
  } else {
    const auto path = out_path(cfg, kNPrime);
    if (!fs::exists(path)) throw Error("missing " + path + "; run `tzlab salvage` first");
    host = read_bench_file(path);
  }
  auto [nn, r] = inject(n, host, def, lib, w, o);
  auto j = json::parse(injection_json(r));
  j["mode"] = no_salvage ? "additive" : "zero-footprint";
  write_json(cfg, no_salvage ? kAdditiveJson : kInjectJson, j);
  if (!r.success) {
    std::cout << "exhausted: " << r.failure << " (" << r.tried.size() << " pairs tried)\n";
    return kExhausted;
  }
  write_bench_file(nn, out_path(cfg, no_salvage ? kAdditive : kInfected));
  if (!no_salvage) write_pattern_file(r.attacker_sequence, out_path(cfg, kAttackSeq));
  std::cout << describe(r.chosen->tmpl) << " at " << r.chosen->location.target << " after " << r.tried.size()
            << " rejections, " << r.dummy_gates.size() << " dummy gates; f_total " << r.delta.f_total << " f_area "
            << r.delta.f_area << "\n";
  return kOk;
}

int cmd_detect(const RunConfig& cfg, const std::string& golden_path, const std::string& dut_path, std::string tag) {
  const auto golden = load_netlist(golden_path);
  const auto dut = load_netlist(dut_path);
  const auto def = load_defender(cfg, golden);
  ScreenOptions so;
  so.margins = cfg.margins;
  so.noise_sigma = cfg.noise_sigma;
  so.seed = cfg.seeds.montecarlo;
  const auto v = evaluate_attack(golden, dut, def, load_library(cfg), make_workload(cfg, golden.inputs().size()),
                                 so, cfg.bespoke_patterns, cfg.seeds.bespoke);
  if (tag.empty()) tag = fs::path(dut_path).stem().string();
  auto j = json::parse(verdict_json(v));
  j["golden"] = golden_path;
  j["dut"] = dut_path;
  write_json(cfg, "verdict_" + tag + ".json", j);
  std::cout << tag << ": " << (v.flagged ? "FLAGGED" : "CLEAN");
  for (const auto& s : v.screens) {
    if (s.flagged) std::cout << " [" << to_string(s.metric) << " +" << s.excess * 100 << "%]";
  }
  if (!v.functional.pass) std::cout << " [functional: " << v.functional.mismatch_count << " mismatching patterns]";
  std::cout << "\n";
  return v.flagged ? kFlagged : kOk;
}

int cmd_report(const RunConfig& cfg) {
  if (!fs::is_directory(cfg.out)) throw Error("output directory " + cfg.out + " does not exist");
  json stages = json::object();
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(cfg.out)) {
    if (e.path().extension() == ".json" && e.path().filename() != kReportJson) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    auto j = json::parse(read_text(f.string()));
    j.erase("config");
    if (j.contains("log")) j["log"] = j["log"].size();
    if (j.contains("tried")) j["tried"] = j["tried"].size();
    stages[f.stem().string()] = j;
  }
  write_json(cfg, kReportJson, {{"stages", stages}});
  for (const auto& [name, j] : stages.items()) {
    std::cout << name << ":";
    if (j.contains("candidates") && j["candidates"].is_object()) std::cout << " |C|=" << j["candidates"]["c"];
    if (j.contains("coverage")) std::cout << " coverage=" << j["coverage"];
    if (j.contains("expendable_gates")) std::cout << " E_g=" << j["expendable_gates"]["count"];
    if (j.contains("success")) std::cout << " success=" << j["success"];
    if (j.contains("overall")) std::cout << " " << j["overall"].get<std::string>();
    if (j.contains("delta")) std::cout << " f_area=" << j["delta"]["fraction"]["d_area"];
    std::cout << "\n";
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tzlab: salvage-based zero-footprint trojan insertion and power/area screening"};
  app.require_subcommand(1);
  app.fallthrough();
  Overrides ov;
  auto* o_config = app.add_option("--config", ov.config, "JSON run configuration")->check(CLI::ExistingFile);
  auto* o_lib = app.add_option("--lib", ov.lib, "cell library JSON (default: built-in)")->check(CLI::ExistingFile);
  auto* o_out = app.add_option("--out", ov.out, "output directory (pipeline state)");
  auto* o_jobs = app.add_option("--jobs", ov.jobs, "worker cap, 0 = hardware concurrency");
  auto* o_sa = app.add_option("--seed-atpg", ov.seeds.atpg);
  auto* o_sb = app.add_option("--seed-bespoke", ov.seeds.bespoke);
  auto* o_sm = app.add_option("--seed-montecarlo", ov.seeds.montecarlo);
  auto* o_sw = app.add_option("--seed-workload", ov.seeds.workload);
  auto* o_si = app.add_option("--seed-inject", ov.seeds.inject);
  auto* o_ws = app.add_option("--workload-size", ov.workload_size, "patterns in the power workload");
  auto* o_pth = app.add_option("--p-th", ov.p_th, "near-constant threshold P_th");
  auto* o_eps = app.add_option("--epsilon", ov.epsilon, "fractional tolerance, or 'margins'");
  auto* o_cov = app.add_option("--coverage", ov.coverage, "ATPG target coverage");
  auto* o_mcs = app.add_option("--mc-samples", ov.mc_samples, "Monte Carlo samples");

  std::string netlist;
  bool exact = false;
  bool montecarlo = false;
  auto* analyze = app.add_subcommand("analyze", "signal probabilities, candidates and cost report");
  analyze->add_option("netlist", netlist);
  analyze->add_flag("--exact", exact, "exhaustive probabilities (at most 24 PIs)");
  analyze->add_flag("--montecarlo", montecarlo, "Monte Carlo probabilities");
  auto* atpg = app.add_subcommand("atpg", "defender stuck-at test patterns");
  atpg->add_option("netlist", netlist);
  auto* salv = app.add_subcommand("salvage", "remove expendable gates, writes N'");
  salv->add_option("netlist", netlist);
  bool no_salvage = false;
  std::uint64_t trials = 0;
  auto* inj = app.add_subcommand("inject", "insert a trojan into N' within epsilon of N, writes N''");
  inj->add_option("netlist", netlist);
  inj->add_flag("--no-salvage", no_salvage, "additive control: insert into N with no budget");
  auto* o_trials = inj->add_option("--trigger-trials", trials, "Monte Carlo sessions for P_ft");
  std::string golden;
  std::string dut;
  std::string tag;
  double noise = 0;
  auto* det = app.add_subcommand("detect", "functional and power/area screen of DUT against golden");
  det->add_option("golden", golden)->required();
  det->add_option("dut", dut)->required();
  det->add_option("--tag", tag, "verdict file suffix (default: DUT file stem)");
  auto* o_noise = det->add_option("--noise", noise, "relative Gaussian noise on measured power");
  auto* rep = app.add_subcommand("report", "summarise the reports in the output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    RunConfig cfg;
    if (*o_config) merge_json(cfg, json::parse(read_text(ov.config)));
    if (*o_lib) cfg.lib = ov.lib;
    if (*o_out) cfg.out = ov.out;
    if (*o_jobs) cfg.jobs = ov.jobs;
    if (*o_sa) cfg.seeds.atpg = ov.seeds.atpg;
    if (*o_sb) cfg.seeds.bespoke = ov.seeds.bespoke;
    if (*o_sm) cfg.seeds.montecarlo = ov.seeds.montecarlo;
    if (*o_sw) cfg.seeds.workload = ov.seeds.workload;
    if (*o_si) cfg.seeds.inject = ov.seeds.inject;
    // Route numeric flags through the same validation as the config file.
    json flags = json::object();
    if (*o_ws) flags["workload_size"] = ov.workload_size;
    if (*o_pth) flags["P_th"] = ov.p_th;
    if (*o_cov) flags["coverage"] = ov.coverage;
    if (*o_mcs) flags["montecarlo_samples"] = ov.mc_samples;
    if (*o_eps) {
      if (ov.epsilon == "margins") {
        flags["epsilon"] = "margins";
      } else {
        std::size_t used = 0;
        double e = 0;
        try {
          e = std::stod(ov.epsilon, &used);
        } catch (const std::exception&) {
          used = 0;
        }
        if (used != ov.epsilon.size() || e < 0) throw Error("--epsilon takes a non-negative number or 'margins'");
        flags["epsilon"] = e;
      }
    }
    if (*o_trials) flags["trigger_trials"] = trials;
    if (*o_noise) flags["noise_sigma"] = noise;
    merge_json(cfg, flags);
    if (!netlist.empty()) cfg.netlist = netlist;
    set_max_jobs(cfg.jobs);
    if (!*rep) fs::create_directories(cfg.out);

    if (*analyze) return cmd_analyze(cfg, exact, montecarlo);
    if (*atpg) return cmd_atpg(cfg);
    if (*salv) return cmd_salvage(cfg);
    if (*inj) return cmd_inject(cfg, no_salvage);
    if (*det) return cmd_detect(cfg, golden, dut, tag);
    if (*rep) return cmd_report(cfg);
  } catch (const BoundError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBounds;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
