#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tzlab/atpg.hpp"
#include "tzlab/attack.hpp"
#include "tzlab/costmodel.hpp"

namespace tzlab::cli {

struct Seeds {
  std::uint64_t atpg = 1;
  std::uint64_t bespoke = 0xB35B0CE;
  std::uint64_t montecarlo = 7;
  std::uint64_t workload = 11;
  std::uint64_t inject = 1;
};

/// Everything a stage needs; every field has a default and is echoed, after
/// resolution, into each JSON report.
struct RunConfig {
  std::string netlist;
  std::string lib;  // empty: built-in synthetic library
  std::string out = "tzlab_out";
  Seeds seeds;
  std::size_t workload_size = 4096;
  double coverage = 0.99;
  double p_th = 0.992;
  /// "uniform" (epsilon_value on every metric), "margins" or "custom".
  std::string epsilon_mode = "uniform";
  Tolerance epsilon;
  PowerMargins margins;
  double p_e_safety_factor = 10;
  std::vector<TrojanTemplate> templates = InjectOptions{}.templates;
  std::uint64_t montecarlo_samples = 100000;
  std::uint64_t trigger_trials = 0;
  std::size_t bespoke_patterns = 10000;
  double noise_sigma = 0;
  std::size_t jobs = 0;

  /// Tolerance actually used by inject.
  Tolerance resolved_epsilon() const;
};

/// Keys absent from `j` keep their current value; unknown keys are an error.
void merge_json(RunConfig& cfg, const nlohmann::json& j);
nlohmann::json to_json(const RunConfig& cfg);

CellLibrary load_library(const RunConfig& cfg);
Workload make_workload(const RunConfig& cfg, std::size_t width);

TrojanTemplate parse_template(const nlohmann::json& j);
nlohmann::json template_json(const TrojanTemplate& t);

}  // namespace tzlab::cli
