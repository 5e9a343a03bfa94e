#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tzlab/atpg.hpp"
#include "tzlab/costmodel.hpp"
#include "tzlab/netlist.hpp"

namespace tzlab {

struct Mismatch {
  std::size_t suite = 0;
  std::size_t pattern = 0;
  std::string output;
};

struct FunctionalResult {
  bool pass = true;
  std::size_t patterns = 0;
  /// First mismatches in suite, pattern, PO order; capped.
  std::vector<Mismatch> mismatches;
  std::size_t mismatch_count = 0;
};

/// Applies every defender suite from reset to both netlists and compares POs
/// at every step. Throws InterfaceError on differing PI/PO names.
FunctionalResult functional_test(const Netlist& golden, const Netlist& dut, const DefenderProfile& defender,
                                 std::size_t max_listed = 16);

enum class Metric : std::uint8_t { Total, Dynamic, Leakage, Area };
std::string_view to_string(Metric m);

struct ScreenResult {
  Metric metric = Metric::Total;
  double measured = 0;
  double golden = 0;
  /// (measured - golden) / golden; 0 when golden is 0.
  double excess = 0;
  double margin = 0;
  bool flagged = false;
};

struct ScreenOptions {
  PowerMargins margins;
  /// Relative Gaussian measurement noise on the DUT's power readings; off at 0.
  /// Area is a layout figure and is never perturbed.
  double noise_sigma = 0;
  std::uint64_t seed = 1;
};

/// One-sided screen: a metric is flagged when the DUT exceeds the golden
/// figure by more than its margin. Reports must share a workload.
std::vector<ScreenResult> power_screen(const CostReport& golden, const CostReport& dut,
                                       const ScreenOptions& options = {});

struct LuckyCatch {
  std::size_t patterns = 0;
  std::size_t mismatching = 0;
  bool fired = false;
  double frequency = 0;
};

struct DetectionVerdict {
  FunctionalResult functional;
  std::vector<ScreenResult> screens;
  std::optional<LuckyCatch> lucky_catch;
  /// Functional failure or any flagged screen; the lucky catch is reported
  /// separately and does not count.
  bool flagged = false;
};

DetectionVerdict detect(const Netlist& golden, const Netlist& dut, const DefenderProfile& defender,
                        const CellLibrary& lib, const Workload& workload, const ScreenOptions& options = {});

/// Runs `count` seeded random patterns, unknown to the attacker, as one
/// sequence from reset on both netlists; counts steps where a PO differs.
LuckyCatch lucky_catch(const Netlist& golden, const Netlist& dut, std::size_t count, std::uint64_t seed);

/// detect() plus a lucky-catch run with a 10,000-pattern bespoke suite.
DetectionVerdict evaluate_attack(const Netlist& golden, const Netlist& dut, const DefenderProfile& defender,
                                 const CellLibrary& lib, const Workload& workload,
                                 const ScreenOptions& options = {}, std::size_t bespoke_patterns = 10000,
                                 std::uint64_t bespoke_seed = 0xB35B0CE);

std::string verdict_json(const DetectionVerdict& v);

}  // namespace tzlab
