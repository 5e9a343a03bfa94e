#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tzlab/netlist.hpp"
#include "tzlab/patterns.hpp"

namespace tzlab {

enum class FaultSite : std::uint8_t { Stem, Branch };

/// Single stuck-at fault. A stem fault forces `net` everywhere; a branch fault
/// forces only input pin `pin` of gate `gate` (which reads `net`).
struct Fault {
  NetId net = 0;
  bool stuck_value = false;
  FaultSite site = FaultSite::Stem;
  std::uint32_t gate = 0;
  std::uint32_t pin = 0;

  friend bool operator==(const Fault&, const Fault&) = default;
};

std::string describe(const Netlist& netlist, const Fault& fault);

/// Stuck-at-0/1 on every PI and gate output, plus on every gate-input branch
/// of nets whose fanout exceeds one. A net read once (and not a PO) carries
/// only its stem faults. Ordered by net, stems before branches.
std::vector<Fault> enumerate_faults(const Netlist& netlist);

/// Classic structural equivalence collapsing: for AND/NAND input s-a-0, for
/// OR/NOR input s-a-1, and both polarities through NOT/BUFF merge with the
/// implied output fault. Keeps the first member of each class.
std::vector<Fault> collapse_equivalent_faults(const Netlist& netlist, std::span<const Fault> faults);

struct FaultSimResult {
  std::size_t patterns = 0;
  std::size_t words = 0;
  /// Row per fault, bit t set when pattern t detects it.
  std::vector<std::uint64_t> detections;
  std::size_t detected = 0;
  double coverage = 0;

  std::span<const std::uint64_t> row(std::size_t fault) const {
    return {detections.data() + fault * words, words};
  }
  bool detects(std::size_t fault, std::size_t pattern) const {
    return (detections[fault * words + pattern / kWordBits] >> (pattern % kWordBits)) & 1U;
  }
  bool is_detected(std::size_t fault) const;
  /// Index of the first detecting pattern.
  std::optional<std::size_t> first_detection(std::size_t fault) const;
};

/// Bit-parallel over patterns, one fault at a time over its fan-out cone.
/// Combinational netlists only.
FaultSimResult fault_simulate(const Netlist& netlist, const PatternBlock& patterns,
                              std::span<const Fault> faults);

enum class SuiteKind : std::uint8_t { StuckAtRandom, BespokeRandom };
std::string_view to_string(SuiteKind kind);

struct TestPatternSet {
  PatternBlock patterns;
  SuiteKind kind = SuiteKind::StuckAtRandom;
  std::uint64_t seed = 0;
  /// Detected / detectable faults.
  double coverage = 0;
  double target = 0;
  bool target_met = false;
  std::size_t draws = 0;
  std::size_t faults_total = 0;
  std::size_t faults_detectable = 0;
  std::size_t faults_detected = 0;
  /// Faults no examined pattern detected (presumed redundant).
  std::vector<Fault> undetectable;
};

struct GenerationOptions {
  double target_coverage = 0.99;
  std::uint64_t seed = 1;
  std::size_t budget = 50000;
  bool collapse = true;
  /// Circuits with at most this many PIs get their detectable set by
  /// exhaustive fault simulation instead of the random budget.
  std::size_t exhaustive_inputs = 16;
};

/// Seeded random generation with the greedy keep rule: a drawn pattern is
/// kept only if it detects a fault no earlier kept pattern detects. Stops at
/// the target fraction of detectable faults or when the budget is spent.
TestPatternSet generate_tests(const Netlist& netlist, const GenerationOptions& options = {});

/// Plain seeded random suite, unknown to the attacker.
TestPatternSet bespoke_suite(const Netlist& netlist, std::size_t count, std::uint64_t seed);

/// Fractional thresholds, (dut - golden) / golden.
struct PowerMargins {
  double total = 0.005;
  double dynamic = 0.00265;
  double leakage = 0.005;
  double area = 0.0058;
};

struct DefenderProfile {
  std::vector<TestPatternSet> suites;
  PowerMargins margins;

  std::size_t total_patterns() const;
};

/// CSV `net,site,stuck_value,detected_by`.
std::string fault_csv(const Netlist& netlist, std::span<const Fault> faults,
                      const FaultSimResult& result);

}  // namespace tzlab
