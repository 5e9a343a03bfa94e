#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tzlab/atpg.hpp"
#include "tzlab/costmodel.hpp"
#include "tzlab/netlist.hpp"
#include "tzlab/patterns.hpp"
#include "tzlab/probability.hpp"

namespace tzlab {

// ---- salvage -------------------------------------------------------------

struct SalvageStep {
  std::string net;
  bool tie_value = false;
  double extremity = 0;
  bool accepted = false;
  /// Suite index and pattern on failure, empty when accepted.
  std::string reason;
  /// Gates removed by the dead sweep of this step (not counting the tied driver).
  std::vector<std::string> swept;
  /// Disagreement probability of this step's replacement over all inputs,
  /// when the host is small enough for exhaustive enumeration.
  std::optional<double> p_u;
};

struct SalvageReport {
  double p_th = 0;
  std::size_t candidates = 0;
  /// Output names of every original gate absent from N' or now a constant.
  std::vector<std::string> expendable;
  std::vector<SalvageStep> log;
  CostReport before;
  CostReport after;
  DeltaReport delta;
  /// Independent post-hoc re-run of every suite against the original.
  bool verified = false;

  std::size_t eg() const { return expendable.size(); }
  std::size_t accepted() const;
};

struct SalvageOptions {
  double p_th = 0.992;
  bool compute_p_u = true;
};

/// Greedy constant replacement of near-constant nets, kept only when every
/// defender suite still passes. Throws Error when `n` is sequential.
std::pair<Netlist, SalvageReport> salvage(const Netlist& n, const DefenderProfile& defender,
                                          const CellLibrary& lib, const Workload& workload,
                                          const SalvageOptions& options = {});

/// Every suite of the profile applied to `dut` and `golden`, each from reset.
/// Returns the index of the first failing suite.
std::optional<std::size_t> first_failing_suite(const Netlist& golden, const Netlist& dut,
                                               const DefenderProfile& defender);

/// N_u / 2^n. Throws Error when N_u > 2^n or n > 62.
double untargeted_prob(std::uint64_t n_u, std::size_t n_inputs);

// ---- trojan templates ------------------------------------------------------

enum class TemplateKind : std::uint8_t { Counter, Comparator };

struct TrojanTemplate {
  TemplateKind kind = TemplateKind::Counter;
  /// Counter width, 2..8; ignored for comparators.
  unsigned k = 3;
  std::size_t tap_arity = 1;

  /// Rare events needed before the payload fires: 2^k - 1, or 1 for a comparator.
  std::uint64_t threshold() const;
  friend bool operator==(const TrojanTemplate&, const TrojanTemplate&) = default;
};

std::string describe(const TrojanTemplate& t);

/// Instantiated body. Ports: tap inputs t0..t{a-1}, payload_in `pin`,
/// payload_out `pout`.
struct TrojanCircuit {
  Subcircuit sub;
  /// Body net that is 1 on a rare event (may be a tap port itself).
  std::string event_net;
  /// Body net driving the payload MUX select.
  std::string trigger_net;
};

/// `rare_values[i]` is the tap value that counts as an event (default all 1).
/// Throws Error on an unsupported width or arity.
TrojanCircuit instantiate_ht(const TrojanTemplate& t, const std::vector<bool>& rare_values = {});

// ---- locations ---------------------------------------------------------------

struct Location {
  std::vector<std::string> taps;
  std::vector<bool> rare_values;
  std::string target;
  /// Propagated probability of one rare event.
  double p_event = 0;
};

struct LocationOptions {
  /// p_e_max = threshold / (safety_factor * defender pattern count).
  double safety_factor = 10;
  /// The rarest gate-output nets considered as taps.
  std::size_t tap_pool = 16;
  std::size_t max_locations = 4096;
};

double p_event_max(const TrojanTemplate& t, std::size_t defender_patterns, double safety_factor = 10);

/// (taps, target) pairs ordered by p_event ascending, then tap names, then
/// target name. Targets are non-constant gate outputs with a structural path
/// to a PO whose fan-out holds none of the taps.
std::vector<Location> enumerate_locations(const Netlist& n_prime, const SignalProbabilityMap& probs,
                                          const DefenderProfile& defender, const TrojanTemplate& t,
                                          const LocationOptions& options = {});

// ---- injection -------------------------------------------------------------

/// Per-metric fractional tolerance on |N'' - N| / N.
struct Tolerance {
  double total = 0.01;
  double dynamic = 0.01;
  double leakage = 0.01;
  double area = 0.01;

  static Tolerance uniform(double eps) { return {eps, eps, eps, eps}; }
};

struct TrojanInstance {
  TrojanTemplate tmpl;
  Location location;
  std::size_t template_index = 0;
  std::size_t location_index = 0;
  /// Host names of the HT's event and trigger nets and its DFF outputs.
  std::string event_net;
  std::string trigger_net;
  std::vector<std::string> gates;
};

struct TriggerEstimate {
  double p_event = 0;
  std::size_t patterns = 0;
  std::uint64_t threshold = 0;
  /// P[Binomial(patterns, p_event) >= threshold].
  double analytic = 0;
  std::uint64_t trials = 0;
  std::uint64_t fires = 0;
  double monte_carlo = 0;
  /// 95% Wilson interval on the Monte Carlo rate.
  double ci_low = 0;
  double ci_high = 0;
};

struct TriedLocation {
  std::size_t template_index = 0;
  std::size_t location_index = 0;
  std::string taps;
  std::string target;
  /// functional-fail | trigger-unreachable | budget-exceeded | padding-insufficient
  std::string reason;
};

struct InjectionReport {
  bool success = false;
  std::optional<TrojanInstance> chosen;
  std::vector<TriedLocation> tried;
  std::vector<std::string> dummy_gates;
  CostReport reference;
  CostReport infected;
  /// N vs N''.
  DeltaReport delta;
  /// Sequence on which N'' differs from N at `flipped_po` on its last step.
  PatternBlock attacker_sequence;
  std::size_t flipped_po = 0;
  std::optional<TriggerEstimate> p_ft;
  std::string failure;
};

struct InjectOptions {
  /// Tried in order; comparators are the cheap fallback when the budget is small.
  std::vector<TrojanTemplate> templates{{TemplateKind::Counter, 3, 1},    {TemplateKind::Counter, 3, 2},
                                        {TemplateKind::Counter, 2, 1},    {TemplateKind::Counter, 2, 2},
                                        {TemplateKind::Comparator, 3, 1}, {TemplateKind::Comparator, 3, 2}};
  Tolerance epsilon;
  LocationOptions locations;
  std::uint64_t seed = 1;
  /// Random patterns searched for trigger and flip patterns.
  std::size_t potency_patterns = 1U << 16;
  std::size_t max_dummy_gates = 512;
  /// Monte Carlo sessions for the reported P_ft; 0 skips it.
  std::uint64_t trigger_trials = 0;
};

/// Places the HT with N' as host and accepts the first (template, location)
/// pair that passes every suite, has a machine-checked attacker sequence, and
/// whose cost lies within epsilon of N after dummy padding.
std::pair<Netlist, InjectionReport> inject(const Netlist& n, const Netlist& n_prime,
                                           const DefenderProfile& defender, const CellLibrary& lib,
                                           const Workload& workload, const InjectOptions& options = {});

/// Places one HT at one location without any checks.
std::pair<Netlist, TrojanInstance> place_ht(const Netlist& host, const TrojanTemplate& t,
                                            const Location& location);

struct PadResult {
  Netlist netlist;
  std::vector<std::string> added;
  DeltaReport residual;
  bool within = false;
};

/// Greedily adds keep-marked BUFF/NOT gates reading existing nets, each step
/// taking the gate that minimises the largest fractional residual against
/// `reference`, until every metric is within `epsilon` or nothing improves.
PadResult pad_dummy(const Netlist& n, const CostReport& reference, const CellLibrary& lib,
                    const Workload& workload, const Tolerance& epsilon, std::size_t max_gates = 512);

/// True when |f| <= eps for every fractional component.
bool within(const DeltaReport& d, const Tolerance& eps);

// ---- trigger probability ----------------------------------------------------

/// P[Binomial(n, p) >= m].
double binomial_tail(std::size_t n, double p, std::uint64_t m);

/// Analytic tail plus `trials` seeded random sessions of `patterns` steps each
/// run through the HT's fan-in cone, 64 sessions per word.
TriggerEstimate trigger_prob(const Netlist& infected, const TrojanInstance& ht, double p_event,
                             std::size_t patterns, std::uint64_t trials, std::uint64_t seed);

// ---- reports -----------------------------------------------------------------

std::string salvage_json(const SalvageReport& r);
std::string injection_json(const InjectionReport& r);

}  // namespace tzlab
