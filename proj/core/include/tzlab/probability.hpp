#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tzlab/netlist.hpp"

namespace tzlab {

/// Probability that each net evaluates to 1, indexed by NetId.
struct SignalProbabilityMap {
  std::vector<double> p1;

  double one(NetId net) const { return p1[net]; }
  double zero(NetId net) const { return 1.0 - p1[net]; }
};

struct MonteCarloEstimate {
  SignalProbabilityMap map;
  std::vector<double> standard_error;
  std::uint64_t samples = 0;
};

/// Output p1 of one gate with independent inputs.
double gate_output_prob(GateKind kind, std::span<const double> inputs);

/// Single topological pass under the independence assumption. `pi_probs` is
/// indexed by PI position; empty means 0.5 everywhere. DFF outputs are
/// iterated to a fixed point (64 rounds, 1e-12).
SignalProbabilityMap propagate(const Netlist& netlist, std::span<const double> pi_probs = {});

/// Exact p1 by enumerating every input pattern. Combinational, <= 24 PIs.
SignalProbabilityMap exact_probs(const Netlist& netlist);

/// Empirical p1 over `samples` uniform random patterns (a single sequence for
/// DFF netlists), with per-net standard error sqrt(p(1-p)/samples).
MonteCarloEstimate monte_carlo_probs(const Netlist& netlist, std::uint64_t samples,
                                     std::uint64_t seed);

struct Candidate {
  NetId net = 0;
  std::string name;
  /// Constant the net is tied to: false for X members, true for Y members.
  bool tie_value = false;
  /// max(p0, p1).
  double extremity = 0;
};

struct CandidateSet {
  std::vector<Candidate> x;
  std::vector<Candidate> y;
  /// X and Y merged, extremity descending, then name ascending.
  std::vector<Candidate> c;
};

/// Gate outputs (never PIs, never constant drivers) whose p0 or p1 reaches
/// `p_th`. Requires 0.5 < p_th < 1.
CandidateSet find_candidates(const SignalProbabilityMap& map, const Netlist& netlist, double p_th);

/// CSV `net,p1,method,stderr`.
std::string probability_csv(const Netlist& netlist, const SignalProbabilityMap& map,
                            const std::string& method, const std::vector<double>& standard_error = {});

}  // namespace tzlab
