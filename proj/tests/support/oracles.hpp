#pragma once

// Deliberately naive reference implementations. They share only the Netlist
// data structure with the library and evaluate one pattern at a time.

#include <cstdint>
#include <optional>
#include <vector>

#include "tzlab/netlist.hpp"

namespace tzlab::testing {

/// A forced value on a net (stem) or on one gate input pin (branch).
struct ForcedValue {
  NetId net = 0;
  bool value = false;
  std::optional<std::size_t> gate;  // set for a branch site
  std::size_t pin = 0;
};

bool scalar_gate(GateKind kind, const std::vector<bool>& in);

/// Values of every net for one pattern, with DFF outputs read from `state`.
/// Evaluation is demand-driven recursion, independent of stored gate order.
std::vector<bool> scalar_eval(const Netlist& n, const std::vector<bool>& pis,
                              const std::vector<bool>& state = {},
                              const std::optional<ForcedValue>& force = std::nullopt);

std::vector<bool> scalar_outputs(const Netlist& n, const std::vector<bool>& pis,
                                 const std::vector<bool>& state = {},
                                 const std::optional<ForcedValue>& force = std::nullopt);

/// Sequential run from all-zero state; per-step net values.
std::vector<std::vector<bool>> scalar_run(const Netlist& n,
                                          const std::vector<std::vector<bool>>& sequence,
                                          std::vector<bool>* final_state = nullptr);

std::vector<bool> bits_of(std::uint64_t value, std::size_t width);

/// Exact p1 per net by looping over all 2^|PI| patterns.
std::vector<double> scalar_exact_probs(const Netlist& n);

std::vector<std::uint64_t> scalar_toggles(const Netlist& n,
                                          const std::vector<std::vector<bool>>& sequence);

}  // namespace tzlab::testing
