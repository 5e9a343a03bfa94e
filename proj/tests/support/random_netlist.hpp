#pragma once

#include <cstdint>
#include <random>

#include "tzlab/netlist.hpp"

namespace tzlab::testing {

struct RandomNetlistOptions {
  std::size_t min_inputs = 1;
  std::size_t max_inputs = 10;
  std::size_t min_gates = 1;
  std::size_t max_gates = 50;
  std::size_t max_fanin = 4;
  std::size_t dffs = 0;
  bool constants = true;
  bool muxes = true;
};

/// Random acyclic netlist: every gate reads earlier nets, every unread gate
/// output becomes a PO, plus a few extra POs.
Netlist random_netlist(std::mt19937_64& rng, const RandomNetlistOptions& options = {});

/// Random fanout-free tree (every net read at most once) with one PO.
Netlist random_tree(std::mt19937_64& rng, std::size_t max_depth = 4, std::size_t max_inputs = 16);

/// Same circuit with gate declarations shuffled before the build.
Netlist shuffled(const Netlist& n, std::mt19937_64& rng);

/// A random-width AND over the first `width` PIs plus unrelated logic: a host
/// with one very rare net called `rare`.
Netlist rare_event_host(std::size_t width, std::size_t extra_inputs);

}  // namespace tzlab::testing
