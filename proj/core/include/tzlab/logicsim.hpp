#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tzlab/netlist.hpp"
#include "tzlab/patterns.hpp"

namespace tzlab {

/// Per-net packed values over `count` patterns or steps, net-major.
class NetValues {
 public:
  NetValues() = default;
  NetValues(std::size_t nets, std::size_t count)
      : count_(count), words_(words_for(count)), data_(nets * words_, 0) {}

  std::size_t count() const { return count_; }
  std::size_t words() const { return words_; }

  std::span<const std::uint64_t> net(NetId id) const { return {data_.data() + id * words_, words_}; }
  std::span<std::uint64_t> net(NetId id) { return {data_.data() + id * words_, words_}; }
  bool get(NetId id, std::size_t t) const {
    return (data_[id * words_ + t / kWordBits] >> (t % kWordBits)) & 1U;
  }

 private:
  std::size_t count_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> data_;
};

/// One gate over one word of inputs.
std::uint64_t eval_word(GateKind kind, std::span<const std::uint64_t> inputs);

/// One gate over words [begin, end) of its input lanes. No tail masking.
void eval_lanes(GateKind kind, std::span<const std::uint64_t* const> inputs, std::uint64_t* out,
                std::size_t begin, std::size_t end);

/// Evaluates every net with DFF outputs held at `state` (one bool per
/// netlist.dffs() entry; empty means all zero). Each pattern is independent.
NetValues evaluate_frozen(const Netlist& netlist, const PatternBlock& patterns,
                          const std::vector<bool>& state = {});

/// Primary-output lanes of `values` as a block of width |PO|.
PatternBlock output_block(const Netlist& netlist, const NetValues& values);

/// Combinational simulation; PO block of width |PO|. Refuses DFF netlists.
PatternBlock simulate_comb(const Netlist& netlist, const PatternBlock& patterns);

struct SimTrace {
  /// Bit t of a net's lane is its value during step t.
  NetValues values;
  std::vector<bool> final_state;
  std::size_t steps() const { return values.count(); }
};

/// Pattern-synchronous sequential simulation: every step evaluates the
/// combinational logic with DFF outputs held, then all DFFs load their data
/// inputs at once. `init` defaults to all zero.
SimTrace simulate_seq(const Netlist& netlist, const PatternBlock& sequence,
                      const std::vector<bool>& init = {});

/// Values of every net over a sequence: sequential when DFFs are present.
NetValues run_sequence(const Netlist& netlist, const PatternBlock& sequence);

/// Throws InterfaceError unless PI and PO names agree in order.
void check_interface(const Netlist& a, const Netlist& b);

struct EquivalenceResult {
  bool pass = true;
  /// Earliest differing step and the lowest PO index differing there.
  std::size_t step = 0;
  std::size_t po = 0;
};

EquivalenceResult equivalent_on(const Netlist& a, const Netlist& b, const PatternBlock& patterns);

/// Number of input patterns on which some PO differs, with DFFs frozen at
/// zero. At most 24 primary inputs.
std::uint64_t exhaustive_diff(const Netlist& a, const Netlist& b);

inline constexpr std::size_t kMaxExhaustiveInputs = 24;

/// Per-net count of steps t >= 1 whose value differs from step t-1.
std::vector<std::uint64_t> toggle_counts(const Netlist& netlist, const PatternBlock& sequence);
std::vector<std::uint64_t> toggle_counts(const NetValues& values, std::size_t nets);

/// Debug dump: `step,net,value` rows.
std::string trace_csv(const Netlist& netlist, const SimTrace& trace);

}  // namespace tzlab
