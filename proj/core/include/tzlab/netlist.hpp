#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tzlab/error.hpp"
#include "tzlab/gate_kind.hpp"

namespace tzlab {

using NetId = std::uint32_t;

struct Gate {
  NetId output = 0;
  GateKind kind = GateKind::Buff;
  std::vector<NetId> inputs;
  /// Keep-marked gates survive dead-logic sweeps (dummy padding gates).
  bool keep = false;
};

enum class NetlistErrorKind {
  Syntax,
  UndrivenNet,
  DuplicateDriver,
  UnsupportedGate,
  BadArity,
  CombinationalCycle,
  DuplicatePort,
  UnknownNet,
  Precondition,
};

std::string_view to_string(NetlistErrorKind kind);

class NetlistError : public Error {
 public:
  NetlistError(NetlistErrorKind kind, std::string message, int line = 0, int column = 0);

  NetlistErrorKind kind() const { return kind_; }
  /// 1-based source position, 0 when the error has no textual origin.
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  NetlistErrorKind kind_;
  int line_;
  int column_;
};

class NetlistBuilder;

/// Immutable, validated gate-level netlist. Gates are stored in topological
/// order (DFF outputs count as sources). Transformations return new values.
class Netlist {
 public:
  Netlist() = default;

  const std::string& name() const { return name_; }

  std::size_t net_count() const { return net_names_.size(); }
  const std::string& net_name(NetId net) const { return net_names_[net]; }
  std::optional<NetId> find_net(std::string_view name) const;
  /// Throws NetlistError(UnknownNet) when absent.
  NetId net(std::string_view name) const;

  std::span<const NetId> inputs() const { return inputs_; }
  std::span<const NetId> outputs() const { return outputs_; }
  std::span<const Gate> gates() const { return gates_; }
  const Gate& gate(std::size_t index) const { return gates_[index]; }

  /// Index of the driving gate; nullopt for primary inputs.
  std::optional<std::size_t> driver(NetId net) const;
  bool is_input(NetId net) const { return input_pos_[net] >= 0; }
  bool is_output(NetId net) const { return output_count_[net] > 0; }
  /// Position in inputs(), or -1.
  int input_position(NetId net) const { return input_pos_[net]; }

  /// Gate indices that read `net`, one entry per input pin (a gate reading
  /// the net twice appears twice), ascending.
  std::span<const std::uint32_t> readers(NetId net) const;
  /// Reader pins plus one if the net is a primary output.
  std::size_t fanout(NetId net) const { return readers(net).size() + (is_output(net) ? 1 : 0); }

  std::span<const std::uint32_t> dffs() const { return dffs_; }
  bool is_combinational() const { return dffs_.empty(); }

  /// Total area-relevant gate count (CONST drivers included).
  std::size_t gate_count() const { return gates_.size(); }

  /// Smallest n such that no net is named `_tz<m>` for m >= n.
  std::uint64_t next_fresh_index() const;

  /// Same gate list with the builder's inputs, for transformations.
  NetlistBuilder to_builder() const;

 private:
  friend class NetlistBuilder;

  std::string name_;
  std::vector<std::string> net_names_;
  std::unordered_map<std::string, NetId> net_index_;
  std::vector<NetId> inputs_;
  std::vector<NetId> outputs_;
  std::vector<Gate> gates_;
  std::vector<std::int32_t> driver_;
  std::vector<std::int32_t> input_pos_;
  std::vector<std::uint32_t> output_count_;
  std::vector<std::uint32_t> reader_offsets_;
  std::vector<std::uint32_t> reader_pins_;
  std::vector<std::uint32_t> dffs_;
};

/// Mutable staging area that validates and topologically sorts on build().
/// Net names are case-sensitive; any name that is neither a primary input nor
/// a gate output is reported as undriven.
class NetlistBuilder {
 public:
  explicit NetlistBuilder(std::string name = "top");

  NetlistBuilder& add_input(std::string net, int line = 0);
  NetlistBuilder& add_output(std::string net, int line = 0);
  NetlistBuilder& add_gate(std::string output, GateKind kind, std::vector<std::string> inputs,
                           bool keep = false, int line = 0);

  const std::string& name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  Netlist build() const;

 private:
  struct PendingGate {
    std::string output;
    GateKind kind;
    std::vector<std::string> inputs;
    bool keep;
    int line;
  };

  std::string name_;
  std::vector<std::pair<std::string, int>> inputs_;
  std::vector<std::pair<std::string, int>> outputs_;
  std::vector<PendingGate> gates_;
};

/// Kahn order over gates with declaration order as tie-break; DFF data edges
/// are ignored. Throws NetlistError(CombinationalCycle) naming a net on the
/// cycle. For a built Netlist this returns 0..n-1.
std::vector<std::size_t> topo_order(const Netlist& netlist);

/// Reads the `.bench` dialect: INPUT(x), OUTPUT(x), `y = KIND(a, ...)`,
/// `y = CONST0()`, `# comments`. AND/NAND/OR/NOR wider than 8 inputs are split
/// into balanced trees. A trailing `# keep` on a gate line keep-marks it.
Netlist parse_bench(std::string_view text, std::string name = "top");
Netlist read_bench_file(const std::string& path);

/// Canonical form: INPUTs, OUTPUTs, then gates in topological order, LF endings.
std::string write_bench(const Netlist& netlist);
void write_bench_file(const Netlist& netlist, const std::string& path);

/// Re-drives `net` with CONST0/CONST1; readers are untouched.
Netlist replace_with_constant(const Netlist& netlist, std::string_view net, bool value);

struct RemovedGate {
  std::string output;
  GateKind kind;
};

/// Removes, to a fixed point, every non-keep gate whose output is neither read
/// nor a primary output. Removed gates are returned in removal order.
std::pair<Netlist, std::vector<RemovedGate>> sweep_dead_gates(const Netlist& netlist);

/// A netlist fragment with boundary ports. Ports are primary inputs of `body`;
/// `payload_out` is its single primary output.
struct Subcircuit {
  Netlist body;
  std::vector<std::string> tap_inputs;
  std::string payload_in;
  std::string payload_out;
};

struct Insertion {
  Netlist netlist;
  /// Body net name -> host net name after renaming.
  std::map<std::string, std::string> renamed;
  /// Host name of the net carrying the original (pre-payload) target value.
  std::string original_target;
};

/// Places `sub` on `target`. Internal nets get fresh `_tz<n>` names. A
/// gate-driven target keeps its name on the payload output (so PO names are
/// stable) while the original driver moves to a fresh net; a primary-input
/// target has its gate readers rewired instead. Taps bound to the target read
/// the original value.
Insertion insert_subcircuit(const Netlist& host, const Subcircuit& sub,
                            const std::map<std::string, std::string>& tap_bindings,
                            std::string_view target);

/// Gate indices of the transitive fan-in cone of `roots`, through DFFs, in
/// topological order.
std::vector<std::size_t> fanin_cone(const Netlist& netlist, std::span<const NetId> roots);

/// Per-net flag: true when some primary output is structurally reachable.
std::vector<bool> reaches_output(const Netlist& netlist);

/// Per-net flag: true when the net is in the transitive fan-out of `source`
/// (source included), following combinational and DFF edges.
std::vector<bool> fanout_closure(const Netlist& netlist, NetId source);

}  // namespace tzlab
