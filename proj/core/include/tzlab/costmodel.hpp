#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tzlab/netlist.hpp"
#include "tzlab/patterns.hpp"

namespace tzlab {

/// Costs are held as integer micro-units (1e-6) so sums and partitions are
/// exact; doubles appear only at the reporting boundary.
using Micro = std::int64_t;
inline constexpr double kMicro = 1e6;

Micro to_micro(double value);
inline double from_micro(Micro value) { return static_cast<double>(value) / kMicro; }

struct CellCost {
  Micro area = 0;
  Micro leak = 0;
  Micro e_toggle = 0;
};

/// Per-kind costs with optional per-fan-in overrides. A kind without an
/// override at some fan-in k scales its 2-input entry by (k - 1) when it is an
/// AND/NAND/OR/NOR, and uses the base entry otherwise.
class CellLibrary {
 public:
  /// Synthetic default: NAND2/NOR2 1.0, NOT/BUFF 0.67, AND2/OR2 1.33,
  /// XOR2/XNOR2/MUX2 2.33, DFF 4.33 GE; leak 0.5 x area; e_toggle 1.0 x area.
  static CellLibrary default_library();
  /// JSON map kind -> {area_ge, leak, e_toggle, fanin: {"3": {...}}}.
  static CellLibrary from_json(std::string_view text);
  static CellLibrary load(const std::string& path);
  std::string to_json() const;

  void set(GateKind kind, CellCost cost);
  void set(GateKind kind, std::size_t fanin, CellCost cost);
  /// Throws Error when the kind is missing.
  CellCost cost(GateKind kind, std::size_t fanin) const;
  bool has(GateKind kind) const { return base_[static_cast<std::size_t>(kind)].has_value(); }

 private:
  std::array<std::optional<CellCost>, kGateKindCount> base_{};
  std::map<std::pair<GateKind, std::size_t>, CellCost> overrides_;
};

struct Workload {
  std::string id;
  PatternBlock patterns;
};

/// Per-gate contributions. `dyn` is toggles x e_toggle, to be divided by the
/// report's step denominator.
struct GateCost {
  Micro area = 0;
  Micro leak = 0;
  Micro dyn = 0;
};

struct CostReport {
  Micro area_u = 0;
  Micro leak_u = 0;
  /// Sum over gates of toggles x e_toggle; dynamic power is dyn_u / steps.
  Micro dyn_u = 0;
  std::int64_t steps = 1;
  std::string workload_id;
  std::size_t workload_count = 0;

  double area_ge() const { return from_micro(area_u); }
  double p_leak() const { return from_micro(leak_u); }
  double p_dyn() const { return static_cast<double>(dyn_u) / static_cast<double>(steps) / kMicro; }
  double p_total() const { return p_leak() + p_dyn(); }
};

struct DeltaReport {
  /// reference - subject.
  double d_total = 0;
  double d_dyn = 0;
  double d_leak = 0;
  double d_area = 0;
  /// The same, as fractions of the reference (0 when the reference is 0).
  double f_total = 0;
  double f_dyn = 0;
  double f_leak = 0;
  double f_area = 0;
};

double area(const Netlist& netlist, const CellLibrary& lib);
double leakage(const Netlist& netlist, const CellLibrary& lib);
/// Average energy per applied step: sum of toggles(out) / (steps - 1) x e_toggle.
double dynamic(std::span<const std::uint64_t> toggles, const Netlist& netlist,
               const CellLibrary& lib, std::size_t steps);

std::vector<GateCost> gate_costs(const Netlist& netlist, const CellLibrary& lib,
                                 std::span<const std::uint64_t> toggles);

/// Sum of the given per-gate costs into a report with the workload fields set.
CostReport sum_costs(std::span<const GateCost> costs, std::span<const std::size_t> gates,
                     const CostReport& workload_template);

CostReport cost_report(const Netlist& netlist, const CellLibrary& lib, const Workload& workload);

/// Throws InterfaceError when the workloads differ.
DeltaReport delta(const CostReport& reference, const CostReport& subject);

std::string cost_json(const CostReport& report);
std::string delta_json(const DeltaReport& delta);

}  // namespace tzlab
