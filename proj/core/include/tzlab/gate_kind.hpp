#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace tzlab {

/// Gate library. MUX2 pins are (select, in0, in1); DFF has a single data pin
/// and its output is the stored state.
enum class GateKind : std::uint8_t {
  And,
  Nand,
  Or,
  Nor,
  Xor,
  Xnor,
  Not,
  Buff,
  Mux2,
  Dff,
  Const0,
  Const1,
};

inline constexpr std::size_t kGateKindCount = 12;
inline constexpr std::size_t kMaxFanin = 8;

std::string_view to_string(GateKind kind);

/// Case-insensitive lookup; accepts `BUF` as an alias of `BUFF`.
std::optional<GateKind> parse_gate_kind(std::string_view text);

bool arity_ok(GateKind kind, std::size_t inputs);

/// Human readable arity rule, used in diagnostics ("2..8", "exactly 1", ...).
std::string_view arity_rule(GateKind kind);

/// AND/NAND/OR/NOR: the only kinds whose width may vary.
constexpr bool is_variadic(GateKind kind) {
  return kind == GateKind::And || kind == GateKind::Nand || kind == GateKind::Or ||
         kind == GateKind::Nor;
}

constexpr bool is_constant(GateKind kind) {
  return kind == GateKind::Const0 || kind == GateKind::Const1;
}

}  // namespace tzlab
