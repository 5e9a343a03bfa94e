#include "tzlab/gate_kind.hpp"

#include <array>
#include <cctype>
#include <string>

namespace tzlab {

namespace {

constexpr std::array<std::string_view, kGateKindCount> kNames = {
    "AND", "NAND", "OR", "NOR", "XOR", "XNOR", "NOT", "BUFF", "MUX2", "DFF", "CONST0", "CONST1",
};

}  // namespace

std::string_view to_string(GateKind kind) { return kNames[static_cast<std::size_t>(kind)]; }

std::optional<GateKind> parse_gate_kind(std::string_view text) {
  std::string upper(text);
  for (auto& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (upper == "BUF") return GateKind::Buff;
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == upper) return static_cast<GateKind>(i);
  }
  return std::nullopt;
}

bool arity_ok(GateKind kind, std::size_t inputs) {
  switch (kind) {
    case GateKind::And:
    case GateKind::Nand:
    case GateKind::Or:
    case GateKind::Nor:
      return inputs >= 2 && inputs <= kMaxFanin;
    case GateKind::Xor:
    case GateKind::Xnor:
      return inputs == 2;
    case GateKind::Not:
    case GateKind::Buff:
    case GateKind::Dff:
      return inputs == 1;
    case GateKind::Mux2:
      return inputs == 3;
    case GateKind::Const0:
    case GateKind::Const1:
      return inputs == 0;
  }
  return false;
}

std::string_view arity_rule(GateKind kind) {
  switch (kind) {
    case GateKind::And:
    case GateKind::Nand:
    case GateKind::Or:
    case GateKind::Nor:
      return "2..8 inputs";
    case GateKind::Xor:
    case GateKind::Xnor:
      return "exactly 2 inputs";
    case GateKind::Not:
    case GateKind::Buff:
    case GateKind::Dff:
      return "exactly 1 input";
    case GateKind::Mux2:
      return "exactly 3 inputs (select, in0, in1)";
    case GateKind::Const0:
    case GateKind::Const1:
      return "no inputs";
  }
  return "";
}

}  // namespace tzlab
