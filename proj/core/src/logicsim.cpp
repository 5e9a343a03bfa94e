#include "tzlab/logicsim.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <mutex>
#include <sstream>

#include "tzlab/parallel.hpp"

namespace tzlab {

std::uint64_t eval_word(GateKind kind, std::span<const std::uint64_t> in) {
  switch (kind) {
    case GateKind::And:
    case GateKind::Nand: {
      std::uint64_t acc = ~std::uint64_t{0};
      for (auto v : in) acc &= v;
      return kind == GateKind::And ? acc : ~acc;
    }
    case GateKind::Or:
    case GateKind::Nor: {
      std::uint64_t acc = 0;
      for (auto v : in) acc |= v;
      return kind == GateKind::Or ? acc : ~acc;
    }
    case GateKind::Xor: return in[0] ^ in[1];
    case GateKind::Xnor: return ~(in[0] ^ in[1]);
    case GateKind::Not: return ~in[0];
    case GateKind::Buff:
    case GateKind::Dff: return in[0];
    case GateKind::Mux2: return (~in[0] & in[1]) | (in[0] & in[2]);
    case GateKind::Const0: return 0;
    case GateKind::Const1: return ~std::uint64_t{0};
  }
  return 0;
}

void eval_lanes(GateKind kind, std::span<const std::uint64_t* const> in, std::uint64_t* out,
                std::size_t begin, std::size_t end) {
  const auto n = in.size();
  switch (kind) {
    case GateKind::And:
    case GateKind::Nand: {
      const std::uint64_t flip = kind == GateKind::Nand ? ~std::uint64_t{0} : 0;
      for (auto w = begin; w < end; ++w) {
        std::uint64_t acc = in[0][w];
        for (std::size_t i = 1; i < n; ++i) acc &= in[i][w];
        out[w] = acc ^ flip;
      }
      break;
    }
    case GateKind::Or:
    case GateKind::Nor: {
      const std::uint64_t flip = kind == GateKind::Nor ? ~std::uint64_t{0} : 0;
      for (auto w = begin; w < end; ++w) {
        std::uint64_t acc = in[0][w];
        for (std::size_t i = 1; i < n; ++i) acc |= in[i][w];
        out[w] = acc ^ flip;
      }
      break;
    }
    case GateKind::Xor:
      for (auto w = begin; w < end; ++w) out[w] = in[0][w] ^ in[1][w];
      break;
    case GateKind::Xnor:
      for (auto w = begin; w < end; ++w) out[w] = ~(in[0][w] ^ in[1][w]);
      break;
    case GateKind::Not:
      for (auto w = begin; w < end; ++w) out[w] = ~in[0][w];
      break;
    case GateKind::Buff:
    case GateKind::Dff:
      for (auto w = begin; w < end; ++w) out[w] = in[0][w];
      break;
    case GateKind::Mux2:
      for (auto w = begin; w < end; ++w) out[w] = (~in[0][w] & in[1][w]) | (in[0][w] & in[2][w]);
      break;
    case GateKind::Const0:
      for (auto w = begin; w < end; ++w) out[w] = 0;
      break;
    case GateKind::Const1:
      for (auto w = begin; w < end; ++w) out[w] = ~std::uint64_t{0};
      break;
  }
}

namespace {

// Evaluates `gate` over words [begin, end) of every lane.
void eval_gate(const Gate& gate, NetValues& values, std::size_t begin, std::size_t end) {
  std::array<const std::uint64_t*, kMaxFanin> in{};
  const auto n = gate.inputs.size();
  for (std::size_t i = 0; i < n; ++i) in[i] = values.net(gate.inputs[i]).data();
  auto* out = values.net(gate.output).data();
  eval_lanes(gate.kind, std::span<const std::uint64_t* const>(in.data(), n), out, begin, end);
  if (end == values.words() && end > begin) out[end - 1] &= tail_mask(values.count());
}

void load_inputs(const Netlist& netlist, const PatternBlock& patterns, NetValues& values) {
  if (patterns.width() != netlist.inputs().size()) {
    throw InterfaceError("pattern width " + std::to_string(patterns.width()) + " does not match " +
                         std::to_string(netlist.inputs().size()) + " primary inputs of '" +
                         netlist.name() + "'");
  }
  for (std::size_t pin = 0; pin < patterns.width(); ++pin) {
    auto src = patterns.lane(pin);
    std::copy(src.begin(), src.end(), values.net(netlist.inputs()[pin]).begin());
  }
}

void fill_state(const Netlist& netlist, const std::vector<bool>& state, NetValues& values,
                std::size_t gate_index, std::size_t dff_position) {
  const bool bit = !state.empty() && state[dff_position];
  auto lane = values.net(netlist.gate(gate_index).output);
  std::fill(lane.begin(), lane.end(), bit ? ~std::uint64_t{0} : 0);
  if (!lane.empty()) lane.back() &= tail_mask(values.count());
}

void check_state(const Netlist& netlist, const std::vector<bool>& state) {
  if (!state.empty() && state.size() != netlist.dffs().size()) {
    throw InterfaceError("state vector has " + std::to_string(state.size()) + " bits, netlist has " +
                         std::to_string(netlist.dffs().size()) + " DFFs");
  }
}

}  // namespace

NetValues evaluate_frozen(const Netlist& netlist, const PatternBlock& patterns,
                          const std::vector<bool>& state) {
  check_state(netlist, state);
  NetValues values(netlist.net_count(), patterns.count());
  load_inputs(netlist, patterns, values);
  std::size_t dff_position = 0;
  for (std::size_t g = 0; g < netlist.gate_count(); ++g) {
    if (netlist.gate(g).kind == GateKind::Dff) {
      // dffs() is ascending, so positions follow gate order.
      fill_state(netlist, state, values, g, dff_position++);
    } else {
      eval_gate(netlist.gate(g), values, 0, values.words());
    }
  }
  return values;
}

PatternBlock output_block(const Netlist& netlist, const NetValues& values) {
  PatternBlock out(netlist.outputs().size(), values.count());
  for (std::size_t po = 0; po < netlist.outputs().size(); ++po) {
    auto src = values.net(netlist.outputs()[po]);
    std::copy(src.begin(), src.end(), out.lane(po).begin());
  }
  return out;
}

PatternBlock simulate_comb(const Netlist& netlist, const PatternBlock& patterns) {
  if (!netlist.is_combinational()) {
    throw Error("simulate_comb: '" + netlist.name() + "' contains DFFs; use simulate_seq");
  }
  return output_block(netlist, evaluate_frozen(netlist, patterns));
}

SimTrace simulate_seq(const Netlist& netlist, const PatternBlock& sequence,
                      const std::vector<bool>& init) {
  check_state(netlist, init);
  const auto dffs = netlist.dffs();
  SimTrace trace;
  trace.final_state = init.empty() ? std::vector<bool>(dffs.size(), false) : init;
  if (dffs.empty()) {
    trace.values = evaluate_frozen(netlist, sequence);
    return trace;
  }

  const auto gate_count = netlist.gate_count();
  // Gates whose value can depend on state.
  std::vector<bool> state_dep(gate_count, false);
  for (std::size_t g = 0; g < gate_count; ++g) {
    const auto& gate = netlist.gate(g);
    if (gate.kind == GateKind::Dff) {
      state_dep[g] = true;
      continue;
    }
    for (auto in : gate.inputs) {
      if (auto d = netlist.driver(in); d && state_dep[*d]) {
        state_dep[g] = true;
        break;
      }
    }
  }
  // State-dependent gates feeding some DFF data pin: stepped one bit at a time.
  std::vector<bool> in_loop(gate_count, false);
  {
    std::vector<NetId> roots;
    for (auto d : dffs) roots.push_back(netlist.gate(d).inputs[0]);
    for (auto g : fanin_cone(netlist, roots)) {
      if (state_dep[g] && netlist.gate(g).kind != GateKind::Dff) in_loop[g] = true;
    }
  }

  NetValues values(netlist.net_count(), sequence.count());
  load_inputs(netlist, sequence, values);
  for (std::size_t g = 0; g < gate_count; ++g) {
    if (!state_dep[g]) eval_gate(netlist.gate(g), values, 0, values.words());
  }

  std::vector<std::size_t> loop_gates;
  for (std::size_t g = 0; g < gate_count; ++g) {
    if (in_loop[g]) loop_gates.push_back(g);
  }
  auto set_bit = [&values](NetId net, std::size_t t, bool bit) {
    auto& word = values.net(net)[t / kWordBits];
    const auto mask = std::uint64_t{1} << (t % kWordBits);
    word = bit ? (word | mask) : (word & ~mask);
  };
  std::array<std::uint64_t, kMaxFanin> scratch{};
  auto& state = trace.final_state;
  std::vector<bool> next(dffs.size());
  for (std::size_t t = 0; t < sequence.count(); ++t) {
    for (std::size_t i = 0; i < dffs.size(); ++i) set_bit(netlist.gate(dffs[i]).output, t, state[i]);
    for (auto g : loop_gates) {
      const auto& gate = netlist.gate(g);
      for (std::size_t i = 0; i < gate.inputs.size(); ++i) scratch[i] = values.get(gate.inputs[i], t);
      const auto bit =
          eval_word(gate.kind, std::span<const std::uint64_t>(scratch.data(), gate.inputs.size())) & 1U;
      set_bit(gate.output, t, bit != 0);
    }
    for (std::size_t i = 0; i < dffs.size(); ++i) {
      next[i] = values.get(netlist.gate(dffs[i]).inputs[0], t);
    }
    state = next;
  }
  for (std::size_t g = 0; g < gate_count; ++g) {
    if (state_dep[g] && !in_loop[g] && netlist.gate(g).kind != GateKind::Dff) {
      eval_gate(netlist.gate(g), values, 0, values.words());
    }
  }
  trace.values = std::move(values);
  return trace;
}

NetValues run_sequence(const Netlist& netlist, const PatternBlock& sequence) {
  if (netlist.is_combinational()) return evaluate_frozen(netlist, sequence);
  return simulate_seq(netlist, sequence).values;
}

void check_interface(const Netlist& a, const Netlist& b) {
  auto same = [&](std::span<const NetId> x, std::span<const NetId> y) {
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (a.net_name(x[i]) != b.net_name(y[i])) return false;
    }
    return true;
  };
  if (!same(a.inputs(), b.inputs())) {
    throw InterfaceError("'" + a.name() + "' and '" + b.name() + "' have different primary inputs");
  }
  if (!same(a.outputs(), b.outputs())) {
    throw InterfaceError("'" + a.name() + "' and '" + b.name() +
                         "' have different primary outputs");
  }
}

EquivalenceResult equivalent_on(const Netlist& a, const Netlist& b, const PatternBlock& patterns) {
  check_interface(a, b);
  const auto va = run_sequence(a, patterns);
  const auto vb = run_sequence(b, patterns);
  const auto pos = a.outputs().size();
  for (std::size_t w = 0; w < va.words(); ++w) {
    EquivalenceResult best{true, 0, 0};
    int best_bit = 64;
    for (std::size_t po = 0; po < pos; ++po) {
      const auto diff = va.net(a.outputs()[po])[w] ^ vb.net(b.outputs()[po])[w];
      if (diff == 0) continue;
      const int bit = std::countr_zero(diff);
      if (bit < best_bit) {
        best_bit = bit;
        best = EquivalenceResult{false, w * kWordBits + static_cast<std::size_t>(bit), po};
      }
    }
    if (!best.pass) return best;
  }
  return {};
}

std::uint64_t exhaustive_diff(const Netlist& a, const Netlist& b) {
  check_interface(a, b);
  const auto n = a.inputs().size();
  if (n > kMaxExhaustiveInputs) {
    throw BoundError("exhaustive enumeration needs <= " + std::to_string(kMaxExhaustiveInputs) +
                     " primary inputs, '" + a.name() + "' has " + std::to_string(n));
  }
  const std::uint64_t total = std::uint64_t{1} << n;
  constexpr std::uint64_t kChunk = std::uint64_t{1} << 16;
  const std::size_t chunks = static_cast<std::size_t>((total + kChunk - 1) / kChunk);
  std::vector<std::uint64_t> partial(chunks, 0);
  parallel_for(chunks, [&](std::size_t c) {
    const auto first = c * kChunk;
    const auto count = static_cast<std::size_t>(std::min(kChunk, total - first));
    const auto block = PatternBlock::exhaustive_range(n, first, count);
    const auto va = evaluate_frozen(a, block);
    const auto vb = evaluate_frozen(b, block);
    std::uint64_t differing = 0;
    for (std::size_t w = 0; w < va.words(); ++w) {
      std::uint64_t any = 0;
      for (std::size_t po = 0; po < a.outputs().size(); ++po) {
        any |= va.net(a.outputs()[po])[w] ^ vb.net(b.outputs()[po])[w];
      }
      differing += static_cast<std::uint64_t>(std::popcount(any));
    }
    partial[c] = differing;
  });
  std::uint64_t sum = 0;
  for (auto p : partial) sum += p;
  return sum;
}

std::vector<std::uint64_t> toggle_counts(const NetValues& values, std::size_t nets) {
  std::vector<std::uint64_t> counts(nets, 0);
  const auto words = values.words();
  if (values.count() < 2) return counts;
  for (NetId net = 0; net < nets; ++net) {
    auto lane = values.net(net);
    std::uint64_t carry = lane[0] & 1U;  // bit 0 has no predecessor
    std::uint64_t total = 0;
    for (std::size_t w = 0; w < words; ++w) {
      std::uint64_t prev = (lane[w] << 1) | carry;
      carry = lane[w] >> 63;
      std::uint64_t diff = lane[w] ^ prev;
      if (w + 1 == words) diff &= tail_mask(values.count());
      total += static_cast<std::uint64_t>(std::popcount(diff));
    }
    counts[net] = total;
  }
  return counts;
}

std::vector<std::uint64_t> toggle_counts(const Netlist& netlist, const PatternBlock& sequence) {
  if (sequence.count() < 2) throw Error("toggle counting needs at least 2 patterns");
  return toggle_counts(run_sequence(netlist, sequence), netlist.net_count());
}

std::string trace_csv(const Netlist& netlist, const SimTrace& trace) {
  std::ostringstream out;
  out << "step,net,value\n";
  for (std::size_t t = 0; t < trace.steps(); ++t) {
    for (NetId net = 0; net < netlist.net_count(); ++net) {
      out << t << ',' << netlist.net_name(net) << ',' << (trace.values.get(net, t) ? 1 : 0) << '\n';
    }
  }
  return out.str();
}

}  // namespace tzlab
