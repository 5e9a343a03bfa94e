#include "oracles.hpp"

#include <functional>
#include <stdexcept>

namespace tzlab::testing {

bool scalar_gate(GateKind kind, const std::vector<bool>& in) {
  switch (kind) {
    case GateKind::And: {
      for (bool b : in)
        if (!b) return false;
      return true;
    }
    case GateKind::Nand: return !scalar_gate(GateKind::And, in);
    case GateKind::Or: {
      for (bool b : in)
        if (b) return true;
      return false;
    }
    case GateKind::Nor: return !scalar_gate(GateKind::Or, in);
    case GateKind::Xor: return in[0] != in[1];
    case GateKind::Xnor: return in[0] == in[1];
    case GateKind::Not: return !in[0];
    case GateKind::Buff: return in[0];
    case GateKind::Mux2: return in[0] ? in[2] : in[1];
    case GateKind::Const0: return false;
    case GateKind::Const1: return true;
    case GateKind::Dff: break;
  }
  throw std::logic_error("scalar_gate: DFF has no combinational function");
}

std::vector<bool> scalar_eval(const Netlist& n, const std::vector<bool>& pis,
                              const std::vector<bool>& state,
                              const std::optional<ForcedValue>& force) {
  std::vector<int> value(n.net_count(), -1);
  for (std::size_t i = 0; i < n.inputs().size(); ++i) value[n.inputs()[i]] = pis[i] ? 1 : 0;
  std::vector<int> dff_slot(n.gate_count(), -1);
  for (std::size_t i = 0; i < n.dffs().size(); ++i) dff_slot[n.dffs()[i]] = static_cast<int>(i);

  std::function<bool(NetId)> get = [&](NetId net) -> bool {
    if (force && !force->gate && force->net == net) return force->value;
    if (value[net] >= 0) return value[net] == 1;
    const auto g = *n.driver(net);
    const auto& gate = n.gate(g);
    bool out;
    if (gate.kind == GateKind::Dff) {
      out = !state.empty() && state[static_cast<std::size_t>(dff_slot[g])];
    } else {
      std::vector<bool> in;
      for (std::size_t p = 0; p < gate.inputs.size(); ++p) {
        if (force && force->gate && *force->gate == g && force->pin == p) {
          in.push_back(force->value);
        } else {
          in.push_back(get(gate.inputs[p]));
        }
      }
      out = scalar_gate(gate.kind, in);
    }
    value[net] = out ? 1 : 0;
    return out;
  };
  std::vector<bool> result(n.net_count());
  for (NetId net = 0; net < n.net_count(); ++net) result[net] = get(net);
  return result;
}

std::vector<bool> scalar_outputs(const Netlist& n, const std::vector<bool>& pis,
                                 const std::vector<bool>& state,
                                 const std::optional<ForcedValue>& force) {
  const auto all = scalar_eval(n, pis, state, force);
  std::vector<bool> out;
  for (auto po : n.outputs()) out.push_back(all[po]);
  return out;
}

std::vector<std::vector<bool>> scalar_run(const Netlist& n,
                                          const std::vector<std::vector<bool>>& sequence,
                                          std::vector<bool>* final_state) {
  std::vector<bool> state(n.dffs().size(), false);
  std::vector<std::vector<bool>> steps;
  for (const auto& pattern : sequence) {
    auto values = scalar_eval(n, pattern, state);
    for (std::size_t i = 0; i < n.dffs().size(); ++i) {
      state[i] = values[n.gate(n.dffs()[i]).inputs[0]];
    }
    steps.push_back(std::move(values));
  }
  if (final_state) *final_state = state;
  return steps;
}

std::vector<bool> bits_of(std::uint64_t value, std::size_t width) {
  std::vector<bool> bits(width);
  for (std::size_t i = 0; i < width; ++i) bits[i] = (value >> i) & 1U;
  return bits;
}

std::vector<double> scalar_exact_probs(const Netlist& n) {
  const auto width = n.inputs().size();
  std::vector<std::uint64_t> ones(n.net_count(), 0);
  const std::uint64_t total = std::uint64_t{1} << width;
  for (std::uint64_t v = 0; v < total; ++v) {
    const auto values = scalar_eval(n, bits_of(v, width));
    for (NetId net = 0; net < n.net_count(); ++net) ones[net] += values[net] ? 1 : 0;
  }
  std::vector<double> p(n.net_count());
  for (NetId net = 0; net < n.net_count(); ++net) {
    p[net] = static_cast<double>(ones[net]) / static_cast<double>(total);
  }
  return p;
}

std::vector<std::uint64_t> scalar_toggles(const Netlist& n,
                                          const std::vector<std::vector<bool>>& sequence) {
  const auto steps = scalar_run(n, sequence);
  std::vector<std::uint64_t> toggles(n.net_count(), 0);
  for (std::size_t t = 1; t < steps.size(); ++t) {
    for (NetId net = 0; net < n.net_count(); ++net) {
      if (steps[t][net] != steps[t - 1][net]) ++toggles[net];
    }
  }
  return toggles;
}

}  // namespace tzlab::testing
