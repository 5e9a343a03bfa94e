#include "random_netlist.hpp"

#include <algorithm>
#include <functional>
#include <string>
#include <vector>

namespace tzlab::testing {

namespace {

std::size_t pick(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

GateKind pick_kind(std::mt19937_64& rng, bool constants, bool muxes) {
  static constexpr GateKind kCommon[] = {GateKind::And, GateKind::Nand, GateKind::Or,
                                         GateKind::Nor, GateKind::Xor,  GateKind::Xnor,
                                         GateKind::Not, GateKind::Buff};
  const auto roll = pick(rng, 0, 99);
  if (constants && roll < 3) return roll % 2 ? GateKind::Const1 : GateKind::Const0;
  if (muxes && roll < 10) return GateKind::Mux2;
  return kCommon[pick(rng, 0, std::size(kCommon) - 1)];
}

std::size_t arity_for(std::mt19937_64& rng, GateKind kind, std::size_t max_fanin) {
  switch (kind) {
    case GateKind::Xor:
    case GateKind::Xnor: return 2;
    case GateKind::Not:
    case GateKind::Buff:
    case GateKind::Dff: return 1;
    case GateKind::Mux2: return 3;
    case GateKind::Const0:
    case GateKind::Const1: return 0;
    default: return pick(rng, 2, std::max<std::size_t>(2, max_fanin));
  }
}

}  // namespace

Netlist random_netlist(std::mt19937_64& rng, const RandomNetlistOptions& options) {
  NetlistBuilder builder("random");
  const auto n_inputs = pick(rng, options.min_inputs, options.max_inputs);
  const auto n_gates = pick(rng, options.min_gates, options.max_gates);
  std::vector<std::string> nets;
  for (std::size_t i = 0; i < n_inputs; ++i) {
    nets.push_back("i" + std::to_string(i));
    builder.add_input(nets.back());
  }
  for (std::size_t d = 0; d < options.dffs; ++d) nets.push_back("s" + std::to_string(d));

  std::vector<std::size_t> reads(n_inputs + options.dffs + n_gates, 0);
  std::vector<std::string> gate_outputs;
  for (std::size_t g = 0; g < n_gates; ++g) {
    const auto kind = pick_kind(rng, options.constants, options.muxes);
    const auto arity = arity_for(rng, kind, options.max_fanin);
    std::vector<std::string> ins;
    for (std::size_t a = 0; a < arity; ++a) {
      // Bias towards recent nets so circuits get some depth.
      std::size_t idx = nets.size() > 6 && pick(rng, 0, 1) ? pick(rng, nets.size() - 6, nets.size() - 1)
                                                           : pick(rng, 0, nets.size() - 1);
      ++reads[idx];
      ins.push_back(nets[idx]);
    }
    std::string out = "g" + std::to_string(g);
    builder.add_gate(out, kind, std::move(ins));
    nets.push_back(out);
    gate_outputs.push_back(out);
  }
  for (std::size_t d = 0; d < options.dffs; ++d) {
    const auto idx = pick(rng, 0, nets.size() - 1);
    ++reads[idx];
    builder.add_gate("s" + std::to_string(d), GateKind::Dff, {nets[idx]});
  }
  bool any = false;
  const std::size_t first_gate = n_inputs + options.dffs;
  for (std::size_t g = 0; g < n_gates; ++g) {
    if (reads[first_gate + g] == 0 || pick(rng, 0, 9) == 0) {
      builder.add_output(gate_outputs[g]);
      any = true;
    }
  }
  if (!any) builder.add_output(gate_outputs.back());
  return builder.build();
}

Netlist random_tree(std::mt19937_64& rng, std::size_t max_depth, std::size_t max_inputs) {
  NetlistBuilder builder("tree");
  std::size_t inputs = 0;
  std::size_t gates = 0;
  std::function<std::string(std::size_t)> grow = [&](std::size_t depth) -> std::string {
    const bool leaf = depth == 0 || inputs + 3 >= max_inputs || pick(rng, 0, 5) == 0;
    if (leaf) {
      if (pick(rng, 0, 19) == 0) {
        std::string out = "g" + std::to_string(gates++);
        builder.add_gate(out, pick(rng, 0, 1) ? GateKind::Const1 : GateKind::Const0, {});
        return out;
      }
      std::string in = "i" + std::to_string(inputs++);
      builder.add_input(in);
      return in;
    }
    const auto kind = pick_kind(rng, false, true);
    const auto arity = arity_for(rng, kind, 3);
    std::vector<std::string> ins;
    for (std::size_t a = 0; a < arity; ++a) ins.push_back(grow(depth - 1));
    std::string out = "g" + std::to_string(gates++);
    builder.add_gate(out, kind, std::move(ins));
    return out;
  };
  std::string root = grow(max_depth);
  if (inputs == 0) {
    builder.add_input("i0");
    builder.add_gate("g" + std::to_string(gates++), GateKind::And, {"i0", root});
    root = "g" + std::to_string(gates - 1);
  }
  builder.add_output(root);
  return builder.build();
}

Netlist shuffled(const Netlist& n, std::mt19937_64& rng) {
  std::vector<std::size_t> order(n.gate_count());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  NetlistBuilder builder(n.name());
  for (auto in : n.inputs()) builder.add_input(n.net_name(in));
  for (auto out : n.outputs()) builder.add_output(n.net_name(out));
  for (auto g : order) {
    const auto& gate = n.gate(g);
    std::vector<std::string> ins;
    for (auto in : gate.inputs) ins.push_back(n.net_name(in));
    builder.add_gate(n.net_name(gate.output), gate.kind, std::move(ins), gate.keep);
  }
  return builder.build();
}

Netlist rare_event_host(std::size_t width, std::size_t extra_inputs) {
  NetlistBuilder builder("rare_host");
  std::vector<std::string> wide;
  for (std::size_t i = 0; i < width; ++i) {
    wide.push_back("a" + std::to_string(i));
    builder.add_input(wide.back());
  }
  for (std::size_t i = 0; i < extra_inputs; ++i) builder.add_input("b" + std::to_string(i));
  // AND tree over the wide inputs.
  std::vector<std::string> level = wide;
  std::size_t fresh = 0;
  while (level.size() > 1) {
    std::vector<std::string> next;
    for (std::size_t i = 0; i < level.size(); i += 4) {
      const auto end = std::min(level.size(), i + 4);
      if (end - i == 1) {
        next.push_back(level[i]);
        continue;
      }
      std::string out = level.size() <= 4 ? "rare" : "w" + std::to_string(fresh++);
      builder.add_gate(out, GateKind::And,
                       std::vector<std::string>(level.begin() + static_cast<std::ptrdiff_t>(i),
                                                level.begin() + static_cast<std::ptrdiff_t>(end)));
      next.push_back(out);
    }
    level = next;
  }
  // A ripple of XORs gives the payload something observable.
  std::string prev = extra_inputs > 0 ? "b0" : wide.front();
  for (std::size_t i = 1; i < extra_inputs; ++i) {
    std::string out = "x" + std::to_string(i);
    builder.add_gate(out, GateKind::Xor, {prev, "b" + std::to_string(i)});
    prev = out;
  }
  builder.add_gate("y0", GateKind::Or, {prev, "rare"});
  builder.add_gate("y1", GateKind::Nand, {prev, wide.back()});
  builder.add_output("y0");
  builder.add_output("y1");
  return builder.build();
}

}  // namespace tzlab::testing
