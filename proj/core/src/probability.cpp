#include "tzlab/probability.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <sstream>

#include "seed.hpp"
#include "tzlab/logicsim.hpp"
#include "tzlab/parallel.hpp"

namespace tzlab {

double gate_output_prob(GateKind kind, std::span<const double> in) {
  if (!arity_ok(kind, in.size())) {
    throw Error(std::string(to_string(kind)) + " with " + std::to_string(in.size()) +
                " inputs: expected " + std::string(arity_rule(kind)));
  }
  for (double p : in) {
    if (!(p >= 0.0 && p <= 1.0)) throw Error("input probability out of [0,1]: " + std::to_string(p));
  }
  switch (kind) {
    case GateKind::And:
    case GateKind::Nand: {
      double prod = 1.0;
      for (double p : in) prod *= p;
      return kind == GateKind::And ? prod : 1.0 - prod;
    }
    case GateKind::Or:
    case GateKind::Nor: {
      double prod = 1.0;
      for (double p : in) prod *= 1.0 - p;
      return kind == GateKind::Or ? 1.0 - prod : prod;
    }
    case GateKind::Xor:
    case GateKind::Xnor: {
      const double x = in[0] * (1.0 - in[1]) + in[1] * (1.0 - in[0]);
      return kind == GateKind::Xor ? x : 1.0 - x;
    }
    case GateKind::Not: return 1.0 - in[0];
    case GateKind::Buff:
    case GateKind::Dff: return in[0];
    case GateKind::Mux2: return (1.0 - in[0]) * in[1] + in[0] * in[2];
    case GateKind::Const0: return 0.0;
    case GateKind::Const1: return 1.0;
  }
  return 0.0;
}

SignalProbabilityMap propagate(const Netlist& netlist, std::span<const double> pi_probs) {
  if (!pi_probs.empty() && pi_probs.size() != netlist.inputs().size()) {
    throw InterfaceError("expected one probability per primary input");
  }
  SignalProbabilityMap map;
  map.p1.assign(netlist.net_count(), 0.0);
  for (std::size_t i = 0; i < netlist.inputs().size(); ++i) {
    const double p = pi_probs.empty() ? 0.5 : pi_probs[i];
    if (!(p >= 0.0 && p <= 1.0)) throw Error("primary input probability out of [0,1]");
    map.p1[netlist.inputs()[i]] = p;
  }
  std::array<double, kMaxFanin> buf{};
  auto pass = [&]() {
    double moved = 0.0;
    for (const auto& g : netlist.gates()) {
      for (std::size_t i = 0; i < g.inputs.size(); ++i) buf[i] = map.p1[g.inputs[i]];
      const double p = gate_output_prob(g.kind, std::span<const double>(buf.data(), g.inputs.size()));
      if (g.kind == GateKind::Dff) moved = std::max(moved, std::abs(p - map.p1[g.output]));
      map.p1[g.output] = p;
    }
    return moved;
  };
  pass();
  if (!netlist.is_combinational()) {
    // DFF outputs read their data input from the previous round.
    for (int round = 1; round < 64; ++round) {
      if (pass() <= 1e-12) break;
    }
  }
  return map;
}

SignalProbabilityMap exact_probs(const Netlist& netlist) {
  if (!netlist.is_combinational()) throw Error("exact_probs needs a combinational netlist");
  const auto n = netlist.inputs().size();
  if (n > kMaxExhaustiveInputs) {
    throw BoundError("exact probabilities need <= " + std::to_string(kMaxExhaustiveInputs) +
                     " primary inputs, '" + netlist.name() + "' has " + std::to_string(n));
  }
  const std::uint64_t total = std::uint64_t{1} << n;
  constexpr std::uint64_t kChunk = std::uint64_t{1} << 16;
  const auto chunks = static_cast<std::size_t>((total + kChunk - 1) / kChunk);
  std::vector<std::vector<std::uint64_t>> ones(chunks);
  parallel_for(chunks, [&](std::size_t c) {
    const auto first = c * kChunk;
    const auto count = static_cast<std::size_t>(std::min(kChunk, total - first));
    const auto values = evaluate_frozen(netlist, PatternBlock::exhaustive_range(n, first, count));
    auto& local = ones[c];
    local.assign(netlist.net_count(), 0);
    for (NetId net = 0; net < netlist.net_count(); ++net) {
      for (auto w : values.net(net)) local[net] += static_cast<std::uint64_t>(std::popcount(w));
    }
  });
  SignalProbabilityMap map;
  map.p1.assign(netlist.net_count(), 0.0);
  for (NetId net = 0; net < netlist.net_count(); ++net) {
    std::uint64_t sum = 0;
    for (const auto& local : ones) sum += local[net];
    map.p1[net] = std::ldexp(static_cast<double>(sum), -static_cast<int>(n));
  }
  return map;
}

MonteCarloEstimate monte_carlo_probs(const Netlist& netlist, std::uint64_t samples,
                                     std::uint64_t seed) {
  if (samples == 0) throw Error("monte_carlo_probs needs at least one sample");
  constexpr std::uint64_t kChunk = std::uint64_t{1} << 16;
  const auto chunks = static_cast<std::size_t>((samples + kChunk - 1) / kChunk);
  const auto width = netlist.inputs().size();
  std::vector<std::uint64_t> ones(netlist.net_count(), 0);
  auto count_chunk = [&](const NetValues& values, std::vector<std::uint64_t>& acc) {
    for (NetId net = 0; net < netlist.net_count(); ++net) {
      for (auto w : values.net(net)) acc[net] += static_cast<std::uint64_t>(std::popcount(w));
    }
  };
  auto chunk_size = [&](std::size_t c) {
    return static_cast<std::size_t>(std::min<std::uint64_t>(kChunk, samples - c * kChunk));
  };
  if (netlist.is_combinational()) {
    std::vector<std::vector<std::uint64_t>> partial(chunks);
    parallel_for(chunks, [&](std::size_t c) {
      partial[c].assign(netlist.net_count(), 0);
      const auto block = PatternBlock::random(width, chunk_size(c), detail::mix_seed(seed, c));
      count_chunk(evaluate_frozen(netlist, block), partial[c]);
    });
    for (const auto& p : partial) {
      for (NetId net = 0; net < netlist.net_count(); ++net) ones[net] += p[net];
    }
  } else {
    // One continuous sequence: state carries across chunks.
    std::vector<bool> state;
    for (std::size_t c = 0; c < chunks; ++c) {
      const auto block = PatternBlock::random(width, chunk_size(c), detail::mix_seed(seed, c));
      auto trace = simulate_seq(netlist, block, state);
      count_chunk(trace.values, ones);
      state = std::move(trace.final_state);
    }
  }
  MonteCarloEstimate est;
  est.samples = samples;
  est.map.p1.resize(netlist.net_count());
  est.standard_error.resize(netlist.net_count());
  for (NetId net = 0; net < netlist.net_count(); ++net) {
    const double p = static_cast<double>(ones[net]) / static_cast<double>(samples);
    est.map.p1[net] = p;
    est.standard_error[net] = std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
  }
  return est;
}

CandidateSet find_candidates(const SignalProbabilityMap& map, const Netlist& netlist, double p_th) {
  if (!(p_th > 0.5 && p_th < 1.0)) {
    throw Error("P_th must lie strictly between 0.5 and 1, got " + std::to_string(p_th));
  }
  if (map.p1.size() != netlist.net_count()) throw InterfaceError("probability map size mismatch");
  CandidateSet set;
  for (const auto& g : netlist.gates()) {
    if (is_constant(g.kind)) continue;
    const double p1 = map.one(g.output);
    const double p0 = map.zero(g.output);
    if (p0 >= p_th) set.x.push_back({g.output, netlist.net_name(g.output), false, p0});
    if (p1 >= p_th) set.y.push_back({g.output, netlist.net_name(g.output), true, p1});
  }
  auto order = [](const Candidate& a, const Candidate& b) {
    if (a.extremity != b.extremity) return a.extremity > b.extremity;
    return a.name < b.name;
  };
  std::sort(set.x.begin(), set.x.end(), order);
  std::sort(set.y.begin(), set.y.end(), order);
  set.c = set.x;
  set.c.insert(set.c.end(), set.y.begin(), set.y.end());
  std::sort(set.c.begin(), set.c.end(), order);
  return set;
}

std::string probability_csv(const Netlist& netlist, const SignalProbabilityMap& map,
                            const std::string& method, const std::vector<double>& standard_error) {
  std::ostringstream out;
  out.precision(17);
  out << "net,p1,method,stderr\n";
  for (NetId net = 0; net < netlist.net_count(); ++net) {
    out << netlist.net_name(net) << ',' << map.p1[net] << ',' << method << ',';
    if (!standard_error.empty()) out << standard_error[net];
    out << '\n';
  }
  return out.str();
}

}  // namespace tzlab
