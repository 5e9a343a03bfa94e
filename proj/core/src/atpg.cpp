#include "tzlab/atpg.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "tzlab/logicsim.hpp"
#include "tzlab/parallel.hpp"

namespace tzlab {

std::string describe(const Netlist& netlist, const Fault& fault) {
  std::string out = netlist.net_name(fault.net);
  if (fault.site == FaultSite::Branch) {
    out += "->" + netlist.net_name(netlist.gate(fault.gate).output) + "." + std::to_string(fault.pin);
  }
  out += fault.stuck_value ? "/1" : "/0";
  return out;
}

std::vector<Fault> enumerate_faults(const Netlist& netlist) {
  std::vector<Fault> faults;
  for (NetId net = 0; net < netlist.net_count(); ++net) {
    faults.push_back({net, false, FaultSite::Stem, 0, 0});
    faults.push_back({net, true, FaultSite::Stem, 0, 0});
    if (netlist.fanout(net) <= 1) continue;
    std::uint32_t last_gate = ~0U;
    for (auto g : netlist.readers(net)) {
      if (g == last_gate) continue;  // pins of one gate are listed together
      last_gate = g;
      const auto& gate = netlist.gate(g);
      for (std::uint32_t pin = 0; pin < gate.inputs.size(); ++pin) {
        if (gate.inputs[pin] != net) continue;
        faults.push_back({net, false, FaultSite::Branch, g, pin});
        faults.push_back({net, true, FaultSite::Branch, g, pin});
      }
    }
  }
  return faults;
}

std::vector<Fault> collapse_equivalent_faults(const Netlist& netlist, std::span<const Fault> faults) {
  using Key = std::tuple<NetId, bool, FaultSite, std::uint32_t, std::uint32_t>;
  auto key_of = [](const Fault& f) {
    return f.site == FaultSite::Stem ? Key{f.net, f.stuck_value, f.site, 0, 0}
                                     : Key{f.net, f.stuck_value, f.site, f.gate, f.pin};
  };
  std::map<Key, std::size_t> index;
  for (std::size_t i = 0; i < faults.size(); ++i) index.emplace(key_of(faults[i]), i);

  std::vector<std::size_t> parent(faults.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite = [&](const Key& a, const Key& b) {
    auto ia = index.find(a);
    auto ib = index.find(b);
    if (ia == index.end() || ib == index.end()) return;
    auto ra = find(ia->second);
    auto rb = find(ib->second);
    if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
  };

  for (std::uint32_t g = 0; g < netlist.gate_count(); ++g) {
    const auto& gate = netlist.gate(g);
    auto out_fault = [&](bool v) { return Key{gate.output, v, FaultSite::Stem, 0, 0}; };
    for (std::uint32_t pin = 0; pin < gate.inputs.size(); ++pin) {
      const auto net = gate.inputs[pin];
      auto in_fault = [&](bool v) {
        return netlist.fanout(net) > 1 ? Key{net, v, FaultSite::Branch, g, pin}
                                       : Key{net, v, FaultSite::Stem, 0, 0};
      };
      switch (gate.kind) {
        case GateKind::And: unite(in_fault(false), out_fault(false)); break;
        case GateKind::Nand: unite(in_fault(false), out_fault(true)); break;
        case GateKind::Or: unite(in_fault(true), out_fault(true)); break;
        case GateKind::Nor: unite(in_fault(true), out_fault(false)); break;
        case GateKind::Not:
          unite(in_fault(false), out_fault(true));
          unite(in_fault(true), out_fault(false));
          break;
        case GateKind::Buff:
          unite(in_fault(false), out_fault(false));
          unite(in_fault(true), out_fault(true));
          break;
        default: break;
      }
    }
  }
  std::vector<Fault> out;
  for (std::size_t i = 0; i < faults.size(); ++i) {
    if (find(i) == i) out.push_back(faults[i]);
  }
  return out;
}

bool FaultSimResult::is_detected(std::size_t fault) const {
  for (auto w : row(fault)) {
    if (w) return true;
  }
  return false;
}

std::optional<std::size_t> FaultSimResult::first_detection(std::size_t fault) const {
  auto r = row(fault);
  for (std::size_t w = 0; w < r.size(); ++w) {
    if (r[w]) return w * kWordBits + static_cast<std::size_t>(std::countr_zero(r[w]));
  }
  return std::nullopt;
}

FaultSimResult fault_simulate(const Netlist& netlist, const PatternBlock& patterns,
                              std::span<const Fault> faults) {
  if (!netlist.is_combinational()) throw Error("fault simulation needs a combinational netlist");
  const auto good = evaluate_frozen(netlist, patterns);
  const auto words = good.words();
  const auto mask = tail_mask(patterns.count());

  FaultSimResult result;
  result.patterns = patterns.count();
  result.words = words;
  result.detections.assign(faults.size() * words, 0);
  if (faults.empty() || words == 0) return result;

  const std::vector<std::uint64_t> zeros(words, 0);
  const std::vector<std::uint64_t> ones(words, ~std::uint64_t{0});

  constexpr std::size_t kFaultsPerTask = 64;
  const auto tasks = (faults.size() + kFaultsPerTask - 1) / kFaultsPerTask;
  parallel_for(tasks, [&](std::size_t task) {
    std::vector<const std::uint64_t*> lane(netlist.net_count());
    for (NetId net = 0; net < netlist.net_count(); ++net) lane[net] = good.net(net).data();
    std::vector<std::uint64_t> scratch;
    std::vector<std::uint32_t> cone;
    std::vector<bool> in_cone(netlist.gate_count(), false);
    std::vector<NetId> touched;
    std::array<const std::uint64_t*, kMaxFanin> ins{};

    const auto end = std::min(faults.size(), (task + 1) * kFaultsPerTask);
    for (auto f = task * kFaultsPerTask; f < end; ++f) {
      const auto& fault = faults[f];
      const auto* forced = fault.stuck_value ? ones.data() : zeros.data();
      cone.clear();
      auto add_readers = [&](NetId net) {
        for (auto g : netlist.readers(net)) {
          if (!in_cone[g]) {
            in_cone[g] = true;
            cone.push_back(g);
          }
        }
      };
      if (fault.site == FaultSite::Stem) {
        lane[fault.net] = forced;
        touched.push_back(fault.net);
        add_readers(fault.net);
      } else {
        in_cone[fault.gate] = true;
        cone.push_back(fault.gate);
      }
      for (std::size_t i = 0; i < cone.size(); ++i) add_readers(netlist.gate(cone[i]).output);
      // Gate indices are a topological order.
      std::sort(cone.begin(), cone.end());
      scratch.resize(cone.size() * words);
      for (std::size_t i = 0; i < cone.size(); ++i) {
        const auto& gate = netlist.gate(cone[i]);
        for (std::size_t p = 0; p < gate.inputs.size(); ++p) {
          const bool branch_pin =
              fault.site == FaultSite::Branch && cone[i] == fault.gate && p == fault.pin;
          ins[p] = branch_pin ? forced : lane[gate.inputs[p]];
        }
        auto* out = scratch.data() + i * words;
        eval_lanes(gate.kind, std::span<const std::uint64_t* const>(ins.data(), gate.inputs.size()),
                   out, 0, words);
        lane[gate.output] = out;
        touched.push_back(gate.output);
      }
      auto* row = result.detections.data() + f * words;
      for (auto po : netlist.outputs()) {
        if (lane[po] == good.net(po).data()) continue;
        const auto* bad = lane[po];
        const auto* ref = good.net(po).data();
        for (std::size_t w = 0; w < words; ++w) row[w] |= bad[w] ^ ref[w];
      }
      row[words - 1] &= mask;
      for (auto net : touched) lane[net] = good.net(net).data();
      touched.clear();
      for (auto g : cone) in_cone[g] = false;
    }
  });
  for (std::size_t f = 0; f < faults.size(); ++f) {
    if (result.is_detected(f)) ++result.detected;
  }
  result.coverage = static_cast<double>(result.detected) / static_cast<double>(faults.size());
  return result;
}

std::string_view to_string(SuiteKind kind) {
  return kind == SuiteKind::StuckAtRandom ? "stuck-at-random" : "bespoke-random";
}

TestPatternSet generate_tests(const Netlist& netlist, const GenerationOptions& options) {
  if (!(options.target_coverage >= 0.0 && options.target_coverage <= 1.0)) {
    throw Error("target coverage must lie in [0, 1]");
  }
  const auto width = netlist.inputs().size();
  auto faults = enumerate_faults(netlist);
  if (options.collapse) faults = collapse_equivalent_faults(netlist, faults);

  TestPatternSet set;
  set.kind = SuiteKind::StuckAtRandom;
  set.seed = options.seed;
  set.target = options.target_coverage;
  set.patterns = PatternBlock(width, 0);
  set.faults_total = faults.size();
  if (options.target_coverage == 0.0) {
    set.target_met = true;
    return set;
  }

  const auto stream = PatternBlock::random(width, options.budget, options.seed);
  const auto sim = fault_simulate(netlist, stream, faults);

  std::vector<bool> detectable(faults.size());
  if (width <= options.exhaustive_inputs) {
    const auto full = fault_simulate(netlist, PatternBlock::exhaustive(width), faults);
    for (std::size_t f = 0; f < faults.size(); ++f) detectable[f] = full.is_detected(f);
  } else {
    for (std::size_t f = 0; f < faults.size(); ++f) detectable[f] = sim.is_detected(f);
  }
  for (std::size_t f = 0; f < faults.size(); ++f) {
    if (detectable[f]) {
      ++set.faults_detectable;
    } else {
      set.undetectable.push_back(faults[f]);
    }
  }

  // Pattern t is kept exactly when it is the first detector of some fault.
  std::map<std::size_t, std::size_t> first_hits;
  for (std::size_t f = 0; f < faults.size(); ++f) {
    if (auto t = sim.first_detection(f)) ++first_hits[*t];
  }
  const auto needed = static_cast<std::size_t>(
      std::ceil(options.target_coverage * static_cast<double>(set.faults_detectable) - 1e-9));
  std::vector<std::size_t> kept;
  std::size_t covered = 0;
  set.draws = options.budget;
  for (const auto& [t, hits] : first_hits) {
    if (covered >= needed) break;
    kept.push_back(t);
    covered += hits;
    set.draws = t + 1;
  }
  set.faults_detected = covered;
  set.target_met = set.faults_detectable > 0 && covered >= needed;
  set.coverage = set.faults_detectable == 0
                     ? 0.0
                     : static_cast<double>(covered) / static_cast<double>(set.faults_detectable);
  set.patterns = PatternBlock(width, kept.size());
  for (std::size_t i = 0; i < kept.size(); ++i) {
    for (std::size_t pin = 0; pin < width; ++pin) set.patterns.set(i, pin, stream.get(kept[i], pin));
  }
  return set;
}

TestPatternSet bespoke_suite(const Netlist& netlist, std::size_t count, std::uint64_t seed) {
  TestPatternSet set;
  set.kind = SuiteKind::BespokeRandom;
  set.seed = seed;
  set.patterns = PatternBlock::random(netlist.inputs().size(), count, seed);
  set.draws = count;
  if (netlist.is_combinational() && count > 0) {
    const auto faults = collapse_equivalent_faults(netlist, enumerate_faults(netlist));
    const auto sim = fault_simulate(netlist, set.patterns, faults);
    set.faults_total = set.faults_detectable = faults.size();
    set.faults_detected = sim.detected;
    set.coverage = sim.coverage;
  }
  return set;
}

std::size_t DefenderProfile::total_patterns() const {
  std::size_t total = 0;
  for (const auto& s : suites) total += s.patterns.count();
  return total;
}

std::string fault_csv(const Netlist& netlist, std::span<const Fault> faults,
                      const FaultSimResult& result) {
  std::ostringstream out;
  out << "net,site,stuck_value,detected_by\n";
  for (std::size_t f = 0; f < faults.size(); ++f) {
    const auto& fault = faults[f];
    out << netlist.net_name(fault.net) << ',';
    if (fault.site == FaultSite::Stem) {
      out << "stem";
    } else {
      out << "branch:" << netlist.net_name(netlist.gate(fault.gate).output) << ':' << fault.pin;
    }
    out << ',' << (fault.stuck_value ? 1 : 0) << ',';
    if (auto t = result.first_detection(f)) out << *t;
    out << '\n';
  }
  return out.str();
}

}  // namespace tzlab
