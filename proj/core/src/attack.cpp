#include "tzlab/attack.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include <nlohmann/json.hpp>

#include "seed.hpp"
#include "tzlab/logicsim.hpp"
#include "tzlab/parallel.hpp"

namespace tzlab {

namespace {

using nlohmann::json;

// Golden PO responses per suite, computed once.
class SuiteOracle {
 public:
  SuiteOracle(const Netlist& golden, const DefenderProfile& defender) : defender_(defender) {
    for (const auto& s : defender.suites) expected_.push_back(output_block(golden, run_sequence(golden, s.patterns)));
    golden_ = &golden;
  }

  std::optional<std::size_t> first_failure(const Netlist& dut) const {
    check_interface(*golden_, dut);
    for (std::size_t i = 0; i < expected_.size(); ++i) {
      const auto& p = defender_.suites[i].patterns;
      if (p.count() == 0) continue;
      if (!(output_block(dut, run_sequence(dut, p)) == expected_[i])) return i;
    }
    return std::nullopt;
  }

 private:
  const DefenderProfile& defender_;
  const Netlist* golden_ = nullptr;
  std::vector<PatternBlock> expected_;
};

std::string join(const std::vector<std::string>& v, const char* sep = "+") {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += v[i];
  }
  return out;
}

bool driven_by_constant(const Netlist& n, NetId net) {
  auto d = n.driver(net);
  return d && is_constant(n.gate(*d).kind);
}

}  // namespace

// ---- salvage -------------------------------------------------------------

std::size_t SalvageReport::accepted() const {
  return static_cast<std::size_t>(std::count_if(log.begin(), log.end(), [](const auto& s) { return s.accepted; }));
}

std::optional<std::size_t> first_failing_suite(const Netlist& golden, const Netlist& dut,
                                               const DefenderProfile& defender) {
  return SuiteOracle(golden, defender).first_failure(dut);
}

double untargeted_prob(std::uint64_t n_u, std::size_t n_inputs) {
  if (n_inputs > 62) throw Error("untargeted_prob supports at most 62 inputs");
  if (n_u > (std::uint64_t{1} << n_inputs)) throw Error("N_u exceeds 2^n");
  return std::ldexp(static_cast<double>(n_u), -static_cast<int>(n_inputs));
}

std::pair<Netlist, SalvageReport> salvage(const Netlist& n, const DefenderProfile& defender,
                                          const CellLibrary& lib, const Workload& workload,
                                          const SalvageOptions& options) {
  if (!n.is_combinational()) throw Error("salvage needs a combinational netlist");
  SuiteOracle oracle(n, defender);
  if (oracle.first_failure(n)) throw Error("reference netlist fails its own test suites");

  SalvageReport report;
  report.p_th = options.p_th;
  report.before = cost_report(n, lib, workload);
  const auto cs = find_candidates(propagate(n), n, options.p_th);
  report.candidates = cs.c.size();
  const bool small = n.inputs().size() <= kMaxExhaustiveInputs;

  Netlist current = n;
  for (const auto& cand : cs.c) {
    SalvageStep step;
    step.net = cand.name;
    step.tie_value = cand.tie_value;
    step.extremity = cand.extremity;
    auto id = current.find_net(cand.name);
    if (!id || !current.driver(*id)) {
      step.reason = "already removed";
      report.log.push_back(std::move(step));
      continue;
    }
    if (driven_by_constant(current, *id)) {
      step.reason = "already constant";
      report.log.push_back(std::move(step));
      continue;
    }
    auto [trial, removed] = sweep_dead_gates(replace_with_constant(current, cand.name, cand.tie_value));
    if (auto fail = oracle.first_failure(trial)) {
      step.reason = "suite " + std::to_string(*fail) + " fails";
      report.log.push_back(std::move(step));
      continue;  // revert: `current` is untouched
    }
    step.accepted = true;
    for (const auto& r : removed) step.swept.push_back(r.output);
    if (options.compute_p_u && small) {
      step.p_u = untargeted_prob(exhaustive_diff(current, trial), n.inputs().size());
    }
    current = std::move(trial);
    report.log.push_back(std::move(step));
  }

  for (const auto& g : n.gates()) {
    if (is_constant(g.kind)) continue;
    const auto& name = n.net_name(g.output);
    auto id = current.find_net(name);
    if (!id || !current.driver(*id) || driven_by_constant(current, *id)) report.expendable.push_back(name);
  }
  report.verified = !first_failing_suite(n, current, defender).has_value();
  report.after = cost_report(current, lib, workload);
  report.delta = delta(report.before, report.after);
  return {std::move(current), std::move(report)};
}

// ---- templates -------------------------------------------------------------

std::uint64_t TrojanTemplate::threshold() const {
  return kind == TemplateKind::Comparator ? 1 : (std::uint64_t{1} << k) - 1;
}

std::string describe(const TrojanTemplate& t) {
  if (t.kind == TemplateKind::Comparator) return "comparator(taps=" + std::to_string(t.tap_arity) + ")";
  return "counter(k=" + std::to_string(t.k) + ", taps=" + std::to_string(t.tap_arity) + ")";
}

TrojanCircuit instantiate_ht(const TrojanTemplate& t, const std::vector<bool>& rare_values) {
  if (t.kind == TemplateKind::Counter && (t.k < 2 || t.k > 8)) {
    throw Error("counter width must be 2..8, got " + std::to_string(t.k));
  }
  if (t.tap_arity < 1 || t.tap_arity > kMaxFanin) {
    throw Error("tap arity must be 1.." + std::to_string(kMaxFanin));
  }
  std::vector<bool> rare = rare_values.empty() ? std::vector<bool>(t.tap_arity, true) : rare_values;
  if (rare.size() != t.tap_arity) throw Error("one rare value per tap expected");

  NetlistBuilder b("ht");
  TrojanCircuit out;
  std::vector<std::string> taps;
  for (std::size_t i = 0; i < t.tap_arity; ++i) {
    taps.push_back("t" + std::to_string(i));
    b.add_input(taps.back());
  }
  b.add_input("pin");
  b.add_output("pout");

  // Event: conjunction of taps at their rare values.
  const bool all_one = std::all_of(rare.begin(), rare.end(), [](bool v) { return v; });
  const bool all_zero = std::none_of(rare.begin(), rare.end(), [](bool v) { return v; });
  if (t.tap_arity == 1) {
    if (rare[0]) {
      out.event_net = taps[0];
    } else {
      b.add_gate("ev", GateKind::Not, {taps[0]});
      out.event_net = "ev";
    }
  } else if (all_one) {
    b.add_gate("ev", GateKind::And, taps);
    out.event_net = "ev";
  } else if (all_zero) {
    b.add_gate("ev", GateKind::Nor, taps);
    out.event_net = "ev";
  } else {
    std::vector<std::string> lits;
    for (std::size_t i = 0; i < taps.size(); ++i) {
      if (rare[i]) {
        lits.push_back(taps[i]);
      } else {
        lits.push_back("u" + std::to_string(i));
        b.add_gate(lits.back(), GateKind::Not, {taps[i]});
      }
    }
    b.add_gate("ev", GateKind::And, lits);
    out.event_net = "ev";
  }

  if (t.kind == TemplateKind::Counter) {
    // bit i toggles when the event arrives with all lower bits set
    std::string carry = out.event_net;
    std::vector<std::string> bits;
    for (unsigned i = 0; i < t.k; ++i) {
      const auto bit = "b" + std::to_string(i);
      const auto next = "n" + std::to_string(i);
      bits.push_back(bit);
      b.add_gate(bit, GateKind::Dff, {next});
      b.add_gate(next, GateKind::Xor, {bit, carry});
      if (i + 1 < t.k) {
        const auto c = "c" + std::to_string(i + 1);
        b.add_gate(c, GateKind::And, {carry, bit});
        carry = c;
      }
    }
    b.add_gate("q", GateKind::And, bits);
    out.trigger_net = "q";
  } else {
    out.trigger_net = out.event_net;
  }
  b.add_gate("inv", GateKind::Not, {"pin"});
  b.add_gate("pout", GateKind::Mux2, {out.trigger_net, "pin", "inv"});

  out.sub.body = b.build();
  out.sub.tap_inputs = taps;
  out.sub.payload_in = "pin";
  out.sub.payload_out = "pout";
  return out;
}

// ---- locations ---------------------------------------------------------------

double p_event_max(const TrojanTemplate& t, std::size_t defender_patterns, double safety_factor) {
  if (defender_patterns == 0) return std::numeric_limits<double>::infinity();
  return static_cast<double>(t.threshold()) / (safety_factor * static_cast<double>(defender_patterns));
}

std::vector<Location> enumerate_locations(const Netlist& n_prime, const SignalProbabilityMap& probs,
                                          const DefenderProfile& defender, const TrojanTemplate& t,
                                          const LocationOptions& options) {
  if (probs.p1.size() != n_prime.net_count()) throw InterfaceError("probability map size mismatch");
  struct Tap {
    NetId net;
    bool rare;
    double p;
  };
  std::vector<Tap> pool;
  for (const auto& g : n_prime.gates()) {
    if (is_constant(g.kind)) continue;
    const double p1 = probs.one(g.output);
    const bool rare = p1 < 0.5;
    const double p = rare ? p1 : 1.0 - p1;
    if (p > 0) pool.push_back({g.output, rare, p});
  }
  std::sort(pool.begin(), pool.end(), [&](const Tap& a, const Tap& b) {
    if (a.p != b.p) return a.p < b.p;
    return n_prime.net_name(a.net) < n_prime.net_name(b.net);
  });
  if (pool.size() > options.tap_pool) pool.resize(options.tap_pool);

  const double pmax = p_event_max(t, defender.total_patterns(), options.safety_factor);
  struct TapSet {
    std::vector<std::size_t> idx;
    double p;
    std::string key;
  };
  std::vector<TapSet> sets;
  const std::size_t a = t.tap_arity;
  if (a == 0 || a > pool.size()) return {};
  std::vector<std::size_t> comb(a);
  std::iota(comb.begin(), comb.end(), 0);
  for (;;) {
    double p = 1;
    std::vector<std::string> names;
    for (auto i : comb) {
      p *= pool[i].p;
      names.push_back(n_prime.net_name(pool[i].net));
    }
    if (p <= pmax) sets.push_back({comb, p, join(names)});
    // next combination in lexicographic order
    std::size_t i = a;
    while (i > 0 && comb[i - 1] == pool.size() - a + (i - 1)) --i;
    if (i == 0) break;
    ++comb[i - 1];
    for (std::size_t j = i; j < a; ++j) comb[j] = comb[j - 1] + 1;
  }
  std::sort(sets.begin(), sets.end(), [](const TapSet& x, const TapSet& y) {
    if (x.p != y.p) return x.p < y.p;
    return x.key < y.key;
  });

  const auto reach = reaches_output(n_prime);
  std::vector<NetId> targets;
  for (const auto& g : n_prime.gates()) {
    if (is_constant(g.kind) || !reach[g.output]) continue;
    if (n_prime.readers(g.output).empty() && !n_prime.is_output(g.output)) continue;
    targets.push_back(g.output);
  }
  std::sort(targets.begin(), targets.end(),
            [&](NetId x, NetId y) { return n_prime.net_name(x) < n_prime.net_name(y); });
  // Which pool taps sit in each target's fan-out (a payload there would loop back).
  std::vector<std::vector<bool>> blocked(targets.size(), std::vector<bool>(pool.size(), false));
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const auto closure = fanout_closure(n_prime, targets[i]);
    for (std::size_t j = 0; j < pool.size(); ++j) blocked[i][j] = closure[pool[j].net];
  }

  std::vector<Location> out;
  for (const auto& s : sets) {
    for (std::size_t i = 0; i < targets.size(); ++i) {
      if (out.size() >= options.max_locations) return out;
      if (std::any_of(s.idx.begin(), s.idx.end(), [&](std::size_t j) { return blocked[i][j]; })) continue;
      Location loc;
      for (auto j : s.idx) {
        loc.taps.push_back(n_prime.net_name(pool[j].net));
        loc.rare_values.push_back(pool[j].rare);
      }
      loc.target = n_prime.net_name(targets[i]);
      loc.p_event = s.p;
      out.push_back(std::move(loc));
    }
  }
  return out;
}

// ---- injection -------------------------------------------------------------

std::pair<Netlist, TrojanInstance> place_ht(const Netlist& host, const TrojanTemplate& t,
                                            const Location& location) {
  const auto circuit = instantiate_ht(t, location.rare_values);
  std::map<std::string, std::string> bindings;
  for (std::size_t i = 0; i < circuit.sub.tap_inputs.size(); ++i) {
    bindings[circuit.sub.tap_inputs[i]] = location.taps.at(i);
  }
  auto ins = insert_subcircuit(host, circuit.sub, bindings, location.target);
  TrojanInstance inst;
  inst.tmpl = t;
  inst.location = location;
  inst.event_net = ins.renamed.at(circuit.event_net);
  inst.trigger_net = ins.renamed.at(circuit.trigger_net);
  for (const auto& g : circuit.sub.body.gates()) {
    inst.gates.push_back(ins.renamed.at(circuit.sub.body.net_name(g.output)));
  }
  return {std::move(ins.netlist), std::move(inst)};
}

bool within(const DeltaReport& d, const Tolerance& eps) {
  return std::abs(d.f_total) <= eps.total && std::abs(d.f_dyn) <= eps.dynamic &&
         std::abs(d.f_leak) <= eps.leakage && std::abs(d.f_area) <= eps.area;
}

namespace {

// Subject exceeds the reference by more than epsilon in some metric.
bool over_budget(const DeltaReport& d, const Tolerance& eps) {
  return -d.f_total > eps.total || -d.f_dyn > eps.dynamic || -d.f_leak > eps.leakage || -d.f_area > eps.area;
}

// Largest residual in units of its tolerance.
double score(const DeltaReport& d, const Tolerance& eps) {
  auto r = [](double f, double e) { return e > 0 ? std::abs(f) / e : (f == 0 ? 0.0 : std::abs(f) * 1e12); };
  return std::max({r(d.f_total, eps.total), r(d.f_dyn, eps.dynamic), r(d.f_leak, eps.leakage),
                   r(d.f_area, eps.area)});
}

}  // namespace

PadResult pad_dummy(const Netlist& n, const CostReport& reference, const CellLibrary& lib,
                    const Workload& workload, const Tolerance& epsilon, std::size_t max_gates) {
  PadResult out;
  CostReport subject = cost_report(n, lib, workload);
  out.residual = delta(reference, subject);
  out.within = within(out.residual, epsilon);
  out.netlist = n;
  if (out.within || n.net_count() == 0) return out;

  // A BUFF/NOT reading net x toggles exactly as often as x. Only distinct
  // toggle counts matter; the lowest net id stands for each.
  const auto toggles = toggle_counts(n, workload.patterns);
  std::map<std::uint64_t, NetId> by_toggles;
  for (NetId x = 0; x < n.net_count(); ++x) by_toggles.try_emplace(toggles[x], x);

  struct Pick {
    GateKind kind;
    NetId net;
  };
  std::vector<Pick> picks;
  double current = score(out.residual, epsilon);
  while (picks.size() < max_gates && !within(out.residual, epsilon)) {
    std::optional<Pick> best;
    double best_score = current;
    DeltaReport best_delta;
    CostReport best_subject;
    for (GateKind kind : {GateKind::Buff, GateKind::Not}) {
      const auto c = lib.cost(kind, 1);
      for (const auto& [tg, x] : by_toggles) {
        CostReport s = subject;
        s.area_u += c.area;
        s.leak_u += c.leak;
        s.dyn_u += static_cast<Micro>(tg) * c.e_toggle;
        const auto d = delta(reference, s);
        const double sc = score(d, epsilon);
        if (sc < best_score) {
          best_score = sc;
          best = Pick{kind, x};
          best_delta = d;
          best_subject = s;
        }
      }
    }
    if (!best) break;
    picks.push_back(*best);
    subject = best_subject;
    out.residual = best_delta;
    current = best_score;
  }
  if (picks.empty()) return out;

  auto b = n.to_builder();
  std::uint64_t fresh = n.next_fresh_index();
  for (const auto& p : picks) {
    auto name = "_tz" + std::to_string(fresh++);
    b.add_gate(name, p.kind, {n.net_name(p.net)}, true);
    out.added.push_back(name);
  }
  out.netlist = b.build();
  out.residual = delta(reference, cost_report(out.netlist, lib, workload));
  out.within = within(out.residual, epsilon);
  return out;
}

namespace {

struct Attack {
  PatternBlock sequence;
  std::size_t po = 0;
};

// Trigger pattern repeated threshold times, then a pattern on which inverting
// the target changes a PO of the host; confirmed by simulating N and N''.
std::optional<Attack> build_attack(const Netlist& n, const Netlist& infected, const Netlist& host,
                                   const TrojanInstance& inst, const PatternBlock& pool,
                                   const NetValues& host_values) {
  const auto words = host_values.words();
  std::vector<std::uint64_t> ev(words, ~0ULL);
  for (std::size_t i = 0; i < inst.location.taps.size(); ++i) {
    const auto lane = host_values.net(host.net(inst.location.taps[i]));
    for (std::size_t w = 0; w < words; ++w) ev[w] &= inst.location.rare_values[i] ? lane[w] : ~lane[w];
  }
  if (words) ev[words - 1] &= tail_mask(pool.count());

  const NetId target = host.net(inst.location.target);
  const std::vector<Fault> flips{{target, false, FaultSite::Stem, 0, 0}, {target, true, FaultSite::Stem, 0, 0}};
  const auto sim = fault_simulate(host, pool, flips);
  std::vector<std::uint64_t> flip(words);
  for (std::size_t w = 0; w < words; ++w) flip[w] = sim.row(0)[w] | sim.row(1)[w];

  const bool comparator = inst.tmpl.kind == TemplateKind::Comparator;
  std::optional<std::size_t> trigger;
  for (std::size_t w = 0; w < words && !trigger; ++w) {
    if (ev[w]) trigger = w * kWordBits + static_cast<std::size_t>(std::countr_zero(ev[w]));
  }
  if (!trigger) return std::nullopt;

  const std::size_t reps = comparator ? 0 : inst.tmpl.threshold();
  std::size_t tried = 0;
  for (std::size_t w = 0; w < words && tried < 64; ++w) {
    std::uint64_t cand = comparator ? flip[w] & ev[w] : flip[w];
    while (cand && tried < 64) {
      const std::size_t t = w * kWordBits + static_cast<std::size_t>(std::countr_zero(cand));
      cand &= cand - 1;
      ++tried;
      std::vector<std::string> rows(reps, pool.row(*trigger));
      rows.push_back(pool.row(t));
      const auto seq = PatternBlock::from_rows(pool.width(), rows);
      const auto last = seq.count() - 1;
      const auto a = run_sequence(n, seq);
      const auto b = run_sequence(infected, seq);
      for (std::size_t po = 0; po < n.outputs().size(); ++po) {
        if (a.get(n.outputs()[po], last) != b.get(infected.outputs()[po], last)) return Attack{seq, po};
      }
    }
  }
  return std::nullopt;
}

}  // namespace

std::pair<Netlist, InjectionReport> inject(const Netlist& n, const Netlist& n_prime,
                                           const DefenderProfile& defender, const CellLibrary& lib,
                                           const Workload& workload, const InjectOptions& options) {
  if (!n_prime.is_combinational()) throw Error("injection host must be combinational");
  check_interface(n, n_prime);
  InjectionReport report;
  report.reference = cost_report(n, lib, workload);
  const SuiteOracle oracle(n, defender);
  const auto probs = propagate(n_prime);
  const auto pool = PatternBlock::random(n_prime.inputs().size(), options.potency_patterns,
                                         detail::mix_seed(options.seed, 0xA77AC4));
  const auto host_values = evaluate_frozen(n_prime, pool);
  const double ref_area = static_cast<double>(report.reference.area_u);
  const double ref_leak = static_cast<double>(report.reference.leak_u);

  for (std::size_t ti = 0; ti < options.templates.size(); ++ti) {
    const auto& tmpl = options.templates[ti];
    const auto locations = enumerate_locations(n_prime, probs, defender, tmpl, options.locations);
    for (std::size_t li = 0; li < locations.size(); ++li) {
      const auto& loc = locations[li];
      TriedLocation tried{ti, li, join(loc.taps), loc.target, ""};
      auto [infected, inst] = place_ht(n_prime, tmpl, loc);
      inst.template_index = ti;
      inst.location_index = li;

      // Area and leakage need no simulation, so check them first.
      Micro area_u = 0;
      Micro leak_u = 0;
      for (const auto& g : infected.gates()) {
        const auto c = lib.cost(g.kind, g.inputs.size());
        area_u += c.area;
        leak_u += c.leak;
      }
      if ((static_cast<double>(area_u) - ref_area) > options.epsilon.area * ref_area ||
          (static_cast<double>(leak_u) - ref_leak) > options.epsilon.leakage * ref_leak) {
        tried.reason = "budget-exceeded";
        report.tried.push_back(std::move(tried));
        continue;
      }
      if (oracle.first_failure(infected)) {
        tried.reason = "functional-fail";
        report.tried.push_back(std::move(tried));
        continue;
      }
      auto attack = build_attack(n, infected, n_prime, inst, pool, host_values);
      if (!attack) {
        tried.reason = "trigger-unreachable";
        report.tried.push_back(std::move(tried));
        continue;
      }
      auto cost = cost_report(infected, lib, workload);
      auto d = delta(report.reference, cost);
      if (over_budget(d, options.epsilon)) {
        tried.reason = "budget-exceeded";
        report.tried.push_back(std::move(tried));
        continue;
      }
      std::vector<std::string> dummies;
      if (!within(d, options.epsilon)) {
        auto pad = pad_dummy(infected, report.reference, lib, workload, options.epsilon, options.max_dummy_gates);
        if (!pad.within) {
          tried.reason = "padding-insufficient";
          report.tried.push_back(std::move(tried));
          continue;
        }
        infected = std::move(pad.netlist);
        dummies = std::move(pad.added);
        cost = cost_report(infected, lib, workload);
        d = delta(report.reference, cost);
      }
      // Padding only adds unobserved gates; re-check anyway.
      if (oracle.first_failure(infected)) throw std::logic_error("padding changed the circuit function");

      report.success = true;
      report.infected = cost;
      report.delta = d;
      report.dummy_gates = std::move(dummies);
      report.attacker_sequence = std::move(attack->sequence);
      report.flipped_po = attack->po;
      if (options.trigger_trials > 0) {
        report.p_ft = trigger_prob(infected, inst, loc.p_event, defender.total_patterns(), options.trigger_trials,
                                   options.seed);
      }
      report.chosen = std::move(inst);
      return {std::move(infected), std::move(report)};
    }
  }
  report.failure = "no template/location fits the budget";
  report.infected = report.reference;
  return {n_prime, std::move(report)};
}

// ---- trigger probability ----------------------------------------------------

double binomial_tail(std::size_t n, double p, std::uint64_t m) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error("probability out of range");
  if (m == 0) return 1.0;
  if (m > n || p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;
  const double lp = std::log(p);
  const double lq = std::log1p(-p);
  const double ln = std::lgamma(static_cast<double>(n) + 1);
  double sum = 0;
  for (std::uint64_t i = m; i <= n; ++i) {
    const double di = static_cast<double>(i);
    const double term =
        std::exp(ln - std::lgamma(di + 1) - std::lgamma(static_cast<double>(n) - di + 1) + di * lp +
                 (static_cast<double>(n) - di) * lq);
    sum += term;
    if (term < sum * 1e-18 && di > static_cast<double>(n) * p) break;
  }
  return std::min(sum, 1.0);
}

TriggerEstimate trigger_prob(const Netlist& infected, const TrojanInstance& ht, double p_event,
                             std::size_t patterns, std::uint64_t trials, std::uint64_t seed) {
  auto trigger = infected.find_net(ht.trigger_net);
  if (!trigger) throw Error("trigger net '" + ht.trigger_net + "' not in the netlist");
  TriggerEstimate est;
  est.p_event = p_event;
  est.patterns = patterns;
  est.threshold = ht.tmpl.threshold();
  est.analytic = binomial_tail(patterns, p_event, est.threshold);
  est.trials = trials;
  if (trials == 0) return est;

  const NetId roots[] = {*trigger};
  const auto cone = fanin_cone(infected, roots);
  std::vector<NetId> pis;
  std::vector<std::size_t> dffs;
  std::vector<std::size_t> logic;
  {
    std::set<NetId> seen;
    for (auto g : cone) {
      const auto& gate = infected.gate(g);
      (gate.kind == GateKind::Dff ? dffs : logic).push_back(g);
      for (auto in : gate.inputs) {
        if (infected.is_input(in) && seen.insert(in).second) pis.push_back(in);
      }
    }
    if (infected.is_input(*trigger) && seen.insert(*trigger).second) pis.push_back(*trigger);
  }
  // A counter's select depends only on state, so one extra step observes the
  // count reached after the last pattern.
  const std::size_t steps = patterns + (dffs.empty() ? 0 : 1);
  const std::size_t blocks = (trials + kWordBits - 1) / kWordBits;
  std::vector<std::uint64_t> fires(blocks, 0);

  parallel_for(blocks, [&](std::size_t block) {
    std::mt19937_64 rng(detail::mix_seed(seed, block));
    std::vector<std::uint64_t> vals(infected.net_count(), 0);
    std::vector<std::uint64_t> state(dffs.size(), 0);
    std::vector<std::uint64_t> in;
    std::uint64_t fired = 0;
    for (std::size_t t = 0; t < steps; ++t) {
      for (auto pi : pis) vals[pi] = rng();
      for (std::size_t d = 0; d < dffs.size(); ++d) vals[infected.gate(dffs[d]).output] = state[d];
      for (auto g : logic) {
        const auto& gate = infected.gate(g);
        in.clear();
        for (auto i : gate.inputs) in.push_back(vals[i]);
        vals[gate.output] = eval_word(gate.kind, in);
      }
      fired |= vals[*trigger];
      for (std::size_t d = 0; d < dffs.size(); ++d) state[d] = vals[infected.gate(dffs[d]).inputs[0]];
    }
    const std::size_t lanes = std::min<std::uint64_t>(kWordBits, trials - block * kWordBits);
    fires[block] = static_cast<std::uint64_t>(std::popcount(fired & tail_mask(lanes)));
  });

  est.fires = std::accumulate(fires.begin(), fires.end(), std::uint64_t{0});
  const double nt = static_cast<double>(trials);
  const double ph = static_cast<double>(est.fires) / nt;
  est.monte_carlo = ph;
  constexpr double z = 1.959963984540054;
  const double denom = 1 + z * z / nt;
  const double centre = (ph + z * z / (2 * nt)) / denom;
  const double half = z * std::sqrt(ph * (1 - ph) / nt + z * z / (4 * nt * nt)) / denom;
  est.ci_low = std::max(0.0, centre - half);
  est.ci_high = std::min(1.0, centre + half);
  return est;
}

// ---- reports -----------------------------------------------------------------

namespace {

json cost_obj(const CostReport& r) { return json::parse(cost_json(r)); }
json delta_obj(const DeltaReport& d) { return json::parse(delta_json(d)); }

}  // namespace

std::string salvage_json(const SalvageReport& r) {
  json log = json::array();
  for (const auto& s : r.log) {
    json e = {{"net", s.net},
              {"tie_value", s.tie_value ? 1 : 0},
              {"extremity", s.extremity},
              {"accepted", s.accepted},
              {"reason", s.reason},
              {"swept", s.swept}};
    e["p_u"] = s.p_u ? json(*s.p_u) : json(nullptr);
    log.push_back(std::move(e));
  }
  json j = {{"p_th", r.p_th},
            {"candidates", r.candidates},
            {"expendable_gates", {{"count", r.eg()}, {"nets", r.expendable}}},
            {"accepted", r.accepted()},
            {"verified", r.verified},
            {"before", cost_obj(r.before)},
            {"after", cost_obj(r.after)},
            {"delta", delta_obj(r.delta)},
            {"log", log}};
  return j.dump(2);
}

std::string injection_json(const InjectionReport& r) {
  json tried = json::array();
  for (const auto& t : r.tried) {
    tried.push_back({{"template", t.template_index},
                     {"location", t.location_index},
                     {"taps", t.taps},
                     {"target", t.target},
                     {"reason", t.reason}});
  }
  json j = {{"success", r.success},
            {"dummy_gates", r.dummy_gates},
            {"reference", cost_obj(r.reference)},
            {"infected", cost_obj(r.infected)},
            {"delta", delta_obj(r.delta)},
            {"tried", tried}};
  if (!r.failure.empty()) j["failure"] = r.failure;
  if (r.chosen) {
    const auto& c = *r.chosen;
    j["chosen"] = {{"template", describe(c.tmpl)},
                   {"kind", c.tmpl.kind == TemplateKind::Counter ? "counter" : "comparator"},
                   {"k", c.tmpl.k},
                   {"tap_arity", c.tmpl.tap_arity},
                   {"taps", c.location.taps},
                   {"rare_values", c.location.rare_values},
                   {"target", c.location.target},
                   {"p_event", c.location.p_event},
                   {"trigger_net", c.trigger_net},
                   {"gates", c.gates},
                   {"template_index", c.template_index},
                   {"location_index", c.location_index}};
    j["attacker_sequence"] = {{"patterns", write_patterns(r.attacker_sequence)}, {"flipped_po", r.flipped_po}};
  }
  if (r.p_ft) {
    const auto& p = *r.p_ft;
    j["p_ft"] = {{"p_event", p.p_event},   {"patterns", p.patterns},       {"threshold", p.threshold},
                 {"analytic", p.analytic}, {"trials", p.trials},           {"fires", p.fires},
                 {"monte_carlo", p.monte_carlo}, {"ci", {p.ci_low, p.ci_high}}};
  }
  return j.dump(2);
}

}  // namespace tzlab
