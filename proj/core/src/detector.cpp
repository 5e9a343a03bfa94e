#include "tzlab/detector.hpp"

#include <bit>
#include <random>

#include <nlohmann/json.hpp>

#include "seed.hpp"
#include "tzlab/logicsim.hpp"

namespace tzlab {

using json = nlohmann::json;

namespace {

// Step indices at which any PO lane of a and b differ.
std::vector<std::size_t> differing_steps(const PatternBlock& a, const PatternBlock& b) {
  std::vector<std::uint64_t> any(a.words(), 0);
  for (std::size_t p = 0; p < a.width(); ++p) {
    const auto la = a.lane(p);
    const auto lb = b.lane(p);
    for (std::size_t w = 0; w < a.words(); ++w) any[w] |= la[w] ^ lb[w];
  }
  std::vector<std::size_t> out;
  for (std::size_t w = 0; w < any.size(); ++w) {
    for (auto bits = any[w]; bits; bits &= bits - 1) out.push_back(w * kWordBits + std::countr_zero(bits));
  }
  return out;
}

}  // namespace

FunctionalResult functional_test(const Netlist& golden, const Netlist& dut, const DefenderProfile& defender,
                                 std::size_t max_listed) {
  check_interface(golden, dut);
  FunctionalResult r;
  for (std::size_t s = 0; s < defender.suites.size(); ++s) {
    const auto& seq = defender.suites[s].patterns;
    r.patterns += seq.count();
    if (seq.empty()) continue;
    const auto a = output_block(golden, run_sequence(golden, seq));
    const auto b = output_block(dut, run_sequence(dut, seq));
    for (auto t : differing_steps(a, b)) {
      ++r.mismatch_count;
      for (std::size_t p = 0; p < a.width() && r.mismatches.size() < max_listed; ++p) {
        if (a.get(t, p) != b.get(t, p)) r.mismatches.push_back({s, t, golden.net_name(golden.outputs()[p])});
      }
    }
  }
  r.pass = r.mismatch_count == 0;
  return r;
}

std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::Total: return "total";
    case Metric::Dynamic: return "dynamic";
    case Metric::Leakage: return "leakage";
    case Metric::Area: return "area";
  }
  return "?";
}

std::vector<ScreenResult> power_screen(const CostReport& golden, const CostReport& dut,
                                       const ScreenOptions& options) {
  if (golden.workload_id != dut.workload_id || golden.workload_count != dut.workload_count)
    throw InterfaceError("power screen needs reports over the same workload");
  std::mt19937_64 rng(detail::mix_seed(options.seed, 0));
  std::normal_distribution<double> noise(0.0, options.noise_sigma > 0 ? options.noise_sigma : 1.0);
  auto reading = [&](double v) { return options.noise_sigma > 0 ? v * (1 + noise(rng)) : v; };

  // Leakage and dynamic are measured; total is their sum so the three agree.
  const double leak = reading(dut.p_leak());
  const double dyn = reading(dut.p_dyn());
  const struct {
    Metric m;
    double measured, golden, margin;
  } rows[] = {
      {Metric::Total, leak + dyn, golden.p_total(), options.margins.total},
      {Metric::Dynamic, dyn, golden.p_dyn(), options.margins.dynamic},
      {Metric::Leakage, leak, golden.p_leak(), options.margins.leakage},
      {Metric::Area, dut.area_ge(), golden.area_ge(), options.margins.area},
  };
  std::vector<ScreenResult> out;
  for (const auto& row : rows) {
    ScreenResult s{row.m, row.measured, row.golden, 0, row.margin, false};
    s.excess = row.golden == 0 ? 0 : (row.measured - row.golden) / row.golden;
    s.flagged = s.excess > s.margin;
    out.push_back(s);
  }
  return out;
}

DetectionVerdict detect(const Netlist& golden, const Netlist& dut, const DefenderProfile& defender,
                        const CellLibrary& lib, const Workload& workload, const ScreenOptions& options) {
  DetectionVerdict v;
  v.functional = functional_test(golden, dut, defender);
  v.screens = power_screen(cost_report(golden, lib, workload), cost_report(dut, lib, workload), options);
  v.flagged = !v.functional.pass;
  for (const auto& s : v.screens) v.flagged = v.flagged || s.flagged;
  return v;
}

LuckyCatch lucky_catch(const Netlist& golden, const Netlist& dut, std::size_t count, std::uint64_t seed) {
  check_interface(golden, dut);
  LuckyCatch c;
  c.patterns = count;
  if (count == 0) return c;
  const auto seq = PatternBlock::random(golden.inputs().size(), count, seed);
  c.mismatching = differing_steps(output_block(golden, run_sequence(golden, seq)),
                                  output_block(dut, run_sequence(dut, seq)))
                      .size();
  c.fired = c.mismatching > 0;
  c.frequency = static_cast<double>(c.mismatching) / static_cast<double>(count);
  return c;
}

DetectionVerdict evaluate_attack(const Netlist& golden, const Netlist& dut, const DefenderProfile& defender,
                                 const CellLibrary& lib, const Workload& workload, const ScreenOptions& options,
                                 std::size_t bespoke_patterns, std::uint64_t bespoke_seed) {
  auto v = detect(golden, dut, defender, lib, workload, options);
  v.lucky_catch = lucky_catch(golden, dut, bespoke_patterns, bespoke_seed);
  return v;
}

std::string verdict_json(const DetectionVerdict& v) {
  json mism = json::array();
  for (const auto& m : v.functional.mismatches)
    mism.push_back({{"suite", m.suite}, {"pattern", m.pattern}, {"output", m.output}});
  json screens = json::object();
  for (const auto& s : v.screens) {
    screens[std::string(to_string(s.metric))] = {{"measured", s.measured}, {"golden", s.golden},
                                                 {"excess", s.excess},     {"margin", s.margin},
                                                 {"flagged", s.flagged}};
  }
  json j = {{"functional",
             {{"pass", v.functional.pass},
              {"patterns", v.functional.patterns},
              {"mismatch_count", v.functional.mismatch_count},
              {"mismatches", mism}}},
            {"screens", screens},
            {"overall", v.flagged ? "FLAGGED" : "CLEAN"}};
  if (v.lucky_catch) {
    j["lucky_catch"] = {{"patterns", v.lucky_catch->patterns},
                        {"mismatching", v.lucky_catch->mismatching},
                        {"fired", v.lucky_catch->fired},
                        {"frequency", v.lucky_catch->frequency}};
  }
  return j.dump(2);
}

}  // namespace tzlab
