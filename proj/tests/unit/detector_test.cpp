#include <gtest/gtest.h>

#include <random>

#include "data.hpp"
#include "oracles.hpp"
#include "random_netlist.hpp"
#include "tzlab/attack.hpp"
#include "tzlab/detector.hpp"
#include "tzlab/logicsim.hpp"

using namespace tzlab;
using tzlab::testing::load_iscas;

namespace {

const CellLibrary kLib = CellLibrary::default_library();

DefenderProfile random_profile(const Netlist& n, std::size_t count, std::uint64_t seed) {
  return DefenderProfile{{bespoke_suite(n, count, seed)}, {}};
}

CostReport scaled(CostReport r, double f) {
  r.area_u = static_cast<Micro>(static_cast<double>(r.area_u) * f);
  r.leak_u = static_cast<Micro>(static_cast<double>(r.leak_u) * f);
  r.dyn_u = static_cast<Micro>(static_cast<double>(r.dyn_u) * f);
  return r;
}

}  // namespace

TEST(Functional, SelfPasses) {
  const auto c17 = load_iscas("c17");
  const auto r = functional_test(c17, c17, random_profile(c17, 100, 1));
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.patterns, 100u);
  EXPECT_TRUE(r.mismatches.empty());
}

TEST(Functional, MismatchesMatchScalarOracle) {
  const auto c17 = load_iscas("c17");
  const auto bad = replace_with_constant(c17, "N11", false);
  const auto def = random_profile(c17, 200, 3);
  const auto r = functional_test(c17, bad, def, 1000);
  std::size_t steps = 0;
  std::vector<Mismatch> expect;
  const auto& p = def.suites[0].patterns;
  for (std::size_t t = 0; t < p.count(); ++t) {
    std::vector<bool> pis(p.width());
    for (std::size_t i = 0; i < p.width(); ++i) pis[i] = p.get(t, i);
    const auto a = tzlab::testing::scalar_outputs(c17, pis);
    const auto b = tzlab::testing::scalar_outputs(bad, pis);
    steps += a != b;
    for (std::size_t o = 0; o < a.size(); ++o)
      if (a[o] != b[o]) expect.push_back({0, t, c17.net_name(c17.outputs()[o])});
  }
  EXPECT_FALSE(r.pass);
  EXPECT_EQ(r.mismatch_count, steps);
  ASSERT_EQ(r.mismatches.size(), expect.size());
  for (std::size_t i = 0; i < expect.size(); ++i) {
    EXPECT_EQ(r.mismatches[i].pattern, expect[i].pattern);
    EXPECT_EQ(r.mismatches[i].output, expect[i].output);
  }
  EXPECT_LE(functional_test(c17, bad, def, 2).mismatches.size(), 2u);
}

TEST(Functional, InterfaceMismatchThrows) {
  const auto c17 = load_iscas("c17");
  auto other = parse_bench("INPUT(a)\nOUTPUT(y)\ny = NOT(a)\n");
  EXPECT_THROW(functional_test(c17, other, random_profile(c17, 4, 1)), InterfaceError);
}

TEST(Functional, SequentialTrojanCaughtOnlyAfterThreshold) {
  // Counter on a tap that is 1 whenever a0..a3 are all 1.
  const auto host = tzlab::testing::rare_event_host(4, 2);
  const auto [infected, inst] =
      place_ht(host, {TemplateKind::Counter, 2, 1}, Location{{"rare"}, {true}, "y1", 1.0 / 16});
  const std::size_t w = host.inputs().size();
  std::vector<std::string> rows(3, std::string(w, '1'));
  DefenderProfile three{{TestPatternSet{PatternBlock::from_rows(w, rows)}}, {}};
  EXPECT_TRUE(functional_test(host, infected, three).pass);
  rows.push_back(std::string(w, '1'));
  DefenderProfile four{{TestPatternSet{PatternBlock::from_rows(w, rows)}}, {}};
  const auto r = functional_test(host, infected, four);
  EXPECT_FALSE(r.pass);
  ASSERT_EQ(r.mismatches.size(), 1u);
  EXPECT_EQ(r.mismatches[0].pattern, 3u);
  EXPECT_EQ(r.mismatches[0].output, "y1");
  // Each suite starts from reset: two short suites never reach the threshold.
  DefenderProfile split{{TestPatternSet{PatternBlock::from_rows(w, {rows[0], rows[1]})},
                         TestPatternSet{PatternBlock::from_rows(w, {rows[2], rows[3]})}},
                        {}};
  EXPECT_TRUE(functional_test(host, infected, split).pass);
}

TEST(Screen, OneSidedWithStrictMargin) {
  const auto c880 = load_iscas("c880");
  const Workload w{"w", PatternBlock::random(c880.inputs().size(), 500, 1)};
  const auto golden = cost_report(c880, kLib, w);
  for (const auto& s : power_screen(golden, golden)) {
    EXPECT_EQ(s.excess, 0.0);
    EXPECT_FALSE(s.flagged);
  }
  for (const auto& s : power_screen(golden, scaled(golden, 0.9))) EXPECT_FALSE(s.flagged);
  for (const auto& s : power_screen(golden, scaled(golden, 1.01))) {
    EXPECT_NEAR(s.excess, 0.01, 1e-6);
    EXPECT_TRUE(s.flagged) << to_string(s.metric);
  }
  ScreenOptions wide;
  wide.margins = {0.02, 0.02, 0.02, 0.02};
  for (const auto& s : power_screen(golden, scaled(golden, 1.01), wide)) EXPECT_FALSE(s.flagged);
  const auto screens = power_screen(golden, golden);
  ASSERT_EQ(screens.size(), 4u);
  EXPECT_EQ(screens[1].metric, Metric::Dynamic);
  EXPECT_EQ(screens[1].margin, 0.00265);
  EXPECT_EQ(screens[3].margin, 0.0058);
  const Workload other{"x", w.patterns};
  EXPECT_THROW(power_screen(golden, cost_report(c880, kLib, other)), InterfaceError);
}

TEST(Screen, FlaggedIffExcessAboveMargin) {
  std::mt19937_64 rng(91);
  for (int trial = 0; trial < 40; ++trial) {
    auto n = tzlab::testing::random_netlist(rng, {.min_gates = 20, .max_gates = 60});
    const Workload w{"w", PatternBlock::random(n.inputs().size(), 200, trial)};
    auto b = n.to_builder();
    const auto extra = rng() % 3;
    for (std::size_t i = 0; i < extra; ++i)
      b.add_gate("pad" + std::to_string(i), GateKind::Buff, {n.net_name(n.inputs()[i % n.inputs().size()])}, true);
    const auto golden = cost_report(n, kLib, w);
    const auto dut = cost_report(b.build(), kLib, w);
    for (const auto& s : power_screen(golden, dut)) {
      const double ex = s.golden == 0 ? 0 : (s.measured - s.golden) / s.golden;
      EXPECT_DOUBLE_EQ(s.excess, ex);
      EXPECT_EQ(s.flagged, ex > s.margin);
      EXPECT_GE(s.excess, 0.0);
    }
  }
}

TEST(Screen, NoiseIsSeededAndUnbiased) {
  const auto c17 = load_iscas("c17");
  const Workload w{"w", PatternBlock::random(5, 400, 2)};
  const auto golden = cost_report(c17, kLib, w);
  ScreenOptions noisy;
  noisy.noise_sigma = 0.01;
  noisy.seed = 5;
  const auto a = power_screen(golden, golden, noisy);
  const auto b = power_screen(golden, golden, noisy);
  EXPECT_EQ(a[1].measured, b[1].measured);
  EXPECT_NE(a[1].excess, 0.0);
  EXPECT_EQ(a[3].excess, 0.0);
  double sum = 0;
  for (std::uint64_t s = 0; s < 2000; ++s) {
    noisy.seed = s;
    sum += power_screen(golden, golden, noisy)[2].excess;
  }
  // Mean of 2000 N(0, 0.01) draws: standard error 2.2e-4.
  EXPECT_LT(std::abs(sum / 2000), 1e-3);
}

TEST(Detect, AdditiveTrojanIsFlaggedOnArea) {
  const auto c880 = load_iscas("c880");
  const auto def = DefenderProfile{{generate_tests(c880, {})}, {}};
  const Workload w{"w", PatternBlock::random(c880.inputs().size(), 1000, 4)};
  const auto [infected, inst] =
      place_ht(c880, {TemplateKind::Counter, 3, 1}, Location{{"N522"}, {false}, "N879", 0});
  const auto v = detect(c880, infected, def, kLib, w);
  EXPECT_TRUE(v.flagged);
  EXPECT_TRUE(v.screens[3].flagged);
  EXPECT_GT(v.screens[3].excess, 0.05);
  const auto self = detect(c880, c880, def, kLib, w);
  EXPECT_FALSE(self.flagged);
}

TEST(LuckyCatch, CountsDifferingSteps) {
  const auto c17 = load_iscas("c17");
  const auto self = lucky_catch(c17, c17, 10000, 1);
  EXPECT_FALSE(self.fired);
  EXPECT_EQ(self.frequency, 0.0);
  // N22 stuck at 0 differs on exactly the patterns where N22 is 1.
  const auto bad = replace_with_constant(c17, "N22", false);
  const auto c = lucky_catch(c17, bad, 1000, 7);
  const auto seq = PatternBlock::random(5, 1000, 7);
  std::size_t ones = 0;
  const NetId n22 = c17.net("N22");
  const auto vals = run_sequence(c17, seq);
  for (std::size_t t = 0; t < 1000; ++t) ones += vals.get(n22, t);
  EXPECT_TRUE(c.fired);
  EXPECT_EQ(c.mismatching, ones);
  EXPECT_DOUBLE_EQ(c.frequency, ones / 1000.0);
}

TEST(Verdict, Json) {
  const auto c17 = load_iscas("c17");
  const Workload w{"w", PatternBlock::random(5, 100, 2)};
  const auto v = evaluate_attack(c17, replace_with_constant(c17, "N11", true), random_profile(c17, 20, 1), kLib, w);
  const auto j = verdict_json(v);
  for (const char* key : {"\"functional\"", "\"mismatches\"", "\"screens\"", "\"dynamic\"", "\"excess\"",
                          "\"overall\"", "\"lucky_catch\"", "\"frequency\"", "FLAGGED"})
    EXPECT_NE(j.find(key), std::string::npos) << key;
}

TEST(Screen, ZeroMarginFlagsAnyAdditiveInsertion) {
  std::mt19937_64 rng(92);
  ScreenOptions zero;
  zero.margins = {0, 0, 0, 0};
  for (int trial = 0; trial < 40; ++trial) {
    auto n = tzlab::testing::random_netlist(rng, {.constants = false});
    const Workload w{"w", PatternBlock::random(n.inputs().size(), 100, trial)};
    auto b = n.to_builder();
    const auto& src = n.net_name(n.inputs()[rng() % n.inputs().size()]);
    b.add_gate("extra", trial % 2 ? GateKind::Not : GateKind::And, trial % 2 ? std::vector{src} : std::vector{src, src},
               true);
    const auto screens = power_screen(cost_report(n, kLib, w), cost_report(b.build(), kLib, w), zero);
    EXPECT_TRUE(screens[3].flagged);
    EXPECT_TRUE(screens[2].flagged || screens[2].golden == 0);
  }
}

TEST(Detect, VerdictIsDeterministic) {
  const auto c17 = load_iscas("c17");
  const Workload w{"w", PatternBlock::random(5, 200, 2)};
  const auto dut = replace_with_constant(c17, "N16", true);
  ScreenOptions noisy;
  noisy.noise_sigma = 0.02;
  const auto a = evaluate_attack(c17, dut, random_profile(c17, 30, 4), kLib, w, noisy);
  const auto b = evaluate_attack(c17, dut, random_profile(c17, 30, 4), kLib, w, noisy);
  EXPECT_EQ(verdict_json(a), verdict_json(b));
}
