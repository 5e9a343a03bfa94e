#include <gtest/gtest.h>

#include <random>

#include "data.hpp"
#include "oracles.hpp"
#include "random_netlist.hpp"
#include "tzlab/logicsim.hpp"

using namespace tzlab;
using tzlab::testing::bits_of;
using tzlab::testing::load_iscas;
using tzlab::testing::scalar_outputs;

namespace {

std::vector<std::vector<bool>> rows_of(const PatternBlock& block) {
  std::vector<std::vector<bool>> rows(block.count(), std::vector<bool>(block.width()));
  for (std::size_t t = 0; t < block.count(); ++t) {
    for (std::size_t p = 0; p < block.width(); ++p) rows[t][p] = block.get(t, p);
  }
  return rows;
}

// 3-bit pattern-synchronous counter with the event driven by PI `e`.
const char* kCounter3 =
    "INPUT(e)\nOUTPUT(q)\n"
    "b0 = DFF(n0)\nb1 = DFF(n1)\nb2 = DFF(n2)\n"
    "n0 = XOR(b0, e)\nc1 = AND(e, b0)\nn1 = XOR(b1, c1)\nc2 = AND(c1, b1)\nn2 = XOR(b2, c2)\n"
    "q = AND(b0, b1, b2)\n";

}  // namespace

TEST(Patterns, RandomIsSeededAndMasked) {
  const auto a = PatternBlock::random(7, 130, 42);
  const auto b = PatternBlock::random(7, 130, 42);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, PatternBlock::random(7, 130, 43));
  for (std::size_t p = 0; p < 7; ++p) EXPECT_EQ(a.lane(p)[2] & ~tail_mask(130), 0u);
}

TEST(Patterns, TextRoundTripAndSlicing) {
  const auto a = PatternBlock::random(5, 100, 1);
  EXPECT_EQ(parse_patterns(write_patterns(a), 5), a);
  const auto s = a.slice(64, 30);
  for (std::size_t t = 0; t < 30; ++t) EXPECT_EQ(s.row(t), a.row(64 + t));
  const auto u = a.slice(3, 70);
  for (std::size_t t = 0; t < 70; ++t) EXPECT_EQ(u.row(t), a.row(3 + t));
  auto joined = a.slice(0, 10);
  joined.append(a.slice(10, 90));
  EXPECT_EQ(joined, a);
  EXPECT_EQ(parse_patterns("# header\n01 1\n\n110 # trailing\n", 3).count(), 2u);
  EXPECT_THROW(parse_patterns("0101\n", 3), InterfaceError);
}

TEST(Patterns, ExhaustiveRangeMatchesEnumeration) {
  const auto all = PatternBlock::exhaustive(9);
  ASSERT_EQ(all.count(), 512u);
  for (std::size_t t = 0; t < 512; ++t) {
    for (std::size_t p = 0; p < 9; ++p) ASSERT_EQ(all.get(t, p), ((t >> p) & 1U) != 0);
  }
  const auto part = PatternBlock::exhaustive_range(9, 100, 77);
  for (std::size_t t = 0; t < 77; ++t) EXPECT_EQ(part.row(t), all.row(100 + t));
}

TEST(SimulateComb, NandTruthTable) {
  const auto n = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(y)\ny = NAND(a, b)\n");
  const auto out = simulate_comb(n, PatternBlock::from_rows(2, {"00", "01", "10", "11"}));
  EXPECT_EQ(out.row(0), "1");
  EXPECT_EQ(out.row(1), "1");
  EXPECT_EQ(out.row(2), "1");
  EXPECT_EQ(out.row(3), "0");
}

TEST(SimulateComb, C17MatchesScalarOnAllPatterns) {
  const auto c17 = load_iscas("c17");
  const auto out = simulate_comb(c17, PatternBlock::exhaustive(5));
  for (std::uint64_t v = 0; v < 32; ++v) {
    const auto expect = scalar_outputs(c17, bits_of(v, 5));
    for (std::size_t po = 0; po < 2; ++po) EXPECT_EQ(out.get(v, po), expect[po]);
  }
}

TEST(SimulateComb, EmptyBlockAndWidthMismatch) {
  const auto c17 = load_iscas("c17");
  const auto out = simulate_comb(c17, PatternBlock(5, 0));
  EXPECT_EQ(out.count(), 0u);
  EXPECT_EQ(out.width(), 2u);
  EXPECT_THROW(simulate_comb(c17, PatternBlock(4, 3)), InterfaceError);
  EXPECT_THROW(simulate_comb(parse_bench(kCounter3), PatternBlock(1, 3)), Error);
}

TEST(SimulateComb, RandomNetlistsMatchScalar) {
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 100; ++trial) {
    const auto n = tzlab::testing::random_netlist(rng);
    const auto block = PatternBlock::exhaustive(n.inputs().size());
    const auto out = simulate_comb(n, block);
    for (std::size_t t = 0; t < block.count(); ++t) {
      const auto expect = scalar_outputs(n, bits_of(t, n.inputs().size()));
      for (std::size_t po = 0; po < expect.size(); ++po) ASSERT_EQ(out.get(t, po), expect[po]);
    }
  }
}

TEST(SimulateSeq, CounterRisesAfterSeventhEvent) {
  const auto n = parse_bench(kCounter3);
  const auto trace = simulate_seq(n, PatternBlock::from_rows(1, std::vector<std::string>(9, "1")));
  const auto q = n.net("q");
  // q during step t reflects the count after t events.
  for (std::size_t t = 0; t < 9; ++t) EXPECT_EQ(trace.values.get(q, t), t == 7) << t;
  EXPECT_EQ(trace.final_state, (std::vector<bool>{true, false, false}));  // wrapped to 1
}

TEST(SimulateSeq, NoEventsNoTrigger) {
  const auto n = parse_bench(kCounter3);
  const auto trace = simulate_seq(n, PatternBlock(1, 500));
  for (std::size_t t = 0; t < 500; ++t) EXPECT_FALSE(trace.values.get(n.net("q"), t));
}

TEST(SimulateSeq, EmptySequenceKeepsState) {
  const auto n = parse_bench(kCounter3);
  const auto trace = simulate_seq(n, PatternBlock(1, 0), {true, false, true});
  EXPECT_EQ(trace.steps(), 0u);
  EXPECT_EQ(trace.final_state, (std::vector<bool>{true, false, true}));
}

TEST(SimulateSeq, RandomSequentialMatchesScalarStepping) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    tzlab::testing::RandomNetlistOptions opt;
    opt.dffs = 1 + trial % 3;
    const auto n = tzlab::testing::random_netlist(rng, opt);
    const auto seq = PatternBlock::random(n.inputs().size(), 150, rng());
    const auto trace = simulate_seq(n, seq);
    std::vector<bool> final_state;
    const auto expect = tzlab::testing::scalar_run(n, rows_of(seq), &final_state);
    for (std::size_t t = 0; t < seq.count(); ++t) {
      for (NetId net = 0; net < n.net_count(); ++net) {
        ASSERT_EQ(trace.values.get(net, t), expect[t][net]) << "trial " << trial << " step " << t;
      }
    }
    EXPECT_EQ(trace.final_state, final_state);
  }
}

TEST(SimulateSeq, WithoutDffsEqualsComb) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const auto n = tzlab::testing::random_netlist(rng);
    const auto seq = PatternBlock::random(n.inputs().size(), 200, rng());
    EXPECT_EQ(output_block(n, simulate_seq(n, seq).values), simulate_comb(n, seq));
  }
}

TEST(Equivalence, ReflexiveOnC17) {
  const auto c17 = load_iscas("c17");
  EXPECT_TRUE(equivalent_on(c17, c17, PatternBlock::random(5, 300, 9)).pass);
}

TEST(Equivalence, ReportsEarliestCounterexample) {
  const auto a = parse_bench("INPUT(p)\nINPUT(q)\nOUTPUT(y)\nOUTPUT(z)\ny = AND(p, q)\nz = BUFF(p)\n");
  const auto b = parse_bench("INPUT(p)\nINPUT(q)\nOUTPUT(y)\nOUTPUT(z)\ny = OR(p, q)\nz = BUFF(p)\n");
  const auto r = equivalent_on(a, b, PatternBlock::from_rows(2, {"00", "11", "01", "10"}));
  EXPECT_FALSE(r.pass);
  EXPECT_EQ(r.step, 2u);
  EXPECT_EQ(r.po, 0u);
  const auto c = parse_bench("INPUT(p)\nOUTPUT(y)\ny = NOT(p)\n");
  EXPECT_THROW(equivalent_on(a, c, PatternBlock(2, 1)), InterfaceError);
}

TEST(Equivalence, SequentialSemanticsForTrojanedCircuit) {
  const auto golden = parse_bench("INPUT(e)\nINPUT(s)\nOUTPUT(y)\ny = BUFF(s)\n");
  const auto infected = parse_bench(
      "INPUT(e)\nINPUT(s)\nOUTPUT(y)\n"
      "b0 = DFF(n0)\nb1 = DFF(n1)\nn0 = XOR(b0, e)\nc1 = AND(e, b0)\nn1 = XOR(b1, c1)\n"
      "q = AND(b0, b1)\nns = NOT(s)\ny = MUX2(q, s, ns)\n");
  EXPECT_TRUE(equivalent_on(golden, infected, PatternBlock::from_rows(2, {"01", "11", "00", "01"})).pass);
  const auto r = equivalent_on(golden, infected, PatternBlock::from_rows(2, {"10", "10", "10", "01"}));
  EXPECT_FALSE(r.pass);
  EXPECT_EQ(r.step, 3u);
}

TEST(ExhaustiveDiff, SmallCases) {
  const auto a = parse_bench("INPUT(p)\nINPUT(q)\nOUTPUT(y)\ny = AND(p, q)\n");
  const auto b = parse_bench("INPUT(p)\nINPUT(q)\nOUTPUT(y)\ny = OR(p, q)\n");
  EXPECT_EQ(exhaustive_diff(a, a), 0u);
  EXPECT_EQ(exhaustive_diff(a, b), 2u);
}

TEST(ExhaustiveDiff, ModifiedC17AgainstLoopOracle) {
  const auto c17 = load_iscas("c17");
  const auto m = replace_with_constant(c17, "N16", true);
  std::uint64_t expect = 0;
  for (std::uint64_t v = 0; v < 32; ++v) {
    if (scalar_outputs(c17, bits_of(v, 5)) != scalar_outputs(m, bits_of(v, 5))) ++expect;
  }
  EXPECT_GT(expect, 0u);
  EXPECT_EQ(exhaustive_diff(c17, m), expect);
}

TEST(ExhaustiveDiff, RandomPairsAgainstLoopOracle) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    const auto a = tzlab::testing::random_netlist(rng);
    const auto g = a.gate(rng() % a.gate_count()).output;
    const auto b = replace_with_constant(a, a.net_name(g), rng() & 1U);
    std::uint64_t expect = 0;
    const auto w = a.inputs().size();
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << w); ++v) {
      if (scalar_outputs(a, bits_of(v, w)) != scalar_outputs(b, bits_of(v, w))) ++expect;
    }
    EXPECT_EQ(exhaustive_diff(a, b), expect);
  }
}

TEST(ExhaustiveDiff, BoundEnforced) {
  const auto c880 = load_iscas("c880");
  EXPECT_THROW(exhaustive_diff(c880, c880), BoundError);
}

TEST(Toggles, InverterOnAlternatingInput) {
  const auto n = parse_bench("INPUT(a)\nOUTPUT(y)\ny = NOT(a)\n");
  const auto t = toggle_counts(n, PatternBlock::from_rows(1, {"0", "1", "0", "1"}));
  EXPECT_EQ(t[n.net("y")], 3u);
  EXPECT_EQ(t[n.net("a")], 3u);
  EXPECT_THROW(toggle_counts(n, PatternBlock(1, 1)), Error);
}

TEST(Toggles, ConstantNetNeverToggles) {
  const auto n = parse_bench("INPUT(a)\nOUTPUT(y)\nk = CONST1()\ny = AND(a, k)\n");
  EXPECT_EQ(toggle_counts(n, PatternBlock::random(1, 1000, 3))[n.net("k")], 0u);
}

TEST(Toggles, C17TenThousandPatternsMatchScalarRecount) {
  const auto c17 = load_iscas("c17");
  const auto seq = PatternBlock::random(5, 10000, 2024);
  EXPECT_EQ(toggle_counts(c17, seq), tzlab::testing::scalar_toggles(c17, rows_of(seq)));
}

TEST(Toggles, InvariantUnderGateOrderPermutation) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 40; ++trial) {
    tzlab::testing::RandomNetlistOptions opt;
    opt.dffs = trial % 2;
    const auto n = tzlab::testing::random_netlist(rng, opt);
    const auto p = tzlab::testing::shuffled(n, rng);
    const auto seq = PatternBlock::random(n.inputs().size(), 300, rng());
    const auto tn = toggle_counts(n, seq);
    const auto tp = toggle_counts(p, seq);
    for (NetId net = 0; net < n.net_count(); ++net) {
      EXPECT_EQ(tn[net], tp[p.net(n.net_name(net))]);
    }
  }
}

TEST(Toggles, SequentialCountsMatchScalar) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 40; ++trial) {
    tzlab::testing::RandomNetlistOptions opt;
    opt.dffs = 2;
    const auto n = tzlab::testing::random_netlist(rng, opt);
    const auto seq = PatternBlock::random(n.inputs().size(), 257, rng());
    EXPECT_EQ(toggle_counts(n, seq), tzlab::testing::scalar_toggles(n, rows_of(seq)));
  }
}

TEST(Trace, CsvHasOneRowPerNetAndStep) {
  const auto n = parse_bench("INPUT(a)\nOUTPUT(y)\ny = NOT(a)\n");
  const auto csv = trace_csv(n, simulate_seq(n, PatternBlock::from_rows(1, {"0", "1"})));
  EXPECT_EQ(csv, "step,net,value\n0,a,0\n0,y,1\n1,a,1\n1,y,0\n");
}
