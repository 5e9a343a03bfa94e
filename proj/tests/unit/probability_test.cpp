#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "data.hpp"
#include "oracles.hpp"
#include "random_netlist.hpp"
#include "tzlab/probability.hpp"

using namespace tzlab;
using tzlab::testing::load_iscas;

namespace {

double gp(GateKind kind, std::initializer_list<double> in) {
  std::vector<double> v(in);
  return gate_output_prob(kind, v);
}

std::set<std::string> names(const std::vector<Candidate>& cs) {
  std::set<std::string> out;
  for (const auto& c : cs) out.insert(c.name);
  return out;
}

}  // namespace

TEST(GateProb, Examples) {
  EXPECT_DOUBLE_EQ(gp(GateKind::And, {0.5, 0.5}), 0.25);
  EXPECT_DOUBLE_EQ(gp(GateKind::Nor, {0.5, 0.5, 0.5, 0.5}), 0.0625);
  for (double x : {0.0, 0.1, 0.37, 1.0}) EXPECT_DOUBLE_EQ(gp(GateKind::Xor, {0.5, x}), 0.5);
  EXPECT_DOUBLE_EQ(gp(GateKind::Mux2, {0.25, 0.0, 1.0}), 0.25);
  EXPECT_DOUBLE_EQ(gp(GateKind::Mux2, {0.5, 0.2, 0.6}), 0.4);
  EXPECT_DOUBLE_EQ(gp(GateKind::Const1, {}), 1.0);
  EXPECT_DOUBLE_EQ(gp(GateKind::Dff, {0.3}), 0.3);
  EXPECT_THROW(gp(GateKind::Not, {0.5, 0.5}), Error);
  EXPECT_THROW(gp(GateKind::And, {0.5, 1.5}), Error);
}

TEST(GateProb, NegationDuality) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> ps(2 + trial % 7);
    for (auto& p : ps) p = u(rng);
    EXPECT_NEAR(gate_output_prob(GateKind::Nand, ps), 1 - gate_output_prob(GateKind::And, ps), 1e-15);
    EXPECT_NEAR(gate_output_prob(GateKind::Nor, ps), 1 - gate_output_prob(GateKind::Or, ps), 1e-15);
    std::span<const double> two(ps.data(), 2);
    EXPECT_NEAR(gate_output_prob(GateKind::Xnor, two), 1 - gate_output_prob(GateKind::Xor, two), 1e-15);
  }
}

TEST(Propagate, NandAndReconvergence) {
  auto n = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(y)\ny = NAND(a, b)\n");
  EXPECT_DOUBLE_EQ(propagate(n).one(n.net("y")), 0.75);

  auto r = parse_bench("INPUT(a)\nOUTPUT(y)\nd = BUFF(a)\ny = AND(a, d)\n");
  EXPECT_DOUBLE_EQ(propagate(r).one(r.net("y")), 0.25);
  EXPECT_DOUBLE_EQ(exact_probs(r).one(r.net("y")), 0.5);
}

TEST(Propagate, CustomInputProbabilities) {
  auto n = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(y)\ny = OR(a, b)\n");
  std::vector<double> pis{0.1, 0.2};
  EXPECT_NEAR(propagate(n, pis).one(n.net("y")), 1 - 0.9 * 0.8, 1e-15);
}

TEST(Propagate, SequentialFixedPoint) {
  // t = DFF(t XOR e): toggle flip-flop, steady state 0.5 for any e > 0
  auto n = parse_bench("INPUT(e)\nOUTPUT(t)\nt = DFF(d)\nd = XOR(t, e)\n");
  const auto m = propagate(n);
  EXPECT_NEAR(m.one(n.net("t")), 0.5, 1e-12);
}

TEST(Propagate, EqualsExactOnTrees) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    auto t = tzlab::testing::random_tree(rng, 4, 16);
    const auto a = propagate(t);
    const auto b = exact_probs(t);
    for (NetId net = 0; net < t.net_count(); ++net) ASSERT_NEAR(a.one(net), b.one(net), 1e-12) << t.net_name(net);
  }
}

TEST(ExactProbs, MatchesScalarOracle) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 60; ++trial) {
    auto n = tzlab::testing::random_netlist(rng, {.max_inputs = 12, .max_gates = 40});
    const auto fast = exact_probs(n);
    const auto slow = tzlab::testing::scalar_exact_probs(n);
    for (NetId net = 0; net < n.net_count(); ++net) ASSERT_EQ(fast.one(net), slow[net]);
  }
}

TEST(ExactProbs, ConstantsAndBounds) {
  auto n = parse_bench("INPUT(a)\nOUTPUT(y)\nOUTPUT(k)\nk = CONST1()\ny = AND(a, k)\n");
  const auto m = exact_probs(n);
  EXPECT_EQ(m.one(n.net("k")), 1.0);
  EXPECT_EQ(m.one(n.net("y")), 0.5);
  EXPECT_THROW(exact_probs(load_iscas("c880")), BoundError);
}

TEST(MonteCarlo, DeterministicAndConstant) {
  auto n = parse_bench("INPUT(a)\nOUTPUT(y)\nOUTPUT(z)\nz = CONST0()\ny = NOT(a)\n");
  const auto a = monte_carlo_probs(n, 5000, 9);
  const auto b = monte_carlo_probs(n, 5000, 9);
  EXPECT_EQ(a.map.p1, b.map.p1);
  EXPECT_EQ(a.map.one(n.net("z")), 0.0);
  EXPECT_EQ(a.standard_error[n.net("z")], 0.0);
}

TEST(MonteCarlo, C17WithinThreeStandardErrors) {
  const auto n = load_iscas("c17");
  const auto exact = exact_probs(n);
  const auto mc = monte_carlo_probs(n, 100000, 2024);
  for (NetId net = 0; net < n.net_count(); ++net) {
    EXPECT_LE(std::abs(mc.map.one(net) - exact.one(net)), 3 * mc.standard_error[net] + 1e-12)
        << n.net_name(net);
  }
}

TEST(MonteCarlo, Converges) {
  const auto n = load_iscas("c17");
  const auto exact = exact_probs(n);
  const auto coarse = monte_carlo_probs(n, 1000, 77);
  const auto fine = monte_carlo_probs(n, 1000000, 77);
  std::size_t better = 0;
  std::size_t considered = 0;
  for (NetId net = 0; net < n.net_count(); ++net) {
    ++considered;
    if (std::abs(fine.map.one(net) - exact.one(net)) <= std::abs(coarse.map.one(net) - exact.one(net))) ++better;
  }
  EXPECT_GE(static_cast<double>(better), 0.9 * static_cast<double>(considered));
}

TEST(Candidates, DisjointOrderedAndGateOutputsOnly) {
  const auto n = load_iscas("c880");
  const auto m = propagate(n);
  const auto cs = find_candidates(m, n, 0.95);
  EXPECT_EQ(cs.c.size(), cs.x.size() + cs.y.size());
  auto xs = names(cs.x);
  for (const auto& y : cs.y) EXPECT_FALSE(xs.count(y.name));
  for (std::size_t i = 0; i < cs.c.size(); ++i) {
    const auto& c = cs.c[i];
    EXPECT_FALSE(n.is_input(c.net));
    ASSERT_TRUE(n.driver(c.net));
    EXPECT_FALSE(is_constant(n.gate(*n.driver(c.net)).kind));
    EXPECT_EQ(c.tie_value, m.one(c.net) >= 0.95);
    if (i > 0) {
      const auto& p = cs.c[i - 1];
      EXPECT_TRUE(p.extremity > c.extremity || (p.extremity == c.extremity && p.name < c.name));
    }
  }
}

TEST(Candidates, MonotoneInThreshold) {
  const auto n = load_iscas("c880");
  const auto m = propagate(n);
  double prev = 0.51;
  auto prev_set = names(find_candidates(m, n, prev).c);
  for (double p : {0.6, 0.75, 0.9, 0.95, 0.975, 0.992, 0.999}) {
    auto cur = names(find_candidates(m, n, p).c);
    for (const auto& s : cur) EXPECT_TRUE(prev_set.count(s)) << s << " at " << p;
    prev_set = std::move(cur);
  }
}

TEST(Candidates, RangeAndEmpty) {
  const auto n = load_iscas("c17");
  const auto m = propagate(n);
  EXPECT_THROW(find_candidates(m, n, 0.5), Error);
  EXPECT_THROW(find_candidates(m, n, 1.0), Error);
  EXPECT_TRUE(find_candidates(m, n, 0.9999999).c.empty());
}

TEST(Candidates, ProbabilityCsv) {
  auto n = parse_bench("INPUT(a)\nOUTPUT(y)\ny = NOT(a)\n");
  const auto csv = probability_csv(n, propagate(n), "propagate");
  EXPECT_EQ(csv, "net,p1,method,stderr\na,0.5,propagate,\ny,0.5,propagate,\n");
}
