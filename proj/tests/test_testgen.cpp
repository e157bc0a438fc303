#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "raregate/testgen.hpp"

using namespace raregate;

namespace {

// Single three-input AND cone; the output is the only sub-0.2 signal and
// 111 is its only activating vector.
Netlist and3() {
  NetlistBuilder b("and3");
  NetId a = b.add_input("A"), bb = b.add_input("B"), c = b.add_input("C");
  b.mark_output(b.add_gate(GateKind::And, {a, bb, c}, "X"));
  return b.build();
}

Netlist disjoint_pair() {
  NetlistBuilder b("pair");
  NetId a = b.add_input("A"), bb = b.add_input("B"), c = b.add_input("C"),
        d = b.add_input("D");
  NetId x = b.add_gate(GateKind::And, {a, bb}, "X");
  NetId y = b.add_gate(GateKind::And, {c, d}, "Y");
  b.mark_output(b.add_gate(GateKind::Or, {x, y}, "Z"));
  return b.build();
}

bool activates(const Netlist& n, const RareNode& node, const TestVector& v) {
  return evaluate(n, v)[node.net] == static_cast<std::uint8_t>(node.value);
}

}  // namespace

TEST(RareNodes, SingleConeBelowThreshold) {
  Netlist n = and3();
  RarenessReport rep = itm_rareness(n);
  auto nodes = rare_nodes(n, rep, 0.2);
  ASSERT_EQ(nodes.size(), 1u);
  EXPECT_EQ(nodes[0].net, *n.find("X"));
  EXPECT_EQ(nodes[0].value, 1);
  EXPECT_DOUBLE_EQ(nodes[0].omega, 0.125);
  EXPECT_TRUE(rare_nodes(n, rep, 0.0).empty());
}

TEST(RareNodes, ThresholdIsStrict) {
  Netlist n = parse_expr("X", "AB");
  RarenessReport rep = itm_rareness(n);
  EXPECT_TRUE(rare_nodes(n, rep, 0.25).empty());
  EXPECT_EQ(rare_nodes(n, rep, 0.2500001).size(), 1u);
}

TEST(RareNodes, OrderedByNetId) {
  Netlist n = testutil::desk12();
  auto nodes = rare_nodes(n, itm_rareness(n), 0.2);
  ASSERT_EQ(nodes.size(), 8u);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    EXPECT_EQ(n.net_name(nodes[i].net), "R" + std::to_string(i + 1));
    EXPECT_EQ(nodes[i].value, 1);
    EXPECT_DOUBLE_EQ(nodes[i].omega, 0.125);
    if (i > 0) {
      EXPECT_LT(nodes[i - 1].net, nodes[i].net);
    }
  }
}

TEST(Mero, FindsTheUniqueActivator) {
  Netlist n = and3();
  for (std::uint64_t seed : {default_seed, std::uint64_t(1), std::uint64_t(2),
                             std::uint64_t(3)}) {
    TestSet ts = mero(n, 0.2, 1, 64, seed);
    ASSERT_EQ(ts.vectors.size(), 1u) << "seed " << seed;
    EXPECT_EQ(ts.vectors[0], TestVector({1, 1, 1}));
    EXPECT_EQ(ts.provenance.algorithm, "mero");
    EXPECT_EQ(ts.provenance.rare, 1);
    EXPECT_EQ(ts.provenance.unmet, 0);
  }
}

TEST(Mero, MeetsQuotaOnReachableNodes) {
  Netlist n = testutil::desk12();
  const double tau = 0.2;
  const int quota = 3;
  TestSet ts = mero(n, tau, quota, 512, default_seed);
  EXPECT_EQ(ts.provenance.rare, 8);
  EXPECT_EQ(ts.provenance.unmet, 0);
  EXPECT_EQ(ts.provenance.n_detect, quota);
  EXPECT_EQ(ts.provenance.pool, 512);
  // Independent recount by simulation.
  RarenessReport rep = simulate_rareness(n, 512, default_seed);
  auto profile = n_detect_profile(n, ts.vectors, tau, rep);
  ASSERT_EQ(profile.size(), 8u);
  for (const auto& [node, count] : profile)
    EXPECT_GE(count, quota) << "net " << n.net_name(node.net);
  for (const TestVector& v : ts.vectors)
    EXPECT_EQ(v.size(), n.inputs().size());
}

TEST(Mero, EveryEmittedVectorActivatesSomething) {
  Netlist n = testutil::desk12();
  TestSet ts = mero(n, 0.2, 2, 256, 41);
  RarenessReport rep = simulate_rareness(n, 256, 41);
  auto nodes = rare_nodes(n, rep, 0.2);
  for (const TestVector& v : ts.vectors) {
    bool any = false;
    for (const RareNode& node : nodes) any = any || activates(n, node, v);
    EXPECT_TRUE(any);
  }
}

TEST(Mero, DeterministicUnderFixedSeed) {
  Netlist n = testutil::desk12();
  TestSet a = mero(n, 0.2, 3, 256, 17);
  TestSet b = mero(n, 0.2, 3, 256, 17);
  EXPECT_EQ(a.vectors, b.vectors);
  EXPECT_EQ(a.provenance.unmet, b.provenance.unmet);
  EXPECT_EQ(a.provenance.rare, b.provenance.rare);
}

TEST(Mero, EmptyRareSetGivesEmptyTestSet) {
  Netlist n = testutil::desk12();
  TestSet ts = mero(n, 0.0, 3, 128, 5);
  EXPECT_TRUE(ts.vectors.empty());
  EXPECT_EQ(ts.provenance.rare, 0);
  EXPECT_EQ(ts.provenance.unmet, 0);
}

TEST(Mero, ValidatesArguments) {
  Netlist n = and3();
  EXPECT_THROW(mero(n, 0.2, 0, 64, 1), ValidationError);
  EXPECT_THROW(mero(n, 0.2, 1, 0, 1), ValidationError);
}

TEST(Profile, EmptyTestsAllZero) {
  Netlist n = testutil::desk12();
  RarenessReport rep = itm_rareness(n);
  auto profile = n_detect_profile(n, {}, 0.2, rep);
  ASSERT_EQ(profile.size(), 8u);
  for (const auto& [node, count] : profile) EXPECT_EQ(count, 0);
}

TEST(Profile, CountsMatchDirectSimulation) {
  Netlist n = testutil::desk12();
  RarenessReport rep = itm_rareness(n);
  std::vector<TestVector> tests = random_vectors(12, 40, 9);
  auto profile = n_detect_profile(n, tests, 0.2, rep);
  for (const auto& [node, count] : profile) {
    int expect = 0;
    for (const TestVector& v : tests) expect += activates(n, node, v);
    EXPECT_EQ(count, expect) << n.net_name(node.net);
  }
}

TEST(Profile, RejectsArityMismatch) {
  Netlist n = and3();
  RarenessReport rep = itm_rareness(n);
  EXPECT_THROW(n_detect_profile(n, {TestVector{1, 0}}, 0.2, rep),
               ValidationError);
}

TEST(CompatGraph, DisjointSupportsShareAnEdge) {
  Netlist n = disjoint_pair();
  auto nodes = rare_nodes(n, itm_rareness(n), 0.3);
  ASSERT_EQ(nodes.size(), 2u);
  CompatGraph g = build_compat_graph(n, nodes);
  EXPECT_EQ(g.queries, 1u);
  EXPECT_EQ(g.skipped, 0u);
  ASSERT_EQ(g.edges.size(), 1u);
  EXPECT_TRUE(g.edge(0, 1));
  EXPECT_FALSE(g.edge(0, 0));
  const TestVector& w = g.witnesses[0];
  EXPECT_TRUE(activates(n, nodes[0], w));
  EXPECT_TRUE(activates(n, nodes[1], w));
}

TEST(CompatGraph, ContradictoryPairHasNoEdge) {
  NetlistBuilder b("clash");
  NetId a = b.add_input("A"), bb = b.add_input("B");
  NetId x = b.add_gate(GateKind::And, {a, bb}, "X");
  NetId y = b.add_gate(GateKind::Nor, {a, bb}, "Y");
  b.mark_output(b.add_gate(GateKind::Xor, {x, y}, "Z"));
  Netlist n = b.build();
  auto nodes = rare_nodes(n, itm_rareness(n), 0.3);
  ASSERT_EQ(nodes.size(), 2u);
  CompatGraph g = build_compat_graph(n, nodes);
  EXPECT_EQ(g.queries, 1u);
  EXPECT_TRUE(g.edges.empty());
  EXPECT_FALSE(g.edge(0, 1));
}

TEST(CompatGraph, SingleNodeNeedsNoQueries) {
  Netlist n = and3();
  auto nodes = rare_nodes(n, itm_rareness(n), 0.2);
  CompatGraph g = build_compat_graph(n, nodes);
  EXPECT_EQ(g.queries, 0u);
  EXPECT_TRUE(g.edges.empty());
}

TEST(CompatGraph, QueryCountIsExactlyAllPairs) {
  Netlist n = testutil::desk12();
  auto nodes = rare_nodes(n, itm_rareness(n), 0.2);
  ASSERT_EQ(nodes.size(), 8u);
  CompatGraph g = build_compat_graph(n, nodes);
  EXPECT_EQ(g.queries, 28u);  // 8*7/2
  EXPECT_EQ(g.edges.size(), 28u);  // conjunctions of inputs never clash
  EXPECT_EQ(g.skipped, 0u);
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    auto [i, j] = g.edges[e];
    EXPECT_TRUE(activates(n, g.nodes[i], g.witnesses[e]));
    EXPECT_TRUE(activates(n, g.nodes[j], g.witnesses[e]));
  }
}

TEST(CompatGraph, MatchesBruteForceCoactivation) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Netlist n = testutil::random_general_netlist(seed);
    RarenessReport rep = exact_rareness(n);
    auto nodes = rare_nodes(n, rep, 0.3);
    if (nodes.size() < 2 || nodes.size() > 12) continue;
    CompatGraph g = build_compat_graph(n, nodes);
    std::size_t n_in = n.inputs().size();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      for (std::size_t j = i + 1; j < nodes.size(); ++j) {
        bool coactivatable = false;
        for (std::uint64_t m = 0; m < (1ull << n_in) && !coactivatable; ++m) {
          TestVector v;
          for (std::size_t k = 0; k < n_in; ++k)
            v.push_back(static_cast<std::uint8_t>((m >> k) & 1));
          coactivatable = activates(n, nodes[i], v) && activates(n, nodes[j], v);
        }
        EXPECT_EQ(g.edge(static_cast<int>(i), static_cast<int>(j)),
                  coactivatable)
            << "seed " << seed << " pair " << i << "," << j;
      }
    }
  }
}

TEST(CompatGraph, BudgetExceededCountsAsSkipped) {
  // XOR outputs need a real decision, so a zero budget cannot resolve them.
  NetlistBuilder b("xors");
  NetId a = b.add_input("A"), bb = b.add_input("B"), c = b.add_input("C"),
        d = b.add_input("D");
  NetId x = b.add_gate(GateKind::Xor, {a, bb}, "X");
  NetId y = b.add_gate(GateKind::Xor, {c, d}, "Y");
  b.mark_output(x);
  b.mark_output(y);
  Netlist n = b.build();
  std::vector<RareNode> nodes{{x, 1, 0.5}, {y, 1, 0.5}};
  CompatGraph g = build_compat_graph(n, nodes, 0);
  EXPECT_EQ(g.queries, 1u);
  EXPECT_EQ(g.skipped, 1u);
  EXPECT_FALSE(g.edge(0, 1));
}

namespace {

CompatGraph synthetic_graph(int n, const std::vector<std::pair<int, int>>& e) {
  CompatGraph g;
  g.nodes.resize(n);
  for (int i = 0; i < n; ++i) g.nodes[i] = {static_cast<NetId>(i), 1, 0.1};
  g.adj.assign(n, std::vector<std::uint8_t>(n, 0));
  for (auto [i, j] : e) {
    g.adj[i][j] = g.adj[j][i] = 1;
    g.edges.emplace_back(i, j);
    g.witnesses.emplace_back();
  }
  return g;
}

}  // namespace

TEST(CliquePartition, CompleteGraphIsOneClique) {
  CompatGraph g = synthetic_graph(
      4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
  auto cliques = clique_partition(g);
  ASSERT_EQ(cliques.size(), 1u);
  EXPECT_EQ(cliques[0], std::vector<int>({0, 1, 2, 3}));
}

TEST(CliquePartition, EdgelessGraphIsAllSingletons) {
  CompatGraph g = synthetic_graph(3, {});
  auto cliques = clique_partition(g);
  ASSERT_EQ(cliques.size(), 3u);
  EXPECT_EQ(cliques[0], std::vector<int>({0}));
  EXPECT_EQ(cliques[1], std::vector<int>({1}));
  EXPECT_EQ(cliques[2], std::vector<int>({2}));
}

TEST(CliquePartition, PathGraphFollowsTieBreaks) {
  CompatGraph g = synthetic_graph(3, {{0, 1}, {1, 2}});
  auto cliques = clique_partition(g);
  ASSERT_EQ(cliques.size(), 2u);
  EXPECT_EQ(cliques[0], std::vector<int>({0, 1}));
  EXPECT_EQ(cliques[1], std::vector<int>({2}));
}

TEST(CliquePartition, PrefersHigherResidualDegree) {
  // 0 connects to 1, 2, 3; 2-3 also connected. Growing from 0 must pick 2
  // (degree 2 beats node 1's degree 1), then 3 completes the triangle.
  CompatGraph g = synthetic_graph(4, {{0, 1}, {0, 2}, {0, 3}, {2, 3}});
  auto cliques = clique_partition(g);
  ASSERT_EQ(cliques.size(), 2u);
  EXPECT_EQ(cliques[0], std::vector<int>({0, 2, 3}));
  EXPECT_EQ(cliques[1], std::vector<int>({1}));
}

TEST(Tarmac, DisjointPairNeedsOneVector) {
  Netlist n = disjoint_pair();
  TestSet ts = tarmac(n, 0.3, 256, default_seed);
  EXPECT_EQ(ts.provenance.algorithm, "tarmac");
  EXPECT_EQ(ts.provenance.rare, 2);
  EXPECT_EQ(ts.provenance.queries, 1u);
  EXPECT_EQ(ts.provenance.cliques, 1);
  EXPECT_EQ(ts.provenance.groups, 1);
  ASSERT_EQ(ts.vectors.size(), 1u);
  EXPECT_EQ(ts.vectors[0], TestVector({1, 1, 1, 1}));
}

TEST(Tarmac, PairwiseCompatibleTripleSplitsIntoTwoGroups) {
  Netlist n = testutil::parity_gadget();
  TestSet ts = tarmac(n, 0.3, 512, default_seed);
  EXPECT_EQ(ts.provenance.rare, 3);
  EXPECT_EQ(ts.provenance.queries, 3u);
  EXPECT_EQ(ts.provenance.cliques, 1);
  EXPECT_EQ(ts.provenance.groups, 2);
  ASSERT_EQ(ts.vectors.size(), 2u);
  // First vector satisfies the first two nodes, the leftover gets its own.
  auto nodes = rare_nodes(n, simulate_rareness(n, 512, default_seed), 0.3);
  ASSERT_EQ(nodes.size(), 3u);
  EXPECT_TRUE(activates(n, nodes[0], ts.vectors[0]));
  EXPECT_TRUE(activates(n, nodes[1], ts.vectors[0]));
  EXPECT_TRUE(activates(n, nodes[2], ts.vectors[1]));
}

TEST(Tarmac, WholeCliqueActivatesWithOneVector) {
  Netlist n = testutil::desk12();
  TestSet ts = tarmac(n, 0.2, 512, default_seed);
  EXPECT_EQ(ts.provenance.rare, 8);
  EXPECT_EQ(ts.provenance.queries, 28u);
  EXPECT_EQ(ts.provenance.cliques, 1);
  EXPECT_EQ(ts.provenance.groups, 1);
  ASSERT_EQ(ts.vectors.size(), 1u);
  RarenessReport rep = simulate_rareness(n, 512, default_seed);
  for (const auto& [node, count] : n_detect_profile(n, ts.vectors, 0.2, rep))
    EXPECT_EQ(count, 1) << n.net_name(node.net);
}

TEST(Tarmac, EmptyRareSetGivesEmptyTestSet) {
  Netlist n = testutil::desk12();
  TestSet ts = tarmac(n, 0.0, 128, 3);
  EXPECT_TRUE(ts.vectors.empty());
  EXPECT_EQ(ts.provenance.rare, 0);
  EXPECT_EQ(ts.provenance.queries, 0u);
}

TEST(Tarmac, DeterministicUnderFixedSeed) {
  Netlist n = testutil::parity_gadget();
  TestSet a = tarmac(n, 0.3, 256, 11);
  TestSet b = tarmac(n, 0.3, 256, 11);
  EXPECT_EQ(a.vectors, b.vectors);
  EXPECT_EQ(a.provenance.groups, b.provenance.groups);
}

TEST(Tarmac, UnreachableRareValueIsDroppedNotRetriedForever) {
  // K = AND(A, !A) is constant 0, so its rare value 1 has no witness. The
  // generator must drop it and still cover the genuinely rare X and Z.
  NetlistBuilder b("constant");
  NetId a = b.add_input("A"), bb = b.add_input("B"), c = b.add_input("C");
  NetId k = b.add_gate(GateKind::And, {a, a}, 0b10, "K");
  NetId x = b.add_gate(GateKind::And, {bb, c}, "X");
  b.mark_output(b.add_gate(GateKind::Or, {k, x}, "Z"));
  Netlist n = b.build();

  TestSet ts = tarmac(n, 0.35, 256, 7);
  EXPECT_EQ(ts.provenance.rare, 3);
  EXPECT_EQ(ts.provenance.queries, 3u);
  EXPECT_EQ(ts.provenance.cliques, 2);
  EXPECT_EQ(ts.provenance.groups, 1);
  ASSERT_EQ(ts.vectors.size(), 1u);
  auto vals = evaluate(n, ts.vectors[0]);
  EXPECT_EQ(vals[x], 1);
  EXPECT_EQ(vals[k], 0);
}

TEST(Serialization, TextRoundTripsVectorsAndProvenance) {
  Netlist n = testutil::desk12();
  TestSet ts = mero(n, 0.2, 2, 256, 23);
  std::string text = test_set_text(ts, n);
  EXPECT_EQ(text.rfind("# test set\n", 0), 0u);
  EXPECT_NE(text.find("# algorithm: mero\n"), std::string::npos);
  EXPECT_NE(text.find("# N: 2\n"), std::string::npos);
  EXPECT_NE(text.find("# inputs: x1 x2"), std::string::npos);
  TestSet back = parse_test_set_text(text);
  EXPECT_EQ(back.vectors, ts.vectors);
  EXPECT_EQ(back.provenance.algorithm, "mero");
  EXPECT_DOUBLE_EQ(back.provenance.tau, 0.2);
  EXPECT_EQ(back.provenance.seed, 23u);
  EXPECT_EQ(back.provenance.pool, 256);
  EXPECT_EQ(back.provenance.n_detect, 2);
  EXPECT_EQ(back.provenance.rare, ts.provenance.rare);
  EXPECT_EQ(back.provenance.unmet, ts.provenance.unmet);
}

TEST(Serialization, TarmacTextCarriesGraphCounters) {
  Netlist n = testutil::parity_gadget();
  TestSet ts = tarmac(n, 0.3, 256, 11);
  std::string text = test_set_text(ts, n);
  EXPECT_NE(text.find("# queries: 3\n"), std::string::npos);
  EXPECT_NE(text.find("# groups: 2\n"), std::string::npos);
  EXPECT_EQ(text.find("# N:"), std::string::npos);
  TestSet back = parse_test_set_text(text);
  EXPECT_EQ(back.provenance.queries, 3u);
  EXPECT_EQ(back.provenance.cliques, 1);
  EXPECT_EQ(back.provenance.skipped, 0u);
}

TEST(Serialization, JsonShape) {
  Netlist n = testutil::desk12();
  TestSet ts = tarmac(n, 0.2, 256, default_seed);
  nlohmann::ordered_json j = test_set_json(ts, n);
  EXPECT_EQ(j["provenance"]["algorithm"], "tarmac");
  EXPECT_EQ(j["provenance"]["queries"], 28);
  EXPECT_FALSE(j["provenance"].contains("N"));
  ASSERT_EQ(j["inputs"].size(), 12u);
  EXPECT_EQ(j["inputs"][0], "x1");
  ASSERT_EQ(j["vectors"].size(), ts.vectors.size());
  EXPECT_EQ(j["vectors"][0].get<std::string>().size(), 12u);
}

TEST(Serialization, ParserRejectsMalformedInput) {
  EXPECT_THROW(parse_test_set_text("01x1\n"), ParseError);
  EXPECT_THROW(parse_test_set_text("0101\n011\n"), ParseError);
  EXPECT_THROW(parse_test_set_text("# pool: abc\n01\n"), ParseError);
  TestSet ok = parse_test_set_text("# note: free text ignored\n\n01\n10\n");
  EXPECT_EQ(ok.vectors.size(), 2u);
}
