#include <gtest/gtest.h>

#include <random>

#include "colex/chains.hpp"
#include "colex/error.hpp"
#include "colex/order.hpp"
#include "support.hpp"

using namespace colex;

namespace {

// Hasse diagram of the width-2 order drawn for the sample automaton.
PartialOrder sample_hasse() {
  std::vector<std::pair<State, State>> pairs = {
      {0, 1}, {1, 3}, {3, 6}, {4, 2}, {2, 5}, {0, 4}, {1, 4}, {3, 2}, {2, 6}};
  return order_from_pairs(7, pairs);
}

Automaton cycle() { return load_automaton(test::data_path("cycle.aut")); }

oracle::GeneratorConfig dfa_config(std::size_t max_states) {
  oracle::GeneratorConfig cfg;
  cfg.max_states = max_states;
  cfg.deterministic = true;
  cfg.extra_edge_probability = 0.3;
  return cfg;
}

}  // namespace

TEST(Order, HasseOrderOfSampleIsColex) {
  Automaton a = test::sample();
  PartialOrder o = sample_hasse();
  EXPECT_TRUE(verify_colex(a, o).ok());
  EXPECT_TRUE(oracle::is_colex(a, test::to_relation(o)));
  EXPECT_EQ(width(o), 2u);
}

TEST(Order, MutatedSampleOrderViolatesAxiom2) {
  Automaton a = test::sample();
  oracle::Relation less = test::to_relation(sample_hasse());
  less[4][3] = true;
  auto report = verify_colex(a, test::to_order(less));
  ASSERT_FALSE(report.ok());
  bool axiom2 = false;
  for (const auto& v : report.violations)
    axiom2 |= v.kind == ColexViolationKind::kAxiom2;
  EXPECT_TRUE(axiom2);
}

TEST(Order, VerifyRejectsSizeMismatch) {
  EXPECT_THROW(verify_colex(test::sample(), PartialOrder(3)), Error);
}

TEST(Order, LabelOnlySample) {
  Automaton a = test::sample();
  PartialOrder o = label_only_order(a);
  EXPECT_TRUE(verify_colex(a, o).ok());
  EXPECT_EQ(width(o), 3u);
  EXPECT_TRUE(o.incomparable(1, 3));
  EXPECT_TRUE(o.incomparable(2, 6));
  EXPECT_TRUE(o.less(0, 1));
  EXPECT_TRUE(o.less(4, 5));
  EXPECT_EQ(label_only_order(Automaton()).num_strict_pairs(), 0u);
}

TEST(Order, MaximalSample) {
  Automaton a = test::sample();
  PartialOrder o = maximal_colex_order_dfa(a);
  EXPECT_TRUE(verify_colex(a, o).ok());
  EXPECT_EQ(width(o), 2u);
  std::vector<std::pair<State, State>> incomparable;
  for (State u = 0; u < 7; ++u)
    for (State v = u + 1; v < 7; ++v)
      if (o.incomparable(u, v)) incomparable.push_back({u, v});
  EXPECT_EQ(incomparable, (std::vector<std::pair<State, State>>{{3, 4}, {5, 6}}));
  EXPECT_EQ(oracle::exhaustive_min_width(a).width, 2u);
}

TEST(Order, Cycle) {
  Automaton a = cycle();
  TotalOrder t = underlying_order_dfa(a);
  EXPECT_EQ(t.sequence[0], 0u);
  PartialOrder o = maximal_colex_order_dfa(a);
  EXPECT_TRUE(o.incomparable(1, 2));
  EXPECT_TRUE(o.less(0, 1));
  EXPECT_TRUE(o.less(0, 2));
  EXPECT_EQ(width(o), 2u);
}

TEST(Order, UnderlyingOrderRejectsNfa) {
  Automaton a(3, 1, 0, {1, 2}, {{0, 1, 0}, {0, 2, 0}});
  EXPECT_THROW(underlying_order_dfa(a), Error);
  EXPECT_THROW(maximal_colex_order_dfa(a), Error);
}

TEST(Order, UnderlyingOrderProperties) {
  std::mt19937_64 rng(5);
  auto cfg = dfa_config(12);
  for (int trial = 0; trial < 200; ++trial) {
    Automaton a = oracle::gen_automaton(cfg, rng);
    for (auto tree : {SpanningTree::kBreadthFirst, SpanningTree::kDepthFirst}) {
      TotalOrder t = underlying_order_dfa(a, tree);
      for (State u = 0; u < a.num_states(); ++u)
        for (State v = 0; v < a.num_states(); ++v)
          if (a.incoming_label(u) < a.incoming_label(v)) { ASSERT_TRUE(t.before(u, v)); }
      PartialOrder o = maximal_colex_order_dfa(a, t);
      for (auto [u, v] : o.strict_pairs()) ASSERT_TRUE(t.before(u, v));
    }
  }
}

TEST(Order, MaximalIsUniqueAcrossTreesAndAbsorbsOtherOrders) {
  std::mt19937_64 rng(9);
  auto cfg = dfa_config(10);
  for (int trial = 0; trial < 200; ++trial) {
    Automaton a = oracle::gen_automaton(cfg, rng);
    PartialOrder bfs = maximal_colex_order_dfa(a);
    PartialOrder dfs =
        maximal_colex_order_dfa(a, underlying_order_dfa(a, SpanningTree::kDepthFirst));
    ASSERT_EQ(bfs, dfs) << to_text(a);
    ASSERT_TRUE(oracle::is_colex(a, test::to_relation(bfs))) << to_text(a);

    oracle::Relation other = oracle::random_colex_order(a, rng);
    oracle::Relation joined = test::to_relation(bfs);
    for (std::size_t u = 0; u < other.size(); ++u)
      for (std::size_t v = 0; v < other.size(); ++v)
        if (other[u][v]) joined[u][v] = true;
    oracle::close_transitively(joined);
    ASSERT_EQ(joined, test::to_relation(bfs)) << to_text(a);
    ASSERT_TRUE(is_refinement(test::to_order(other), bfs));
    ASSERT_LE(width(bfs), oracle::max_antichain(other));
  }
}

TEST(Order, Refinement) {
  Automaton a = test::sample();
  PartialOrder label = label_only_order(a);
  PartialOrder maximal = maximal_colex_order_dfa(a);
  EXPECT_TRUE(is_refinement(label, maximal));
  EXPECT_TRUE(is_refinement(maximal, maximal));
  EXPECT_FALSE(is_refinement(maximal, label));
  EXPECT_LE(width(maximal), width(label));
}

TEST(Order, VerifyAgreesWithNaiveChecker) {
  std::mt19937_64 rng(13);
  oracle::GeneratorConfig cfg;
  cfg.max_states = 7;
  for (int trial = 0; trial < 300; ++trial) {
    Automaton a = oracle::gen_automaton(cfg, rng);
    oracle::Relation less = oracle::random_poset(a.num_states(), 0.4, rng);
    EXPECT_EQ(verify_colex(a, test::to_order(less)).ok(), oracle::is_colex(a, less));
    oracle::Relation good = oracle::random_colex_order(a, rng);
    EXPECT_TRUE(verify_colex(a, test::to_order(good)).ok());
  }
}

TEST(Order, ReachedSetsAreConvexAndCompatible) {
  std::mt19937_64 rng(17);
  oracle::GeneratorConfig cfg;
  cfg.max_states = 7;
  cfg.max_sigma = 2;
  for (int trial = 0; trial < 60; ++trial) {
    Automaton a = oracle::gen_automaton(cfg, rng);
    oracle::Relation less = oracle::random_colex_order(a, rng);
    auto convex = oracle::check_reached_convex(a, less, 6);
    ASSERT_TRUE(convex.ok()) << convex.violations.front();
    auto nodes = oracle::check_string_nodes(a, less, 5);
    ASSERT_TRUE(nodes.ok()) << nodes.violations.front();
  }
}

TEST(Order, TextFormat) {
  PartialOrder o = order_from_pairs(3, std::vector<std::pair<State, State>>{{0, 1}, {1, 2}});
  std::string text = order_to_text(o, 1);
  EXPECT_EQ(text, "width 1\nlt 0 1\nlt 0 2\nlt 1 2\n");
  EXPECT_EQ(parse_order(text, 3), o);
  EXPECT_THROW(parse_order("lt 0 1\nlt 1 0\n", 3), Error);
  EXPECT_THROW(parse_order("lt 0 9\n", 3), Error);
}
