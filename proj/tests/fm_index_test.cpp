#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "colex/error.hpp"
#include "colex/fm_index.hpp"
#include "support.hpp"

using namespace colex;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Bwt sample_bwt() {
  Automaton a = test::sample();
  PartialOrder o = maximal_colex_order_dfa(a);
  auto d = parse_chains(slurp(test::data_path("sample_chains.txt")), o, a.start());
  return build_bwt(a, o, d);
}

std::vector<Symbol> word(const std::string& s) {
  std::vector<Symbol> w;
  for (char c : s) w.push_back(static_cast<Symbol>(c - 'a'));
  return w;
}

// Checks locate(w) against the simulated reached set, state by state.
void expect_matches_simulation(const Automaton& a, const test::Indexed& ix,
                               const FmIndex& fm, const oracle::Word& w) {
  auto expect = oracle::reached(a, w);
  IntervalSet got = fm.locate(w);
  ASSERT_EQ(got.size(), ix.chains.p());
  std::set<State> states;
  for (std::size_t pos : fm.positions(got)) states.insert(ix.bwt.state_order[pos]);
  ASSERT_EQ(states, expect) << to_text(a);
  ASSERT_EQ(fm.count(w), expect.size());
  ASSERT_EQ(fm.member(w), oracle::accepts(a, w));
  for (std::uint32_t j = 0; j < got.size(); ++j) {
    ASSERT_GE(got[j].begin, 1u);
    ASSERT_LE(got[j].end, ix.chains.chains[j].size() + 1);
  }
  if (!expect.empty()) {
    std::vector<State> set(expect.begin(), expect.end());
    auto want = interval_to_chain_ranges(ix.order, ix.chains, set);
    for (std::uint32_t j = 0; j < got.size(); ++j) {
      if (got[j].empty() && want[j].empty()) continue;
      ASSERT_EQ(got[j], want[j]) << to_text(a);
    }
  }
}

}  // namespace

TEST(FmIndex, SampleExtend) {
  FmIndex fm(sample_bwt());
  EXPECT_EQ(fm.num_edges(), 9u);
  EXPECT_EQ(fm.p(), 2u);
  IntervalSet seed = fm.seed();
  EXPECT_EQ(seed, (IntervalSet{{1, 2}, {1, 1}}));
  IntervalSet a = fm.extend(seed, 0);
  EXPECT_EQ(a[0], (ChainRange{2, 3}));
  EXPECT_TRUE(a[1].empty());
  IntervalSet ab = fm.extend(a, 1);
  EXPECT_TRUE(ab[0].empty());
  EXPECT_EQ(ab[1], (ChainRange{2, 3}));
  EXPECT_EQ(fm.positions(ab), std::vector<std::size_t>{5});

  IntervalSet none = fm.extend(seed, 1);
  EXPECT_EQ(interval_size(none), 0u);
  EXPECT_EQ(interval_size(fm.extend(none, 0)), 0u);
  EXPECT_EQ(interval_size(fm.extend(seed, 5)), 0u);
  EXPECT_EQ(interval_size(fm.extend(seed, -1)), 0u);
}

TEST(FmIndex, SampleCountAndMember) {
  FmIndex fm(sample_bwt());
  EXPECT_EQ(fm.count(word("")), 1u);
  EXPECT_FALSE(fm.member(word("")));
  EXPECT_EQ(fm.count(word("a")), 1u);
  EXPECT_EQ(fm.count(word("ab")), 1u);
  EXPECT_EQ(fm.count(word("abb")), 1u);
  EXPECT_TRUE(fm.member(word("ab")));
  EXPECT_FALSE(fm.member(word("aba")));
  EXPECT_TRUE(fm.member(word("abaa")));
  EXPECT_TRUE(fm.member(word("abbb")));
  EXPECT_EQ(fm.count(word("b")), 0u);
  EXPECT_FALSE(fm.member(word("b")));
}

TEST(FmIndex, SampleAllShortWords) {
  Automaton a = test::sample();
  test::Indexed ix;
  ix.order = maximal_colex_order_dfa(a);
  ix.chains = parse_chains(slurp(test::data_path("sample_chains.txt")), ix.order, 0);
  ix.bwt = build_bwt(a, ix.order, ix.chains);
  FmIndex fm(ix.bwt);
  for (const auto& w : oracle::all_words(2, 8)) expect_matches_simulation(a, ix, fm, w);
}

TEST(FmIndex, SampleSpaceWithinBound) {
  FmIndex fm(sample_bwt());
  auto space = fm.space();
  // 9 (1 + 1 + 2) + 2 * 7
  EXPECT_LE(space.core(), 50u);
  EXPECT_EQ(space.out_symbols, 18u);
  EXPECT_EQ(space.degree_map, 0u);
}

TEST(FmIndex, NoEdges) {
  Automaton a(1, 0, 0, {0}, {});
  auto ix = test::index_with(a, {{false}});
  FmIndex fm(ix.bwt);
  EXPECT_EQ(fm.count(word("")), 1u);
  EXPECT_TRUE(fm.member(word("")));
  EXPECT_EQ(fm.count(word("a")), 0u);
  EXPECT_FALSE(fm.member(word("ab")));
}

TEST(FmIndex, RandomAgainstSimulation) {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 300; ++trial) {
    oracle::GeneratorConfig cfg;
    cfg.max_states = 12;
    cfg.max_sigma = 4;
    cfg.deterministic = trial % 3 == 0;
    Automaton a;
    oracle::Relation less;
    if (trial % 5 == 4) {
      auto planted = oracle::gen_wheeler(cfg, rng);
      a = planted.automaton;
      less = oracle::total_order_relation(planted.order);
    } else {
      a = oracle::gen_automaton(cfg, rng);
      less = cfg.deterministic ? test::to_relation(maximal_colex_order_dfa(a))
                               : oracle::random_colex_order(a, rng);
    }
    auto ix = test::index_with(a, less);
    FmIndex fm(ix.bwt);
    auto space = fm.space();
    std::size_t ls = ceil_log2(a.sigma()), lp = ceil_log2(ix.chains.p());
    ASSERT_LE(space.core(), a.num_edges() * (ls + lp + 2) + 2 * a.num_states());
    for (int k = 0; k < 30; ++k) {
      oracle::Word w(rng() % 9);
      for (auto& c : w) c = static_cast<Symbol>(rng() % (a.sigma() + 1));
      expect_matches_simulation(a, ix, fm, w);
    }
  }
}

TEST(FmIndex, SerializeRoundTrip) {
  std::mt19937_64 rng(53);
  oracle::GeneratorConfig cfg;
  cfg.max_states = 12;
  cfg.max_sigma = 4;
  for (int trial = 0; trial < 50; ++trial) {
    Automaton a = oracle::gen_automaton(cfg, rng);
    auto ix = test::index_with(a, oracle::random_colex_order(a, rng));
    FmIndex fm(ix.bwt);
    auto bytes = fm.serialize();
    FmIndex back = FmIndex::deserialize(bytes);
    EXPECT_EQ(back.serialize(), bytes);
    for (const auto& w : oracle::all_words(a.sigma(), 3)) {
      ASSERT_EQ(back.locate(w), fm.locate(w));
      ASSERT_EQ(back.member(w), fm.member(w));
    }
  }
}

TEST(FmIndex, DeserializeRejectsCorruption) {
  auto bytes = FmIndex(sample_bwt()).serialize();
  for (std::size_t cut = 0; cut < bytes.size(); ++cut) {
    std::vector<std::uint8_t> prefix(bytes.begin(), bytes.begin() + cut);
    EXPECT_THROW(FmIndex::deserialize(prefix), Error) << cut;
  }
  std::mt19937_64 rng(59);
  for (int trial = 0; trial < 2000; ++trial) {
    auto copy = bytes;
    copy[rng() % copy.size()] ^= static_cast<std::uint8_t>(1u << (rng() % 8));
    try {
      FmIndex fm = FmIndex::deserialize(copy);
      for (const auto& w : oracle::all_words(2, 4)) fm.member(w);
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::kMalformed) << e.what();
    }
  }
}
