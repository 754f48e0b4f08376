#include <gtest/gtest.h>

#include <random>
#include <regex>

#include "colex/automaton.hpp"
#include "colex/error.hpp"
#include "support.hpp"

using namespace colex;

namespace {

ErrorKind parse_error_kind(const std::string& text) {
  try {
    parse_automaton(text);
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error for:\n" << text;
  return ErrorKind::kIo;
}

Automaton random_raw(std::mt19937_64& rng, std::size_t n, std::size_t sigma,
                     double density) {
  std::vector<Edge> edges;
  std::bernoulli_distribution coin(density);
  for (State u = 0; u < n; ++u)
    for (State v = 0; v < n; ++v)
      for (Symbol c = 0; c < static_cast<Symbol>(sigma); ++c)
        if (coin(rng)) edges.push_back({u, v, c});
  std::vector<State> finals;
  for (State v = 0; v < n; ++v)
    if (coin(rng)) finals.push_back(v);
  return Automaton(n, sigma, 0, finals, edges);
}

}  // namespace

TEST(Automaton, ParsesSample) {
  Automaton a = test::sample();
  EXPECT_EQ(a.num_states(), 7u);
  EXPECT_EQ(a.num_edges(), 9u);
  EXPECT_EQ(a.sigma(), 2u);
  EXPECT_EQ(a.alphabet(), "ab");
  EXPECT_EQ(a.finals(), (std::vector<State>{2, 4, 6}));
  EXPECT_TRUE(a.is_deterministic());
  EXPECT_EQ(a.incoming_label(0), kStartLabel);
  EXPECT_EQ(a.incoming_label(5), 1);
}

TEST(Automaton, SingleStateIsValid) {
  Automaton a = parse_automaton("nfa 1 0 0\nstart 0\nfinals 0\n");
  EXPECT_EQ(a.num_states(), 1u);
  EXPECT_TRUE(validate(a).ok());
  EXPECT_TRUE(accepts(a, std::vector<Symbol>{}));
}

TEST(Automaton, ParseErrors) {
  EXPECT_EQ(parse_error_kind("nfa 3 1 1\nstart 0\nfinals 0\nedge 0 99 0\n"),
            ErrorKind::kParse);
  EXPECT_EQ(parse_error_kind("nfa 2 2 1\nstart 0\nfinals 1\nedge 0 1 0\nedge 0 1 0\n"),
            ErrorKind::kParse);
  EXPECT_EQ(parse_error_kind("nfa 2 1 1\nstart 0\nfinals 1\nedge 0 1 3\n"),
            ErrorKind::kParse);
  EXPECT_EQ(parse_error_kind("nfa 2 2 1\nstart 0\nfinals 1\nedge 0 1 0\n"),
            ErrorKind::kParse);
  EXPECT_EQ(parse_error_kind("dfa 2 1 1\n"), ErrorKind::kParse);
  EXPECT_EQ(parse_error_kind("nfa 2 1 1\nfinals 1\nedge 0 1 0\n"),
            ErrorKind::kParse);
}

TEST(Automaton, ParseErrorNamesLine) {
  try {
    parse_automaton("nfa 3 1 1\nstart 0\nfinals 0\nedge 0 99 0\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos) << e.what();
  }
}

TEST(Automaton, TextRoundTrip) {
  Automaton a = test::sample();
  EXPECT_EQ(parse_automaton(to_text(a)), a);
}

TEST(Automaton, ValidateSample) {
  auto r = validate(test::sample());
  EXPECT_TRUE(r.ok());
  EXPECT_TRUE(r.deterministic);
  EXPECT_TRUE(r.alphabet_effective);
}

TEST(Automaton, ValidateReportsEdgeIntoStart) {
  Automaton a(2, 1, 0, {1}, {{0, 1, 0}, {1, 0, 0}});
  auto r = validate(a);
  EXPECT_TRUE(r.violates(Assumption::kStartWithoutInEdges));
}

TEST(Automaton, ValidateReportsMixedLabels) {
  Automaton a(3, 2, 0, {2}, {{0, 1, 0}, {0, 2, 0}, {1, 2, 1}});
  auto r = validate(a);
  EXPECT_TRUE(r.violates(Assumption::kInputConsistent));
  EXPECT_EQ(a.incoming_label(2), kMixedLabel);
}

TEST(Automaton, ValidateReportsUnreachableAndDead) {
  Automaton a(4, 1, 0, {1}, {{0, 1, 0}, {0, 2, 0}});
  auto r = validate(a);
  EXPECT_TRUE(r.violates(Assumption::kReachable));
  EXPECT_TRUE(r.violates(Assumption::kCoReachable));
}

TEST(Automaton, NormalizeKeepsSample) {
  Automaton a = test::sample();
  auto r = normalize(a);
  EXPECT_FALSE(r.empty_language);
  EXPECT_EQ(r.automaton, a);
}

TEST(Automaton, NormalizeSplitsMixedState) {
  Automaton a(3, 2, 0, {2}, {{0, 1, 0}, {0, 2, 0}, {1, 2, 1}, {2, 1, 0}});
  auto r = normalize(a);
  EXPECT_TRUE(validate(r.automaton).ok());
  // State 2 is entered by a and b, so it appears twice.
  EXPECT_EQ(std::count(r.origin.begin(), r.origin.end(), State(2)), 2);
}

TEST(Automaton, NormalizeEmptyLanguage) {
  Automaton a(3, 1, 0, {}, {{0, 1, 0}, {1, 2, 0}});
  auto r = normalize(a);
  EXPECT_TRUE(r.empty_language);
  EXPECT_EQ(r.automaton.num_states(), 1u);
  EXPECT_TRUE(r.automaton.finals().empty());
}

TEST(Automaton, NormalizePreservesLanguage) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 150; ++trial) {
    std::size_t n = 1 + rng() % 8, sigma = 1 + rng() % 3;
    Automaton a = random_raw(rng, n, sigma, 0.12);
    auto r = normalize(a);
    if (!r.empty_language) { ASSERT_TRUE(validate(r.automaton).ok()) << to_text(a); }
    EXPECT_EQ(normalize(r.automaton).automaton, r.automaton) << "idempotence";
    for (const auto& w : oracle::all_words(sigma, 6))
      ASSERT_EQ(oracle::accepts(a, w), accepts(r.automaton, w)) << to_text(a);
  }
}

TEST(Automaton, StatesReached) {
  Automaton a = test::sample();
  EXPECT_EQ(states_reached(a, std::vector<Symbol>{}), std::vector<State>{0});
  EXPECT_EQ(states_reached(a, std::vector<Symbol>{0, 1}), std::vector<State>{2});
  EXPECT_TRUE(states_reached(a, std::vector<Symbol>{0, 7}).empty());
}

TEST(Automaton, StatesReachedMatchesDepthFirstOracle) {
  std::mt19937_64 rng(11);
  oracle::GeneratorConfig cfg;
  cfg.max_states = 10;
  for (int trial = 0; trial < 200; ++trial) {
    Automaton a = oracle::gen_automaton(cfg, rng);
    for (int k = 0; k < 20; ++k) {
      oracle::Word w(rng() % 7);
      for (auto& c : w) c = static_cast<Symbol>(rng() % std::max<std::size_t>(a.sigma(), 1));
      auto expect = oracle::reached(a, w);
      auto got = states_reached(a, w);
      ASSERT_EQ(std::vector<State>(expect.begin(), expect.end()), got);
    }
  }
}

TEST(Automaton, AcceptsSampleLanguage) {
  Automaton a = test::sample();
  auto acc = [&](const std::string& w) { return accepts(a, *a.encode_word(w)); };
  EXPECT_TRUE(acc("ab"));
  EXPECT_TRUE(acc("abaa"));
  EXPECT_FALSE(acc("aba"));
  EXPECT_FALSE(acc(""));
  EXPECT_FALSE(a.encode_word("abc").has_value());

  std::regex re("ab(aa)*(bb)*");
  std::mt19937_64 rng(3);
  for (int i = 0; i < 1000; ++i) {
    std::string w = "ab";
    std::size_t len = rng() % 9;
    for (std::size_t k = 0; k < len; ++k) w += "ab"[rng() % 2];
    if (rng() % 4 == 0) w = w.substr(rng() % 2);
    EXPECT_EQ(acc(w), std::regex_match(w, re)) << w;
  }
}
