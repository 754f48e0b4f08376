#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "colex/automaton.hpp"

namespace colex {

struct PowersetStats {
  std::size_t states = 0;
  std::size_t edges = 0;
  // NFA edges followed while expanding subsets.
  std::size_t edges_traversed = 0;
};

struct PowersetResult {
  Automaton dfa;
  // DFA state -> sorted NFA states it stands for.
  std::vector<std::vector<State>> subset_of;
  PowersetStats stats;
};

// Accessible subset construction. Subsets are numbered in discovery order
// of a breadth-first search that tries labels in increasing order.
PowersetResult determinize(const Automaton& a);

// 2^p (n - p + 1) - 1, saturating at UINT64_MAX; requires 1 <= p <= n.
std::uint64_t powerset_bound(std::size_t p, std::size_t n);
bool check_powerset_bound(std::size_t p, std::size_t n,
                          const PowersetResult& result);

// Minimal DFA for L(a) by Hopcroft partition refinement, with states
// renumbered breadth-first from the start (labels in increasing order) and
// no dead states. Throws Error(kPrecondition) on nondeterministic input.
Automaton minimize_dfa(const Automaton& a);

// Compares the canonical minimal DFAs of both automata. Alphabets are
// matched by symbol index.
bool equivalent(const Automaton& a, const Automaton& b);

bool member_via_dfa(const Automaton& a, std::span<const Symbol> word);

// Determinizes once and answers many membership queries.
class DfaMembership {
 public:
  explicit DfaMembership(const Automaton& a);
  bool member(std::span<const Symbol> word) const;
  const Automaton& dfa() const { return dfa_; }

 private:
  Automaton dfa_;
};

}  // namespace colex
