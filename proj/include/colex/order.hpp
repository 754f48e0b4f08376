#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "colex/automaton.hpp"

namespace colex {

// Strict part of a partial order on [0, n), stored as a dense bit matrix.
// u <= v is derived as u == v || less(u, v).
class PartialOrder {
 public:
  PartialOrder() = default;
  // The discrete order: no two distinct states are comparable.
  explicit PartialOrder(std::size_t n);

  std::size_t size() const { return n_; }

  bool less(State u, State v) const {
    return (bits_[u * words_ + (v >> 6)] >> (v & 63)) & 1u;
  }
  bool leq(State u, State v) const { return u == v || less(u, v); }
  bool comparable(State u, State v) const { return leq(u, v) || less(v, u); }
  bool incomparable(State u, State v) const { return !comparable(u, v); }

  void set_less(State u, State v, bool value = true);

  // Bit row of { v : u < v }.
  std::span<const std::uint64_t> successors(State u) const {
    return {bits_.data() + u * words_, words_};
  }

  void transitive_closure();

  // All pairs (u, v) with u < v, sorted lexicographically.
  std::vector<std::pair<State, State>> strict_pairs() const;
  std::size_t num_strict_pairs() const;

  friend bool operator==(const PartialOrder&, const PartialOrder&) = default;

 private:
  std::size_t n_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> bits_;
};

// Builds an order from explicit pairs and closes it transitively. Throws
// Error(kInvalidArgument) if the closure is not antisymmetric.
PartialOrder order_from_pairs(std::size_t n,
                              std::span<const std::pair<State, State>> pairs);

// Parses `lt <u> <v>` lines (a `width` line is accepted and ignored) into a
// closed order on n states.
PartialOrder parse_order(std::string_view text, std::size_t n);

// `width <p>` followed by one `lt <u> <v>` line per strict pair.
std::string order_to_text(const PartialOrder& o, std::size_t width);

// A permutation of the states.
struct TotalOrder {
  std::vector<State> sequence;      // position -> state
  std::vector<std::size_t> rank;    // state -> position

  static TotalOrder from_sequence(std::vector<State> sequence);
  bool before(State u, State v) const { return rank[u] < rank[v]; }
};

enum class ColexViolationKind {
  kReflexive,
  kAntisymmetry,
  kTransitivity,
  kAxiom1,  // labels ordered but states not
  kAxiom2,  // predecessors of an ordered, equally labeled pair misordered
};

struct ColexViolation {
  ColexViolationKind kind;
  State u = 0;
  State v = 0;
  // kTransitivity: the middle state in `u_pred`. kAxiom2: predecessors of u
  // and v respectively.
  State u_pred = 0;
  State v_pred = 0;

  std::string describe() const;
};

struct ColexReport {
  std::vector<ColexViolation> violations;
  bool truncated = false;

  bool ok() const { return violations.empty(); }
};

// Checks that `o` is a partial order satisfying both co-lexicographic axioms
// on `a`. Throws Error(kInvalidArgument) on a size mismatch and
// Error(kPrecondition) if `a` is not input-consistent.
ColexReport verify_colex(const Automaton& a, const PartialOrder& o,
                         std::size_t max_violations = 256);

// u < v iff the incoming label of u is smaller than that of v.
PartialOrder label_only_order(const Automaton& a);

enum class SpanningTree {
  kBreadthFirst,  // smallest label explored first
  kDepthFirst,    // largest label explored first
};

// A total order refined by every co-lexicographic order of the DFA: states
// sorted by the co-lexicographic order of their spanning-tree path labels.
TotalOrder underlying_order_dfa(const Automaton& a,
                                SpanningTree tree = SpanningTree::kBreadthFirst);

// The unique maximal co-lexicographic order of a DFA. Pairs of the
// underlying order whose predecessors are inverted are seeded as
// incomparable, and incomparability is propagated forward along pairs of
// equally labeled edges.
PartialOrder maximal_colex_order_dfa(const Automaton& a);
PartialOrder maximal_colex_order_dfa(const Automaton& a,
                                     const TotalOrder& underlying);

// True iff every strict pair of `coarse` is a strict pair of `fine`.
bool is_refinement(const PartialOrder& coarse, const PartialOrder& fine);

}  // namespace colex
