#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace colex {

using State = std::uint32_t;

// Dense symbol index in [0, sigma). The start state's pseudo-label '#'
// is kStartLabel and compares below every real symbol.
using Symbol = std::int32_t;
inline constexpr Symbol kStartLabel = -1;
inline constexpr Symbol kMixedLabel = -2;

struct Edge {
  State source = 0;
  State target = 0;
  Symbol label = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

// Labeled transition structure with a start state and a final set.
//
// Outgoing edges are kept sorted by (source, label, target) and incoming
// edges by (target, source, label), so both adjacency views are spans.
// Values are immutable once constructed.
class Automaton {
 public:
  // A single non-final state with no edges over an empty alphabet.
  Automaton();

  // Throws Error(kInvalidArgument) on out-of-range ids, symbols outside
  // [0, sigma), duplicate edges, or a malformed alphabet string. An empty
  // alphabet string selects the default names "ab...zAB...Z01...9".
  Automaton(std::size_t num_states, std::size_t sigma, State start,
            std::vector<State> finals, std::vector<Edge> edges,
            std::string alphabet = {});

  std::size_t num_states() const { return num_states_; }
  std::size_t num_edges() const { return out_edges_.size(); }
  std::size_t sigma() const { return sigma_; }
  State start() const { return start_; }

  bool is_final(State u) const { return final_mask_[u]; }
  const std::vector<State>& finals() const { return finals_; }

  std::span<const Edge> edges() const { return out_edges_; }
  std::span<const Edge> out_edges(State u) const;
  std::span<const Edge> in_edges(State v) const;

  // Label shared by all edges entering v; kStartLabel when v has no incoming
  // edge and kMixedLabel when incoming labels disagree.
  Symbol incoming_label(State v) const { return lambda_[v]; }

  bool is_deterministic() const { return deterministic_; }
  bool is_input_consistent() const { return input_consistent_; }

  // Character names of the symbols; alphabet()[c] names symbol c.
  const std::string& alphabet() const { return alphabet_; }

  // Maps characters to symbols. Returns nullopt if a character is not part
  // of the alphabet.
  std::optional<std::vector<Symbol>> encode_word(std::string_view word) const;
  std::string decode_word(std::span<const Symbol> word) const;

  friend bool operator==(const Automaton& a, const Automaton& b);

 private:
  std::size_t num_states_ = 1;
  std::size_t sigma_ = 0;
  State start_ = 0;
  std::vector<State> finals_;
  std::vector<bool> final_mask_;
  std::vector<Edge> out_edges_;
  std::vector<std::size_t> out_offsets_;
  std::vector<Edge> in_edges_;
  std::vector<std::size_t> in_offsets_;
  std::vector<Symbol> lambda_;
  bool deterministic_ = true;
  bool input_consistent_ = true;
  std::string alphabet_;
};

std::string default_alphabet(std::size_t sigma);

// Reads the line-based text format:
//
//   nfa <n> <m> <sigma>
//   alphabet <c0> <c1> ...     (optional, one character per symbol)
//   start <id>
//   finals <id>...
//   edge <src> <dst> <symbol-index>   (m lines)
//
// Blank lines and lines starting with "//" are ignored. Throws Error(kParse)
// with the offending line number.
Automaton parse_automaton(std::string_view text);
Automaton load_automaton(const std::string& path);
std::string to_text(const Automaton& a);

// Standing assumptions of the indexing machinery.
enum class Assumption {
  kInputConsistent,     // (i)   all edges into a state share one label
  kReachable,           // (ii)  every state reachable from the start
  kStartWithoutInEdges, // (iii) the start has no incoming edges
  kCoReachable,         // (iv)  every state is final or reaches a final
};

struct Violation {
  Assumption assumption;
  State state;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool deterministic = false;
  // Informational: every symbol labels at least one edge.
  bool alphabet_effective = false;

  bool ok() const { return violations.empty(); }
  bool violates(Assumption assumption) const;
};

ValidationReport validate(const Automaton& a);

struct NormalizeResult {
  Automaton automaton;
  // origin[v] is the input state that normalized state v was copied from.
  std::vector<State> origin;
  // No final state is reachable; automaton is a lone non-final start.
  bool empty_language = false;
};

// Produces an equivalent automaton satisfying assumptions (i)-(iv).
NormalizeResult normalize(const Automaton& a);

// Exact set of states reached from the start by paths spelling `word`,
// sorted ascending. Symbols outside the alphabet yield the empty set.
std::vector<State> states_reached(const Automaton& a,
                                  std::span<const Symbol> word);

bool accepts(const Automaton& a, std::span<const Symbol> word);

}  // namespace colex
