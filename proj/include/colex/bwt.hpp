#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "colex/automaton.hpp"
#include "colex/chains.hpp"
#include "colex/order.hpp"

namespace colex {

// An outgoing edge as seen from its source: destination chain and label.
struct OutPair {
  std::uint32_t chain = 0;
  Symbol label = 0;

  friend bool operator==(const OutPair&, const OutPair&) = default;
};

// Generalized Burrows-Wheeler transform of an automaton. Positions run over
// the states chain by chain, each chain in increasing order; chain ids are
// 0-based.
struct Bwt {
  std::size_t sigma = 0;
  std::string alphabet;
  std::vector<std::uint32_t> chain_sizes;
  // position -> state of the source automaton (identity after decoding)
  std::vector<State> state_order;
  std::vector<std::vector<OutPair>> out;
  std::vector<std::vector<std::uint32_t>> in;
  std::vector<bool> final;

  std::size_t num_states() const { return out.size(); }
  std::size_t num_edges() const;
  std::size_t p() const { return chain_sizes.size(); }
  // No OUT list repeats a label.
  bool is_deterministic() const;
  // Chain of every position.
  std::vector<std::uint32_t> position_chains() const;

  friend bool operator==(const Bwt&, const Bwt&) = default;
};

// Requires `a` to satisfy assumptions (i)-(iii), `d` to be a chain
// decomposition of `o` with the start in chain 0, and (when `check_order`)
// `o` to pass verify_colex. Throws Error(kPrecondition) otherwise.
Bwt build_bwt(const Automaton& a, const PartialOrder& o,
              const ChainDecomposition& d, bool check_order = true);

// Rows `order`, `chains`, `OUT`, `IN`, `FINAL`; chain ids printed from 1.
std::string bwt_to_text(const Bwt& b);

struct BitBudget {
  std::uint64_t nfa_bits = 0;
  std::uint64_t dfa_bits = 0;
};

BitBudget bit_budget(std::size_t num_states, std::size_t num_edges,
                     std::size_t sigma, std::size_t p);
BitBudget bit_budget(const Bwt& b);

enum class BwtKind : std::uint8_t { kNfa = 0, kDfa = 1 };

struct EncodedBwt {
  std::vector<std::uint8_t> bytes;
  std::size_t header_bytes = 0;
  std::uint64_t payload_bits = 0;
};

// Stream layout: magic "CBWT1", kind (u8), n, |E|, sigma, p (u32 each),
// flags (u8), alphabet (sigma bytes), an n-bit map of states with nonempty
// OUT lists when some OUT list is empty (flag bit 0), payload length in
// bits (u64), then the payload. Integers are little-endian.
//
// Payload: OUT list terminators (|E| bits), IN list terminators (|E| bits),
// OUT pairs (chain then label), IN chain ids (NFA only), FINAL.
//
// The IN terminators assume position 0 is the only empty IN list, which
// build_bwt guarantees. encode_dfa throws Error(kPrecondition) when the
// transform is not deterministic.
EncodedBwt encode_nfa(const Bwt& b);
EncodedBwt encode_dfa(const Bwt& b);

BwtKind peek_kind(std::span<const std::uint8_t> bytes);

// Reconstructs the transform from either stream kind; state_order becomes
// the identity. Throws Error(kMalformed) on corrupt input.
Bwt decode_bwt(std::span<const std::uint8_t> bytes);

// The automaton whose states are the transform positions: start 0, an edge
// (x, y, c) for every OUT entry of x matched against IN lists of chain
// y's label c by leftmost extraction.
Automaton bwt_to_automaton(const Bwt& b);

// decode_bwt + bwt_to_automaton, checking the stream kind.
Automaton decode_nfa(std::span<const std::uint8_t> bytes);
Automaton decode_dfa(std::span<const std::uint8_t> bytes);

}  // namespace colex
