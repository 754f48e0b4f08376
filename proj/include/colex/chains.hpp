#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "colex/automaton.hpp"
#include "colex/order.hpp"

namespace colex {

// Partition of the states into chains of a partial order. Chain ids and
// ranks are 0-based here; text output numbers both from 1.
struct ChainDecomposition {
  std::vector<std::vector<State>> chains;  // each sorted ascending in the order
  std::vector<std::uint32_t> chain_of;     // state -> chain id
  std::vector<std::uint32_t> rank_of;      // state -> position in its chain

  std::size_t p() const { return chains.size(); }
};

// Minimum chain decomposition via maximum bipartite matching
// (Hopcroft-Karp) on { (u, v) : u < v }. When `start` is given, its chain
// becomes chain 0; remaining chains are ordered by the position of their
// minimum in `reference`, or in the smallest-id-first linear extension of
// `o` when no reference is given.
// Throws Error(kInvalidArgument) if `o` is not a strict partial order.
ChainDecomposition min_chain_decomposition(
    const PartialOrder& o, std::optional<State> start = std::nullopt,
    const TotalOrder* reference = nullptr);

// Size of the largest antichain.
std::size_t width(const PartialOrder& o);

// Validates a user-supplied partition: every state appears exactly once and
// each chain is totally ordered by `o`. Chains are sorted internally and
// the chain holding `start` is moved to the front.
ChainDecomposition make_decomposition(const PartialOrder& o,
                                      std::vector<std::vector<State>> chains,
                                      std::optional<State> start = std::nullopt);

// Reads `chain <i>: <states>` lines (an optional `p <value>` line first).
ChainDecomposition parse_chains(std::string_view text, const PartialOrder& o,
                                std::optional<State> start = std::nullopt);
std::string chains_to_text(const ChainDecomposition& d);

// Half-open range of 1-based ranks [begin, end) within one chain. An empty
// range still carries a position: begin == end.
struct ChainRange {
  std::uint32_t begin = 1;
  std::uint32_t end = 1;

  bool empty() const { return begin == end; }
  std::size_t size() const { return end - begin; }
  friend bool operator==(const ChainRange&, const ChainRange&) = default;
};

bool is_interval(const PartialOrder& o, std::span<const State> set);

// Splits a convex state set into one contiguous rank range per chain. Empty
// ranges sit just above the chain states lying below some member of `set`.
// Throws Error(kInvalidArgument) if `set` is not convex.
std::vector<ChainRange> interval_to_chain_ranges(const PartialOrder& o,
                                                 const ChainDecomposition& d,
                                                 std::span<const State> set);

}  // namespace colex
