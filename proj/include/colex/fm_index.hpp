#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "colex/bits.hpp"
#include "colex/bwt.hpp"
#include "colex/chains.hpp"
#include "colex/wavelet_tree.hpp"

namespace colex {

// One rank range per chain; see ChainRange for the empty-range convention.
using IntervalSet = std::vector<ChainRange>;

std::size_t interval_size(const IntervalSet& set);

// Forward-search index over a Bwt.
//
// OUT' (all OUT lists concatenated) is stored in a wavelet tree over
// symbols (chain << ceil(log sigma)) | label. Edges entering chain j are
// numbered by destination rank, then source chain, then source rank.
class FmIndex {
 public:
  FmIndex() = default;
  explicit FmIndex(const Bwt& b);

  std::size_t num_states() const { return num_states_; }
  std::size_t num_edges() const { return num_edges_; }
  std::size_t sigma() const { return sigma_; }
  std::size_t p() const { return chain_first_.size(); }
  const std::string& alphabet() const { return alphabet_; }
  std::size_t chain_size(std::uint32_t chain) const;

  // The interval of the empty word: the start, rank 1 of chain 0.
  IntervalSet seed() const;
  // Symbols outside [0, sigma) give all-empty ranges at rank 1.
  IntervalSet extend(const IntervalSet& set, Symbol c) const;
  IntervalSet locate(std::span<const Symbol> word) const;
  std::size_t count(std::span<const Symbol> word) const;
  bool member(std::span<const Symbol> word) const;
  bool contains_final(const IntervalSet& set) const;

  // 0-based transform position of the state at 1-based `rank` of `chain`.
  std::size_t position(std::uint32_t chain, std::uint32_t rank) const;
  std::vector<std::size_t> positions(const IntervalSet& set) const;

  struct Space {
    std::size_t out_symbols = 0;  // wavelet tree levels
    std::size_t out_lists = 0;    // |E|
    std::size_t in_lists = 0;     // |E|
    std::size_t chain_bounds = 0; // |Q|
    std::size_t final = 0;        // |Q|
    std::size_t degree_map = 0;   // |Q| when some state has no out-edges
    std::size_t acceleration = 0; // rank/select counters, per-chain caches

    std::size_t core() const {
      return out_symbols + out_lists + in_lists + chain_bounds + final;
    }
  };
  Space space() const;

  // Binary file "CIDX1"; load throws Error(kMalformed) on corrupt input.
  std::vector<std::uint8_t> serialize() const;
  static FmIndex deserialize(std::span<const std::uint8_t> bytes);

 private:
  void derive();
  std::size_t out_offset(std::size_t position) const;
  std::uint64_t symbol(std::uint32_t chain, Symbol c) const {
    return (std::uint64_t{chain} << label_bits_) | static_cast<std::uint64_t>(c);
  }
  std::size_t destination_rank(std::uint32_t chain, std::size_t k) const;

  std::size_t num_states_ = 0;
  std::size_t num_edges_ = 0;
  std::size_t sigma_ = 0;
  std::uint32_t label_bits_ = 0;
  std::string alphabet_;

  WaveletTree out_symbols_;
  RankSelectBits out_lists_;    // 1 at the last entry of each nonempty OUT list
  RankSelectBits in_lists_;     // 1 at the last entry of each nonempty IN list
  RankSelectBits chain_bounds_; // 1 at the last position of each chain
  RankSelectBits final_;
  std::optional<RankSelectBits> out_nonempty_;

  std::vector<std::size_t> chain_first_;       // first position of chain j
  std::vector<std::size_t> chain_first_edge_;  // first in-edge into chain j
};

}  // namespace colex
