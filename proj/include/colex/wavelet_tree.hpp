#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "colex/bits.hpp"

namespace colex {

// Levelwise wavelet tree over integers of a fixed bit width. Level l holds
// bit (levels - 1 - l) of every symbol, with each node's range stably
// partitioned into zeros then ones on the next level.
class WaveletTree {
 public:
  WaveletTree() = default;
  // Throws Error(kInvalidArgument) if a symbol needs more than `levels` bits.
  WaveletTree(std::span<const std::uint64_t> sequence, std::uint32_t levels);

  std::size_t size() const { return size_; }
  std::uint32_t levels() const { return static_cast<std::uint32_t>(level_bits_.size()); }

  std::uint64_t access(std::size_t i) const;
  // Occurrences of `symbol` in [0, i).
  std::size_t rank(std::uint64_t symbol, std::size_t i) const;
  // Positions in [begin, end) holding a value in [lo, hi].
  std::size_t range_count(std::size_t begin, std::size_t end, std::uint64_t lo,
                          std::uint64_t hi) const;

  // Bits of the symbol levels themselves, size() * levels().
  std::size_t payload_bits() const { return size_ * levels(); }
  std::size_t acceleration_bits() const;
  const std::vector<RankSelectBits>& level_bits() const { return level_bits_; }

  static WaveletTree from_levels(std::vector<BitVector> levels,
                                 std::size_t size);

 private:
  std::size_t range_count(std::uint32_t level, std::size_t node_begin,
                          std::size_t node_end, std::size_t begin,
                          std::size_t end, std::uint64_t node_lo,
                          std::uint64_t lo, std::uint64_t hi) const;

  std::size_t size_ = 0;
  std::vector<RankSelectBits> level_bits_;
};

}  // namespace colex
