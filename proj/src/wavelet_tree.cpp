#include "colex/wavelet_tree.hpp"

#include <algorithm>
#include <string>

#include "colex/error.hpp"

namespace colex {

WaveletTree::WaveletTree(std::span<const std::uint64_t> sequence,
                         std::uint32_t levels)
    : size_(sequence.size()) {
  if (levels > 63) {
    throw Error(ErrorKind::kInvalidArgument, "wavelet tree too deep");
  }
  for (std::uint64_t s : sequence) {
    if (s >> levels) {
      throw Error(ErrorKind::kInvalidArgument,
                  "symbol " + std::to_string(s) + " needs more than " +
                      std::to_string(levels) + " bits");
    }
  }
  std::vector<std::uint64_t> current(sequence.begin(), sequence.end());
  level_bits_.reserve(levels);
  for (std::uint32_t l = 0; l < levels; ++l) {
    const std::uint32_t shift = levels - 1 - l;
    BitVector bits(size_);
    for (std::size_t i = 0; i < size_; ++i) bits.set(i, (current[i] >> shift) & 1u);
    level_bits_.emplace_back(std::move(bits));
    // Stable sort by the top l + 1 bits splits every node into its children.
    std::stable_sort(current.begin(), current.end(),
                     [shift](std::uint64_t x, std::uint64_t y) {
                       return (x >> shift) < (y >> shift);
                     });
  }
}

WaveletTree WaveletTree::from_levels(std::vector<BitVector> levels,
                                     std::size_t size) {
  WaveletTree wt;
  wt.size_ = size;
  for (auto& bits : levels) {
    if (bits.size() != size) {
      throw Error(ErrorKind::kMalformed, "wavelet level length mismatch");
    }
    wt.level_bits_.emplace_back(std::move(bits));
  }
  return wt;
}

std::uint64_t WaveletTree::access(std::size_t i) const {
  if (i >= size_) {
    throw Error(ErrorKind::kInvalidArgument, "access position out of range");
  }
  std::size_t b = 0, e = size_;
  std::uint64_t symbol = 0;
  for (const auto& bv : level_bits_) {
    const std::size_t zeros_b = bv.rank0(b);
    const std::size_t zeros = bv.rank0(e) - zeros_b;
    if (!bv[i]) {
      i = b + (bv.rank0(i) - zeros_b);
      e = b + zeros;
      symbol <<= 1;
    } else {
      const std::size_t mid = b + zeros;
      i = mid + (bv.rank1(i) - bv.rank1(b));
      b = mid;
      symbol = (symbol << 1) | 1u;
    }
  }
  return symbol;
}

std::size_t WaveletTree::rank(std::uint64_t symbol, std::size_t i) const {
  if (i > size_) {
    throw Error(ErrorKind::kInvalidArgument, "rank position out of range");
  }
  if (levels() < 64 && (symbol >> levels())) return 0;
  std::size_t b = 0, e = size_;
  for (std::uint32_t l = 0; l < levels(); ++l) {
    const auto& bv = level_bits_[l];
    const std::size_t zeros_b = bv.rank0(b);
    const std::size_t zeros = bv.rank0(e) - zeros_b;
    if (!((symbol >> (levels() - 1 - l)) & 1u)) {
      i = b + (bv.rank0(i) - zeros_b);
      e = b + zeros;
    } else {
      const std::size_t mid = b + zeros;
      i = mid + (bv.rank1(i) - bv.rank1(b));
      b = mid;
    }
  }
  return i - b;
}

std::size_t WaveletTree::range_count(std::size_t begin, std::size_t end,
                                     std::uint64_t lo, std::uint64_t hi) const {
  if (begin > end || end > size_) {
    throw Error(ErrorKind::kInvalidArgument, "range out of bounds");
  }
  if (lo > hi || begin == end) return 0;
  return range_count(0, 0, size_, begin, end, 0, lo, hi);
}

std::size_t WaveletTree::range_count(std::uint32_t level,
                                     std::size_t node_begin,
                                     std::size_t node_end, std::size_t begin,
                                     std::size_t end, std::uint64_t node_lo,
                                     std::uint64_t lo, std::uint64_t hi) const {
  if (begin == end) return 0;
  const std::uint32_t span_bits = levels() - level;
  const std::uint64_t node_hi = node_lo + ((std::uint64_t{1} << span_bits) - 1);
  if (hi < node_lo || lo > node_hi) return 0;
  if (lo <= node_lo && node_hi <= hi) return end - begin;
  const auto& bv = level_bits_[level];
  const std::size_t zeros_b = bv.rank0(node_begin);
  const std::size_t mid = node_begin + (bv.rank0(node_end) - zeros_b);
  const std::size_t ones_b = bv.rank1(node_begin);
  const std::uint64_t half = std::uint64_t{1} << (span_bits - 1);
  return range_count(level + 1, node_begin, mid,
                     node_begin + (bv.rank0(begin) - zeros_b),
                     node_begin + (bv.rank0(end) - zeros_b), node_lo, lo, hi) +
         range_count(level + 1, mid, node_end,
                     mid + (bv.rank1(begin) - ones_b),
                     mid + (bv.rank1(end) - ones_b), node_lo + half, lo, hi);
}

std::size_t WaveletTree::acceleration_bits() const {
  std::size_t total = 0;
  for (const auto& bv : level_bits_) total += bv.acceleration_bits();
  return total;
}

}  // namespace colex
