#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace colex {

inline constexpr std::uint32_t ceil_log2(std::uint64_t x) {
  std::uint32_t bits = 0;
  while ((std::uint64_t{1} << bits) < x) ++bits;
  return bits;
}

// Growable bit sequence; bit i lives in word i / 64 at bit i % 64.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t size, bool value = false);

  std::size_t size() const { return size_; }
  bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i, bool value = true);
  void push_back(bool bit);
  // Appends the low `width` bits of `value`, least significant first.
  void append(std::uint64_t value, std::uint32_t width);
  std::uint64_t read(std::size_t pos, std::uint32_t width) const;

  std::span<const std::uint64_t> words() const { return words_; }
  static BitVector from_words(std::vector<std::uint64_t> words,
                              std::size_t size);

  // Packs bits LSB-first into bytes, padding the last byte with zeros.
  std::vector<std::uint8_t> to_bytes() const;
  static BitVector from_bytes(std::span<const std::uint8_t> bytes,
                              std::size_t size);

  friend bool operator==(const BitVector&, const BitVector&) = default;

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

// Sequential reader over a BitVector.
class BitReader {
 public:
  explicit BitReader(const BitVector& bits) : bits_(bits) {}

  std::size_t position() const { return pos_; }
  std::size_t remaining() const { return bits_.size() - pos_; }
  // Throws Error(kMalformed) when fewer than `width` bits remain.
  std::uint64_t read(std::uint32_t width);
  bool read_bit() { return read(1) != 0; }

 private:
  const BitVector& bits_;
  std::size_t pos_ = 0;
};

// Immutable bit sequence with rank and select. Counters: one 64-bit
// cumulative count per 512-bit superblock and one 16-bit offset per word.
class RankSelectBits {
 public:
  RankSelectBits() = default;
  explicit RankSelectBits(BitVector bits);

  std::size_t size() const { return bits_.size(); }
  bool operator[](std::size_t i) const { return bits_.get(i); }
  const BitVector& bits() const { return bits_; }

  std::size_t ones() const { return ones_; }
  // Ones in [0, i).
  std::size_t rank1(std::size_t i) const;
  std::size_t rank0(std::size_t i) const { return i - rank1(i); }
  // Position of the k-th one, k >= 1. Throws Error(kInvalidArgument) when
  // k is 0 or exceeds ones().
  std::size_t select1(std::size_t k) const;

  std::size_t acceleration_bits() const {
    return superblocks_.size() * 64 + blocks_.size() * 16;
  }

 private:
  BitVector bits_;
  std::size_t ones_ = 0;
  std::vector<std::uint64_t> superblocks_;
  std::vector<std::uint16_t> blocks_;
};

}  // namespace colex
