#pragma once

// Little-endian byte stream helpers shared by the binary formats.

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "colex/bits.hpp"
#include "colex/error.hpp"

namespace colex::detail {

class ByteWriter {
 public:
  void bytes(std::string_view s) { out_.insert(out_.end(), s.begin(), s.end()); }
  void bytes(std::span<const std::uint8_t> s) {
    out_.insert(out_.end(), s.begin(), s.end());
  }
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u32(std::uint32_t v) { put(v, 4); }
  void u64(std::uint64_t v) { put(v, 8); }
  void bits(const BitVector& v) {
    u64(v.size());
    for (std::uint64_t w : v.words()) u64(w);
  }

  std::vector<std::uint8_t>& data() { return out_; }

 private:
  void put(std::uint64_t v, int width) {
    for (int i = 0; i < width; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  std::vector<std::uint8_t> out_;
};

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> in) : in_(in) {}

  std::span<const std::uint8_t> bytes(std::size_t count) {
    need(count);
    auto s = in_.subspan(pos_, count);
    pos_ += count;
    return s;
  }
  std::uint8_t u8() { return static_cast<std::uint8_t>(get(1)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
  std::uint64_t u64() { return get(8); }
  BitVector bits() {
    const std::uint64_t size = u64();
    const std::uint64_t words = size / 64 + (size % 64 != 0);
    if (words > remaining() / 8) {
      throw Error(ErrorKind::kMalformed, "bit vector longer than the input");
    }
    std::vector<std::uint64_t> w(words);
    for (auto& x : w) x = u64();
    return BitVector::from_words(std::move(w), size);
  }

  void expect_magic(std::string_view magic) {
    auto s = bytes(magic.size());
    if (!std::equal(s.begin(), s.end(), magic.begin())) {
      throw Error(ErrorKind::kMalformed,
                  "bad magic, expected '" + std::string(magic) + "'");
    }
  }

  std::size_t remaining() const { return in_.size() - pos_; }
  std::size_t position() const { return pos_; }

 private:
  void need(std::size_t count) const {
    if (count > remaining()) {
      throw Error(ErrorKind::kMalformed, "input truncated at byte " +
                                             std::to_string(pos_));
    }
  }
  std::uint64_t get(int width) {
    need(static_cast<std::size_t>(width));
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) v |= std::uint64_t{in_[pos_ + i]} << (8 * i);
    pos_ += static_cast<std::size_t>(width);
    return v;
  }

  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

}  // namespace colex::detail
