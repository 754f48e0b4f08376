#include "colex/bits.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "colex/error.hpp"

namespace colex {

BitVector::BitVector(std::size_t size, bool value)
    : size_(size), words_((size + 63) / 64, value ? ~std::uint64_t{0} : 0) {
  if (value && (size & 63)) words_.back() &= (std::uint64_t{1} << (size & 63)) - 1;
}

void BitVector::set(std::size_t i, bool value) {
  const std::uint64_t mask = std::uint64_t{1} << (i & 63);
  words_[i >> 6] = value ? (words_[i >> 6] | mask) : (words_[i >> 6] & ~mask);
}

void BitVector::push_back(bool bit) {
  if ((size_ & 63) == 0) words_.push_back(0);
  if (bit) words_.back() |= std::uint64_t{1} << (size_ & 63);
  ++size_;
}

void BitVector::append(std::uint64_t value, std::uint32_t width) {
  for (std::uint32_t b = 0; b < width; ++b) push_back((value >> b) & 1u);
}

std::uint64_t BitVector::read(std::size_t pos, std::uint32_t width) const {
  std::uint64_t value = 0;
  for (std::uint32_t b = 0; b < width; ++b) {
    value |= std::uint64_t{get(pos + b)} << b;
  }
  return value;
}

BitVector BitVector::from_words(std::vector<std::uint64_t> words,
                                std::size_t size) {
  if (words.size() != (size + 63) / 64) {
    throw Error(ErrorKind::kMalformed, "bit vector word count mismatch");
  }
  if ((size & 63) && (words.back() >> (size & 63)) != 0) {
    throw Error(ErrorKind::kMalformed, "bit vector has bits past its end");
  }
  BitVector v;
  v.size_ = size;
  v.words_ = std::move(words);
  return v;
}

std::vector<std::uint8_t> BitVector::to_bytes() const {
  std::vector<std::uint8_t> bytes((size_ + 7) / 8, 0);
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    bytes[i] = static_cast<std::uint8_t>(words_[i / 8] >> (8 * (i % 8)));
  }
  return bytes;
}

BitVector BitVector::from_bytes(std::span<const std::uint8_t> bytes,
                                std::size_t size) {
  if (bytes.size() != (size + 7) / 8) {
    throw Error(ErrorKind::kMalformed, "bit payload length mismatch");
  }
  std::vector<std::uint64_t> words((size + 63) / 64, 0);
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    words[i / 8] |= std::uint64_t{bytes[i]} << (8 * (i % 8));
  }
  if ((size & 7) && (bytes.back() >> (size & 7)) != 0) {
    throw Error(ErrorKind::kMalformed, "nonzero padding bits");
  }
  return from_words(std::move(words), size);
}

std::uint64_t BitReader::read(std::uint32_t width) {
  if (width > remaining()) {
    throw Error(ErrorKind::kMalformed, "bit stream truncated at bit " +
                                           std::to_string(pos_));
  }
  std::uint64_t value = bits_.read(pos_, width);
  pos_ += width;
  return value;
}

namespace {
constexpr std::size_t kWordsPerSuper = 8;
}

RankSelectBits::RankSelectBits(BitVector bits) : bits_(std::move(bits)) {
  auto words = bits_.words();
  superblocks_.reserve(words.size() / kWordsPerSuper + 1);
  blocks_.reserve(words.size());
  std::uint64_t total = 0;
  std::uint16_t within = 0;
  for (std::size_t w = 0; w < words.size(); ++w) {
    if (w % kWordsPerSuper == 0) {
      superblocks_.push_back(total);
      within = 0;
    }
    blocks_.push_back(within);
    const auto c = static_cast<std::uint16_t>(std::popcount(words[w]));
    within = static_cast<std::uint16_t>(within + c);
    total += c;
  }
  ones_ = total;
}

std::size_t RankSelectBits::rank1(std::size_t i) const {
  if (i > size()) {
    throw Error(ErrorKind::kInvalidArgument, "rank position out of range");
  }
  const std::size_t w = i >> 6;
  if (w == blocks_.size()) return ones_;
  std::size_t r = superblocks_[w / kWordsPerSuper] + blocks_[w];
  if (i & 63) {
    r += std::popcount(bits_.words()[w] &
                       ((std::uint64_t{1} << (i & 63)) - 1));
  }
  return r;
}

std::size_t RankSelectBits::select1(std::size_t k) const {
  if (k == 0 || k > ones_) {
    throw Error(ErrorKind::kInvalidArgument,
                "select1(" + std::to_string(k) + ") with " +
                    std::to_string(ones_) + " ones");
  }
  // Last superblock whose cumulative count is below k.
  auto it = std::lower_bound(superblocks_.begin(), superblocks_.end(), k);
  std::size_t sb = static_cast<std::size_t>(it - superblocks_.begin()) - 1;
  std::size_t w = sb * kWordsPerSuper;
  std::size_t remaining = k - superblocks_[sb];
  auto words = bits_.words();
  while (true) {
    std::size_t c = std::popcount(words[w]);
    if (remaining <= c) break;
    remaining -= c;
    ++w;
  }
  std::uint64_t word = words[w];
  for (std::size_t j = 1; j < remaining; ++j) word &= word - 1;
  return w * 64 + std::countr_zero(word);
}

}  // namespace colex
