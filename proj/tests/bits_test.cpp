#include <gtest/gtest.h>

#include <random>

#include "colex/bits.hpp"
#include "colex/error.hpp"
#include "colex/wavelet_tree.hpp"

using namespace colex;

TEST(Bits, CeilLog2) {
  EXPECT_EQ(ceil_log2(0), 0u);
  EXPECT_EQ(ceil_log2(1), 0u);
  EXPECT_EQ(ceil_log2(2), 1u);
  EXPECT_EQ(ceil_log2(3), 2u);
  EXPECT_EQ(ceil_log2(4), 2u);
  EXPECT_EQ(ceil_log2(5), 3u);
  EXPECT_EQ(ceil_log2(1024), 10u);
}

TEST(Bits, AppendAndRead) {
  BitVector b;
  b.append(0b101, 3);
  b.append(0xabcdef, 24);
  b.append(0, 0);
  b.append(0x1234567890abcdefULL, 64);
  EXPECT_EQ(b.size(), 91u);
  EXPECT_EQ(b.read(0, 3), 0b101u);
  EXPECT_EQ(b.read(3, 24), 0xabcdefu);
  EXPECT_EQ(b.read(27, 64), 0x1234567890abcdefULL);

  BitReader r(b);
  EXPECT_EQ(r.read(3), 0b101u);
  EXPECT_EQ(r.read(24), 0xabcdefu);
  EXPECT_EQ(r.read(64), 0x1234567890abcdefULL);
  EXPECT_THROW(r.read(1), Error);
}

TEST(Bits, ByteRoundTrip) {
  std::mt19937_64 rng(1);
  for (std::size_t n : {0u, 1u, 7u, 8u, 9u, 63u, 64u, 65u, 1000u}) {
    BitVector b;
    for (std::size_t i = 0; i < n; ++i) b.push_back(rng() & 1);
    auto bytes = b.to_bytes();
    EXPECT_EQ(bytes.size(), (n + 7) / 8);
    EXPECT_EQ(BitVector::from_bytes(bytes, n), b);
  }
  std::vector<std::uint8_t> dirty = {0xff};
  EXPECT_THROW(BitVector::from_bytes(dirty, 3), Error);
}

TEST(Bits, RankSelectAgainstScan) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = rng() % 3000;
    double density = std::uniform_real_distribution<double>(0, 1)(rng);
    std::bernoulli_distribution coin(density);
    BitVector b;
    std::vector<std::size_t> ones;
    for (std::size_t i = 0; i < n; ++i) {
      bool bit = coin(rng);
      if (bit) ones.push_back(i);
      b.push_back(bit);
    }
    RankSelectBits rs(b);
    ASSERT_EQ(rs.ones(), ones.size());
    std::size_t count = 0;
    for (std::size_t i = 0; i <= n; ++i) {
      ASSERT_EQ(rs.rank1(i), count);
      ASSERT_EQ(rs.rank0(i), i - count);
      if (count >= 1) { ASSERT_LE(rs.select1(count), i); }
      if (i < n && b.get(i)) ++count;
    }
    for (std::size_t k = 1; k <= ones.size(); ++k) {
      ASSERT_EQ(rs.select1(k), ones[k - 1]);
      ASSERT_EQ(rs.rank1(rs.select1(k)), k - 1);
      ASSERT_EQ(rs.rank1(rs.select1(k) + 1), k);
    }
    EXPECT_THROW(rs.select1(0), Error);
    EXPECT_THROW(rs.select1(ones.size() + 1), Error);
  }
}

TEST(WaveletTree, AgreesWithNaiveScans) {
  std::mt19937_64 rng(3);
  int trials = 0;
  while (trials < 10000) {
    std::uint32_t levels = rng() % 7;
    std::size_t n = rng() % 200;
    std::vector<std::uint64_t> seq(n);
    for (auto& x : seq) x = levels == 0 ? 0 : rng() % (std::uint64_t{1} << levels);
    WaveletTree wt(seq, levels);
    ASSERT_EQ(wt.size(), n);
    ASSERT_EQ(wt.payload_bits(), n * levels);
    for (int q = 0; q < 50; ++q, ++trials) {
      std::uint64_t top = std::uint64_t{1} << levels;
      std::size_t i = n == 0 ? 0 : rng() % (n + 1);
      std::size_t j = n == 0 ? 0 : rng() % (n + 1);
      if (i > j) std::swap(i, j);
      std::uint64_t lo = rng() % top, hi = rng() % top;
      if (lo > hi) std::swap(lo, hi);
      std::uint64_t sym = rng() % top;
      if (i < n) { ASSERT_EQ(wt.access(i), seq[i]); }
      std::size_t rank = 0, range = 0;
      for (std::size_t k = 0; k < j; ++k) {
        rank += seq[k] == sym;
        range += k >= i && seq[k] >= lo && seq[k] <= hi;
      }
      ASSERT_EQ(wt.rank(sym, j), rank);
      ASSERT_EQ(wt.range_count(i, j, lo, hi), range);
    }
  }
}

TEST(WaveletTree, RejectsWideSymbols) {
  std::vector<std::uint64_t> seq = {0, 4};
  EXPECT_THROW(WaveletTree(seq, 2), Error);
}

TEST(WaveletTree, RebuildFromLevels) {
  std::vector<std::uint64_t> seq = {3, 1, 2, 0, 3, 3, 1};
  WaveletTree wt(seq, 2);
  std::vector<BitVector> levels;
  for (const auto& l : wt.level_bits()) levels.push_back(l.bits());
  WaveletTree copy = WaveletTree::from_levels(levels, seq.size());
  for (std::size_t i = 0; i < seq.size(); ++i) EXPECT_EQ(copy.access(i), seq[i]);
}
