#include "colex/fm_index.hpp"

#include <algorithm>
#include <string>

#include "byte_io.hpp"
#include "colex/error.hpp"

namespace colex {

std::size_t interval_size(const IntervalSet& set) {
  std::size_t total = 0;
  for (const ChainRange& r : set) total += r.size();
  return total;
}

FmIndex::FmIndex(const Bwt& b)
    : num_states_(b.num_states()),
      num_edges_(b.num_edges()),
      sigma_(b.sigma),
      label_bits_(ceil_log2(b.sigma)),
      alphabet_(b.alphabet) {
  const std::size_t n = num_states_;
  if (n == 0 || b.p() == 0 || b.in.size() != n || b.final.size() != n) {
    throw Error(ErrorKind::kInvalidArgument, "inconsistent transform");
  }
  std::vector<std::uint64_t> symbols;
  symbols.reserve(num_edges_);
  BitVector out_lists, in_lists, chain_bounds(n), final(n), nonempty(n);
  bool some_empty = false;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& list = b.out[i];
    some_empty |= list.empty();
    nonempty.set(i, !list.empty());
    for (std::size_t k = 0; k < list.size(); ++k) {
      symbols.push_back(symbol(list[k].chain, list[k].label));
      out_lists.push_back(k + 1 == list.size());
    }
    for (std::size_t k = 0; k < b.in[i].size(); ++k) {
      in_lists.push_back(k + 1 == b.in[i].size());
    }
    final.set(i, b.final[i]);
  }
  if (in_lists.size() != num_edges_) {
    throw Error(ErrorKind::kInvalidArgument, "IN and OUT edge counts differ");
  }
  std::size_t end = 0;
  for (std::uint32_t size : b.chain_sizes) {
    end += size;
    if (size == 0 || end > n) {
      throw Error(ErrorKind::kInvalidArgument, "bad chain sizes");
    }
    chain_bounds.set(end - 1);
  }
  if (end != n) throw Error(ErrorKind::kInvalidArgument, "bad chain sizes");

  out_symbols_ = WaveletTree(symbols, label_bits_ + ceil_log2(b.p()));
  out_lists_ = RankSelectBits(std::move(out_lists));
  in_lists_ = RankSelectBits(std::move(in_lists));
  chain_bounds_ = RankSelectBits(std::move(chain_bounds));
  final_ = RankSelectBits(std::move(final));
  if (some_empty) out_nonempty_.emplace(std::move(nonempty));
  derive();
}

void FmIndex::derive() {
  const std::size_t p = chain_bounds_.ones();
  if (p == 0 || !chain_bounds_[num_states_ - 1]) {
    throw Error(ErrorKind::kMalformed, "chain boundaries do not end the last chain");
  }
  // Every position but the start has a nonempty IN list.
  if (in_lists_.ones() != num_states_ - 1) {
    throw Error(ErrorKind::kMalformed, "IN lists do not match the state count");
  }
  chain_first_.assign(p, 0);
  chain_first_edge_.assign(p + 1, num_edges_);
  for (std::size_t j = 0; j < p; ++j) {
    chain_first_[j] = j == 0 ? 0 : chain_bounds_.select1(j) + 1;
    const std::size_t lists_before = chain_first_[j] == 0 ? 0 : chain_first_[j] - 1;
    chain_first_edge_[j] = lists_before == 0 ? 0 : in_lists_.select1(lists_before) + 1;
  }
}

std::size_t FmIndex::chain_size(std::uint32_t chain) const {
  const std::size_t next = chain + 1 < p() ? chain_first_[chain + 1] : num_states_;
  return next - chain_first_[chain];
}

std::size_t FmIndex::out_offset(std::size_t position) const {
  const std::size_t lists = out_nonempty_ ? out_nonempty_->rank1(position) : position;
  return lists == 0 ? 0 : out_lists_.select1(lists) + 1;
}

std::size_t FmIndex::destination_rank(std::uint32_t chain, std::size_t k) const {
  // k-th (1-based) edge entering the chain; position 0 has no in-edges, so
  // an edge's IN list sits at 1 + (number of lists closed before it).
  const std::size_t edge = chain_first_edge_[chain] + k - 1;
  const std::size_t pos = 1 + in_lists_.rank1(edge);
  return pos - chain_first_[chain] + 1;
}

IntervalSet FmIndex::seed() const {
  IntervalSet set(p(), ChainRange{1, 1});
  set[0] = {1, 2};
  return set;
}

IntervalSet FmIndex::extend(const IntervalSet& set, Symbol c) const {
  if (set.size() != p()) {
    throw Error(ErrorKind::kInvalidArgument, "interval set has the wrong chain count");
  }
  for (std::uint32_t i = 0; i < p(); ++i) {
    if (set[i].begin < 1 || set[i].begin > set[i].end ||
        set[i].end > chain_size(i) + 1) {
      throw Error(ErrorKind::kInvalidArgument,
                  "range out of bounds on chain " + std::to_string(i + 1));
    }
  }
  IntervalSet next(p(), ChainRange{1, 1});
  if (c < 0 || static_cast<std::size_t>(c) >= sigma_) return next;

  // OUT' offsets of each source chain's list start, range start, range end.
  std::vector<std::size_t> base(p()), lo(p()), hi(p());
  for (std::uint32_t i = 0; i < p(); ++i) {
    base[i] = out_offset(chain_first_[i]);
    lo[i] = out_offset(chain_first_[i] + set[i].begin - 1);
    hi[i] = out_offset(chain_first_[i] + set[i].end - 1);
  }
  for (std::uint32_t j = 0; j < p(); ++j) {
    const std::uint64_t sym = symbol(j, c);
    std::size_t before = c == 0 ? 0
                                : out_symbols_.range_count(0, num_edges_, symbol(j, 0),
                                                           symbol(j, c - 1));
    std::size_t through = before;
    for (std::uint32_t i = 0; i < p(); ++i) {
      const std::size_t at_base = out_symbols_.rank(sym, base[i]);
      before += out_symbols_.rank(sym, lo[i]) - at_base;
      through += out_symbols_.rank(sym, hi[i]) - at_base;
    }
    const std::size_t traffic = chain_first_edge_[j + 1] - chain_first_edge_[j];
    if (through > before) {
      const auto l = static_cast<std::uint32_t>(destination_rank(j, before + 1));
      const auto r = static_cast<std::uint32_t>(destination_rank(j, through));
      next[j] = {l, r + 1};
    } else {
      // The insertion point: where the next edge into the chain would land.
      const auto l = static_cast<std::uint32_t>(
          before < traffic ? destination_rank(j, before + 1) : chain_size(j) + 1);
      next[j] = {l, l};
    }
  }
  return next;
}

IntervalSet FmIndex::locate(std::span<const Symbol> word) const {
  IntervalSet set = seed();
  for (Symbol c : word) set = extend(set, c);
  return set;
}

std::size_t FmIndex::count(std::span<const Symbol> word) const {
  return interval_size(locate(word));
}

bool FmIndex::member(std::span<const Symbol> word) const {
  return contains_final(locate(word));
}

bool FmIndex::contains_final(const IntervalSet& set) const {
  for (std::uint32_t j = 0; j < set.size() && j < p(); ++j) {
    if (set[j].empty()) continue;
    const std::size_t b = chain_first_[j] + set[j].begin - 1;
    const std::size_t e = chain_first_[j] + set[j].end - 1;
    if (final_.rank1(e) > final_.rank1(b)) return true;
  }
  return false;
}

std::size_t FmIndex::position(std::uint32_t chain, std::uint32_t rank) const {
  if (chain >= p() || rank < 1 || rank > chain_size(chain)) {
    throw Error(ErrorKind::kInvalidArgument, "chain rank out of range");
  }
  return chain_first_[chain] + rank - 1;
}

std::vector<std::size_t> FmIndex::positions(const IntervalSet& set) const {
  std::vector<std::size_t> result;
  for (std::uint32_t j = 0; j < set.size(); ++j) {
    for (std::uint32_t r = set[j].begin; r < set[j].end; ++r) {
      result.push_back(position(j, r));
    }
  }
  return result;
}

FmIndex::Space FmIndex::space() const {
  Space s;
  s.out_symbols = out_symbols_.payload_bits();
  s.out_lists = out_lists_.size();
  s.in_lists = in_lists_.size();
  s.chain_bounds = chain_bounds_.size();
  s.final = final_.size();
  s.degree_map = out_nonempty_ ? out_nonempty_->size() : 0;
  s.acceleration = out_symbols_.acceleration_bits() +
                   out_lists_.acceleration_bits() + in_lists_.acceleration_bits() +
                   chain_bounds_.acceleration_bits() + final_.acceleration_bits() +
                   (out_nonempty_ ? out_nonempty_->acceleration_bits() : 0) +
                   64 * (chain_first_.size() + chain_first_edge_.size());
  return s;
}

namespace {
constexpr std::string_view kIndexMagic = "CIDX1";
}

std::vector<std::uint8_t> FmIndex::serialize() const {
  detail::ByteWriter w;
  w.bytes(kIndexMagic);
  w.u32(static_cast<std::uint32_t>(num_states_));
  w.u32(static_cast<std::uint32_t>(num_edges_));
  w.u32(static_cast<std::uint32_t>(sigma_));
  w.u8(out_nonempty_ ? 1 : 0);
  w.bytes(alphabet_);
  w.bits(chain_bounds_.bits());
  w.bits(out_lists_.bits());
  w.bits(in_lists_.bits());
  w.bits(final_.bits());
  if (out_nonempty_) w.bits(out_nonempty_->bits());
  w.u32(out_symbols_.levels());
  for (const auto& level : out_symbols_.level_bits()) w.bits(level.bits());
  return std::move(w.data());
}

FmIndex FmIndex::deserialize(std::span<const std::uint8_t> bytes) {
  detail::ByteReader r(bytes);
  r.expect_magic(kIndexMagic);
  FmIndex ix;
  ix.num_states_ = r.u32();
  ix.num_edges_ = r.u32();
  ix.sigma_ = r.u32();
  const std::uint8_t flags = r.u8();
  if (flags > 1) throw Error(ErrorKind::kMalformed, "unknown index flags");
  auto alphabet = r.bytes(ix.sigma_);
  ix.alphabet_.assign(alphabet.begin(), alphabet.end());
  ix.label_bits_ = ceil_log2(ix.sigma_);

  auto expect = [](const BitVector& v, std::size_t size, const char* what) {
    if (v.size() != size) {
      throw Error(ErrorKind::kMalformed, std::string(what) + " has the wrong length");
    }
  };
  const std::size_t n = ix.num_states_;
  const std::size_t e = ix.num_edges_;
  if (n == 0) throw Error(ErrorKind::kMalformed, "index without states");
  BitVector chain_bounds = r.bits();
  expect(chain_bounds, n, "chain boundaries");
  BitVector out_lists = r.bits();
  expect(out_lists, e, "OUT list boundaries");
  BitVector in_lists = r.bits();
  expect(in_lists, e, "IN list boundaries");
  BitVector final = r.bits();
  expect(final, n, "FINAL");
  ix.chain_bounds_ = RankSelectBits(std::move(chain_bounds));
  ix.out_lists_ = RankSelectBits(std::move(out_lists));
  ix.in_lists_ = RankSelectBits(std::move(in_lists));
  ix.final_ = RankSelectBits(std::move(final));
  std::size_t nonempty_lists = n;
  if (flags & 1) {
    BitVector nonempty = r.bits();
    expect(nonempty, n, "OUT degree map");
    ix.out_nonempty_.emplace(std::move(nonempty));
    nonempty_lists = ix.out_nonempty_->ones();
  }
  if (ix.out_lists_.ones() != nonempty_lists || (e > 0 && !ix.out_lists_[e - 1]) ||
      (e > 0 && !ix.in_lists_[e - 1])) {
    throw Error(ErrorKind::kMalformed, "list boundaries are inconsistent");
  }
  const std::uint32_t levels = r.u32();
  const std::size_t p = ix.chain_bounds_.ones();
  if (levels != ix.label_bits_ + ceil_log2(p)) {
    throw Error(ErrorKind::kMalformed, "wavelet tree depth mismatch");
  }
  std::vector<BitVector> level_bits;
  for (std::uint32_t l = 0; l < levels; ++l) {
    level_bits.push_back(r.bits());
    expect(level_bits.back(), e, "wavelet level");
  }
  if (r.remaining() != 0) throw Error(ErrorKind::kMalformed, "trailing bytes");
  ix.out_symbols_ = WaveletTree::from_levels(std::move(level_bits), e);
  ix.derive();
  std::vector<std::size_t> entering(p, 0);
  for (std::size_t k = 0; k < e; ++k) {
    const std::uint64_t s = ix.out_symbols_.access(k);
    if ((s >> ix.label_bits_) >= p || (s & ((std::uint64_t{1} << ix.label_bits_) - 1)) >= ix.sigma_) {
      throw Error(ErrorKind::kMalformed, "OUT symbol out of range");
    }
    ++entering[s >> ix.label_bits_];
  }
  for (std::size_t j = 0; j < p; ++j) {
    if (entering[j] != ix.chain_first_edge_[j + 1] - ix.chain_first_edge_[j]) {
      throw Error(ErrorKind::kMalformed, "OUT and IN disagree on chain " + std::to_string(j + 1));
    }
  }
  return ix;
}

}  // namespace colex
