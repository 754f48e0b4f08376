#include "colex/bwt.hpp"

#include <algorithm>
#include <optional>
#include <queue>
#include <sstream>
#include <unordered_map>

#include "byte_io.hpp"
#include "colex/bits.hpp"
#include "colex/error.hpp"
#include "colex/fm_index.hpp"

namespace colex {

std::size_t Bwt::num_edges() const {
  std::size_t total = 0;
  for (const auto& list : out) total += list.size();
  return total;
}

bool Bwt::is_deterministic() const {
  for (const auto& list : out) {
    std::vector<Symbol> labels;
    for (const OutPair& pr : list) labels.push_back(pr.label);
    std::sort(labels.begin(), labels.end());
    if (std::adjacent_find(labels.begin(), labels.end()) != labels.end()) {
      return false;
    }
  }
  return true;
}

std::vector<std::uint32_t> Bwt::position_chains() const {
  std::vector<std::uint32_t> chains;
  chains.reserve(num_states());
  for (std::uint32_t j = 0; j < chain_sizes.size(); ++j) {
    chains.insert(chains.end(), chain_sizes[j], j);
  }
  return chains;
}

namespace {

[[noreturn]] void precondition(const std::string& msg) {
  throw Error(ErrorKind::kPrecondition, "build_bwt: " + msg);
}

void check_decomposition(const PartialOrder& o, const ChainDecomposition& d,
                         State start) {
  const std::size_t n = o.size();
  if (d.chain_of.size() != n || d.rank_of.size() != n) {
    precondition("chain decomposition covers a different number of states");
  }
  std::size_t covered = 0;
  for (std::uint32_t c = 0; c < d.p(); ++c) {
    const auto& chain = d.chains[c];
    if (chain.empty()) precondition("empty chain");
    for (std::uint32_t r = 0; r < chain.size(); ++r) {
      State v = chain[r];
      if (v >= n || d.chain_of[v] != c || d.rank_of[v] != r) {
        precondition("chain tables are inconsistent at state " +
                     std::to_string(v));
      }
      if (r > 0 && !o.less(chain[r - 1], v)) {
        precondition("chain " + std::to_string(c + 1) + " is not increasing");
      }
    }
    covered += chain.size();
  }
  if (covered != n) precondition("chains do not partition the states");
  if (d.chain_of[start] != 0 || d.rank_of[start] != 0) {
    precondition("the start state must be the first state of chain 1");
  }
}

}  // namespace

Bwt build_bwt(const Automaton& a, const PartialOrder& o,
              const ChainDecomposition& d, bool check_order) {
  const std::size_t n = a.num_states();
  if (o.size() != n) precondition("order size differs from the automaton");
  for (const Violation& v : validate(a).violations) {
    if (v.assumption != Assumption::kCoReachable) precondition(v.message);
  }
  check_decomposition(o, d, a.start());
  if (check_order) {
    ColexReport report = verify_colex(a, o, 1);
    if (!report.ok()) {
      precondition("not a co-lex order: " + report.violations[0].describe());
    }
  }

  Bwt b;
  b.sigma = a.sigma();
  b.alphabet = a.alphabet();
  for (const auto& chain : d.chains) {
    b.chain_sizes.push_back(static_cast<std::uint32_t>(chain.size()));
    b.state_order.insert(b.state_order.end(), chain.begin(), chain.end());
  }
  b.out.resize(n);
  b.in.resize(n);
  b.final.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const State v = b.state_order[i];
    std::vector<Edge> out(a.out_edges(v).begin(), a.out_edges(v).end());
    std::sort(out.begin(), out.end(), [&](const Edge& x, const Edge& y) {
      return std::tuple(d.chain_of[x.target], x.label, d.rank_of[x.target]) <
             std::tuple(d.chain_of[y.target], y.label, d.rank_of[y.target]);
    });
    for (const Edge& e : out) b.out[i].push_back({d.chain_of[e.target], e.label});
    for (const Edge& e : a.in_edges(v)) b.in[i].push_back(d.chain_of[e.source]);
    std::sort(b.in[i].begin(), b.in[i].end());
    b.final[i] = a.is_final(v);
  }
  return b;
}

std::string bwt_to_text(const Bwt& b) {
  std::ostringstream out;
  auto label = [&](Symbol c) {
    return c >= 0 && static_cast<std::size_t>(c) < b.alphabet.size()
               ? std::string(1, b.alphabet[c])
               : std::to_string(c);
  };
  out << "order";
  for (State v : b.state_order) out << ' ' << v;
  out << "\nchains";
  for (std::uint32_t j : b.position_chains()) out << ' ' << j + 1;
  out << "\nOUT";
  for (const auto& list : b.out) {
    out << " [";
    for (std::size_t k = 0; k < list.size(); ++k) {
      out << (k ? "," : "") << '(' << list[k].chain + 1 << ','
          << label(list[k].label) << ')';
    }
    out << ']';
  }
  out << "\nIN";
  for (const auto& list : b.in) {
    out << " [";
    for (std::size_t k = 0; k < list.size(); ++k) {
      out << (k ? "," : "") << list[k] + 1;
    }
    out << ']';
  }
  out << "\nFINAL ";
  for (bool f : b.final) out << (f ? '1' : '0');
  out << '\n';
  return out.str();
}

BitBudget bit_budget(std::size_t num_states, std::size_t num_edges,
                     std::size_t sigma, std::size_t p) {
  const std::uint64_t ls = ceil_log2(sigma);
  const std::uint64_t lp = ceil_log2(p);
  const std::uint64_t e = num_edges;
  return {e * (ls + 2 * lp + 2) + num_states, e * (ls + lp + 2) + num_states};
}

BitBudget bit_budget(const Bwt& b) {
  return bit_budget(b.num_states(), b.num_edges(), b.sigma, b.p());
}

namespace {

constexpr std::string_view kMagic = "CBWT1";
constexpr std::uint8_t kFlagDegreeMap = 1;

EncodedBwt encode(const Bwt& b, BwtKind kind) {
  const std::size_t n = b.num_states();
  const std::size_t edges = b.num_edges();
  if (n == 0 || b.p() == 0 || b.in.size() != n || b.final.size() != n ||
      b.alphabet.size() != b.sigma) {
    throw Error(ErrorKind::kInvalidArgument, "inconsistent transform");
  }
  if (!b.in[0].empty()) {
    throw Error(ErrorKind::kPrecondition, "position 0 must have no in-edges");
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (b.in[i].empty()) {
      throw Error(ErrorKind::kPrecondition,
                  "position " + std::to_string(i) + " has no in-edges");
    }
  }
  if (kind == BwtKind::kDfa && !b.is_deterministic()) {
    throw Error(ErrorKind::kPrecondition,
                "DFA encoding of a nondeterministic transform");
  }
  const std::uint32_t ls = ceil_log2(b.sigma);
  const std::uint32_t lp = ceil_log2(b.p());

  detail::ByteWriter w;
  w.bytes(kMagic);
  w.u8(static_cast<std::uint8_t>(kind));
  w.u32(static_cast<std::uint32_t>(n));
  w.u32(static_cast<std::uint32_t>(edges));
  w.u32(static_cast<std::uint32_t>(b.sigma));
  w.u32(static_cast<std::uint32_t>(b.p()));
  const bool degree_map = std::any_of(b.out.begin(), b.out.end(),
                                      [](const auto& l) { return l.empty(); });
  w.u8(degree_map ? kFlagDegreeMap : 0);
  w.bytes(b.alphabet);
  if (degree_map) {
    BitVector nonempty(n);
    for (std::size_t i = 0; i < n; ++i) nonempty.set(i, !b.out[i].empty());
    w.bytes(nonempty.to_bytes());
  }

  BitVector payload;
  for (const auto& list : b.out) {
    for (std::size_t k = 0; k < list.size(); ++k) payload.push_back(k + 1 == list.size());
  }
  for (const auto& list : b.in) {
    for (std::size_t k = 0; k < list.size(); ++k) payload.push_back(k + 1 == list.size());
  }
  for (const auto& list : b.out) {
    for (const OutPair& pr : list) {
      payload.append(pr.chain, lp);
      payload.append(static_cast<std::uint64_t>(pr.label), ls);
    }
  }
  if (kind == BwtKind::kNfa) {
    for (const auto& list : b.in) {
      for (std::uint32_t id : list) payload.append(id, lp);
    }
  }
  for (bool f : b.final) payload.push_back(f);

  w.u64(payload.size());
  EncodedBwt result;
  result.header_bytes = w.data().size();
  result.payload_bits = payload.size();
  w.bytes(payload.to_bytes());
  result.bytes = std::move(w.data());
  return result;
}

// Splits `terminators` into lists assigned to the positions flagged in
// `nonempty`; returns the size of each position's list.
std::vector<std::size_t> list_sizes(const BitVector& terminators,
                                    const std::vector<bool>& nonempty,
                                    const char* what) {
  std::vector<std::size_t> sizes(nonempty.size(), 0);
  std::size_t pos = 0;
  auto advance = [&] {
    while (pos < nonempty.size() && !nonempty[pos]) ++pos;
  };
  advance();
  for (std::size_t k = 0; k < terminators.size(); ++k) {
    if (pos == nonempty.size()) {
      throw Error(ErrorKind::kMalformed,
                  std::string(what) + " lists exceed the state count");
    }
    ++sizes[pos];
    if (terminators.get(k)) {
      ++pos;
      advance();
    }
  }
  if (pos != nonempty.size()) {
    throw Error(ErrorKind::kMalformed,
                std::string(what) + " list boundaries do not match the states");
  }
  return sizes;
}

void recover_chain_sizes(Bwt& b) {
  const std::size_t n = b.num_states();
  std::vector<std::size_t> traffic(b.chain_sizes.size(), 0);
  for (const auto& list : b.out) {
    for (const OutPair& pr : list) ++traffic[pr.chain];
  }
  std::size_t pos = 0;
  for (std::size_t j = 0; j < traffic.size(); ++j) {
    if (pos == n) throw Error(ErrorKind::kMalformed, "more chains than states");
    const std::size_t first = pos;
    std::size_t acc = 0;
    do {
      acc += b.in[pos].size();
      ++pos;
    } while (pos < n && acc < traffic[j]);
    if (acc != traffic[j]) {
      throw Error(ErrorKind::kMalformed, "chain " + std::to_string(j + 1) +
                                             " traffic does not match");
    }
    b.chain_sizes[j] = static_cast<std::uint32_t>(pos - first);
  }
  if (pos != n) throw Error(ErrorKind::kMalformed, "chains do not cover states");
}

// Rebuilds IN chain ids of a DFA transform by forward search from the
// start; every reached interval must be a single state.
void recover_dfa_in_lists(Bwt& b) {
  if (!b.is_deterministic()) {
    throw Error(ErrorKind::kMalformed, "DFA stream repeats a label in an OUT list");
  }
  const std::size_t n = b.num_states();
  const FmIndex index(b);
  const std::vector<std::uint32_t> chain_of = b.position_chains();
  std::vector<std::optional<IntervalSet>> reached(n);
  std::vector<std::vector<std::size_t>> sources(n);
  std::queue<std::size_t> queue;
  reached[0] = index.seed();
  queue.push(0);
  while (!queue.empty()) {
    const std::size_t x = queue.front();
    queue.pop();
    for (const OutPair& pr : b.out[x]) {
      IntervalSet next = index.extend(*reached[x], pr.label);
      for (std::uint32_t k = 0; k < next.size(); ++k) {
        if (next[k].size() != (k == pr.chain ? 1u : 0u)) {
          throw Error(ErrorKind::kMalformed,
                      "forward search did not reach a single state");
        }
      }
      const std::size_t y = index.position(pr.chain, next[pr.chain].begin);
      sources[y].push_back(x);
      if (!reached[y]) {
        reached[y] = std::move(next);
        queue.push(y);
      }
    }
  }
  for (std::size_t y = 0; y < n; ++y) {
    if (sources[y].size() != b.in[y].size()) {
      throw Error(ErrorKind::kMalformed,
                  "in-degree of position " + std::to_string(y) +
                      " does not match the reconstructed edges");
    }
    std::sort(sources[y].begin(), sources[y].end());
    for (std::size_t k = 0; k < sources[y].size(); ++k) {
      b.in[y][k] = chain_of[sources[y][k]];
    }
  }
}

}  // namespace

EncodedBwt encode_nfa(const Bwt& b) { return encode(b, BwtKind::kNfa); }
EncodedBwt encode_dfa(const Bwt& b) { return encode(b, BwtKind::kDfa); }

BwtKind peek_kind(std::span<const std::uint8_t> bytes) {
  detail::ByteReader r(bytes);
  r.expect_magic(kMagic);
  const std::uint8_t kind = r.u8();
  if (kind > 1) throw Error(ErrorKind::kMalformed, "unknown stream kind");
  return static_cast<BwtKind>(kind);
}

Bwt decode_bwt(std::span<const std::uint8_t> bytes) {
  const BwtKind kind = peek_kind(bytes);
  detail::ByteReader r(bytes);
  r.bytes(kMagic.size() + 1);
  const std::size_t n = r.u32();
  const std::size_t edges = r.u32();
  const std::size_t sigma = r.u32();
  const std::size_t p = r.u32();
  const std::uint8_t flags = r.u8();
  if (n == 0 || p == 0 || p > n) {
    throw Error(ErrorKind::kMalformed, "bad state or chain count");
  }
  if (flags & ~kFlagDegreeMap) throw Error(ErrorKind::kMalformed, "unknown flags");
  // FINAL alone needs n payload bits.
  if ((n + 7) / 8 > r.remaining()) {
    throw Error(ErrorKind::kMalformed, "state count exceeds the input");
  }
  auto alphabet = r.bytes(sigma);

  Bwt b;
  b.sigma = sigma;
  b.alphabet.assign(alphabet.begin(), alphabet.end());
  std::vector<bool> out_nonempty(n, true);
  if (flags & kFlagDegreeMap) {
    BitVector map = BitVector::from_bytes(r.bytes((n + 7) / 8), n);
    for (std::size_t i = 0; i < n; ++i) out_nonempty[i] = map.get(i);
  }
  const std::uint64_t payload_bits = r.u64();
  const BitBudget budget = bit_budget(n, edges, sigma, p);
  const std::uint64_t expected =
      kind == BwtKind::kNfa ? budget.nfa_bits : budget.dfa_bits;
  if (payload_bits != expected) {
    throw Error(ErrorKind::kMalformed, "payload length " +
                                           std::to_string(payload_bits) +
                                           " differs from " +
                                           std::to_string(expected));
  }
  if (r.remaining() != (payload_bits + 7) / 8) {
    throw Error(ErrorKind::kMalformed, "payload byte count mismatch");
  }
  const BitVector payload =
      BitVector::from_bytes(r.bytes(r.remaining()), payload_bits);

  try {
    BitReader in(payload);
    BitVector out_terms, in_terms;
    for (std::size_t k = 0; k < edges; ++k) out_terms.push_back(in.read_bit());
    for (std::size_t k = 0; k < edges; ++k) in_terms.push_back(in.read_bit());
    std::vector<bool> in_nonempty(n, true);
    in_nonempty[0] = false;
    const auto out_sizes = list_sizes(out_terms, out_nonempty, "OUT");
    const auto in_sizes = list_sizes(in_terms, in_nonempty, "IN");

    const std::uint32_t ls = ceil_log2(sigma);
    const std::uint32_t lp = ceil_log2(p);
    b.out.resize(n);
    b.in.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < out_sizes[i]; ++k) {
        OutPair pr;
        pr.chain = static_cast<std::uint32_t>(in.read(lp));
        pr.label = static_cast<Symbol>(in.read(ls));
        if (pr.chain >= p || static_cast<std::size_t>(pr.label) >= sigma) {
          throw Error(ErrorKind::kMalformed, "OUT pair out of range");
        }
        b.out[i].push_back(pr);
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      b.in[i].assign(in_sizes[i], 0);
      if (kind == BwtKind::kNfa) {
        for (auto& id : b.in[i]) {
          id = static_cast<std::uint32_t>(in.read(lp));
          if (id >= p) throw Error(ErrorKind::kMalformed, "IN chain id out of range");
        }
      }
    }
    b.final.resize(n);
    for (std::size_t i = 0; i < n; ++i) b.final[i] = in.read_bit();

    b.chain_sizes.assign(p, 0);
    recover_chain_sizes(b);
    b.state_order.resize(n);
    for (std::size_t i = 0; i < n; ++i) b.state_order[i] = static_cast<State>(i);
    if (kind == BwtKind::kDfa) recover_dfa_in_lists(b);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kMalformed) throw;
    throw Error(ErrorKind::kMalformed, e.what());
  }
  return b;
}

Automaton bwt_to_automaton(const Bwt& b) {
  const std::size_t n = b.num_states();
  const std::size_t sigma = b.sigma;
  const std::vector<std::uint32_t> chain_of = b.position_chains();
  if (chain_of.size() != n || b.in.size() != n || b.final.size() != n) {
    throw Error(ErrorKind::kMalformed, "inconsistent transform");
  }

  // Incoming labels: inside a chain they ascend, and chain j receives
  // exactly as many c-labeled edges as OUT pairs (j, c) exist.
  std::vector<std::size_t> remaining(b.p() * sigma, 0);
  for (const auto& list : b.out) {
    for (const OutPair& pr : list) ++remaining[pr.chain * sigma + pr.label];
  }
  std::vector<Symbol> lambda(n, kStartLabel);
  std::size_t first = 0;
  for (std::uint32_t j = 0; j < b.p(); ++j) {
    Symbol c = 0;
    for (std::size_t pos = first; pos < first + b.chain_sizes[j]; ++pos) {
      if (pos == 0) continue;
      while (static_cast<std::size_t>(c) < sigma && remaining[j * sigma + c] == 0) ++c;
      if (static_cast<std::size_t>(c) == sigma || b.in[pos].size() > remaining[j * sigma + c]) {
        throw Error(ErrorKind::kMalformed, "incoming labels cannot be recovered");
      }
      lambda[pos] = c;
      remaining[j * sigma + c] -= b.in[pos].size();
    }
    first += b.chain_sizes[j];
  }
  if (std::any_of(remaining.begin(), remaining.end(), [](std::size_t r) { return r; })) {
    throw Error(ErrorKind::kMalformed, "unmatched OUT pairs");
  }

  // Destinations in chain j with label c of the IN entries naming chain i,
  // in position order, keyed by (j, c, i).
  struct Pending {
    std::vector<std::size_t> positions;
    std::size_t next = 0;
  };
  auto key = [&](std::uint32_t j, Symbol c, std::uint32_t i) {
    return (std::uint64_t{j} * sigma + static_cast<std::uint64_t>(c)) * b.p() + i;
  };
  std::unordered_map<std::uint64_t, Pending> pending;
  for (std::size_t pos = 1; pos < n; ++pos) {
    for (std::uint32_t source_chain : b.in[pos]) {
      if (source_chain >= b.p()) throw Error(ErrorKind::kMalformed, "bad chain id");
      pending[key(chain_of[pos], lambda[pos], source_chain)].positions.push_back(pos);
    }
  }
  std::vector<Edge> edges;
  edges.reserve(b.num_edges());
  for (std::size_t x = 0; x < n; ++x) {
    for (const OutPair& pr : b.out[x]) {
      auto it = pending.find(key(pr.chain, pr.label, chain_of[x]));
      if (it == pending.end() || it->second.next == it->second.positions.size()) {
        throw Error(ErrorKind::kMalformed, "OUT entry without a matching IN entry");
      }
      const std::size_t y = it->second.positions[it->second.next++];
      edges.push_back({static_cast<State>(x), static_cast<State>(y), pr.label});
    }
  }
  std::vector<State> finals;
  for (std::size_t i = 0; i < n; ++i) {
    if (b.final[i]) finals.push_back(static_cast<State>(i));
  }
  try {
    return Automaton(n, sigma, 0, std::move(finals), std::move(edges), b.alphabet);
  } catch (const Error& e) {
    throw Error(ErrorKind::kMalformed, e.what());
  }
}

Automaton decode_nfa(std::span<const std::uint8_t> bytes) {
  if (peek_kind(bytes) != BwtKind::kNfa) {
    throw Error(ErrorKind::kMalformed, "expected an NFA stream");
  }
  return bwt_to_automaton(decode_bwt(bytes));
}

Automaton decode_dfa(std::span<const std::uint8_t> bytes) {
  if (peek_kind(bytes) != BwtKind::kDfa) {
    throw Error(ErrorKind::kMalformed, "expected a DFA stream");
  }
  return bwt_to_automaton(decode_bwt(bytes));
}

}  // namespace colex
