#include "colex/powerset.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <unordered_map>

#include "colex/error.hpp"

namespace colex {
namespace {

struct SubsetHash {
  std::size_t operator()(const std::vector<State>& s) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (State v : s) {
      h ^= v;
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

// Target of the c-labeled edge leaving u, if any. Out-edges are sorted by
// label, so a binary search suffices.
std::optional<State> step(const Automaton& a, State u, Symbol c) {
  auto out = a.out_edges(u);
  auto it = std::lower_bound(out.begin(), out.end(), c,
                             [](const Edge& e, Symbol x) { return e.label < x; });
  if (it == out.end() || it->label != c) return std::nullopt;
  return it->target;
}

}  // namespace

PowersetResult determinize(const Automaton& a) {
  const std::size_t sigma = a.sigma();
  std::unordered_map<std::vector<State>, State, SubsetHash> id_of;
  std::vector<std::vector<State>> subsets{{a.start()}};
  id_of.emplace(subsets[0], 0);
  std::vector<Edge> edges;
  std::size_t traversed = 0;
  std::vector<std::vector<State>> buckets(sigma);

  for (std::size_t s = 0; s < subsets.size(); ++s) {
    for (auto& bucket : buckets) bucket.clear();
    for (State u : subsets[s]) {
      for (const Edge& e : a.out_edges(u)) {
        buckets[e.label].push_back(e.target);
        ++traversed;
      }
    }
    for (std::size_t c = 0; c < sigma; ++c) {
      auto& target = buckets[c];
      if (target.empty()) continue;
      std::sort(target.begin(), target.end());
      target.erase(std::unique(target.begin(), target.end()), target.end());
      auto [it, inserted] = id_of.try_emplace(target, static_cast<State>(subsets.size()));
      if (inserted) subsets.push_back(target);
      edges.push_back({static_cast<State>(s), it->second, static_cast<Symbol>(c)});
    }
  }

  std::vector<State> finals;
  for (std::size_t s = 0; s < subsets.size(); ++s) {
    if (std::any_of(subsets[s].begin(), subsets[s].end(),
                    [&](State u) { return a.is_final(u); })) {
      finals.push_back(static_cast<State>(s));
    }
  }
  PowersetResult result{
      Automaton(subsets.size(), sigma, 0, std::move(finals), edges, a.alphabet()),
      std::move(subsets), {}};
  result.stats = {result.subset_of.size(), edges.size(), traversed};
  return result;
}

std::uint64_t powerset_bound(std::size_t p, std::size_t n) {
  if (p < 1 || p > n) {
    throw Error(ErrorKind::kInvalidArgument, "powerset bound needs 1 <= p <= n");
  }
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  if (p >= 64) return kMax;
  const std::uint64_t pow = std::uint64_t{1} << p;
  const std::uint64_t factor = n - p + 1;
  if (factor > kMax / pow) return kMax;
  return pow * factor - 1;
}

bool check_powerset_bound(std::size_t p, std::size_t n,
                          const PowersetResult& result) {
  return result.stats.states <= powerset_bound(p, n);
}

Automaton minimize_dfa(const Automaton& a) {
  if (!a.is_deterministic()) {
    throw Error(ErrorKind::kPrecondition, "minimize_dfa needs a deterministic automaton");
  }
  const std::size_t sigma = a.sigma();

  // Reachable part, completed with a sink at index `sink`.
  std::vector<State> local(a.num_states(), std::numeric_limits<State>::max());
  std::vector<State> states{a.start()};
  local[a.start()] = 0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (const Edge& e : a.out_edges(states[i])) {
      if (local[e.target] == std::numeric_limits<State>::max()) {
        local[e.target] = static_cast<State>(states.size());
        states.push_back(e.target);
      }
    }
  }
  const std::size_t sink = states.size();
  const std::size_t total = sink + 1;
  std::vector<State> delta(total * sigma, static_cast<State>(sink));
  for (std::size_t q = 0; q < sink; ++q) {
    for (const Edge& e : a.out_edges(states[q])) {
      delta[q * sigma + e.label] = local[e.target];
    }
  }

  // Predecessor lists per (label, target).
  std::vector<std::size_t> inv_offset(total * sigma + 1, 0);
  for (std::size_t q = 0; q < total; ++q) {
    for (std::size_t c = 0; c < sigma; ++c) ++inv_offset[c * total + delta[q * sigma + c] + 1];
  }
  for (std::size_t k = 1; k < inv_offset.size(); ++k) inv_offset[k] += inv_offset[k - 1];
  std::vector<State> inv(total * sigma);
  {
    std::vector<std::size_t> fill(inv_offset.begin(), inv_offset.end() - 1);
    for (std::size_t q = 0; q < total; ++q) {
      for (std::size_t c = 0; c < sigma; ++c) {
        inv[fill[c * total + delta[q * sigma + c]]++] = static_cast<State>(q);
      }
    }
  }

  // Blocks are contiguous ranges of `elems`.
  std::vector<State> elems(total);
  std::vector<std::size_t> loc(total);
  std::vector<std::size_t> block_of(total);
  std::vector<std::size_t> begin, end, marked;
  {
    std::size_t k = 0;
    for (int pass = 0; pass < 2; ++pass) {
      const std::size_t first = k;
      for (std::size_t q = 0; q < total; ++q) {
        const bool fin = q < sink && a.is_final(states[q]);
        if (fin == (pass == 0)) {
          elems[k] = static_cast<State>(q);
          loc[q] = k++;
          block_of[q] = begin.size();
        }
      }
      if (k > first) {
        begin.push_back(first);
        end.push_back(k);
        marked.push_back(0);
      }
    }
  }
  std::vector<std::pair<std::size_t, std::size_t>> work;
  std::vector<bool> queued;
  auto enqueue = [&](std::size_t block, std::size_t c) {
    if (queued.size() < (block + 1) * sigma) queued.resize((block + 1) * sigma, false);
    if (!queued[block * sigma + c]) {
      queued[block * sigma + c] = true;
      work.emplace_back(block, c);
    }
  };
  if (begin.size() == 2) {
    const std::size_t smaller = end[0] - begin[0] <= end[1] - begin[1] ? 0 : 1;
    for (std::size_t c = 0; c < sigma; ++c) enqueue(smaller, c);
  }

  std::vector<State> splitter;
  std::vector<std::size_t> touched;
  while (!work.empty()) {
    auto [b, c] = work.back();
    work.pop_back();
    queued[b * sigma + c] = false;
    splitter.clear();
    for (std::size_t k = begin[b]; k < end[b]; ++k) {
      const State q = elems[k];
      for (std::size_t t = inv_offset[c * total + q]; t < inv_offset[c * total + q + 1]; ++t) {
        splitter.push_back(inv[t]);
      }
    }
    touched.clear();
    for (State x : splitter) {
      const std::size_t y = block_of[x];
      const std::size_t dst = begin[y] + marked[y];
      const State other = elems[dst];
      std::swap(elems[loc[x]], elems[dst]);
      loc[other] = loc[x];
      loc[x] = dst;
      if (marked[y]++ == 0) touched.push_back(y);
    }
    for (std::size_t y : touched) {
      const std::size_t m = marked[y];
      marked[y] = 0;
      if (m == end[y] - begin[y]) continue;
      const std::size_t z = begin.size();
      begin.push_back(begin[y]);
      end.push_back(begin[y] + m);
      marked.push_back(0);
      begin[y] += m;
      for (std::size_t k = begin[z]; k < end[z]; ++k) block_of[elems[k]] = z;
      const bool z_smaller = end[z] - begin[z] <= end[y] - begin[y];
      for (std::size_t d = 0; d < sigma; ++d) {
        if (queued.size() > y * sigma + d && queued[y * sigma + d]) {
          enqueue(z, d);
        } else {
          enqueue(z_smaller ? z : y, d);
        }
      }
    }
  }

  // Canonical numbering of the quotient, without the sink's block.
  const std::size_t dead = block_of[sink];
  const std::size_t start_block = block_of[0];
  if (start_block == dead) {
    return Automaton(1, sigma, 0, {}, {}, a.alphabet());
  }
  std::vector<State> number(begin.size(), std::numeric_limits<State>::max());
  std::vector<std::size_t> order{start_block};
  number[start_block] = 0;
  std::vector<Edge> edges;
  std::vector<State> finals;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const std::size_t blk = order[i];
    const State rep = elems[begin[blk]];
    if (rep < sink && a.is_final(states[rep])) finals.push_back(static_cast<State>(i));
    for (std::size_t c = 0; c < sigma; ++c) {
      const std::size_t next = block_of[delta[rep * sigma + c]];
      if (next == dead) continue;
      if (number[next] == std::numeric_limits<State>::max()) {
        number[next] = static_cast<State>(order.size());
        order.push_back(next);
      }
      edges.push_back({static_cast<State>(i), number[next], static_cast<Symbol>(c)});
    }
  }
  return Automaton(order.size(), sigma, 0, std::move(finals), std::move(edges),
                   a.alphabet());
}

bool equivalent(const Automaton& a, const Automaton& b) {
  const Automaton ma = minimize_dfa(determinize(a).dfa);
  const Automaton mb = minimize_dfa(determinize(b).dfa);
  if (ma.num_states() != mb.num_states() || ma.finals() != mb.finals()) return false;
  auto ea = ma.edges();
  auto eb = mb.edges();
  return std::equal(ea.begin(), ea.end(), eb.begin(), eb.end());
}

bool member_via_dfa(const Automaton& a, std::span<const Symbol> word) {
  return DfaMembership(a).member(word);
}

DfaMembership::DfaMembership(const Automaton& a) : dfa_(determinize(a).dfa) {}

bool DfaMembership::member(std::span<const Symbol> word) const {
  State q = dfa_.start();
  for (Symbol c : word) {
    auto next = step(dfa_, q, c);
    if (!next) return false;
    q = *next;
  }
  return dfa_.is_final(q);
}

}  // namespace colex
