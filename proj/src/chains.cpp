#include "colex/chains.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <queue>
#include <sstream>

#include "colex/error.hpp"

namespace colex {
namespace {

constexpr std::uint32_t kNil = std::numeric_limits<std::uint32_t>::max();

void require_strict_order(const PartialOrder& o) {
  for (State u = 0; u < o.size(); ++u) {
    if (o.less(u, u)) {
      throw Error(ErrorKind::kInvalidArgument,
                  "relation is not irreflexive at state " + std::to_string(u));
    }
  }
}

// Maximum matching in the bipartite graph with an arc u -> v for every
// u < v. Rows of the order double as adjacency lists; each phase visits a
// right vertex at most once, so a phase costs O(n^2 / 64 + n) word steps.
class HopcroftKarp {
 public:
  explicit HopcroftKarp(const PartialOrder& o)
      : o_(o),
        n_(o.size()),
        words_((n_ + 63) / 64),
        match_left_(n_, kNil),
        match_right_(n_, kNil),
        dist_(n_) {}

  void run() {
    while (bfs()) {
      for (State u = 0; u < n_; ++u) {
        if (match_left_[u] == kNil) dfs(u);
      }
    }
  }

  const std::vector<std::uint32_t>& match_left() const { return match_left_; }
  const std::vector<std::uint32_t>& match_right() const { return match_right_; }

 private:
  using Mask = std::vector<std::uint64_t>;

  static void clear(Mask& mask, std::size_t v) {
    mask[v >> 6] &= ~(std::uint64_t{1} << (v & 63));
  }

  // Layers free left vertices at 0 and fills usable_[d] with the right
  // vertices an augmenting path may cross from layer d - 1.
  bool bfs() {
    std::vector<State> queue;
    for (State u = 0; u < n_; ++u) {
      dist_[u] = match_left_[u] == kNil ? 0 : kNil;
      if (dist_[u] == 0) queue.push_back(u);
    }
    Mask unseen(words_, ~std::uint64_t{0});
    free_dist_ = kNil;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const State u = queue[head];
      if (dist_[u] + 1 >= free_dist_) break;
      auto row = o_.successors(u);
      for (std::size_t w = 0; w < words_; ++w) {
        std::uint64_t bits = row[w] & unseen[w];
        unseen[w] &= ~bits;
        for (; bits; bits &= bits - 1) {
          const std::size_t v = w * 64 + std::countr_zero(bits);
          const std::uint32_t mate = match_right_[v];
          if (mate == kNil) {
            free_dist_ = std::min(free_dist_, dist_[u] + 1);
          } else {
            dist_[mate] = dist_[u] + 1;
            queue.push_back(mate);
          }
        }
      }
    }
    if (free_dist_ == kNil) return false;
    usable_.assign(free_dist_ + 1, Mask(words_, 0));
    for (State v = 0; v < n_; ++v) {
      const std::uint32_t mate = match_right_[v];
      const std::uint32_t layer = mate == kNil ? free_dist_ : dist_[mate];
      if (layer != kNil && layer >= 1 && layer <= free_dist_ &&
          (mate != kNil || layer == free_dist_)) {
        usable_[layer][v >> 6] |= std::uint64_t{1} << (v & 63);
      }
    }
    return true;
  }

  bool dfs(State u) {
    const std::uint32_t next = dist_[u] + 1;
    Mask& usable = usable_[next];
    auto row = o_.successors(u);
    for (std::size_t w = 0; w < words_; ++w) {
      std::uint64_t bits;
      while ((bits = row[w] & usable[w]) != 0) {
        const std::size_t v = w * 64 + std::countr_zero(bits);
        // Used by this path or proven dead: either way, gone for the phase.
        clear(usable, v);
        const std::uint32_t mate = match_right_[v];
        if (mate == kNil ? next == free_dist_ : next < free_dist_ && dfs(mate)) {
          match_left_[u] = static_cast<std::uint32_t>(v);
          match_right_[v] = u;
          return true;
        }
      }
    }
    return false;
  }

  const PartialOrder& o_;
  std::size_t n_;
  std::size_t words_;
  std::vector<std::uint32_t> match_left_;
  std::vector<std::uint32_t> match_right_;
  std::vector<std::uint32_t> dist_;
  std::vector<Mask> usable_;
  std::uint32_t free_dist_ = kNil;
};

// Kahn's algorithm, smallest available state first.
std::vector<std::size_t> linear_extension_rank(const PartialOrder& o) {
  const std::size_t n = o.size();
  std::vector<std::size_t> below(n, 0);
  for (State u = 0; u < n; ++u) {
    for (State v = 0; v < n; ++v) below[v] += o.less(u, v);
  }
  std::priority_queue<State, std::vector<State>, std::greater<>> ready;
  for (State v = 0; v < n; ++v) {
    if (below[v] == 0) ready.push(v);
  }
  std::vector<std::size_t> rank(n, 0);
  std::size_t next = 0;
  while (!ready.empty()) {
    State u = ready.top();
    ready.pop();
    rank[u] = next++;
    for (State v = 0; v < n; ++v) {
      if (o.less(u, v) && --below[v] == 0) ready.push(v);
    }
  }
  if (next != n) {
    throw Error(ErrorKind::kInvalidArgument, "relation contains a cycle");
  }
  return rank;
}

bool holds(const std::vector<State>& chain, std::optional<State> state) {
  return state && std::find(chain.begin(), chain.end(), *state) != chain.end();
}

ChainDecomposition assemble(std::size_t n,
                            std::vector<std::vector<State>> chains) {
  ChainDecomposition d;
  d.chain_of.assign(n, 0);
  d.rank_of.assign(n, 0);
  for (std::size_t c = 0; c < chains.size(); ++c) {
    for (std::size_t r = 0; r < chains[c].size(); ++r) {
      d.chain_of[chains[c][r]] = static_cast<std::uint32_t>(c);
      d.rank_of[chains[c][r]] = static_cast<std::uint32_t>(r);
    }
  }
  d.chains = std::move(chains);
  return d;
}

}  // namespace

ChainDecomposition min_chain_decomposition(const PartialOrder& o,
                                           std::optional<State> start,
                                           const TotalOrder* reference) {
  require_strict_order(o);
  const std::size_t n = o.size();
  if (start && *start >= n) {
    throw Error(ErrorKind::kInvalidArgument, "start state out of range");
  }
  std::vector<std::size_t> rank;
  if (reference) {
    if (reference->rank.size() != n) {
      throw Error(ErrorKind::kInvalidArgument,
                  "reference order and partial order differ in size");
    }
    rank = reference->rank;
  } else {
    rank = linear_extension_rank(o);
  }
  HopcroftKarp matcher(o);
  matcher.run();

  // Matched arcs link consecutive chain elements; unmatched right vertices
  // are chain minima.
  std::vector<std::vector<State>> chains;
  for (State v = 0; v < n; ++v) {
    if (matcher.match_right()[v] != kNil) continue;
    std::vector<State> chain;
    for (std::uint32_t u = v; u != kNil; u = matcher.match_left()[u]) {
      chain.push_back(u);
    }
    chains.push_back(std::move(chain));
  }

  std::sort(chains.begin(), chains.end(),
            [&](const std::vector<State>& x, const std::vector<State>& y) {
              bool x_start = holds(x, start);
              bool y_start = holds(y, start);
              if (x_start != y_start) return x_start;
              return rank[x.front()] < rank[y.front()];
            });
  return assemble(n, std::move(chains));
}

std::size_t width(const PartialOrder& o) {
  return min_chain_decomposition(o).p();
}

ChainDecomposition make_decomposition(const PartialOrder& o,
                                      std::vector<std::vector<State>> chains,
                                      std::optional<State> start) {
  require_strict_order(o);
  const std::size_t n = o.size();
  std::vector<bool> seen(n, false);
  std::size_t covered = 0;
  for (std::size_t c = 0; c < chains.size(); ++c) {
    auto& chain = chains[c];
    if (chain.empty()) {
      throw Error(ErrorKind::kInvalidArgument,
                  "chain " + std::to_string(c + 1) + " is empty");
    }
    for (State u : chain) {
      if (u >= n) {
        throw Error(ErrorKind::kInvalidArgument,
                    "state " + std::to_string(u) + " out of range");
      }
      if (seen[u]) {
        throw Error(ErrorKind::kInvalidArgument,
                    "state " + std::to_string(u) + " appears in two chains");
      }
      seen[u] = true;
      ++covered;
    }
    for (std::size_t i = 0; i < chain.size(); ++i) {
      for (std::size_t j = i + 1; j < chain.size(); ++j) {
        if (o.incomparable(chain[i], chain[j])) {
          throw Error(ErrorKind::kInvalidArgument,
                      "chain " + std::to_string(c + 1) + " holds incomparable " +
                          "states " + std::to_string(chain[i]) + " and " +
                          std::to_string(chain[j]));
        }
      }
    }
    std::sort(chain.begin(), chain.end(),
              [&](State u, State v) { return o.less(u, v); });
  }
  if (covered != n) {
    throw Error(ErrorKind::kInvalidArgument,
                "chains cover " + std::to_string(covered) + " of " +
                    std::to_string(n) + " states");
  }
  if (start) {
    if (*start >= n) {
      throw Error(ErrorKind::kInvalidArgument, "start state out of range");
    }
    // Keep the caller's chain numbering; only the start chain moves.
    auto it = std::find_if(chains.begin(), chains.end(),
                           [&](const auto& c) { return holds(c, start); });
    std::rotate(chains.begin(), it, it + 1);
  }
  return assemble(n, std::move(chains));
}

ChainDecomposition parse_chains(std::string_view text, const PartialOrder& o,
                                std::optional<State> start) {
  std::vector<std::vector<State>> chains;
  std::optional<std::size_t> declared_p;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& msg) {
    throw Error(ErrorKind::kParse,
                "line " + std::to_string(line_no) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string keyword;
    if (!(fields >> keyword) || keyword.starts_with("//")) continue;
    if (keyword == "p") {
      std::size_t value;
      if (!(fields >> value)) fail("expected chain count after 'p'");
      declared_p = value;
    } else if (keyword == "chain") {
      std::string label;
      if (!(fields >> label) || label.empty() || label.back() != ':') {
        fail("expected 'chain <i>: <states>'");
      }
      std::size_t index = 0;
      try {
        index = std::stoul(label.substr(0, label.size() - 1));
      } catch (const std::exception&) {
        fail("bad chain index '" + label + "'");
      }
      if (index != chains.size() + 1) {
        fail("chains must be numbered 1, 2, ... in order");
      }
      std::vector<State> chain;
      long long state;
      while (fields >> state) {
        if (state < 0) fail("negative state id");
        chain.push_back(static_cast<State>(state));
      }
      if (!fields.eof()) fail("bad state id");
      chains.push_back(std::move(chain));
    } else {
      fail("unknown keyword '" + keyword + "'");
    }
  }
  if (declared_p && *declared_p != chains.size()) {
    throw Error(ErrorKind::kParse,
                "declared p " + std::to_string(*declared_p) + " but found " +
                    std::to_string(chains.size()) + " chains");
  }
  return make_decomposition(o, std::move(chains), start);
}

std::string chains_to_text(const ChainDecomposition& d) {
  std::ostringstream out;
  out << "p " << d.p() << '\n';
  for (std::size_t c = 0; c < d.chains.size(); ++c) {
    out << "chain " << c + 1 << ':';
    for (State u : d.chains[c]) out << ' ' << u;
    out << '\n';
  }
  return out.str();
}

namespace {

struct Closures {
  std::vector<bool> member;
  std::vector<bool> above;  // strictly above some member
  std::vector<bool> below;  // strictly below some member
};

Closures closures(const PartialOrder& o, std::span<const State> set) {
  const std::size_t n = o.size();
  Closures c{std::vector<bool>(n, false), std::vector<bool>(n, false),
             std::vector<bool>(n, false)};
  for (State u : set) {
    if (u >= n) {
      throw Error(ErrorKind::kInvalidArgument,
                  "state " + std::to_string(u) + " out of range");
    }
    c.member[u] = true;
  }
  for (State u = 0; u < n; ++u) {
    for (State v = 0; v < n; ++v) {
      if (!o.less(u, v)) continue;
      if (c.member[u]) c.above[v] = true;
      if (c.member[v]) c.below[u] = true;
    }
  }
  return c;
}

}  // namespace

bool is_interval(const PartialOrder& o, std::span<const State> set) {
  Closures c = closures(o, set);
  for (State v = 0; v < o.size(); ++v) {
    if (!c.member[v] && c.above[v] && c.below[v]) return false;
  }
  return true;
}

std::vector<ChainRange> interval_to_chain_ranges(const PartialOrder& o,
                                                 const ChainDecomposition& d,
                                                 std::span<const State> set) {
  if (d.chain_of.size() != o.size()) {
    throw Error(ErrorKind::kInvalidArgument,
                "decomposition and order differ in size");
  }
  Closures c = closures(o, set);
  std::vector<ChainRange> ranges(d.p());
  for (std::size_t k = 0; k < d.p(); ++k) {
    const auto& chain = d.chains[k];
    std::uint32_t lowered = 0;
    std::optional<std::uint32_t> first, last;
    for (std::uint32_t r = 0; r < chain.size(); ++r) {
      State v = chain[r];
      if (c.member[v]) {
        if (!first) first = r;
        last = r;
      } else if (c.above[v] && c.below[v]) {
        throw Error(ErrorKind::kInvalidArgument,
                    "state set is not convex: it skips state " +
                        std::to_string(v));
      } else if (c.below[v]) {
        ++lowered;
      }
    }
    if (first) {
      if (*last - *first + 1 != std::count_if(chain.begin(), chain.end(),
                                              [&](State v) {
                                                return c.member[v];
                                              })) {
        throw Error(ErrorKind::kInvalidArgument,
                    "state set is not contiguous on chain " +
                        std::to_string(k + 1));
      }
      ranges[k] = {*first + 1, *last + 2};
    } else {
      ranges[k] = {lowered + 1, lowered + 1};
    }
  }
  return ranges;
}

}  // namespace colex
