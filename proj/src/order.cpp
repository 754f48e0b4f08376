#include "colex/order.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <deque>
#include <sstream>

#include "colex/error.hpp"

namespace colex {

PartialOrder::PartialOrder(std::size_t n)
    : n_(n), words_((n + 63) / 64), bits_(n * ((n + 63) / 64), 0) {}

void PartialOrder::set_less(State u, State v, bool value) {
  std::uint64_t& word = bits_[u * words_ + (v >> 6)];
  const std::uint64_t mask = std::uint64_t{1} << (v & 63);
  word = value ? (word | mask) : (word & ~mask);
}

void PartialOrder::transitive_closure() {
  // Warshall over bit rows: if u < k then u inherits everything above k.
  for (std::size_t k = 0; k < n_; ++k) {
    const std::uint64_t* row_k = bits_.data() + k * words_;
    for (std::size_t u = 0; u < n_; ++u) {
      if (!less(static_cast<State>(u), static_cast<State>(k))) continue;
      std::uint64_t* row_u = bits_.data() + u * words_;
      for (std::size_t w = 0; w < words_; ++w) row_u[w] |= row_k[w];
    }
  }
}

std::vector<std::pair<State, State>> PartialOrder::strict_pairs() const {
  std::vector<std::pair<State, State>> pairs;
  for (State u = 0; u < n_; ++u) {
    for (State v = 0; v < n_; ++v) {
      if (less(u, v)) pairs.emplace_back(u, v);
    }
  }
  return pairs;
}

std::size_t PartialOrder::num_strict_pairs() const {
  std::size_t total = 0;
  for (std::uint64_t w : bits_) total += std::popcount(w);
  return total;
}

PartialOrder order_from_pairs(std::size_t n,
                              std::span<const std::pair<State, State>> pairs) {
  PartialOrder o(n);
  for (auto [u, v] : pairs) {
    if (u >= n || v >= n) {
      throw Error(ErrorKind::kInvalidArgument,
                  "order pair (" + std::to_string(u) + ", " +
                      std::to_string(v) + ") out of range");
    }
    o.set_less(u, v);
  }
  o.transitive_closure();
  for (State u = 0; u < n; ++u) {
    if (o.less(u, u)) {
      throw Error(ErrorKind::kInvalidArgument,
                  "order pairs contain a cycle through state " +
                      std::to_string(u));
    }
  }
  return o;
}

PartialOrder parse_order(std::string_view text, std::size_t n) {
  std::vector<std::pair<State, State>> pairs;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string keyword;
    if (!(fields >> keyword) || keyword.starts_with("//")) continue;
    if (keyword == "width") continue;
    long long u = -1, v = -1;
    std::string extra;
    if (keyword != "lt" || !(fields >> u >> v) || (fields >> extra) || u < 0 ||
        v < 0) {
      throw Error(ErrorKind::kParse, "line " + std::to_string(line_no) +
                                         ": expected 'lt <u> <v>'");
    }
    pairs.emplace_back(static_cast<State>(u), static_cast<State>(v));
  }
  return order_from_pairs(n, pairs);
}

std::string order_to_text(const PartialOrder& o, std::size_t width) {
  std::ostringstream out;
  out << "width " << width << '\n';
  for (auto [u, v] : o.strict_pairs()) out << "lt " << u << ' ' << v << '\n';
  return out.str();
}

TotalOrder TotalOrder::from_sequence(std::vector<State> sequence) {
  TotalOrder t;
  t.rank.assign(sequence.size(), sequence.size());
  for (std::size_t i = 0; i < sequence.size(); ++i) {
    if (sequence[i] >= sequence.size() || t.rank[sequence[i]] != sequence.size()) {
      throw Error(ErrorKind::kInvalidArgument, "sequence is not a permutation");
    }
    t.rank[sequence[i]] = i;
  }
  t.sequence = std::move(sequence);
  return t;
}

std::string ColexViolation::describe() const {
  std::ostringstream out;
  switch (kind) {
    case ColexViolationKind::kReflexive:
      out << "strict relation contains " << u << " < " << u;
      break;
    case ColexViolationKind::kAntisymmetry:
      out << "both " << u << " < " << v << " and " << v << " < " << u;
      break;
    case ColexViolationKind::kTransitivity:
      out << u << " < " << u_pred << " < " << v << " but not " << u << " < "
          << v;
      break;
    case ColexViolationKind::kAxiom1:
      out << "axiom 1: label of " << u << " below label of " << v
          << " but not " << u << " < " << v;
      break;
    case ColexViolationKind::kAxiom2:
      out << "axiom 2: " << u << " < " << v << " with predecessors " << u_pred
          << ", " << v_pred << " not ordered";
      break;
  }
  return out.str();
}

ColexReport verify_colex(const Automaton& a, const PartialOrder& o,
                         std::size_t max_violations) {
  const std::size_t n = a.num_states();
  if (o.size() != n) {
    throw Error(ErrorKind::kInvalidArgument,
                "order has " + std::to_string(o.size()) +
                    " states, automaton has " + std::to_string(n));
  }
  if (!a.is_input_consistent()) {
    throw Error(ErrorKind::kPrecondition, "automaton is not input-consistent");
  }

  ColexReport report;
  auto add = [&](ColexViolation v) {
    if (report.violations.size() >= max_violations) {
      report.truncated = true;
      return false;
    }
    report.violations.push_back(v);
    return true;
  };

  for (State u = 0; u < n; ++u) {
    if (o.less(u, u) && !add({ColexViolationKind::kReflexive, u, u})) {
      return report;
    }
    for (State v = u + 1; v < n; ++v) {
      if (o.less(u, v) && o.less(v, u) &&
          !add({ColexViolationKind::kAntisymmetry, u, v})) {
        return report;
      }
    }
  }
  for (State u = 0; u < n; ++u) {
    auto row_u = o.successors(u);
    for (State mid = 0; mid < n; ++mid) {
      if (mid == u || !o.less(u, mid)) continue;
      auto row_mid = o.successors(mid);
      for (std::size_t w = 0; w < row_u.size(); ++w) {
        std::uint64_t missing = row_mid[w] & ~row_u[w];
        while (missing) {
          State v = static_cast<State>(w * 64 + std::countr_zero(missing));
          missing &= missing - 1;
          if (v != u && !add({ColexViolationKind::kTransitivity, u, v, mid})) {
            return report;
          }
        }
      }
    }
  }
  for (State u = 0; u < n; ++u) {
    for (State v = 0; v < n; ++v) {
      if (a.incoming_label(u) < a.incoming_label(v) && !o.less(u, v) &&
          !add({ColexViolationKind::kAxiom1, u, v})) {
        return report;
      }
    }
  }
  for (State u = 0; u < n; ++u) {
    for (State v = 0; v < n; ++v) {
      if (u == v || !o.less(u, v)) continue;
      if (a.incoming_label(u) != a.incoming_label(v)) continue;
      for (const Edge& eu : a.in_edges(u)) {
        for (const Edge& ev : a.in_edges(v)) {
          if (!o.leq(eu.source, ev.source) &&
              !add({ColexViolationKind::kAxiom2, u, v, eu.source,
                    ev.source})) {
            return report;
          }
        }
      }
    }
  }
  return report;
}

PartialOrder label_only_order(const Automaton& a) {
  if (!a.is_input_consistent()) {
    throw Error(ErrorKind::kPrecondition, "automaton is not input-consistent");
  }
  const std::size_t n = a.num_states();
  PartialOrder o(n);
  for (State u = 0; u < n; ++u) {
    for (State v = 0; v < n; ++v) {
      if (a.incoming_label(u) < a.incoming_label(v)) o.set_less(u, v);
    }
  }
  return o;
}

namespace {

void require_dfa(const Automaton& a) {
  if (!a.is_deterministic()) {
    throw Error(ErrorKind::kPrecondition, "automaton is not deterministic");
  }
  if (!a.is_input_consistent()) {
    throw Error(ErrorKind::kPrecondition, "automaton is not input-consistent");
  }
  if (!a.in_edges(a.start()).empty()) {
    throw Error(ErrorKind::kPrecondition, "start state has incoming edges");
  }
}

}  // namespace

TotalOrder underlying_order_dfa(const Automaton& a, SpanningTree tree) {
  require_dfa(a);
  const std::size_t n = a.num_states();
  constexpr State kNone = ~State{0};
  std::vector<State> parent(n, kNone);
  std::vector<bool> seen(n, false);
  seen[a.start()] = true;

  // Out-edges are sorted by label, so iterating forward explores the
  // smallest label first and iterating backward the largest.
  if (tree == SpanningTree::kBreadthFirst) {
    std::deque<State> queue{a.start()};
    while (!queue.empty()) {
      State u = queue.front();
      queue.pop_front();
      for (const Edge& e : a.out_edges(u)) {
        if (!seen[e.target]) {
          seen[e.target] = true;
          parent[e.target] = u;
          queue.push_back(e.target);
        }
      }
    }
  } else {
    std::vector<State> stack{a.start()};
    while (!stack.empty()) {
      State u = stack.back();
      stack.pop_back();
      auto out = a.out_edges(u);
      for (auto it = out.rbegin(); it != out.rend(); ++it) {
        if (!seen[it->target]) {
          seen[it->target] = true;
          parent[it->target] = u;
          stack.push_back(it->target);
        }
      }
    }
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
    throw Error(ErrorKind::kPrecondition,
                "automaton has states unreachable from the start");
  }

  // Tree path strings are compared last character first; a string that is a
  // proper suffix of another sorts first. Distinct states have distinct
  // strings because the automaton is deterministic.
  auto colex_less = [&](State u, State v) {
    while (u != v) {
      if (u == a.start()) return true;
      if (v == a.start()) return false;
      Symbol lu = a.incoming_label(u);
      Symbol lv = a.incoming_label(v);
      if (lu != lv) return lu < lv;
      u = parent[u];
      v = parent[v];
    }
    return false;
  };
  std::vector<State> sequence(n);
  for (State u = 0; u < n; ++u) sequence[u] = u;
  std::sort(sequence.begin(), sequence.end(), colex_less);
  return TotalOrder::from_sequence(std::move(sequence));
}

PartialOrder maximal_colex_order_dfa(const Automaton& a) {
  return maximal_colex_order_dfa(a, underlying_order_dfa(a));
}

PartialOrder maximal_colex_order_dfa(const Automaton& a,
                                     const TotalOrder& underlying) {
  require_dfa(a);
  const std::size_t n = a.num_states();
  if (underlying.sequence.size() != n) {
    throw Error(ErrorKind::kInvalidArgument, "underlying order size mismatch");
  }
  const TotalOrder& ord = underlying;

  // marked.less(u, v) for u <_# v means u and v are incomparable.
  PartialOrder marked(n);
  std::vector<std::pair<State, State>> stack;
  auto mark = [&](State u, State v) {
    if (ord.before(v, u)) std::swap(u, v);
    if (!marked.less(u, v)) {
      marked.set_less(u, v);
      stack.emplace_back(u, v);
    }
  };

  // Seeds: equally labeled u <_# v with some predecessors v' <_# u'.
  std::vector<std::vector<State>> by_label(a.sigma());
  for (State u = 0; u < n; ++u) {
    Symbol c = a.incoming_label(u);
    if (c >= 0) by_label[c].push_back(u);
  }
  for (const auto& group : by_label) {
    for (State u : group) {
      for (State v : group) {
        if (!ord.before(u, v)) continue;
        bool seed = false;
        for (const Edge& eu : a.in_edges(u)) {
          for (const Edge& ev : a.in_edges(v)) {
            if (ord.before(ev.source, eu.source)) seed = true;
          }
        }
        if (seed) mark(u, v);
      }
    }
  }

  // Depth-first propagation along pairs of equally labeled edges.
  while (!stack.empty()) {
    auto [up, vp] = stack.back();
    stack.pop_back();
    auto out_u = a.out_edges(up);
    auto out_v = a.out_edges(vp);
    auto iu = out_u.begin();
    auto iv = out_v.begin();
    while (iu != out_u.end() && iv != out_v.end()) {
      if (iu->label < iv->label) {
        ++iu;
      } else if (iv->label < iu->label) {
        ++iv;
      } else {
        if (iu->target != iv->target) mark(iu->target, iv->target);
        ++iu;
        ++iv;
      }
    }
  }

  PartialOrder result(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      State u = ord.sequence[i];
      State v = ord.sequence[j];
      if (!marked.less(u, v)) result.set_less(u, v);
    }
  }
  return result;
}

bool is_refinement(const PartialOrder& coarse, const PartialOrder& fine) {
  if (coarse.size() != fine.size()) return false;
  for (State u = 0; u < coarse.size(); ++u) {
    auto c = coarse.successors(u);
    auto f = fine.successors(u);
    for (std::size_t w = 0; w < c.size(); ++w) {
      if (c[w] & ~f[w]) return false;
    }
  }
  return true;
}

}  // namespace colex
