#include "colex/automaton.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "colex/error.hpp"

namespace colex {

namespace {

constexpr std::string_view kDefaultNames =
    "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";

bool out_less(const Edge& x, const Edge& y) {
  return std::tie(x.source, x.label, x.target) <
         std::tie(y.source, y.label, y.target);
}

bool in_less(const Edge& x, const Edge& y) {
  return std::tie(x.target, x.source, x.label) <
         std::tie(y.target, y.source, y.label);
}

std::vector<std::size_t> offsets_by(const std::vector<Edge>& edges,
                                    std::size_t n, bool by_source) {
  std::vector<std::size_t> offsets(n + 1, 0);
  for (const Edge& e : edges) ++offsets[(by_source ? e.source : e.target) + 1];
  for (std::size_t i = 0; i < n; ++i) offsets[i + 1] += offsets[i];
  return offsets;
}

}  // namespace

std::string default_alphabet(std::size_t sigma) {
  if (sigma > kDefaultNames.size()) {
    throw Error(ErrorKind::kInvalidArgument,
                "alphabet of " + std::to_string(sigma) +
                    " symbols needs explicit names");
  }
  return std::string(kDefaultNames.substr(0, sigma));
}

Automaton::Automaton() : final_mask_(1, false), out_offsets_(2, 0),
                         in_offsets_(2, 0), lambda_(1, kStartLabel) {}

Automaton::Automaton(std::size_t num_states, std::size_t sigma, State start,
                     std::vector<State> finals, std::vector<Edge> edges,
                     std::string alphabet)
    : num_states_(num_states), sigma_(sigma), start_(start),
      finals_(std::move(finals)), out_edges_(std::move(edges)),
      alphabet_(std::move(alphabet)) {
  if (num_states_ == 0) {
    throw Error(ErrorKind::kInvalidArgument, "automaton needs a state");
  }
  auto check_state = [&](State u, const char* what) {
    if (u >= num_states_) {
      throw Error(ErrorKind::kInvalidArgument,
                  std::string(what) + " state " + std::to_string(u) +
                      " out of range [0, " + std::to_string(num_states_) +
                      ")");
    }
  };
  check_state(start_, "start");

  if (alphabet_.empty()) alphabet_ = default_alphabet(sigma_);
  if (alphabet_.size() != sigma_) {
    throw Error(ErrorKind::kInvalidArgument,
                "alphabet names " + std::to_string(alphabet_.size()) +
                    " symbols, expected " + std::to_string(sigma_));
  }
  for (std::size_t i = 0; i < alphabet_.size(); ++i) {
    const char c = alphabet_[i];
    if (c <= ' ' || c == '#' || c > '~' ||
        alphabet_.find(c, i + 1) != std::string::npos) {
      throw Error(ErrorKind::kInvalidArgument,
                  std::string("bad alphabet character '") + c + "'");
    }
  }

  final_mask_.assign(num_states_, false);
  for (State f : finals_) {
    check_state(f, "final");
    final_mask_[f] = true;
  }
  finals_.clear();
  for (State u = 0; u < num_states_; ++u) {
    if (final_mask_[u]) finals_.push_back(u);
  }

  for (const Edge& e : out_edges_) {
    check_state(e.source, "edge source");
    check_state(e.target, "edge target");
    if (e.label < 0 || static_cast<std::size_t>(e.label) >= sigma_) {
      throw Error(ErrorKind::kInvalidArgument,
                  "edge symbol " + std::to_string(e.label) +
                      " outside alphabet of size " + std::to_string(sigma_));
    }
  }
  std::sort(out_edges_.begin(), out_edges_.end(), out_less);
  auto dup = std::adjacent_find(out_edges_.begin(), out_edges_.end());
  if (dup != out_edges_.end()) {
    throw Error(ErrorKind::kInvalidArgument,
                "duplicate edge " + std::to_string(dup->source) + " -> " +
                    std::to_string(dup->target) + " on symbol " +
                    std::to_string(dup->label));
  }
  out_offsets_ = offsets_by(out_edges_, num_states_, true);

  in_edges_ = out_edges_;
  std::sort(in_edges_.begin(), in_edges_.end(), in_less);
  in_offsets_ = offsets_by(in_edges_, num_states_, false);

  for (std::size_t i = 1; i < out_edges_.size(); ++i) {
    const Edge& a = out_edges_[i - 1];
    const Edge& b = out_edges_[i];
    if (a.source == b.source && a.label == b.label) deterministic_ = false;
  }

  lambda_.assign(num_states_, kStartLabel);
  for (State v = 0; v < num_states_; ++v) {
    auto in = in_edges(v);
    if (in.empty()) continue;
    lambda_[v] = in.front().label;
    for (const Edge& e : in) {
      if (e.label != lambda_[v]) {
        lambda_[v] = kMixedLabel;
        input_consistent_ = false;
        break;
      }
    }
  }
}

std::span<const Edge> Automaton::out_edges(State u) const {
  return std::span<const Edge>(out_edges_).subspan(
      out_offsets_[u], out_offsets_[u + 1] - out_offsets_[u]);
}

std::span<const Edge> Automaton::in_edges(State v) const {
  return std::span<const Edge>(in_edges_).subspan(
      in_offsets_[v], in_offsets_[v + 1] - in_offsets_[v]);
}

std::optional<std::vector<Symbol>> Automaton::encode_word(
    std::string_view word) const {
  std::vector<Symbol> out;
  out.reserve(word.size());
  for (char c : word) {
    auto pos = alphabet_.find(c);
    if (pos == std::string::npos) return std::nullopt;
    out.push_back(static_cast<Symbol>(pos));
  }
  return out;
}

std::string Automaton::decode_word(std::span<const Symbol> word) const {
  std::string out;
  for (Symbol c : word) {
    out.push_back(c >= 0 && static_cast<std::size_t>(c) < sigma_
                      ? alphabet_[c]
                      : '?');
  }
  return out;
}

bool operator==(const Automaton& a, const Automaton& b) {
  return a.num_states_ == b.num_states_ && a.sigma_ == b.sigma_ &&
         a.start_ == b.start_ && a.finals_ == b.finals_ &&
         a.out_edges_ == b.out_edges_ && a.alphabet_ == b.alphabet_;
}

// ---------------------------------------------------------------------------
// Text format

namespace {

class LineParser {
 public:
  LineParser(std::string_view line, std::size_t line_no)
      : line_(line), line_no_(line_no) {}

  bool next_token(std::string_view& token) {
    while (pos_ < line_.size() && is_space(line_[pos_])) ++pos_;
    if (pos_ >= line_.size()) return false;
    std::size_t begin = pos_;
    while (pos_ < line_.size() && !is_space(line_[pos_])) ++pos_;
    token = line_.substr(begin, pos_ - begin);
    return true;
  }

  std::uint64_t number() {
    std::string_view token;
    if (!next_token(token)) fail("expected a number");
    std::uint64_t value = 0;
    auto [ptr, ec] =
        std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
      fail("expected a number, got '" + std::string(token) + "'");
    }
    return value;
  }

  bool at_end() {
    while (pos_ < line_.size() && is_space(line_[pos_])) ++pos_;
    return pos_ >= line_.size();
  }

  void expect_end() {
    std::string_view token;
    if (next_token(token)) {
      fail("unexpected trailing token '" + std::string(token) + "'");
    }
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw Error(ErrorKind::kParse,
                "line " + std::to_string(line_no_) + ": " + message);
  }

 private:
  static bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\r';
  }

  std::string_view line_;
  std::size_t pos_ = 0;
  std::size_t line_no_;
};

}  // namespace

Automaton parse_automaton(std::string_view text) {
  bool have_header = false;
  bool have_start = false;
  bool have_finals = false;
  std::uint64_t n = 0, m = 0, sigma = 0;
  State start = 0;
  std::vector<State> finals;
  std::vector<Edge> edges;
  std::string alphabet;
  std::set<std::tuple<State, State, Symbol>> seen_edges;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;

    LineParser lp(line, line_no);
    std::string_view keyword;
    if (!lp.next_token(keyword) || keyword.starts_with("//")) continue;

    auto state_id = [&](const char* what) {
      std::uint64_t id = lp.number();
      if (id >= n) {
        lp.fail(std::string(what) + " state " + std::to_string(id) +
                " out of range [0, " + std::to_string(n) + ")");
      }
      return static_cast<State>(id);
    };

    if (!have_header) {
      if (keyword != "nfa") lp.fail("expected header 'nfa <n> <m> <sigma>'");
      n = lp.number();
      m = lp.number();
      sigma = lp.number();
      lp.expect_end();
      if (n == 0) lp.fail("automaton needs at least one state");
      if (n > UINT32_MAX) lp.fail("too many states");
      have_header = true;
    } else if (keyword == "alphabet") {
      if (!alphabet.empty()) lp.fail("duplicate alphabet line");
      std::string_view token;
      while (lp.next_token(token)) {
        if (token.size() != 1) {
          lp.fail("alphabet entries must be single characters");
        }
        alphabet.push_back(token[0]);
      }
      if (alphabet.size() != sigma) {
        lp.fail("alphabet lists " + std::to_string(alphabet.size()) +
                " symbols, header declares " + std::to_string(sigma));
      }
    } else if (keyword == "start") {
      if (have_start) lp.fail("duplicate start line");
      start = state_id("start");
      lp.expect_end();
      have_start = true;
    } else if (keyword == "finals") {
      if (have_finals) lp.fail("duplicate finals line");
      while (!lp.at_end()) finals.push_back(state_id("final"));
      have_finals = true;
    } else if (keyword == "edge") {
      if (edges.size() == m) lp.fail("more edges than declared");
      Edge e;
      e.source = state_id("edge source");
      e.target = state_id("edge target");
      std::uint64_t symbol = lp.number();
      if (symbol >= sigma) {
        lp.fail("symbol " + std::to_string(symbol) + " outside alphabet of " +
                std::to_string(sigma));
      }
      e.label = static_cast<Symbol>(symbol);
      lp.expect_end();
      if (!seen_edges.insert({e.source, e.target, e.label}).second) {
        lp.fail("duplicate edge");
      }
      edges.push_back(e);
    } else {
      lp.fail("unknown keyword '" + std::string(keyword) + "'");
    }
  }

  if (!have_header) throw Error(ErrorKind::kParse, "missing 'nfa' header");
  if (!have_start) throw Error(ErrorKind::kParse, "missing 'start' line");
  if (edges.size() != m) {
    throw Error(ErrorKind::kParse,
                "header declares " + std::to_string(m) + " edges, found " +
                    std::to_string(edges.size()));
  }
  try {
    return Automaton(n, sigma, start, std::move(finals), std::move(edges),
                     std::move(alphabet));
  } catch (const Error& e) {
    throw Error(ErrorKind::kParse, e.what());
  }
}

Automaton load_automaton(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_automaton(buffer.str());
}

std::string to_text(const Automaton& a) {
  std::ostringstream out;
  out << "nfa " << a.num_states() << ' ' << a.num_edges() << ' ' << a.sigma()
      << '\n';
  if (a.sigma() > 0) {
    out << "alphabet";
    for (char c : a.alphabet()) out << ' ' << c;
    out << '\n';
  }
  out << "start " << a.start() << '\n';
  out << "finals";
  for (State f : a.finals()) out << ' ' << f;
  out << '\n';
  for (const Edge& e : a.edges()) {
    out << "edge " << e.source << ' ' << e.target << ' ' << e.label << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Validation and normalization

bool ValidationReport::violates(Assumption assumption) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) {
                       return v.assumption == assumption;
                     });
}

namespace {

std::vector<bool> forward_reachable(const Automaton& a) {
  std::vector<bool> seen(a.num_states(), false);
  std::vector<State> stack{a.start()};
  seen[a.start()] = true;
  while (!stack.empty()) {
    State u = stack.back();
    stack.pop_back();
    for (const Edge& e : a.out_edges(u)) {
      if (!seen[e.target]) {
        seen[e.target] = true;
        stack.push_back(e.target);
      }
    }
  }
  return seen;
}

std::vector<bool> backward_reachable(const Automaton& a) {
  std::vector<bool> seen(a.num_states(), false);
  std::vector<State> stack;
  for (State f : a.finals()) {
    seen[f] = true;
    stack.push_back(f);
  }
  while (!stack.empty()) {
    State v = stack.back();
    stack.pop_back();
    for (const Edge& e : a.in_edges(v)) {
      if (!seen[e.source]) {
        seen[e.source] = true;
        stack.push_back(e.source);
      }
    }
  }
  return seen;
}

// Keeps the states flagged in `keep`, renumbered in increasing id order.
Automaton restrict_to(const Automaton& a, const std::vector<bool>& keep,
                      std::vector<State>& origin) {
  std::vector<State> new_id(a.num_states(), 0);
  std::vector<State> new_origin;
  for (State u = 0; u < a.num_states(); ++u) {
    if (keep[u]) {
      new_id[u] = static_cast<State>(new_origin.size());
      new_origin.push_back(origin[u]);
    }
  }
  std::vector<State> finals;
  for (State f : a.finals()) {
    if (keep[f]) finals.push_back(new_id[f]);
  }
  std::vector<Edge> edges;
  for (const Edge& e : a.edges()) {
    if (keep[e.source] && keep[e.target]) {
      edges.push_back({new_id[e.source], new_id[e.target], e.label});
    }
  }
  origin = std::move(new_origin);
  return Automaton(origin.size(), a.sigma(), new_id[a.start()],
                   std::move(finals), std::move(edges), a.alphabet());
}

// Removes unreachable then dead states until nothing changes. Returns false
// if the start itself is dead.
bool trim(Automaton& a, std::vector<State>& origin) {
  for (;;) {
    std::vector<bool> reach = forward_reachable(a);
    bool changed = std::find(reach.begin(), reach.end(), false) != reach.end();
    if (changed) a = restrict_to(a, reach, origin);

    std::vector<bool> live = backward_reachable(a);
    if (!live[a.start()]) return false;
    if (std::find(live.begin(), live.end(), false) != live.end()) {
      a = restrict_to(a, live, origin);
      changed = true;
    }
    if (!changed) return true;
  }
}

// One copy of every state per distinct incoming label, plus a fresh copy of
// the start reserved for the empty word.
Automaton split_input_labels(const Automaton& a, std::vector<State>& origin) {
  std::map<std::pair<State, Symbol>, State> copy_id;
  std::vector<std::vector<State>> copies(a.num_states());
  std::vector<State> new_origin;
  for (State v = 0; v < a.num_states(); ++v) {
    std::vector<Symbol> labels;
    if (v == a.start()) labels.push_back(kStartLabel);
    for (const Edge& e : a.in_edges(v)) labels.push_back(e.label);
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    for (Symbol c : labels) {
      State id = static_cast<State>(new_origin.size());
      copy_id[{v, c}] = id;
      copies[v].push_back(id);
      new_origin.push_back(origin[v]);
    }
  }
  std::vector<Edge> edges;
  for (const Edge& e : a.edges()) {
    State target = copy_id.at({e.target, e.label});
    for (State source : copies[e.source]) {
      edges.push_back({source, target, e.label});
    }
  }
  std::vector<State> finals;
  for (State f : a.finals()) {
    finals.insert(finals.end(), copies[f].begin(), copies[f].end());
  }
  origin = std::move(new_origin);
  return Automaton(origin.size(), a.sigma(), copy_id.at({a.start(), kStartLabel}),
                   std::move(finals), std::move(edges), a.alphabet());
}

}  // namespace

ValidationReport validate(const Automaton& a) {
  ValidationReport report;
  report.deterministic = a.is_deterministic();

  std::vector<bool> used(a.sigma(), false);
  for (const Edge& e : a.edges()) used[e.label] = true;
  report.alphabet_effective =
      std::find(used.begin(), used.end(), false) == used.end();

  for (State v = 0; v < a.num_states(); ++v) {
    if (a.incoming_label(v) == kMixedLabel) {
      report.violations.push_back(
          {Assumption::kInputConsistent, v,
           "state " + std::to_string(v) + " has incoming edges with "
           "different labels"});
    }
  }
  std::vector<bool> reach = forward_reachable(a);
  for (State v = 0; v < a.num_states(); ++v) {
    if (!reach[v]) {
      report.violations.push_back(
          {Assumption::kReachable, v,
           "state " + std::to_string(v) + " is unreachable from the start"});
    }
  }
  if (!a.in_edges(a.start()).empty()) {
    report.violations.push_back({Assumption::kStartWithoutInEdges, a.start(),
                                 "start state has incoming edges"});
  }
  std::vector<bool> live = backward_reachable(a);
  for (State v = 0; v < a.num_states(); ++v) {
    if (!live[v]) {
      report.violations.push_back(
          {Assumption::kCoReachable, v,
           "state " + std::to_string(v) + " cannot reach a final state"});
    }
  }
  return report;
}

NormalizeResult normalize(const Automaton& a) {
  NormalizeResult result;
  result.origin.resize(a.num_states());
  for (State u = 0; u < a.num_states(); ++u) result.origin[u] = u;
  Automaton current = a;

  bool live = trim(current, result.origin);
  if (live) {
    current = split_input_labels(current, result.origin);
    live = trim(current, result.origin);
  }
  if (!live) {
    State start_origin = result.origin[current.start()];
    result.automaton = Automaton(1, a.sigma(), 0, {}, {}, a.alphabet());
    result.origin = {start_origin};
    result.empty_language = true;
    return result;
  }
  result.automaton = std::move(current);
  return result;
}

std::vector<State> states_reached(const Automaton& a,
                                  std::span<const Symbol> word) {
  std::vector<bool> current(a.num_states(), false);
  current[a.start()] = true;
  for (Symbol c : word) {
    if (c < 0 || static_cast<std::size_t>(c) >= a.sigma()) return {};
    std::vector<bool> next(a.num_states(), false);
    bool any = false;
    for (State u = 0; u < a.num_states(); ++u) {
      if (!current[u]) continue;
      for (const Edge& e : a.out_edges(u)) {
        if (e.label == c) {
          next[e.target] = true;
          any = true;
        }
      }
    }
    if (!any) return {};
    current = std::move(next);
  }
  std::vector<State> out;
  for (State u = 0; u < a.num_states(); ++u) {
    if (current[u]) out.push_back(u);
  }
  return out;
}

bool accepts(const Automaton& a, std::span<const Symbol> word) {
  for (State u : states_reached(a, word)) {
    if (a.is_final(u)) return true;
  }
  return false;
}

}  // namespace colex
