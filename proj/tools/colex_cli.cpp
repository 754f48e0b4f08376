// Command-line front end. Talks to the library only through colex.h.
//
// Exit codes: 0 success, 1 domain error (bad input for the operation,
// failed validation), 2 usage error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "colex/colex.h"

namespace {

constexpr int kDomainError = 1;

template <typename T, void (*Destroy)(T*)>
struct Deleter {
  void operator()(T* p) const { Destroy(p); }
};
using AutomatonPtr =
    std::unique_ptr<colex_automaton, Deleter<colex_automaton, colex_automaton_destroy>>;
using OrderPtr = std::unique_ptr<colex_order, Deleter<colex_order, colex_order_destroy>>;
using ChainsPtr = std::unique_ptr<colex_chains, Deleter<colex_chains, colex_chains_destroy>>;
using BwtPtr = std::unique_ptr<colex_bwt, Deleter<colex_bwt, colex_bwt_destroy>>;
using IndexPtr = std::unique_ptr<colex_index, Deleter<colex_index, colex_index_destroy>>;

// Raised on a failed library call; carries the message for stderr.
struct Failure {
  std::string message;
};

void check(colex_status status, const std::string& what) {
  if (status != COLEX_OK) {
    throw Failure{what + ": " + colex_status_name(status) + ": " + colex_last_error()};
  }
}

std::string take(char* s) {
  std::string out(s);
  colex_free(s);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{"cannot open " + path};
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const void* data, std::size_t size) {
  std::ofstream out(path, std::ios::binary);
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
  if (!out) throw Failure{"cannot write " + path};
}

AutomatonPtr load(const std::string& path) {
  colex_automaton* a = nullptr;
  check(colex_automaton_load(path.c_str(), &a), path);
  return AutomatonPtr(a);
}

// Index-building commands need assumptions (i)-(iv).
AutomatonPtr load_normalized(const std::string& path) {
  AutomatonPtr a = load(path);
  char* report = nullptr;
  int ok = 0;
  check(colex_automaton_validate(a.get(), &report, &ok), "validate");
  std::string text = take(report);
  if (!ok) {
    throw Failure{path + " is not normalized (run `colex normalize` first):\n" + text};
  }
  return a;
}

struct OrderOptions {
  std::string kind = "maximal";
  std::string file;
  std::string chains_file;
};

void add_order_options(CLI::App* cmd, OrderOptions& opts) {
  cmd->add_option("--order", opts.kind, "Order to use: maximal (DFA only) or label")
      ->check(CLI::IsMember({"maximal", "label"}));
  cmd->add_option("--order-file", opts.file, "Read `lt u v` pairs instead")
      ->check(CLI::ExistingFile);
}

void add_chain_option(CLI::App* cmd, OrderOptions& opts) {
  cmd->add_option("--chains", opts.chains_file, "Use this chain decomposition")
      ->check(CLI::ExistingFile);
}

OrderPtr make_order(const colex_automaton* a, const OrderOptions& opts, bool verify) {
  colex_order* o = nullptr;
  if (!opts.file.empty()) {
    std::string text = read_file(opts.file);
    check(colex_order_parse(text.data(), text.size(), a, &o), opts.file);
  } else if (opts.kind == "label") {
    check(colex_order_label_only(a, &o), "label order");
  } else {
    if (!colex_automaton_is_deterministic(a)) {
      throw Failure{"the maximal order is only computed for DFAs; use --order label "
                    "or --order-file"};
    }
    check(colex_order_maximal(a, &o), "maximal order");
  }
  OrderPtr order(o);
  if (verify) {
    char* report = nullptr;
    int ok = 0;
    check(colex_order_verify(a, order.get(), &report, &ok), "verify");
    std::string text = take(report);
    if (!ok) throw Failure{"order is not co-lexicographic:\n" + text};
  }
  return order;
}

ChainsPtr make_chains(const colex_automaton* a, const colex_order* o,
                      const OrderOptions& opts) {
  colex_chains* d = nullptr;
  if (!opts.chains_file.empty()) {
    std::string text = read_file(opts.chains_file);
    check(colex_chains_parse(text.data(), text.size(), a, o, &d), opts.chains_file);
  } else {
    check(colex_chains_compute(a, o, &d), "chains");
  }
  return ChainsPtr(d);
}

BwtPtr make_bwt(const colex_automaton* a, const OrderOptions& opts) {
  OrderPtr o = make_order(a, opts, false);
  ChainsPtr d = make_chains(a, o.get(), opts);
  colex_bwt* b = nullptr;
  check(colex_bwt_build(a, o.get(), d.get(), &b), "bwt");
  return BwtPtr(b);
}

const char* boolean(int v) { return v ? "true" : "false"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Co-lexicographic sorting, BWT compression and indexing of finite automata"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  std::string input, output, second, word;
  OrderOptions opts;

  auto* normalize = app.add_subcommand("normalize", "Enforce the standing assumptions");
  normalize->add_option("input", input)->required()->check(CLI::ExistingFile);
  normalize->add_option("-o,--output", output, "Write here instead of stdout");

  auto* validate = app.add_subcommand("validate", "Report violated assumptions");
  validate->add_option("input", input)->required()->check(CLI::ExistingFile);

  auto* order = app.add_subcommand("order", "Print a co-lex order and its width");
  order->add_option("input", input)->required()->check(CLI::ExistingFile);
  add_order_options(order, opts);

  auto* chains = app.add_subcommand("chains", "Print a minimum chain decomposition");
  chains->add_option("input", input)->required()->check(CLI::ExistingFile);
  add_order_options(chains, opts);
  add_chain_option(chains, opts);

  std::string format = "text";
  std::string kind;
  auto* bwt = app.add_subcommand("bwt", "Print or encode the BWT");
  bwt->add_option("input", input)->required()->check(CLI::ExistingFile);
  bwt->add_option("--format", format, "text or binary")
      ->check(CLI::IsMember({"text", "binary"}));
  bwt->add_option("--kind", kind, "Binary stream kind: nfa or dfa (default: dfa for DFAs)")
      ->check(CLI::IsMember({"nfa", "dfa"}));
  bwt->add_option("-o,--output", output, "Binary output file");
  add_order_options(bwt, opts);
  add_chain_option(bwt, opts);

  auto* decode = app.add_subcommand("decode", "Rebuild an automaton from a binary BWT");
  decode->add_option("input", input)->required()->check(CLI::ExistingFile);

  auto* index = app.add_subcommand("index", "Index operations");
  index->require_subcommand(1);
  auto* index_build = index->add_subcommand("build", "Build an FM-index file");
  index_build->add_option("input", input)->required()->check(CLI::ExistingFile);
  index_build->add_option("-o,--output", output)->required();
  add_order_options(index_build, opts);
  add_chain_option(index_build, opts);

  auto* query = app.add_subcommand("query", "Count states reached by a pattern");
  query->add_option("index", input)->required()->check(CLI::ExistingFile);
  query->add_option("pattern", word, "Pattern (empty string for the empty word)")
      ->required();

  auto* determinize = app.add_subcommand("determinize", "Powerset construction");
  determinize->add_option("input", input)->required()->check(CLI::ExistingFile);
  determinize->add_option("-o,--output", output, "Write the DFA here");
  add_order_options(determinize, opts);

  auto* equiv = app.add_subcommand("equiv", "Language equivalence");
  equiv->add_option("first", input)->required()->check(CLI::ExistingFile);
  equiv->add_option("second", second)->required()->check(CLI::ExistingFile);

  auto* member = app.add_subcommand("member", "Membership via determinization");
  member->add_option("input", input)->required()->check(CLI::ExistingFile);
  member->add_option("word", word)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help exits 0; every other parse failure is a usage error.
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*normalize) {
      AutomatonPtr a = load(input);
      colex_automaton* n = nullptr;
      int empty = 0;
      check(colex_automaton_normalize(a.get(), &n, &empty), "normalize");
      AutomatonPtr normalized(n);
      char* text = nullptr;
      check(colex_automaton_to_text(normalized.get(), &text), "normalize");
      std::string body = take(text);
      if (empty) std::cerr << "note: the language is empty\n";
      if (output.empty()) {
        std::cout << body;
      } else {
        write_file(output, body.data(), body.size());
      }
    } else if (*validate) {
      AutomatonPtr a = load(input);
      char* report = nullptr;
      int ok = 0;
      check(colex_automaton_validate(a.get(), &report, &ok), "validate");
      std::cout << take(report) << "deterministic="
                << boolean(colex_automaton_is_deterministic(a.get())) << '\n'
                << "valid=" << boolean(ok) << '\n';
      return ok ? 0 : kDomainError;
    } else if (*order) {
      AutomatonPtr a = load_normalized(input);
      OrderPtr o = make_order(a.get(), opts, true);
      char* text = nullptr;
      check(colex_order_to_text(o.get(), &text), "order");
      std::cout << take(text);
    } else if (*chains) {
      AutomatonPtr a = load_normalized(input);
      OrderPtr o = make_order(a.get(), opts, true);
      ChainsPtr d = make_chains(a.get(), o.get(), opts);
      char* text = nullptr;
      check(colex_chains_to_text(d.get(), &text), "chains");
      std::cout << take(text);
    } else if (*bwt) {
      AutomatonPtr a = load_normalized(input);
      BwtPtr b = make_bwt(a.get(), opts);
      if (format == "text") {
        char* text = nullptr;
        check(colex_bwt_to_text(b.get(), &text), "bwt");
        std::cout << take(text);
      } else {
        if (output.empty()) throw Failure{"--format binary needs -o <file>"};
        const bool dfa = kind.empty() ? colex_automaton_is_deterministic(a.get()) != 0
                                      : kind == "dfa";
        std::uint8_t* bytes = nullptr;
        std::size_t length = 0;
        std::uint64_t payload = 0, nfa_budget = 0, dfa_budget = 0;
        check(colex_bwt_encode(b.get(), dfa ? COLEX_BWT_DFA : COLEX_BWT_NFA, &bytes,
                               &length, &payload),
              "encode");
        std::unique_ptr<std::uint8_t, void (*)(void*)> owned(bytes, colex_free);
        write_file(output, bytes, length);
        check(colex_bwt_budget(b.get(), &nfa_budget, &dfa_budget), "budget");
        std::cout << "kind=" << (dfa ? "dfa" : "nfa") << " bytes=" << length
                  << " payload_bits=" << payload
                  << " budget_bits=" << (dfa ? dfa_budget : nfa_budget) << '\n';
      }
    } else if (*decode) {
      std::string bytes = read_file(input);
      colex_automaton* a = nullptr;
      check(colex_bwt_decode(reinterpret_cast<const std::uint8_t*>(bytes.data()),
                             bytes.size(), &a),
            input);
      AutomatonPtr decoded(a);
      char* text = nullptr;
      check(colex_automaton_to_text(decoded.get(), &text), "decode");
      std::cout << take(text);
    } else if (*index_build) {
      AutomatonPtr a = load_normalized(input);
      BwtPtr b = make_bwt(a.get(), opts);
      colex_index* ix = nullptr;
      check(colex_index_build(b.get(), &ix), "index");
      IndexPtr owned(ix);
      check(colex_index_save(ix, output.c_str()), output);
      colex_index_space space{};
      check(colex_index_space_report(ix, &space), "index");
      std::cout << "states=" << colex_automaton_num_states(a.get())
                << " edges=" << colex_automaton_num_edges(a.get())
                << " p=" << colex_index_num_chains(ix)
                << " core_bits=" << space.core_bits
                << " degree_map_bits=" << space.degree_map_bits << '\n';
    } else if (*query) {
      colex_index* ix = nullptr;
      check(colex_index_load(input.c_str(), &ix), input);
      IndexPtr owned(ix);
      std::vector<std::uint32_t> ranges(2 * colex_index_num_chains(ix));
      std::size_t count = 0;
      int is_member = 0;
      check(colex_index_query(ix, word.c_str(), &count, &is_member, ranges.data()),
            "query");
      std::cout << "count=" << count << " member=" << boolean(is_member) << '\n';
      for (std::size_t j = 0; j < ranges.size() / 2; ++j) {
        std::cout << "chain " << j + 1 << ": [" << ranges[2 * j] << ','
                  << ranges[2 * j + 1] << ")\n";
      }
    } else if (*determinize) {
      AutomatonPtr a = load_normalized(input);
      OrderPtr o = make_order(a.get(), opts, true);
      std::size_t p = 0;
      check(colex_order_width(o.get(), &p), "width");
      colex_automaton* d = nullptr;
      colex_powerset_stats stats{};
      check(colex_determinize(a.get(), &d, &stats), "determinize");
      AutomatonPtr dfa(d);
      std::uint64_t bound = 0;
      check(colex_powerset_bound(p, colex_automaton_num_states(a.get()), &bound), "bound");
      if (!output.empty()) {
        char* text = nullptr;
        check(colex_automaton_to_text(dfa.get(), &text), "determinize");
        std::string body = take(text);
        write_file(output, body.data(), body.size());
      }
      std::cout << "states=" << stats.states << " edges=" << stats.edges
                << " edges_traversed=" << stats.edges_traversed << " p=" << p
                << " bound=" << bound << " within_bound=" << boolean(stats.states <= bound)
                << '\n';
    } else if (*equiv) {
      AutomatonPtr a = load(input);
      AutomatonPtr b = load(second);
      int eq = 0;
      check(colex_equivalent(a.get(), b.get(), &eq), "equiv");
      std::cout << "equivalent=" << boolean(eq) << '\n';
    } else if (*member) {
      AutomatonPtr a = load(input);
      int m = 0;
      check(colex_member_via_dfa(a.get(), word.c_str(), &m), "member");
      std::cout << "member=" << boolean(m) << '\n';
    }
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << '\n';
    return kDomainError;
  }
  return 0;
}
