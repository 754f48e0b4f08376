#include "colex/colex.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iterator>
#include <new>
#include <sstream>
#include <string>

#include "colex/automaton.hpp"
#include "colex/bwt.hpp"
#include "colex/chains.hpp"
#include "colex/error.hpp"
#include "colex/fm_index.hpp"
#include "colex/order.hpp"
#include "colex/powerset.hpp"

struct colex_automaton {
  colex::Automaton value;
};
struct colex_order {
  colex::PartialOrder value;
};
struct colex_chains {
  colex::ChainDecomposition value;
};
struct colex_bwt {
  colex::Bwt value;
};
struct colex_index {
  colex::FmIndex value;
};

namespace {

thread_local std::string last_error;

colex_status fail(colex_status status, const std::string& message) {
  last_error = message;
  return status;
}

colex_status status_of(colex::ErrorKind kind) {
  switch (kind) {
    case colex::ErrorKind::kInvalidArgument: return COLEX_ERR_INVALID_ARGUMENT;
    case colex::ErrorKind::kParse: return COLEX_ERR_PARSE;
    case colex::ErrorKind::kPrecondition: return COLEX_ERR_PRECONDITION;
    case colex::ErrorKind::kMalformed: return COLEX_ERR_MALFORMED;
    case colex::ErrorKind::kIo: return COLEX_ERR_IO;
  }
  return COLEX_ERR_INTERNAL;
}

// Runs `body`, translating exceptions into status codes.
template <typename F>
colex_status guard(F&& body) {
  try {
    body();
    last_error.clear();
    return COLEX_OK;
  } catch (const colex::Error& e) {
    return fail(status_of(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(COLEX_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(COLEX_ERR_INTERNAL, e.what());
  }
}

#define COLEX_REQUIRE(cond)                                                  \
  do {                                                                       \
    if (!(cond)) {                                                           \
      return fail(COLEX_ERR_INVALID_ARGUMENT, "null argument: " #cond);      \
    }                                                                        \
  } while (0)

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

// Characters outside the alphabet map to sigma, a symbol no edge carries.
std::vector<colex::Symbol> to_symbols(const std::string& alphabet, const char* word) {
  std::vector<colex::Symbol> symbols;
  for (const char* c = word; *c; ++c) {
    auto pos = alphabet.find(*c);
    symbols.push_back(static_cast<colex::Symbol>(pos == std::string::npos ? alphabet.size() : pos));
  }
  return symbols;
}

const char* assumption_tag(colex::Assumption a) {
  switch (a) {
    case colex::Assumption::kInputConsistent: return "(i)";
    case colex::Assumption::kReachable: return "(ii)";
    case colex::Assumption::kStartWithoutInEdges: return "(iii)";
    case colex::Assumption::kCoReachable: return "(iv)";
  }
  return "?";
}

// A normalized DFA: the underlying order can break ties between chains.
bool is_normalized_dfa(const colex::Automaton& a) {
  if (!a.is_deterministic()) return false;
  return colex::validate(a).ok();
}

}  // namespace

extern "C" {

const char* colex_last_error(void) { return last_error.c_str(); }

const char* colex_status_name(colex_status status) {
  switch (status) {
    case COLEX_OK: return "ok";
    case COLEX_ERR_INVALID_ARGUMENT: return "invalid argument";
    case COLEX_ERR_PARSE: return "parse error";
    case COLEX_ERR_PRECONDITION: return "precondition violated";
    case COLEX_ERR_MALFORMED: return "malformed data";
    case COLEX_ERR_IO: return "i/o error";
    case COLEX_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void colex_free(void* ptr) { std::free(ptr); }

colex_status colex_automaton_parse(const char* text, size_t length,
                                   colex_automaton** out) {
  COLEX_REQUIRE(text && out);
  *out = nullptr;
  return guard([&] {
    *out = new colex_automaton{colex::parse_automaton(std::string_view(text, length))};
  });
}

colex_status colex_automaton_load(const char* path, colex_automaton** out) {
  COLEX_REQUIRE(path && out);
  *out = nullptr;
  return guard([&] { *out = new colex_automaton{colex::load_automaton(path)}; });
}

void colex_automaton_destroy(colex_automaton* a) { delete a; }

colex_status colex_automaton_to_text(const colex_automaton* a, char** out) {
  COLEX_REQUIRE(a && out);
  *out = nullptr;
  return guard([&] { *out = copy_string(colex::to_text(a->value)); });
}

size_t colex_automaton_num_states(const colex_automaton* a) {
  return a ? a->value.num_states() : 0;
}
size_t colex_automaton_num_edges(const colex_automaton* a) {
  return a ? a->value.num_edges() : 0;
}
size_t colex_automaton_sigma(const colex_automaton* a) {
  return a ? a->value.sigma() : 0;
}
int colex_automaton_is_deterministic(const colex_automaton* a) {
  return a && a->value.is_deterministic();
}

colex_status colex_automaton_normalize(const colex_automaton* a,
                                       colex_automaton** out,
                                       int* empty_language) {
  COLEX_REQUIRE(a && out);
  *out = nullptr;
  return guard([&] {
    colex::NormalizeResult r = colex::normalize(a->value);
    if (empty_language) *empty_language = r.empty_language;
    *out = new colex_automaton{std::move(r.automaton)};
  });
}

colex_status colex_automaton_validate(const colex_automaton* a, char** report,
                                      int* ok) {
  COLEX_REQUIRE(a && report && ok);
  return guard([&] {
    colex::ValidationReport r = colex::validate(a->value);
    std::ostringstream text;
    for (const auto& v : r.violations) {
      text << "violation " << assumption_tag(v.assumption) << " state " << v.state
           << ": " << v.message << '\n';
    }
    *report = copy_string(text.str());
    *ok = r.ok();
  });
}

colex_status colex_automaton_accepts(const colex_automaton* a, const char* word,
                                     int* accepted) {
  COLEX_REQUIRE(a && word && accepted);
  return guard([&] {
    *accepted = colex::accepts(a->value, to_symbols(a->value.alphabet(), word));
  });
}

colex_status colex_automaton_count_reached(const colex_automaton* a,
                                           const char* word, size_t* count) {
  COLEX_REQUIRE(a && word && count);
  return guard([&] {
    *count = colex::states_reached(a->value, to_symbols(a->value.alphabet(), word)).size();
  });
}

colex_status colex_order_maximal(const colex_automaton* a, colex_order** out) {
  COLEX_REQUIRE(a && out);
  *out = nullptr;
  return guard([&] { *out = new colex_order{colex::maximal_colex_order_dfa(a->value)}; });
}

colex_status colex_order_label_only(const colex_automaton* a, colex_order** out) {
  COLEX_REQUIRE(a && out);
  *out = nullptr;
  return guard([&] { *out = new colex_order{colex::label_only_order(a->value)}; });
}

colex_status colex_order_parse(const char* text, size_t length,
                               const colex_automaton* a, colex_order** out) {
  COLEX_REQUIRE(text && a && out);
  *out = nullptr;
  return guard([&] {
    *out = new colex_order{
        colex::parse_order(std::string_view(text, length), a->value.num_states())};
  });
}

void colex_order_destroy(colex_order* o) { delete o; }

colex_status colex_order_verify(const colex_automaton* a, const colex_order* o,
                                char** report, int* ok) {
  COLEX_REQUIRE(a && o && report && ok);
  return guard([&] {
    colex::ColexReport r = colex::verify_colex(a->value, o->value);
    std::string text;
    for (const auto& v : r.violations) text += v.describe() + '\n';
    if (r.truncated) text += "(further violations omitted)\n";
    *report = copy_string(text);
    *ok = r.ok();
  });
}

colex_status colex_order_width(const colex_order* o, size_t* width) {
  COLEX_REQUIRE(o && width);
  return guard([&] { *width = colex::width(o->value); });
}

colex_status colex_order_to_text(const colex_order* o, char** out) {
  COLEX_REQUIRE(o && out);
  *out = nullptr;
  return guard([&] {
    *out = copy_string(colex::order_to_text(o->value, colex::width(o->value)));
  });
}

colex_status colex_chains_compute(const colex_automaton* a, const colex_order* o,
                                  colex_chains** out) {
  COLEX_REQUIRE(a && o && out);
  *out = nullptr;
  return guard([&] {
    if (o->value.size() != a->value.num_states()) {
      throw colex::Error(colex::ErrorKind::kInvalidArgument,
                         "order size differs from the automaton");
    }
    std::optional<colex::TotalOrder> reference;
    if (is_normalized_dfa(a->value)) reference = colex::underlying_order_dfa(a->value);
    *out = new colex_chains{colex::min_chain_decomposition(
        o->value, a->value.start(), reference ? &*reference : nullptr)};
  });
}

colex_status colex_chains_parse(const char* text, size_t length,
                                const colex_automaton* a, const colex_order* o,
                                colex_chains** out) {
  COLEX_REQUIRE(text && a && o && out);
  *out = nullptr;
  return guard([&] {
    *out = new colex_chains{colex::parse_chains(std::string_view(text, length),
                                                o->value, a->value.start())};
  });
}

void colex_chains_destroy(colex_chains* d) { delete d; }

size_t colex_chains_count(const colex_chains* d) { return d ? d->value.p() : 0; }

colex_status colex_chains_to_text(const colex_chains* d, char** out) {
  COLEX_REQUIRE(d && out);
  *out = nullptr;
  return guard([&] { *out = copy_string(colex::chains_to_text(d->value)); });
}

colex_status colex_bwt_build(const colex_automaton* a, const colex_order* o,
                             const colex_chains* d, colex_bwt** out) {
  COLEX_REQUIRE(a && o && d && out);
  *out = nullptr;
  return guard([&] {
    *out = new colex_bwt{colex::build_bwt(a->value, o->value, d->value)};
  });
}

void colex_bwt_destroy(colex_bwt* b) { delete b; }

colex_status colex_bwt_to_text(const colex_bwt* b, char** out) {
  COLEX_REQUIRE(b && out);
  *out = nullptr;
  return guard([&] { *out = copy_string(colex::bwt_to_text(b->value)); });
}

colex_status colex_bwt_budget(const colex_bwt* b, uint64_t* nfa_bits,
                              uint64_t* dfa_bits) {
  COLEX_REQUIRE(b);
  return guard([&] {
    colex::BitBudget budget = colex::bit_budget(b->value);
    if (nfa_bits) *nfa_bits = budget.nfa_bits;
    if (dfa_bits) *dfa_bits = budget.dfa_bits;
  });
}

colex_status colex_bwt_encode(const colex_bwt* b, colex_bwt_kind kind,
                              uint8_t** bytes, size_t* length,
                              uint64_t* payload_bits) {
  COLEX_REQUIRE(b && bytes && length);
  *bytes = nullptr;
  if (kind != COLEX_BWT_NFA && kind != COLEX_BWT_DFA) {
    return fail(COLEX_ERR_INVALID_ARGUMENT, "unknown stream kind");
  }
  return guard([&] {
    colex::EncodedBwt e = kind == COLEX_BWT_NFA ? colex::encode_nfa(b->value)
                                                : colex::encode_dfa(b->value);
    auto* buffer = static_cast<uint8_t*>(std::malloc(e.bytes.empty() ? 1 : e.bytes.size()));
    if (!buffer) throw std::bad_alloc();
    std::memcpy(buffer, e.bytes.data(), e.bytes.size());
    *bytes = buffer;
    *length = e.bytes.size();
    if (payload_bits) *payload_bits = e.payload_bits;
  });
}

colex_status colex_bwt_decode(const uint8_t* bytes, size_t length,
                              colex_automaton** out) {
  COLEX_REQUIRE(bytes && out);
  *out = nullptr;
  return guard([&] {
    *out = new colex_automaton{colex::bwt_to_automaton(
        colex::decode_bwt(std::span<const std::uint8_t>(bytes, length)))};
  });
}

colex_status colex_index_build(const colex_bwt* b, colex_index** out) {
  COLEX_REQUIRE(b && out);
  *out = nullptr;
  return guard([&] { *out = new colex_index{colex::FmIndex(b->value)}; });
}

void colex_index_destroy(colex_index* ix) { delete ix; }

colex_status colex_index_save(const colex_index* ix, const char* path) {
  COLEX_REQUIRE(ix && path);
  return guard([&] {
    std::vector<std::uint8_t> bytes = ix->value.serialize();
    std::ofstream file(path, std::ios::binary);
    file.write(reinterpret_cast<const char*>(bytes.data()),
               static_cast<std::streamsize>(bytes.size()));
    if (!file) {
      throw colex::Error(colex::ErrorKind::kIo, std::string("cannot write ") + path);
    }
  });
}

colex_status colex_index_load(const char* path, colex_index** out) {
  COLEX_REQUIRE(path && out);
  *out = nullptr;
  return guard([&] {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw colex::Error(colex::ErrorKind::kIo, std::string("cannot open ") + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(file)),
                                    std::istreambuf_iterator<char>());
    *out = new colex_index{colex::FmIndex::deserialize(bytes)};
  });
}

size_t colex_index_num_chains(const colex_index* ix) { return ix ? ix->value.p() : 0; }

colex_status colex_index_space_report(const colex_index* ix, colex_index_space* out) {
  COLEX_REQUIRE(ix && out);
  return guard([&] {
    colex::FmIndex::Space s = ix->value.space();
    out->core_bits = s.core();
    out->degree_map_bits = s.degree_map;
    out->acceleration_bits = s.acceleration;
  });
}

colex_status colex_index_query(const colex_index* ix, const char* word,
                               size_t* count, int* member, uint32_t* ranges) {
  COLEX_REQUIRE(ix && word);
  return guard([&] {
    colex::IntervalSet set = ix->value.locate(to_symbols(ix->value.alphabet(), word));
    if (count) *count = colex::interval_size(set);
    if (member) *member = ix->value.contains_final(set);
    if (ranges) {
      for (std::size_t j = 0; j < set.size(); ++j) {
        ranges[2 * j] = set[j].begin;
        ranges[2 * j + 1] = set[j].end;
      }
    }
  });
}

colex_status colex_determinize(const colex_automaton* a, colex_automaton** dfa,
                               colex_powerset_stats* stats) {
  COLEX_REQUIRE(a);
  return guard([&] {
    colex::PowersetResult r = colex::determinize(a->value);
    if (stats) *stats = {r.stats.states, r.stats.edges, r.stats.edges_traversed};
    if (dfa) *dfa = new colex_automaton{std::move(r.dfa)};
  });
}

colex_status colex_minimize(const colex_automaton* dfa, colex_automaton** out) {
  COLEX_REQUIRE(dfa && out);
  *out = nullptr;
  return guard([&] { *out = new colex_automaton{colex::minimize_dfa(dfa->value)}; });
}

colex_status colex_powerset_bound(size_t p, size_t n, uint64_t* bound) {
  COLEX_REQUIRE(bound);
  return guard([&] { *bound = colex::powerset_bound(p, n); });
}

colex_status colex_equivalent(const colex_automaton* a, const colex_automaton* b,
                              int* equivalent) {
  COLEX_REQUIRE(a && b && equivalent);
  return guard([&] { *equivalent = colex::equivalent(a->value, b->value); });
}

colex_status colex_member_via_dfa(const colex_automaton* a, const char* word,
                                  int* member) {
  COLEX_REQUIRE(a && word && member);
  return guard([&] {
    *member = colex::member_via_dfa(a->value, to_symbols(a->value.alphabet(), word));
  });
}

}  // extern "C"
