/* C interface to the co-lex automaton library.
 *
 * Every object is an opaque handle released by its *_destroy function.
 * Functions return a colex_status; on failure colex_last_error() holds a
 * message for the calling thread. Strings and byte buffers returned through
 * out-parameters are owned by the caller and released with colex_free().
 * Pointer out-parameters are set to NULL when a call fails.
 *
 * Words are passed as NUL-terminated character strings over the
 * automaton's alphabet. A character outside the alphabet matches nothing.
 */
#ifndef COLEX_COLEX_H
#define COLEX_COLEX_H

#include <stddef.h>
#include <stdint.h>

#if defined(COLEX_BUILDING)
#define COLEX_API __attribute__((visibility("default")))
#else
#define COLEX_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum colex_status {
  COLEX_OK = 0,
  COLEX_ERR_INVALID_ARGUMENT = 1,
  COLEX_ERR_PARSE = 2,
  COLEX_ERR_PRECONDITION = 3, /* e.g. nondeterministic input to a DFA op */
  COLEX_ERR_MALFORMED = 4,    /* corrupt serialized data */
  COLEX_ERR_IO = 5,
  COLEX_ERR_INTERNAL = 6
} colex_status;

typedef struct colex_automaton colex_automaton;
typedef struct colex_order colex_order;
typedef struct colex_chains colex_chains;
typedef struct colex_bwt colex_bwt;
typedef struct colex_index colex_index;

COLEX_API const char* colex_last_error(void);
COLEX_API const char* colex_status_name(colex_status status);
COLEX_API void colex_free(void* ptr);

/* Automata */

COLEX_API colex_status colex_automaton_parse(const char* text, size_t length,
                                             colex_automaton** out);
COLEX_API colex_status colex_automaton_load(const char* path,
                                            colex_automaton** out);
COLEX_API void colex_automaton_destroy(colex_automaton* a);
COLEX_API colex_status colex_automaton_to_text(const colex_automaton* a,
                                               char** out);
COLEX_API size_t colex_automaton_num_states(const colex_automaton* a);
COLEX_API size_t colex_automaton_num_edges(const colex_automaton* a);
COLEX_API size_t colex_automaton_sigma(const colex_automaton* a);
COLEX_API int colex_automaton_is_deterministic(const colex_automaton* a);

/* Satisfies assumptions (i)-(iv). *empty_language (optional) is set to 1
 * when no final state is reachable. */
COLEX_API colex_status colex_automaton_normalize(const colex_automaton* a,
                                                 colex_automaton** out,
                                                 int* empty_language);

/* One line per violated assumption, e.g. "violation (iii) state 0: ...".
 * *ok is 1 when there are none. */
COLEX_API colex_status colex_automaton_validate(const colex_automaton* a,
                                                char** report, int* ok);

COLEX_API colex_status colex_automaton_accepts(const colex_automaton* a,
                                               const char* word, int* accepted);
COLEX_API colex_status colex_automaton_count_reached(const colex_automaton* a,
                                                     const char* word,
                                                     size_t* count);

/* Orders */

/* Unique maximal co-lex order; needs a normalized DFA. */
COLEX_API colex_status colex_order_maximal(const colex_automaton* a,
                                           colex_order** out);
COLEX_API colex_status colex_order_label_only(const colex_automaton* a,
                                              colex_order** out);
/* `lt <u> <v>` lines over the automaton's states. */
COLEX_API colex_status colex_order_parse(const char* text, size_t length,
                                         const colex_automaton* a,
                                         colex_order** out);
COLEX_API void colex_order_destroy(colex_order* o);
COLEX_API colex_status colex_order_verify(const colex_automaton* a,
                                          const colex_order* o, char** report,
                                          int* ok);
COLEX_API colex_status colex_order_width(const colex_order* o, size_t* width);
COLEX_API colex_status colex_order_to_text(const colex_order* o, char** out);

/* Chain decompositions. The start state's chain is chain 1. */

COLEX_API colex_status colex_chains_compute(const colex_automaton* a,
                                            const colex_order* o,
                                            colex_chains** out);
COLEX_API colex_status colex_chains_parse(const char* text, size_t length,
                                          const colex_automaton* a,
                                          const colex_order* o,
                                          colex_chains** out);
COLEX_API void colex_chains_destroy(colex_chains* d);
COLEX_API size_t colex_chains_count(const colex_chains* d);
COLEX_API colex_status colex_chains_to_text(const colex_chains* d, char** out);

/* BWT */

typedef enum colex_bwt_kind { COLEX_BWT_NFA = 0, COLEX_BWT_DFA = 1 } colex_bwt_kind;

COLEX_API colex_status colex_bwt_build(const colex_automaton* a,
                                       const colex_order* o,
                                       const colex_chains* d, colex_bwt** out);
COLEX_API void colex_bwt_destroy(colex_bwt* b);
COLEX_API colex_status colex_bwt_to_text(const colex_bwt* b, char** out);
COLEX_API colex_status colex_bwt_budget(const colex_bwt* b, uint64_t* nfa_bits,
                                        uint64_t* dfa_bits);
COLEX_API colex_status colex_bwt_encode(const colex_bwt* b, colex_bwt_kind kind,
                                        uint8_t** bytes, size_t* length,
                                        uint64_t* payload_bits);
/* Accepts either stream kind; states of the result are BWT positions. */
COLEX_API colex_status colex_bwt_decode(const uint8_t* bytes, size_t length,
                                        colex_automaton** out);

/* FM-index */

typedef struct colex_index_space {
  uint64_t core_bits;         /* OUT', 2 |E|-bit and 2 |Q|-bit sequences */
  uint64_t degree_map_bits;   /* present only when some state has no out-edge */
  uint64_t acceleration_bits; /* rank/select counters */
} colex_index_space;

COLEX_API colex_status colex_index_build(const colex_bwt* b, colex_index** out);
COLEX_API void colex_index_destroy(colex_index* ix);
COLEX_API colex_status colex_index_save(const colex_index* ix, const char* path);
COLEX_API colex_status colex_index_load(const char* path, colex_index** out);
COLEX_API size_t colex_index_num_chains(const colex_index* ix);
COLEX_API colex_status colex_index_space_report(const colex_index* ix,
                                                colex_index_space* out);
/* ranges (optional) receives 2 * num_chains entries: for chain i, the
 * 1-based half-open rank range [ranges[2i], ranges[2i+1]). */
COLEX_API colex_status colex_index_query(const colex_index* ix, const char* word,
                                         size_t* count, int* member,
                                         uint32_t* ranges);

/* Powerset construction */

typedef struct colex_powerset_stats {
  size_t states;
  size_t edges;
  size_t edges_traversed;
} colex_powerset_stats;

COLEX_API colex_status colex_determinize(const colex_automaton* a,
                                         colex_automaton** dfa,
                                         colex_powerset_stats* stats);
COLEX_API colex_status colex_minimize(const colex_automaton* dfa,
                                      colex_automaton** out);
/* 2^p (n - p + 1) - 1, saturating. */
COLEX_API colex_status colex_powerset_bound(size_t p, size_t n, uint64_t* bound);
COLEX_API colex_status colex_equivalent(const colex_automaton* a,
                                        const colex_automaton* b,
                                        int* equivalent);
COLEX_API colex_status colex_member_via_dfa(const colex_automaton* a,
                                            const char* word, int* member);

#ifdef __cplusplus
}
#endif

#endif /* COLEX_COLEX_H */
