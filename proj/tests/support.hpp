#pragma once

#include <algorithm>
#include <string>
#include <tuple>
#include <vector>

#include "colex/automaton.hpp"
#include "colex/bwt.hpp"
#include "colex/chains.hpp"
#include "colex/order.hpp"
#include "oracle/oracle.hpp"

namespace test {

inline std::string data_path(const std::string& name) {
  return std::string(COLEX_TEST_DATA) + "/" + name;
}

inline colex::Automaton sample() { return colex::load_automaton(data_path("sample.aut")); }

inline colex::PartialOrder to_order(const oracle::Relation& less) {
  colex::PartialOrder o(less.size());
  for (colex::State u = 0; u < less.size(); ++u)
    for (colex::State v = 0; v < less.size(); ++v)
      if (less[u][v]) o.set_less(u, v);
  return o;
}

inline oracle::Relation to_relation(const colex::PartialOrder& o) {
  oracle::Relation less(o.size(), std::vector<bool>(o.size(), false));
  for (colex::State u = 0; u < o.size(); ++u)
    for (colex::State v = 0; v < o.size(); ++v) less[u][v] = o.less(u, v);
  return less;
}

struct Indexed {
  colex::PartialOrder order;
  colex::ChainDecomposition chains;
  colex::Bwt bwt;
};

inline Indexed index_with(const colex::Automaton& a, const oracle::Relation& less) {
  Indexed ix;
  ix.order = to_order(less);
  ix.chains = colex::min_chain_decomposition(ix.order, a.start());
  ix.bwt = colex::build_bwt(a, ix.order, ix.chains);
  return ix;
}

// Decoded states are transform positions; position x stands for
// state_order[x] of the original.
inline bool isomorphic_under(const colex::Automaton& original,
                             const colex::Automaton& decoded,
                             const std::vector<colex::State>& state_order) {
  if (decoded.num_states() != original.num_states() ||
      decoded.num_edges() != original.num_edges() ||
      decoded.sigma() != original.sigma() ||
      state_order.size() != original.num_states() ||
      state_order[decoded.start()] != original.start())
    return false;
  std::vector<colex::Edge> mapped;
  for (const colex::Edge& e : decoded.edges())
    mapped.push_back({state_order[e.source], state_order[e.target], e.label});
  std::vector<colex::Edge> expect(original.edges().begin(), original.edges().end());
  auto key = [](const colex::Edge& e) { return std::tuple(e.source, e.target, e.label); };
  auto by_key = [&](const colex::Edge& x, const colex::Edge& y) { return key(x) < key(y); };
  std::sort(mapped.begin(), mapped.end(), by_key);
  std::sort(expect.begin(), expect.end(), by_key);
  if (mapped != expect) return false;
  for (colex::State x = 0; x < decoded.num_states(); ++x)
    if (decoded.is_final(x) != original.is_final(state_order[x])) return false;
  return true;
}

}  // namespace test
