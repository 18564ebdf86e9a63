// Construction of concrete marked trees: the standard splitting, hand-built
// shapes used across tests and docs, and the seeded corpus generator.
#pragma once

#include <cstdint>
#include <vector>

#include "freeprod/tree.hpp"

namespace freeprod {

// The standard (G,F) splitting: one trivial base vertex, a spoke to a vertex
// carrying each factor, and a loop per free generator. Spoke and loop lengths
// are given per factor / per generator (defaults: all 1).
MarkedGraphOfGroups standard_rose(std::shared_ptr<const FactorSpec> spec,
                                  const std::vector<Rat>& loop_lengths = {},
                                  const std::vector<Rat>& spoke_lengths = {});

// F2 barbell: two eps-loops joined by a length-1 bridge.
MarkedGraphOfGroups barbell_f2(std::shared_ptr<const FactorSpec> spec, const Rat& eps);

// F2 = <x1, x2> acting on the single-edge tree with vertex groups <x1>, <x2>
// and trivial edge group.
MarkedGraphOfGroups edge_of_groups_f2(std::shared_ptr<const FactorSpec> spec, const Rat& len);

// F2 HNN shadow: one vertex with group <x1, x2 x1 x2^-1>, one loop with
// stable letter x2 whose edge group identifies x2 x1 x2^-1 with x1.
MarkedGraphOfGroups hnn_over_c_f2(std::shared_ptr<const FactorSpec> spec, const Rat& len);

// Truncated non-tame chain at depth d >= 1 in F2: vertices <x1>, <x1^2>, ...,
// <x1^(2^d)> joined by edges with stabilizers <x1^2>, ..., <x1^(2^d)> (edge j
// has length 1/2^j), plus an x2-loop at the deepest vertex for minimality.
MarkedGraphOfGroups tame_chain_f2(std::shared_ptr<const FactorSpec> spec, int depth);

// Probe words: all reduced words of at most `max_syllables` syllables over
// the marking generators, capped; deterministic order.
std::vector<Word> probe_words(const FactorSpec& spec, int max_syllables, size_t cap = 500);

struct CorpusSpec {
  std::shared_ptr<const FactorSpec> factors;
  uint64_t seed = 1;
  int count = 10;
  int max_edges = -1;  // default: 3 rk_f + 2|F| - 3
};

struct CorpusEntry {
  MarkedGraphOfGroups graph;
  std::string shape;  // generator recipe tag, for reports
};

// Deterministic under (seed, spec); every entry passes validate() with
// is_very_small and the shape mix covers all five index-1 vertex types
// whenever the spec allows them.
std::vector<CorpusEntry> generate_corpus(const CorpusSpec& cs);

}  // namespace freeprod
