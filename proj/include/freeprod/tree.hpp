// Simplicial metric (G,F)-trees presented as marked graphs of groups.
//
// Conventions. A spanning tree of the quotient graph is the set of edges
// without a stable letter. Lifting it rooted at the base vertex fixes a
// canonical lift v~ for every vertex; a tree edge lifts to (u~, v~) and an
// edge with stable letter t to (u~, t.v~). All group data is written in
// canonical-lift coordinates: vertex words lie in Stab(v~), an edge group is
// given by its generator seen from each endpoint, and marking loops alternate
// vertex elements with edge traversals. Geodesics in the Bass-Serre tree are
// computed by flattening a loop expression into edge instances and cancelling
// backtracks, which needs only cyclic-power membership tests.
#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "freeprod/subgroup.hpp"
#include "freeprod/words.hpp"

namespace freeprod {

class TreeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct VertexData {
  std::string id;
  std::vector<std::pair<int, Word>> peripheral;  // (factor i, c): c G_i c^-1 fixes v~
  std::vector<Word> free_basis;                  // nonperipheral generators
};

struct EdgeGroupData {
  Word tail_word;  // generator in tail coordinates
  Word head_word;  // same group seen from the head lift
};

struct EdgeData {
  std::string id;
  int tail = 0, head = 0;
  Rat length;
  std::optional<EdgeGroupData> group;    // absent = trivial stabilizer
  std::optional<Word> stable_letter;     // absent = spanning-tree edge
};

struct PathStep {
  int edge = -1;  // >= 0: traversal; < 0: vertex element
  bool fwd = true;
  Word elt;
  static PathStep traverse(int e, bool f) { return PathStep{e, f, {}}; }
  static PathStep element(Word w) { return PathStep{-1, true, std::move(w)}; }
  bool is_elt() const { return edge < 0; }
};

struct PathExpr {
  std::vector<PathStep> steps;
};

struct FactorMarking {
  std::optional<PathExpr> gen;        // cyclic factors: loop for the generator
  std::map<long, PathExpr> elements;  // table factors: loop per nonidentity id
};

struct MarkedGraphOfGroups {
  std::shared_ptr<const FactorSpec> spec;
  std::vector<VertexData> vertices;
  std::vector<EdgeData> edges;
  int base = 0;
  std::vector<PathExpr> free_marking;         // one loop per free generator
  std::vector<FactorMarking> factor_marking;  // one entry per factor
};

// One crossed edge instance of a reduced path: the instance is pos * (the
// canonical lift of `edge`), crossed in direction `fwd`.
struct PathEntry {
  int edge;
  bool fwd;
  Word pos;
};

struct ReducedPath {
  std::vector<PathEntry> entries;
  Word eval;  // product of the expression; the group element moving start to end
};

struct End {
  int edge;
  bool tail_side;
};

class Tree {
 public:
  // Structural analysis: graph shape, spanning tree, word sanity, edge-group
  // inclusions, marking coherence (loops evaluate to their generators),
  // rank/signature accounting, peripheral ellipticity. Throws TreeError when
  // the data does not define a (G,F)-tree.
  static Tree analyze(MarkedGraphOfGroups g);

  const MarkedGraphOfGroups& data() const { return g_; }
  const FactorSpec& spec() const { return *g_.spec; }
  int num_vertices() const { return static_cast<int>(g_.vertices.size()); }
  int num_edges() const { return static_cast<int>(g_.edges.size()); }
  const KuroshGraph& vertex_group(int v) const { return *vgroups_[v]; }
  const std::vector<End>& ends(int v) const { return ends_[v]; }

  // Stabilizer generator of the canonical lift of e, in tail coordinates;
  // identity word when trivial.
  const Word& edge_stab(int e) const { return stab_tail_[e]; }
  // The same group seen at the given end's base vertex.
  const Word& end_stab(const End& d) const;
  Word stable_letter(int e) const;  // identity for tree edges

  // Spanning-tree path between canonical lifts (tree-edge traversals only).
  PathExpr tree_path(int from, int to) const;

  // Substitutes marking loops for the letters of w; the result is a loop
  // expression at the base vertex evaluating to w.
  PathExpr express(const Word& w) const;

  // Flattens a path expression starting at `start_vertex` and cancels
  // backtracks; entries of the result are the geodesic's edge instances.
  ReducedPath reduce_path(const PathExpr& expr, int start_vertex) const;

  Rat path_length(const ReducedPath& p) const;
  Rat displacement(const Word& w) const;  // d(base~, w.base~)
  Rat translation_length(const Word& w) const;
  std::vector<Rat> length_spectrum(std::span<const Word> words) const;
  Rat quotient_volume() const;
  // Distance between a.(u~) and b.(v~).
  Rat coset_distance(const Word& a, int u, const Word& b, int v) const;
  ReducedPath coset_path(const Word& a, int u, const Word& b, int v) const;

  bool vertex_group_trivial(int v) const;
  // Exact membership of w in the cyclic group generated by the stabilizer of
  // the canonical lift of edge e (identity-only when trivial).
  bool in_edge_group(int e, const Word& w) const;
  bool is_inversion_center(int v) const;

  int find_vertex(const std::string& id) const;
  int find_edge(const std::string& id) const;

 private:
  Tree() = default;
  MarkedGraphOfGroups g_;
  std::vector<std::unique_ptr<KuroshGraph>> vgroups_;
  std::vector<std::vector<End>> ends_;
  std::vector<Word> stab_tail_, stab_head_;
  std::vector<int> parent_vertex_, parent_edge_;  // BFS spanning-tree structure
  std::vector<int> bfs_depth_;

  friend Tree analyze_for_tests(MarkedGraphOfGroups);
};

// Generators used to present a vertex group to KuroshGraph: each peripheral
// entry (i, c) contributes c*g*c^-1 over the factor's generating set, plus the
// free basis.
std::vector<Word> vertex_group_generators(const FactorSpec& spec, const VertexData& v);

// Marking generator list: every free generator and one generator set per
// factor, with the words they must evaluate to. Used by validation, probes
// and spectra.
struct MarkingGenerator {
  Word value;
  std::string name;
};
std::vector<MarkingGenerator> marking_generators(const FactorSpec& spec);

// Path-expression helpers.
PathExpr inverse_expr(const FactorSpec& spec, const PathExpr& e);
PathExpr concat_expr(const PathExpr& a, const PathExpr& b);
PathExpr power_expr(const FactorSpec& spec, const PathExpr& e, const BigInt& m);

// Validation ------------------------------------------------------------

struct Violation {
  std::string axiom;  // "small" | "root-closed" | "tripod" | "minimal" | ...
  std::string witness;
};

struct ValidationReport {
  bool is_grushko = false;
  bool is_small = false;
  bool is_very_small = false;
  std::optional<BigInt> tame_index;  // present iff small
  bool minimal = true;               // leaf heuristic, see docs
  std::vector<Violation> violations;
  std::vector<std::string> inconclusive;  // axioms whose search hit the budget
};

// budget: syllable bound for vertex-group ball enumeration in the tripod
// search. Violations are certain; absence of a violation is certified unless
// the axiom is listed inconclusive.
ValidationReport validate(const Tree& t, int budget = 3);

}  // namespace freeprod
