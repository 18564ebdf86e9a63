#include "freeprod/tree.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace freeprod {

std::vector<Word> vertex_group_generators(const FactorSpec& spec, const VertexData& v) {
  std::vector<Word> gens;
  for (const auto& [factor, conj] : v.peripheral) {
    std::vector<BigInt> elems;
    if (auto g = spec.cyclic_generator(factor)) elems.push_back(*g);
    else elems = spec.elements(factor);
    for (const BigInt& e : elems)
      gens.push_back(conjugate(spec, conj, Word{{Letter::peripheral(factor, e)}}));
  }
  for (const Word& w : v.free_basis) gens.push_back(w);
  return gens;
}

std::vector<MarkingGenerator> marking_generators(const FactorSpec& spec) {
  std::vector<MarkingGenerator> out;
  for (int j = 1; j <= spec.free_rank(); ++j)
    out.push_back({Word{{Letter::free_gen(j, 1)}}, "x" + std::to_string(j)});
  for (int i = 1; i <= spec.num_factors(); ++i) {
    std::vector<BigInt> elems;
    if (auto g = spec.cyclic_generator(i)) elems.push_back(*g);
    else elems = spec.elements(i);
    for (const BigInt& e : elems)
      out.push_back({Word{{Letter::peripheral(i, e)}},
                     spec.elt_name(i, e) + "@" + std::to_string(i)});
  }
  return out;
}

PathExpr inverse_expr(const FactorSpec& spec, const PathExpr& e) {
  PathExpr out;
  for (auto it = e.steps.rbegin(); it != e.steps.rend(); ++it) {
    if (it->is_elt()) out.steps.push_back(PathStep::element(invert(spec, it->elt)));
    else out.steps.push_back(PathStep::traverse(it->edge, !it->fwd));
  }
  return out;
}

PathExpr concat_expr(const PathExpr& a, const PathExpr& b) {
  PathExpr out = a;
  out.steps.insert(out.steps.end(), b.steps.begin(), b.steps.end());
  return out;
}

PathExpr power_expr(const FactorSpec& spec, const PathExpr& e, const BigInt& m) {
  auto small = to_small(big_abs(m));
  if (!small || *small > 100000) throw TreeError("path expression power too large");
  PathExpr base = m < 0 ? inverse_expr(spec, e) : e;
  PathExpr out;
  for (long long i = 0; i < *small; ++i) out = concat_expr(out, base);
  return out;
}

namespace {

struct UnionFind {
  std::vector<int> p;
  explicit UnionFind(size_t n) : p(n) {
    for (size_t i = 0; i < n; ++i) p[i] = static_cast<int>(i);
  }
  int find(int v) { while (p[v] != v) v = p[v] = p[p[v]]; return v; }
  bool unite(int a, int b) {
    a = find(a); b = find(b);
    if (a == b) return false;
    p[b] = a;
    return true;
  }
};

}  // namespace

int Tree::find_vertex(const std::string& id) const {
  for (int v = 0; v < num_vertices(); ++v)
    if (g_.vertices[v].id == id) return v;
  throw TreeError("unknown vertex id: " + id);
}

int Tree::find_edge(const std::string& id) const {
  for (int e = 0; e < num_edges(); ++e)
    if (g_.edges[e].id == id) return e;
  throw TreeError("unknown edge id: " + id);
}

const Word& Tree::end_stab(const End& d) const {
  return d.tail_side ? stab_tail_[d.edge] : stab_head_[d.edge];
}

Word Tree::stable_letter(int e) const {
  return g_.edges[e].stable_letter ? *g_.edges[e].stable_letter : Word{};
}

bool Tree::vertex_group_trivial(int v) const { return vgroups_[v]->is_trivial_group(); }

bool Tree::in_edge_group(int e, const Word& w) const {
  if (!g_.edges[e].group) return w.is_identity();
  return solve_power(spec(), stab_tail_[e], w).has_value();
}

bool Tree::is_inversion_center(int v) const {
  const VertexData& vd = g_.vertices[v];
  if (vd.peripheral.size() != 1 || !vd.free_basis.empty()) return false;
  int factor = vd.peripheral[0].first;
  if (!spec().is_finite(factor) || spec().factor_order(factor) != 2) return false;
  if (ends_[v].size() != 1) return false;
  return !g_.edges[ends_[v][0].edge].group.has_value();
}

PathExpr Tree::tree_path(int from, int to) const {
  std::vector<PathStep> up, down;
  int a = from, b = to;
  while (a != b) {
    if (bfs_depth_[a] >= bfs_depth_[b]) {
      int e = parent_edge_[a];
      bool toward_parent_is_fwd = g_.edges[e].tail == a;
      up.push_back(PathStep::traverse(e, toward_parent_is_fwd));
      a = parent_vertex_[a];
    } else {
      int e = parent_edge_[b];
      bool from_parent_is_fwd = g_.edges[e].head == b;
      down.push_back(PathStep::traverse(e, from_parent_is_fwd));
      b = parent_vertex_[b];
    }
  }
  PathExpr out;
  out.steps = std::move(up);
  for (auto it = down.rbegin(); it != down.rend(); ++it) out.steps.push_back(*it);
  return out;
}

Rat Tree::quotient_volume() const {
  Rat total(0);
  for (const EdgeData& e : g_.edges) total += e.length;
  return total;
}

Tree Tree::analyze(MarkedGraphOfGroups g) {
  if (!g.spec) throw TreeError("tree without factor spec");
  const FactorSpec& spec = *g.spec;
  const int V = static_cast<int>(g.vertices.size());
  const int E = static_cast<int>(g.edges.size());
  if (V == 0) throw TreeError("empty graph");
  if (g.base < 0 || g.base >= V) throw TreeError("base vertex out of range");

  std::set<std::string> ids;
  for (const auto& v : g.vertices)
    if (!ids.insert(v.id).second) throw TreeError("duplicate vertex id: " + v.id);
  for (const auto& e : g.edges) {
    if (!ids.insert(e.id).second) throw TreeError("duplicate edge id: " + e.id);
    if (e.tail < 0 || e.tail >= V || e.head < 0 || e.head >= V)
      throw TreeError("edge endpoint out of range: " + e.id);
    if (e.length <= Rat(0)) throw TreeError("edge length must be positive: " + e.id);
    if (e.tail == e.head && !e.stable_letter)
      throw TreeError("loop edge needs a stable letter: " + e.id);
  }
  if (static_cast<long>(g.free_marking.size()) != spec.free_rank())
    throw TreeError("marking must cover every free generator");
  if (static_cast<int>(g.factor_marking.size()) != spec.num_factors())
    throw TreeError("marking must cover every factor");

  UnionFind uf(V);
  int tree_edges = 0;
  for (const auto& e : g.edges) {
    if (e.stable_letter) continue;
    ++tree_edges;
    if (!uf.unite(e.tail, e.head)) throw TreeError("tree edges contain a cycle");
  }
  if (tree_edges != V - 1) throw TreeError("tree edges do not span the graph");
  UnionFind conn(V);
  for (const auto& e : g.edges) conn.unite(e.tail, e.head);
  for (int v = 0; v < V; ++v)
    if (conn.find(v) != conn.find(g.base)) throw TreeError("graph is not connected");

  auto sanitize = [&](const Word& w, const char* what) {
    Word r = reduce(spec, w.letters);
    if (!(r == w)) throw TreeError(std::string("unreduced word in ") + what);
  };
  std::vector<int> factor_seen(spec.num_factors() + 1, 0);
  for (auto& v : g.vertices) {
    for (auto& [factor, conj] : v.peripheral) {
      if (factor < 1 || factor > spec.num_factors())
        throw TreeError("peripheral entry with bad factor index at " + v.id);
      sanitize(conj, "peripheral conjugator");
      ++factor_seen[factor];
    }
    for (auto& w : v.free_basis) {
      sanitize(w, "vertex free basis");
      if (w.is_identity()) throw TreeError("trivial vertex generator at " + v.id);
      if (is_peripheral(spec, w)) throw TreeError("peripheral word in free basis at " + v.id);
    }
  }
  for (int i = 1; i <= spec.num_factors(); ++i)
    if (factor_seen[i] != 1)
      throw TreeError("factor " + std::to_string(i) + " must appear in exactly one vertex group");

  Tree t;
  t.g_ = std::move(g);
  const MarkedGraphOfGroups& gg = t.g_;

  for (const auto& v : gg.vertices)
    t.vgroups_.push_back(std::make_unique<KuroshGraph>(spec, vertex_group_generators(spec, v)));

  t.stab_tail_.resize(E);
  t.stab_head_.resize(E);
  long cyclic_edges = 0;
  for (int e = 0; e < E; ++e) {
    const EdgeData& ed = gg.edges[e];
    if (!ed.group) continue;
    ++cyclic_edges;
    Word a = reduce(spec, ed.group->tail_word.letters);
    Word b = reduce(spec, ed.group->head_word.letters);
    if (a.is_identity() || b.is_identity())
      throw TreeError("cyclic edge group with trivial generator: " + ed.id);
    if (!t.vgroups_[ed.tail]->contains(a))
      throw TreeError("edge group not inside tail vertex group: " + ed.id);
    if (!t.vgroups_[ed.head]->contains(b))
      throw TreeError("edge group not inside head vertex group: " + ed.id);
    Word lambda = ed.stable_letter ? *ed.stable_letter : Word{};
    Word moved = conjugate(spec, lambda, b);
    if (!(a == moved) && !(a == invert(spec, moved)))
      throw TreeError("edge group endpoint words disagree: " + ed.id);
    t.stab_tail_[e] = a;
    t.stab_head_[e] = b;
  }

  for (int e = 0; e < E; ++e) {
    const EdgeData& ed = gg.edges[e];
    if (ed.tail == ed.head && t.vgroups_[ed.tail]->contains(*ed.stable_letter))
      throw TreeError("degenerate loop: stable letter fixes the lift of " + ed.id);
  }

  t.ends_.assign(V, {});
  for (int e = 0; e < E; ++e) {
    t.ends_[gg.edges[e].tail].push_back(End{e, true});
    t.ends_[gg.edges[e].head].push_back(End{e, false});
  }
  t.parent_vertex_.assign(V, -1);
  t.parent_edge_.assign(V, -1);
  t.bfs_depth_.assign(V, -1);
  std::deque<int> q{gg.base};
  t.bfs_depth_[gg.base] = 0;
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    for (const End& d : t.ends_[v]) {
      const EdgeData& ed = gg.edges[d.edge];
      if (ed.stable_letter) continue;
      int w = d.tail_side ? ed.head : ed.tail;
      if (t.bfs_depth_[w] >= 0) continue;
      t.bfs_depth_[w] = t.bfs_depth_[v] + 1;
      t.parent_vertex_[w] = v;
      t.parent_edge_[w] = d.edge;
      q.push_back(w);
    }
  }

  // Rank accounting. The marking witnesses surjectivity of the presentation
  // onto G; matching Kurosh signature then forces injectivity (free products
  // of finitely many cyclic/finite groups are Hopfian), i.e. the Bass-Serre
  // graph really is a tree.
  long vertex_free = 0;
  for (const auto& vg : t.vgroups_) vertex_free += vg->free_rank();
  long b1 = 0;
  for (const auto& e : gg.edges)
    if (e.stable_letter) ++b1;
  long derived_rank = b1 + vertex_free - cyclic_edges;
  if (derived_rank != spec.free_rank())
    throw TreeError("rank accounting mismatch: presentation gives free rank " +
                    std::to_string(derived_rank) + ", expected " +
                    std::to_string(spec.free_rank()));
  for (const auto& vg : t.vgroups_)
    for (const auto& piece : vg->peripheral_pieces())
      if (!piece.full) throw TreeError("vertex group carries a proper peripheral piece");

  auto check_loop = [&](const PathExpr& expr, const Word& target, const std::string& what) {
    int at = gg.base;
    for (const PathStep& s : expr.steps) {
      if (s.is_elt()) {
        if (!t.vgroups_[at]->contains(s.elt))
          throw TreeError("marking element outside vertex group in " + what);
      } else {
        if (s.edge < 0 || s.edge >= E)
          throw TreeError("marking references unknown edge in " + what);
        const EdgeData& ed = gg.edges[s.edge];
        int from = s.fwd ? ed.tail : ed.head;
        if (from != at) throw TreeError("marking path discontinuous in " + what);
        at = s.fwd ? ed.head : ed.tail;
      }
    }
    if (at != gg.base) throw TreeError("marking expression is not a loop in " + what);
    ReducedPath rp = t.reduce_path(expr, gg.base);
    if (!(rp.eval == target)) throw TreeError("marking loop does not evaluate to " + what);
  };
  for (int j = 1; j <= spec.free_rank(); ++j)
    check_loop(gg.free_marking[j - 1], Word{{Letter::free_gen(j, 1)}}, "x" + std::to_string(j));
  for (int i = 1; i <= spec.num_factors(); ++i) {
    const FactorMarking& fm = gg.factor_marking[i - 1];
    if (auto gen = spec.cyclic_generator(i)) {
      if (!fm.gen) throw TreeError("missing marking for factor " + std::to_string(i));
      check_loop(*fm.gen, Word{{Letter::peripheral(i, *gen)}}, "factor " + std::to_string(i));
    } else {
      for (const BigInt& e : spec.elements(i)) {
        auto it = fm.elements.find(e.convert_to<long>());
        if (it == fm.elements.end())
          throw TreeError("missing marking for an element of factor " + std::to_string(i));
        check_loop(it->second, Word{{Letter::peripheral(i, e)}},
                   "factor " + std::to_string(i) + " element");
      }
    }
  }
  for (const auto& mg : marking_generators(spec)) {
    if (mg.value.letters[0].is_free()) continue;
    if (t.translation_length(mg.value) != Rat(0))
      throw TreeError("peripheral generator not elliptic: " + mg.name);
  }

  return t;
}

}  // namespace freeprod
