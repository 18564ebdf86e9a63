// Small / very small / Grushko / k-tame classification of analyzed trees.
#include <map>
#include <set>

#include "freeprod/tree.hpp"

namespace freeprod {

namespace {

bool vertex_group_infinite(const Tree& t, int v) {
  const KuroshGraph& g = t.vertex_group(v);
  if (g.free_rank() > 0) return true;
  for (const auto& piece : g.peripheral_pieces())
    if (!t.spec().is_finite(piece.factor)) return true;
  return false;
}

// Products of at most `budget` vertex-group generators, deduplicated.
std::vector<Word> group_ball(const Tree& t, int v, int budget, bool& truncated) {
  const FactorSpec& s = t.spec();
  std::vector<Word> gens = vertex_group_generators(s, t.data().vertices[v]);
  std::vector<Word> alphabet;
  for (const Word& g : gens) {
    alphabet.push_back(g);
    alphabet.push_back(invert(s, g));
  }
  std::set<std::string> seen;
  std::vector<Word> ball{Word{}};
  seen.insert(to_string(s, Word{}));
  std::vector<Word> frontier = ball;
  constexpr size_t kCap = 4000;
  truncated = false;
  for (int d = 0; d < budget; ++d) {
    std::vector<Word> next;
    for (const Word& u : frontier) {
      for (const Word& a : alphabet) {
        Word p = multiply(s, u, a);
        if (!seen.insert(to_string(s, p)).second) continue;
        next.push_back(p);
        ball.push_back(p);
        if (ball.size() > kCap) { truncated = true; return ball; }
      }
    }
    frontier = std::move(next);
  }
  if (!frontier.empty() && vertex_group_infinite(t, v)) truncated = true;
  return ball;
}

std::string canon_up_to_inverse(const FactorSpec& s, const Word& w) {
  return std::min(to_string(s, w), to_string(s, invert(s, w)));
}

}  // namespace

ValidationReport validate(const Tree& t, int budget) {
  const FactorSpec& s = t.spec();
  const MarkedGraphOfGroups& g = t.data();
  ValidationReport rep;

  // Minimality heuristic: the action has no leaf lift. A vertex with a single
  // incident end is a leaf iff its group equals the end's edge group.
  for (int v = 0; v < t.num_vertices(); ++v) {
    if (t.ends(v).size() != 1) continue;
    const End& d = t.ends(v)[0];
    bool leaf;
    if (!g.edges[d.edge].group) {
      leaf = t.vertex_group_trivial(v);
    } else {
      leaf = true;
      for (const Word& gen : vertex_group_generators(s, g.vertices[v]))
        if (!solve_power(s, t.end_stab(d), gen)) { leaf = false; break; }
    }
    if (leaf) {
      rep.minimal = false;
      rep.violations.push_back({"minimal", "leaf vertex " + g.vertices[v].id});
    }
  }

  // Small: nontrivial edge stabilizers are cyclic (by representation) with
  // nonperipheral generator.
  bool small = true;
  for (int e = 0; e < t.num_edges(); ++e) {
    if (!g.edges[e].group) continue;
    if (is_peripheral(s, t.edge_stab(e))) {
      small = false;
      rep.violations.push_back({"small", "peripheral edge stabilizer on " + g.edges[e].id});
    }
  }
  rep.is_small = small;

  // Root-closure: each edge generator must be primitive in G.
  bool root_closed = true;
  for (int e = 0; e < t.num_edges(); ++e) {
    if (!g.edges[e].group) continue;
    if (is_peripheral(s, t.edge_stab(e))) continue;  // already not small
    MaxRoot mr = max_root(s, t.edge_stab(e));
    if (mr.multiplicity != 1) {
      root_closed = false;
      rep.violations.push_back(
          {"root-closed", "edge " + g.edges[e].id + " stabilized by a proper power (root " +
                              to_string(s, mr.root) + ")"});
    }
  }

  // Tripod triviality: look for three pairwise distinct directions at one
  // lift whose stabilizers share a primitive root. Directions at v~ are the
  // Ĝ_v-translates of the canonical incident edge instances; the search
  // enumerates translating elements h up to the syllable budget.
  bool tripod_free = true;
  for (int v = 0; v < t.num_vertices() && tripod_free; ++v) {
    std::vector<std::pair<End, Word>> charged;  // end + stabilizer gen at v
    for (const End& d : t.ends(v))
      if (g.edges[d.edge].group && !is_peripheral(s, t.end_stab(d)))
        charged.push_back({d, t.end_stab(d)});
    if (charged.empty()) continue;
    bool truncated = false;
    std::vector<Word> ball = group_ball(t, v, budget, truncated);
    if (truncated) rep.inconclusive.push_back("tripod@" + g.vertices[v].id);

    // key -> list of (end index, translate h) of pairwise distinct instances.
    std::map<std::string, std::vector<std::pair<size_t, Word>>> by_root;
    for (size_t di = 0; di < charged.size(); ++di) {
      Word root = max_root(s, charged[di].second).root;
      for (const Word& h : ball) {
        Word moved_root = conjugate(s, h, root);
        std::string key = canon_up_to_inverse(s, moved_root);
        auto& bucket = by_root[key];
        bool dup = false;
        for (auto& [dj, h2] : bucket) {
          if (dj != di) continue;
          Word q = multiply(s, invert(s, h2), h);
          if (solve_power(s, charged[di].second, q)) { dup = true; break; }
        }
        if (!dup) bucket.push_back({di, h});
        if (bucket.size() >= 3) {
          tripod_free = false;
          rep.violations.push_back(
              {"tripod", "vertex " + g.vertices[v].id + " has three directions fixed by powers of " +
                             key});
          break;
        }
      }
      if (!tripod_free) break;
    }
  }

  rep.is_very_small = small && root_closed && tripod_free;

  // k-tame index: for each edge generator w = r^m with primitive root r, the
  // relevant root is the largest elliptic power r^d (smallest d | m with
  // ||r^d|| = 0); the edge contributes index m/d. Grushko trees come out
  // 1-tame.
  if (small) {
    BigInt k(1);
    for (int e = 0; e < t.num_edges(); ++e) {
      if (!g.edges[e].group) continue;
      MaxRoot mr = max_root(s, t.edge_stab(e));
      BigInt index = 1;
      for (const BigInt& d : divisors(mr.multiplicity)) {
        if (t.translation_length(power(s, mr.root, d)) == Rat(0)) {
          index = mr.multiplicity / d;
          break;
        }
      }
      k = big_lcm(k, index);
    }
    rep.tame_index = k;
  }

  // Grushko: trivial edge stabilizers, point stabilizers exactly the
  // peripheral conjugates.
  bool grushko = rep.is_very_small && rep.minimal;
  for (int e = 0; e < t.num_edges() && grushko; ++e)
    if (g.edges[e].group) grushko = false;
  for (int v = 0; v < t.num_vertices() && grushko; ++v) {
    const KuroshGraph& vg = t.vertex_group(v);
    if (vg.free_rank() != 0 || vg.peripheral_pieces().size() > 1) grushko = false;
  }
  rep.is_grushko = grushko;
  return rep;
}

}  // namespace freeprod
