#include "freeprod/subgroup.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <unordered_map>

namespace freeprod {

namespace {

// Factor-element arithmetic where the identity is a legal value
// (0 for cyclic models, the identity index for tables).
BigInt raw_mul(const FactorSpec& spec, int factor, const BigInt& a, const BigInt& b) {
  const auto& f = spec.factor(factor);
  if (auto* fc = std::get_if<FiniteCyclic>(&f)) {
    BigInt r = (a + b) % fc->order;
    if (r < 0) r += fc->order;
    return r;
  }
  if (std::get_if<InfiniteCyclic>(&f)) return a + b;
  const auto& t = std::get<TableGroup>(f);
  return t.mul[a.convert_to<int>()][b.convert_to<int>()];
}

BigInt raw_inv(const FactorSpec& spec, int factor, const BigInt& a) {
  const auto& f = spec.factor(factor);
  if (auto* fc = std::get_if<FiniteCyclic>(&f)) {
    BigInt r = (-a) % fc->order;
    if (r < 0) r += fc->order;
    return r;
  }
  if (std::get_if<InfiniteCyclic>(&f)) return -a;
  const auto& t = std::get<TableGroup>(f);
  return t.inverse[a.convert_to<int>()];
}

BigInt raw_identity(const FactorSpec& spec, int factor) {
  const auto& f = spec.factor(factor);
  if (auto* t = std::get_if<TableGroup>(&f)) return t->identity;
  (void)f;
  return 0;
}

constexpr long long kExpandCap = 200000;

}  // namespace

FactorSubgroup FactorSubgroup::trivial(const FactorSpec& spec, int factor) {
  FactorSubgroup s;
  const auto& f = spec.factor(factor);
  if (auto* fc = std::get_if<FiniteCyclic>(&f)) s.d = fc->order;
  else if (std::get_if<InfiniteCyclic>(&f)) s.d = 0;
  else s.elems = {std::get<TableGroup>(f).identity};
  return s;
}

FactorSubgroup FactorSubgroup::full(const FactorSpec& spec, int factor) {
  FactorSubgroup s;
  const auto& f = spec.factor(factor);
  if (std::get_if<FiniteCyclic>(&f)) s.d = 1;
  else if (std::get_if<InfiniteCyclic>(&f)) s.d = 1;
  else {
    const auto& t = std::get<TableGroup>(f);
    for (int e = 0; e < static_cast<int>(t.names.size()); ++e) s.elems.push_back(e);
  }
  return s;
}

bool FactorSubgroup::is_trivial(const FactorSpec& spec, int factor) const {
  const auto& f = spec.factor(factor);
  if (auto* fc = std::get_if<FiniteCyclic>(&f)) return d == fc->order;
  if (std::get_if<InfiniteCyclic>(&f)) return d == 0;
  return elems.size() == 1;
}

bool FactorSubgroup::is_full(const FactorSpec& spec, int factor) const {
  const auto& f = spec.factor(factor);
  if (std::get_if<FiniteCyclic>(&f)) return d == 1;
  if (std::get_if<InfiniteCyclic>(&f)) return d == 1;
  return elems.size() == std::get<TableGroup>(f).names.size();
}

bool FactorSubgroup::contains(const FactorSpec& spec, int factor, const BigInt& e) const {
  const auto& f = spec.factor(factor);
  if (std::get_if<FiniteCyclic>(&f) || std::get_if<InfiniteCyclic>(&f)) {
    if (d == 0) return e == 0;
    return e % d == 0;
  }
  (void)f;
  return std::binary_search(elems.begin(), elems.end(), e.convert_to<int>());
}

void FactorSubgroup::join(const FactorSpec& spec, int factor, const BigInt& e) {
  const auto& f = spec.factor(factor);
  if (auto* fc = std::get_if<FiniteCyclic>(&f)) {
    d = big_gcd(d, big_gcd(e, fc->order));
    if (d == 0) d = fc->order;
    return;
  }
  if (std::get_if<InfiniteCyclic>(&f)) {
    d = big_gcd(d, big_abs(e));
    return;
  }
  const auto& t = std::get<TableGroup>(f);
  std::set<int> closure(elems.begin(), elems.end());
  std::deque<int> work{e.convert_to<int>()};
  closure.insert(e.convert_to<int>());
  while (!work.empty()) {
    int x = work.front();
    work.pop_front();
    std::vector<int> snapshot(closure.begin(), closure.end());
    for (int y : snapshot) {
      for (int p : {t.mul[x][y], t.mul[y][x], t.inverse[x]})
        if (closure.insert(p).second) work.push_back(p);
    }
  }
  elems.assign(closure.begin(), closure.end());
}

BigInt FactorSubgroup::coset_key(const FactorSpec& spec, int factor, const BigInt& e) const {
  const auto& f = spec.factor(factor);
  if (std::get_if<FiniteCyclic>(&f) || std::get_if<InfiniteCyclic>(&f)) {
    if (d == 0) return e;
    BigInt r = e % d;
    if (r < 0) r += d;
    return r;
  }
  (void)f;
  int best = -1;
  for (int p : elems) {
    BigInt prod = raw_mul(spec, factor, p, e);
    int pi = prod.convert_to<int>();
    if (best < 0 || pi < best) best = pi;
  }
  return best;
}

BigInt FactorSubgroup::coset_rep(const FactorSpec&, int, const BigInt& key) const { return key; }

std::vector<BigInt> FactorSubgroup::generators(const FactorSpec& spec, int factor) const {
  const auto& f = spec.factor(factor);
  std::vector<BigInt> out;
  if (std::get_if<FiniteCyclic>(&f) || std::get_if<InfiniteCyclic>(&f)) {
    if (!is_trivial(spec, factor)) out.push_back(d);
    return out;
  }
  (void)f;
  const BigInt id = raw_identity(spec, factor);
  for (int e : elems)
    if (e != id) out.push_back(BigInt(e));
  return out;
}

// ---------------------------------------------------------------------------

namespace {

struct RawGraph {
  const FactorSpec& spec;
  std::vector<int> uf;
  std::vector<std::vector<std::pair<int, int>>> out, in;  // (gen, other vertex)
  struct RawCluster {
    int factor;
    FactorSubgroup sub;
    std::vector<std::pair<BigInt, int>> spokes;  // (coset key, vertex)
    bool alive = true;
  };
  std::vector<RawCluster> clusters;
  std::vector<std::vector<std::pair<int, int>>> vfac;  // vertex -> (factor, cluster id)

  explicit RawGraph(const FactorSpec& s) : spec(s) {}

  int find(int v) { while (uf[v] != v) v = uf[v] = uf[uf[v]]; return v; }

  int new_vertex() {
    uf.push_back(static_cast<int>(uf.size()));
    out.emplace_back();
    in.emplace_back();
    vfac.emplace_back();
    return static_cast<int>(uf.size()) - 1;
  }

  void add_free_edge(int u, int gen, int v) {
    out[u].push_back({gen, v});
    in[v].push_back({gen, u});
  }

  // Attaches vertex v to factor-i structure at coset key of element e relative
  // to a fresh trivial cluster, returning the cluster id.
  int new_cluster(int factor) {
    clusters.push_back({factor, FactorSubgroup::trivial(spec, factor), {}, true});
    return static_cast<int>(clusters.size()) - 1;
  }

  void attach(int cid, const BigInt& key, int v) {
    clusters[cid].spokes.push_back({key, v});
    vfac[v].push_back({clusters[cid].factor, cid});
  }

  void merge_vertices(int a, int b, std::deque<int>& work) {
    a = find(a); b = find(b);
    if (a == b) return;
    if (out[a].size() + in[a].size() < out[b].size() + in[b].size()) std::swap(a, b);
    uf[b] = a;
    for (auto& e : out[b]) out[a].push_back(e);
    for (auto& e : in[b]) in[a].push_back(e);
    for (auto& c : vfac[b]) vfac[a].push_back(c);
    out[b].clear(); in[b].clear(); vfac[b].clear();
    work.push_back(a);
  }

  void rekey_cluster(int cid, std::deque<int>& work) {
    auto& c = clusters[cid];
    std::map<BigInt, int> seen;
    std::vector<std::pair<BigInt, int>> fresh;
    for (auto& [key, v0] : c.spokes) {
      int v = find(v0);
      BigInt k = c.sub.coset_key(spec, c.factor, c.sub.coset_rep(spec, c.factor, key));
      auto it = seen.find(k);
      if (it == seen.end()) {
        seen.emplace(k, v);
        fresh.push_back({k, v});
      } else if (find(it->second) != v) {
        merge_vertices(it->second, v, work);
      }
    }
    c.spokes = std::move(fresh);
  }

  // One folding pass over vertex v. Performs at most one structural change
  // and returns true if it did; the worklist then revisits the survivors.
  // merge_vertices mutates adjacency of arbitrary vertices (v included, e.g.
  // through self-loops), so no local view survives a mutation.
  bool fold_at(int v, std::deque<int>& work) {
    v = find(v);
    // Free-edge folds.
    for (auto* side : {&out, &in}) {
      auto edges = (*side)[v];  // snapshot
      std::map<int, int> first;
      std::vector<std::pair<int, int>> kept;
      bool pruned = false;
      for (auto& [gen, w0] : edges) {
        int w = find(w0);
        auto it = first.find(gen);
        if (it == first.end()) {
          first.emplace(gen, w);
          kept.push_back({gen, w});
        } else if (it->second != w) {
          merge_vertices(it->second, w, work);
          work.push_back(find(v));
          return true;
        } else {
          pruned = true;  // duplicate parallel edge; drop it
        }
      }
      if (pruned || kept != (*side)[v]) (*side)[v] = std::move(kept);
    }
    // Cluster folds: at most one attachment per factor.
    {
      auto attachments = vfac[v];  // snapshot
      std::map<int, int> cluster_of;
      std::vector<std::pair<int, int>> kept;
      for (auto& [factor, cid] : attachments) {
        if (!clusters[cid].alive) continue;
        auto it = cluster_of.find(factor);
        if (it == cluster_of.end()) {
          cluster_of.emplace(factor, cid);
          kept.push_back({factor, cid});
          continue;
        }
        if (it->second != cid) {
          merge_clusters(it->second, cid, v, work);
          work.push_back(find(v));
          return true;
        }
        if (enlarge_if_double(cid, v, work)) {
          work.push_back(find(v));
          return true;
        }
      }
      vfac[v] = std::move(kept);
      // A single cluster can still hold two spokes at v after vfac pruning.
      for (auto& [factor, cid] : vfac[v]) {
        if (clusters[cid].alive && enlarge_if_double(cid, v, work)) {
          work.push_back(find(v));
          return true;
        }
      }
    }
    return false;
  }

  bool enlarge_if_double(int cid, int v, std::deque<int>& work) {
    auto& c = clusters[cid];
    BigInt first_key;
    bool have = false, changed = false;
    for (auto& [key, w0] : c.spokes) {
      if (find(w0) != find(v)) continue;
      if (!have) { first_key = key; have = true; continue; }
      if (key == first_key) continue;
      BigInt g1 = c.sub.coset_rep(spec, c.factor, first_key);
      BigInt g2 = c.sub.coset_rep(spec, c.factor, key);
      BigInt delta = raw_mul(spec, c.factor, g1, raw_inv(spec, c.factor, g2));
      if (delta != raw_identity(spec, c.factor)) {
        c.sub.join(spec, c.factor, delta);
        changed = true;
      }
    }
    if (changed) rekey_cluster(cid, work);
    return changed;
  }

  // Merges cluster cb into ca; both attached to vertex v (same factor).
  void merge_clusters(int ca, int cb, int v, std::deque<int>& work) {
    auto& a = clusters[ca];
    auto& b = clusters[cb];
    // Re-anchor both so that v sits at the identity coset, then union.
    auto reanchor = [&](RawCluster& c) {
      BigInt r;
      bool found = false;
      for (auto& [key, w0] : c.spokes)
        if (find(w0) == find(v)) { r = c.sub.coset_rep(spec, c.factor, key); found = true; break; }
      if (!found) throw std::logic_error("cluster merge without shared vertex");
      if (r == raw_identity(spec, c.factor)) return;
      // Conjugate the subgroup by r and shift all coset keys by r^-1 on the
      // right-rep side: P g becomes (r^-1 P r)(r^-1 g).
      FactorSubgroup moved = FactorSubgroup::trivial(spec, c.factor);
      for (const BigInt& g : c.sub.generators(spec, c.factor))
        moved.join(spec, c.factor, raw_mul(spec, c.factor, raw_mul(spec, c.factor, raw_inv(spec, c.factor, r), g), r));
      std::vector<std::pair<BigInt, int>> fresh;
      for (auto& [key, w0] : c.spokes) {
        BigInt g = c.sub.coset_rep(spec, c.factor, key);
        BigInt shifted = raw_mul(spec, c.factor, raw_inv(spec, c.factor, r), g);
        fresh.push_back({moved.coset_key(spec, c.factor, shifted), w0});
      }
      c.sub = std::move(moved);
      c.spokes = std::move(fresh);
    };
    reanchor(a);
    reanchor(b);
    for (const BigInt& g : b.sub.generators(spec, b.factor)) a.sub.join(spec, a.factor, g);
    for (auto& [key, w0] : b.spokes) {
      BigInt g = b.sub.coset_rep(spec, b.factor, key);
      a.spokes.push_back({a.sub.coset_key(spec, a.factor, g), w0});
      for (auto& fc : vfac[find(w0)])
        if (fc.second == cb) fc.second = ca;
    }
    b.alive = false;
    b.spokes.clear();
    rekey_cluster(ca, work);
  }
};

}  // namespace

KuroshGraph::KuroshGraph(const FactorSpec& spec, std::vector<Word> generators)
    : spec_(&spec), gens_(std::move(generators)) {
  build();
}

void KuroshGraph::build() {
  const FactorSpec& spec = *spec_;
  RawGraph g(spec);
  int base = g.new_vertex();

  // Trace each generator as a loop at the basepoint.
  for (const Word& w0 : gens_) {
    Word w = reduce(spec, w0.letters);
    if (w.is_identity()) continue;
    int cur = base;
    for (size_t li = 0; li < w.letters.size(); ++li) {
      const Letter& l = w.letters[li];
      bool last = li + 1 == w.letters.size();
      if (l.is_free()) {
        auto n = to_small(big_abs(l.exp));
        if (!n || *n > kExpandCap) throw WordError("generator exponent too large for subgroup graph");
        bool fwd = l.exp > 0;
        for (long long s = 0; s < *n; ++s) {
          bool last_step = last && s + 1 == *n;
          int next = last_step ? base : g.new_vertex();
          if (fwd) g.add_free_edge(cur, l.index, next);
          else g.add_free_edge(next, l.index, cur);
          cur = next;
        }
      } else {
        int next = last ? base : g.new_vertex();
        int cid = g.new_cluster(l.factor);
        const BigInt id = raw_identity(spec, l.factor);
        g.attach(cid, g.clusters[cid].sub.coset_key(spec, l.factor, id), cur);
        g.attach(cid, g.clusters[cid].sub.coset_key(spec, l.factor, l.exp), next);
        // Same-vertex attach (cur == next possible for length-1 loops) is
        // resolved by folding.
        cur = next;
      }
    }
  }

  // Fold to a fixpoint.
  std::deque<int> work;
  for (size_t v = 0; v < g.uf.size(); ++v) work.push_back(static_cast<int>(v));
  size_t idle = 0;
  while (idle < g.uf.size()) {
    if (work.empty())
      for (size_t v = 0; v < g.uf.size(); ++v)
        if (g.find(static_cast<int>(v)) == static_cast<int>(v)) work.push_back(static_cast<int>(v));
    int v = work.front();
    work.pop_front();
    if (g.find(v) != v) { continue; }
    if (g.fold_at(v, work)) { work.push_back(v); idle = 0; } else { ++idle; }
  }

  // Freeze.
  std::unordered_map<int, int> remap;
  auto id_of = [&](int v) {
    v = g.find(v);
    auto it = remap.find(v);
    if (it != remap.end()) return it->second;
    int id = static_cast<int>(remap.size());
    remap.emplace(v, id);
    return id;
  };
  base_ = id_of(base);
  size_t guess = g.uf.size();
  out_.assign(guess, {});
  in_.assign(guess, {});
  vertex_cluster_.assign(guess, {});
  nedge_ = 0;
  std::set<std::tuple<int, int, int>> seen_edges;
  for (size_t v0 = 0; v0 < g.uf.size(); ++v0) {
    int v = static_cast<int>(v0);
    if (g.find(v) != v) continue;
    int vid = id_of(v);
    for (auto& [gen, w0] : g.out[v]) {
      int wid = id_of(g.find(w0));
      if (seen_edges.insert({vid, gen, wid}).second) {
        out_[vid][gen] = wid;
        in_[wid][gen] = vid;
        ++nedge_;
      }
    }
  }
  clusters_.clear();
  cluster_alive_.clear();
  size_t nspokes = 0;
  for (auto& rc : g.clusters) {
    if (!rc.alive || rc.spokes.empty()) continue;
    Cluster c;
    c.factor = rc.factor;
    c.sub = rc.sub;
    for (auto& [key, w0] : rc.spokes) c.spokes[key] = id_of(g.find(w0));
    int cid = static_cast<int>(clusters_.size());
    for (auto& [key, vid] : c.spokes) vertex_cluster_[vid][c.factor] = cid;
    nspokes += c.spokes.size();
    clusters_.push_back(std::move(c));
    cluster_alive_.push_back(1);
  }
  nvert_ = remap.size();
  out_.resize(nvert_); in_.resize(nvert_); vertex_cluster_.resize(nvert_);

  free_rank_ = static_cast<long>(nedge_ + nspokes) -
               static_cast<long>(nvert_ + clusters_.size()) + 1;

  // Peripheral pieces via BFS from the basepoint.
  std::vector<int> order(nvert_, -1);
  std::vector<Word> path(nvert_);
  std::deque<int> q{base_};
  order[base_] = 0;
  int counter = 1;
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    auto visit = [&](int w, const Letter& l) {
      if (order[w] >= 0) return;
      order[w] = counter++;
      path[w] = multiply(spec, path[v], Word{{l}});
      q.push_back(w);
    };
    for (auto& [gen, w] : out_[v]) visit(w, Letter::free_gen(gen, 1));
    for (auto& [gen, w] : in_[v]) visit(w, Letter::free_gen(gen, -1));
    for (auto& [factor, cid] : vertex_cluster_[v]) {
      const Cluster& c = clusters_[cid];
      BigInt kv;
      for (auto& [key, w] : c.spokes)
        if (w == v) { kv = key; break; }
      BigInt rv = c.sub.coset_rep(spec, factor, kv);
      for (auto& [key, w] : c.spokes) {
        if (w == v) continue;
        BigInt rw = c.sub.coset_rep(spec, factor, key);
        BigInt delta = raw_mul(spec, factor, raw_inv(spec, factor, rv), rw);
        if (delta == raw_identity(spec, factor)) continue;
        visit(w, Letter::peripheral(factor, delta));
      }
    }
  }

  pieces_.clear();
  for (const Cluster& c : clusters_) {
    if (c.sub.is_trivial(spec, c.factor)) continue;
    int best = -1;
    BigInt best_key;
    for (auto& [key, v] : c.spokes)
      if (best < 0 || order[v] < order[best]) { best = v; best_key = key; }
    BigInt r0 = c.sub.coset_rep(spec, c.factor, best_key);
    FactorSubgroup at_anchor = FactorSubgroup::trivial(spec, c.factor);
    for (const BigInt& gg : c.sub.generators(spec, c.factor))
      at_anchor.join(spec, c.factor,
                     raw_mul(spec, c.factor, raw_mul(spec, c.factor, raw_inv(spec, c.factor, r0), gg), r0));
    pieces_.push_back(PeripheralPiece{c.factor, path[best], at_anchor,
                                      at_anchor.is_full(spec, c.factor)});
  }
  std::sort(pieces_.begin(), pieces_.end(), [](const PeripheralPiece& a, const PeripheralPiece& b) {
    return a.factor < b.factor;
  });
}

int KuroshGraph::follow_free(int v, int gen, const BigInt& e) const {
  const auto& table = e > 0 ? out_ : in_;
  BigInt left = big_abs(e);
  std::unordered_map<int, BigInt> at;
  BigInt t = 0;
  int cur = v;
  while (left > 0) {
    auto it = at.find(cur);
    if (it != at.end()) {
      BigInt cyc = t - it->second;
      left %= cyc;
      at.clear();
      if (left == 0) break;
    } else {
      at.emplace(cur, t);
    }
    auto jt = table[cur].find(gen);
    if (jt == table[cur].end()) return -1;
    cur = jt->second;
    ++t;
    --left;
  }
  return cur;
}

int KuroshGraph::follow_peripheral(int v, int factor, const BigInt& elt) const {
  auto it = vertex_cluster_[v].find(factor);
  if (it == vertex_cluster_[v].end()) return -1;
  const Cluster& c = clusters_[it->second];
  BigInt kv;
  bool found = false;
  for (auto& [key, w] : c.spokes)
    if (w == v) { kv = key; found = true; break; }
  if (!found) return -1;
  BigInt rv = c.sub.coset_rep(*spec_, factor, kv);
  BigInt target = c.sub.coset_key(*spec_, factor, raw_mul(*spec_, factor, rv, elt));
  auto jt = c.spokes.find(target);
  if (jt == c.spokes.end()) return -1;
  return jt->second;
}

bool KuroshGraph::contains(const Word& w0) const {
  Word w = reduce(*spec_, w0.letters);
  int cur = base_;
  for (const Letter& l : w.letters) {
    cur = l.is_free() ? follow_free(cur, l.index, l.exp)
                      : follow_peripheral(cur, l.factor, l.exp);
    if (cur < 0) return false;
  }
  return cur == base_;
}

}  // namespace freeprod
