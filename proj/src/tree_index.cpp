#include "freeprod/tree_index.hpp"

#include <algorithm>
#include <map>

namespace freeprod {

namespace {

long trivial_end_count(const Tree& t, int v) {
  long n = 0;
  for (const End& d : t.ends(v))
    if (!t.data().edges[d.edge].group) ++n;
  return n;
}

}  // namespace

long local_index(const Tree& t, int vertex) {
  long rk = t.vertex_group(vertex).kurosh_rank();
  long v1 = trivial_end_count(t, vertex);
  return 2 * rk + v1 - 2;
}

IndexReport total_index(const Tree& t, const ValidationReport& rep) {
  if (!rep.is_very_small) throw TreeError("total_index requires a very small tree");
  IndexReport out;
  out.bound = 2 * t.spec().kurosh_rank() - 2;
  for (int v = 0; v < t.num_vertices(); ++v) {
    VertexIndexRecord r;
    r.vertex = v;
    r.stab_kurosh_rank = t.vertex_group(v).kurosh_rank();
    r.v1 = trivial_end_count(t, v);
    r.index = 2 * r.stab_kurosh_rank + r.v1 - 2;
    r.inversion_center = t.is_inversion_center(v);
    out.total += r.index;
    if (r.index > 0) ++out.branch_orbit_count;
    if (r.index < 0) out.deficient.push_back(v);
    out.records.push_back(r);
  }
  out.equality = out.total == out.bound;
  if (!out.equality)
    for (const auto& r : out.records)
      if (r.index == 0 && std::find(out.deficient.begin(), out.deficient.end(), r.vertex) ==
                              out.deficient.end())
        out.deficient.push_back(r.vertex);
  return out;
}

std::vector<VertexClass> classify_vertices(const Tree& t) {
  std::vector<VertexClass> out;
  for (int v = 0; v < t.num_vertices(); ++v) {
    VertexClass c{v, VertexType::kUnclassified, ""};
    long idx = local_index(t, v);
    if (idx != 1) {
      c.reason = "index " + std::to_string(idx);
      out.push_back(c);
      continue;
    }
    const KuroshGraph& vg = t.vertex_group(v);
    size_t ends = t.ends(v).size();
    long charged = static_cast<long>(ends) - trivial_end_count(t, v);
    bool z_vertex = vg.free_rank() == 1 && vg.peripheral_pieces().empty();
    bool peripheral_vertex = vg.free_rank() == 0 && vg.peripheral_pieces().size() == 1;
    if (vg.is_trivial_group() && ends == 3) c.type = VertexType::kTrivialValence3;
    else if (peripheral_vertex && ends == 1) c.type = VertexType::kPeripheralValence1;
    else if (z_vertex && ends == 1 && charged == 0) c.type = VertexType::kZValence1;
    else if (z_vertex && ends == 2 && charged == 1) c.type = VertexType::kZValence2Mixed;
    else if (z_vertex && ends == 3 && charged == 2) c.type = VertexType::kZValence3TwoZ;
    else c.reason = "index 1 but no pattern match";
    out.push_back(c);
  }
  return out;
}

// --- integer lattice helpers -------------------------------------------

namespace {

// Row-echelon basis of the generated lattice (gcd elimination; tiny inputs).
std::vector<std::vector<BigInt>> echelon(std::vector<std::vector<BigInt>> rows) {
  if (rows.empty()) return rows;
  const size_t cols = rows[0].size();
  std::vector<std::vector<BigInt>> basis;
  size_t pivot_col = 0;
  while (pivot_col < cols && !rows.empty()) {
    for (;;) {
      std::vector<size_t> nz;
      for (size_t i = 0; i < rows.size(); ++i)
        if (rows[i][pivot_col] != 0) nz.push_back(i);
      if (nz.size() <= 1) break;
      std::sort(nz.begin(), nz.end(), [&](size_t a, size_t b) {
        return big_abs(rows[a][pivot_col]) < big_abs(rows[b][pivot_col]);
      });
      size_t a = nz[0], b = nz[1];
      BigInt q = rows[b][pivot_col] / rows[a][pivot_col];
      for (size_t c = 0; c < cols; ++c) rows[b][c] -= q * rows[a][c];
    }
    size_t keeper = rows.size();
    for (size_t i = 0; i < rows.size(); ++i)
      if (rows[i][pivot_col] != 0) { keeper = i; break; }
    if (keeper != rows.size()) {
      if (rows[keeper][pivot_col] < 0)
        for (auto& x : rows[keeper]) x = -x;
      basis.push_back(rows[keeper]);
      rows.erase(rows.begin() + keeper);
    }
    ++pivot_col;
  }
  return basis;
}

size_t pivot_of(const std::vector<BigInt>& row) {
  for (size_t c = 0; c < row.size(); ++c)
    if (row[c] != 0) return c;
  return row.size();
}

}  // namespace

long integer_rank(const std::vector<std::vector<BigInt>>& rows) {
  return static_cast<long>(echelon(rows).size());
}

bool in_integer_span(const std::vector<std::vector<BigInt>>& rows,
                     const std::vector<BigInt>& target) {
  auto basis = echelon(rows);
  std::vector<BigInt> r = target;
  for (const auto& b : basis) {
    size_t p = pivot_of(b);
    if (p == r.size() || r[p] == 0) continue;
    if (r[p] % b[p] != 0) return false;
    BigInt q = r[p] / b[p];
    for (size_t c = 0; c < r.size(); ++c) r[c] -= q * b[c];
  }
  for (const auto& x : r)
    if (x != 0) return false;
  return true;
}

// --- lattice report ------------------------------------------------------

LatticeReport lattice_ranks(const Tree& t, const ValidationReport& rep) {
  if (!rep.is_small) throw TreeError("lattice_ranks expects at least a small tree");
  const FactorSpec& s = t.spec();
  LatticeReport out;

  std::vector<Rat> classes;
  auto class_of = [&](const Rat& len) {
    for (size_t i = 0; i < classes.size(); ++i)
      if (classes[i] == len) return i;
    classes.push_back(len);
    return classes.size() - 1;
  };
  for (const EdgeData& e : t.data().edges) class_of(e.length);

  auto vec_of_path = [&](const ReducedPath& p) {
    std::vector<BigInt> v(classes.size(), BigInt(0));
    for (const PathEntry& pe : p.entries) v[class_of(t.data().edges[pe.edge].length)] += 1;
    return v;
  };
  auto value_of = [&](const std::vector<BigInt>& v) {
    Rat total(0);
    for (size_t i = 0; i < v.size(); ++i) total += Rat(v[i]) * classes[i];
    return total;
  };

  // Branch/inversion lifts in one fundamental domain: the canonical lift of
  // every positive-index vertex plus far endpoints of edges with stable
  // letters.
  struct Lift {
    Word pos;
    int v;
  };
  std::vector<Lift> lifts;
  for (int v = 0; v < t.num_vertices(); ++v)
    if (local_index(t, v) > 0) lifts.push_back({Word{}, v});
  for (int e = 0; e < t.num_edges(); ++e) {
    const EdgeData& ed = t.data().edges[e];
    if (!ed.stable_letter) continue;
    if (local_index(t, ed.head) > 0) lifts.push_back({*ed.stable_letter, ed.head});
  }
  for (size_t i = 0; i < lifts.size(); ++i) {
    for (size_t j = i + 1; j < lifts.size(); ++j) {
      ReducedPath p = t.coset_path(lifts[i].pos, lifts[i].v, lifts[j].pos, lifts[j].v);
      auto vec = vec_of_path(p);
      out.lambda_gens.push_back({value_of(vec), vec});
    }
  }

  // Translation lengths of marking generators and pairwise products. The
  // lattice vector of a hyperbolic w is one axis period, recovered as
  // vec(path of w^2) - vec(path of w); elliptic words contribute zero.
  std::vector<Word> lwords;
  auto gens = marking_generators(s);
  for (const auto& g : gens) lwords.push_back(g.value);
  for (const auto& a : gens)
    for (const auto& b : gens) {
      Word p = multiply(s, a.value, b.value);
      if (!p.is_identity()) lwords.push_back(p);
    }
  for (const Word& w : lwords) {
    if (t.translation_length(w) == Rat(0)) {
      out.length_gens.push_back({Rat(0), std::vector<BigInt>(classes.size(), BigInt(0))});
      continue;
    }
    PathExpr ew = t.express(w);
    auto v1 = vec_of_path(t.reduce_path(ew, t.data().base));
    auto v2 = vec_of_path(t.reduce_path(concat_expr(ew, ew), t.data().base));
    std::vector<BigInt> diff(classes.size());
    for (size_t i = 0; i < classes.size(); ++i) diff[i] = v2[i] - v1[i];
    out.length_gens.push_back({value_of(diff), diff});
  }

  std::vector<std::vector<BigInt>> all, lambda_rows, l_rows;
  for (auto& [val, vec] : out.lambda_gens) {
    all.push_back(vec);
    lambda_rows.push_back(vec);
  }
  for (auto& [val, vec] : out.length_gens) {
    all.push_back(vec);
    l_rows.push_back(vec);
  }
  out.value_classes = classes;
  out.r_z = integer_rank(all);

  long b = 0;
  for (int v = 0; v < t.num_vertices(); ++v)
    if (local_index(t, v) > 0) ++b;
  out.bound = t.spec().free_rank() + b - 1;

  for (auto& [val, vec] : out.length_gens)
    if (!in_integer_span(lambda_rows, vec)) out.l_in_lambda = false;
  for (auto& [val, vec] : out.lambda_gens) {
    std::vector<BigInt> twice(vec.size());
    for (size_t i = 0; i < vec.size(); ++i) twice[i] = 2 * vec[i];
    if (!in_integer_span(l_rows, twice)) out.two_lambda_in_l = false;
  }
  return out;
}

EdgeCountReport edge_count_check(const Tree& t) {
  EdgeCountReport out;
  out.bound = 3 * t.spec().free_rank() + 2 * t.spec().num_factors() - 3;
  long removable = 0;
  for (int v = 0; v < t.num_vertices(); ++v) {
    if (t.ends(v).size() != 2 || local_index(t, v) != 0) continue;
    if (t.is_inversion_center(v)) continue;
    const End& d1 = t.ends(v)[0];
    const End& d2 = t.ends(v)[1];
    bool g1 = t.data().edges[d1.edge].group.has_value();
    bool g2 = t.data().edges[d2.edge].group.has_value();
    if (g1 != g2) continue;
    if (g1) {
      const Word& a = t.end_stab(d1);
      const Word& b = t.end_stab(d2);
      if (!(a == b) && !(a == invert(t.spec(), b))) continue;
    }
    ++removable;
  }
  out.essential_edges = t.num_edges() - removable;
  out.ok = out.essential_edges <= out.bound;
  return out;
}

}  // namespace freeprod
