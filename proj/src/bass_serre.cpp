// Geodesics in the Bass-Serre tree via loop-expression reduction.
#include "freeprod/tree.hpp"

namespace freeprod {

PathExpr Tree::express(const Word& w) const {
  const FactorSpec& s = spec();
  PathExpr out;
  size_t budget = 0;
  for (const Letter& l : w.letters) {
    PathExpr piece;
    if (l.is_free()) {
      piece = power_expr(s, g_.free_marking[l.index - 1], l.exp);
    } else {
      const FactorMarking& fm = g_.factor_marking[l.factor - 1];
      if (fm.gen) piece = power_expr(s, *fm.gen, l.exp);
      else piece = fm.elements.at(l.exp.convert_to<long>());
    }
    budget += piece.steps.size();
    if (budget > 500000) throw TreeError("expression too large");
    out = concat_expr(out, piece);
  }
  return out;
}

ReducedPath Tree::reduce_path(const PathExpr& expr, int start_vertex) const {
  const FactorSpec& s = spec();
  Word cur;
  int at = start_vertex;
  std::vector<PathEntry> stack;

  auto same_instance = [&](const PathEntry& a, const Word& pos2) {
    Word q = multiply(s, invert(s, a.pos), pos2);
    return in_edge_group(a.edge, q);
  };

  for (const PathStep& step : expr.steps) {
    if (step.is_elt()) {
      cur = multiply(s, cur, step.elt);
      continue;
    }
    const EdgeData& ed = g_.edges[step.edge];
    Word lambda = stable_letter(step.edge);
    Word pos;
    if (step.fwd) {
      if (ed.tail != at) throw TreeError("path discontinuity (fwd) at edge " + ed.id);
      pos = cur;
      cur = multiply(s, cur, lambda);
      at = ed.head;
    } else {
      if (ed.head != at) throw TreeError("path discontinuity (bwd) at edge " + ed.id);
      cur = multiply(s, cur, invert(s, lambda));
      pos = cur;
      at = ed.tail;
    }
    if (!stack.empty() && stack.back().edge == step.edge && stack.back().fwd != step.fwd &&
        same_instance(stack.back(), pos)) {
      stack.pop_back();
    } else {
      stack.push_back(PathEntry{step.edge, step.fwd, pos});
    }
  }
  return ReducedPath{std::move(stack), std::move(cur)};
}

Rat Tree::path_length(const ReducedPath& p) const {
  Rat total(0);
  for (const PathEntry& e : p.entries) total += g_.edges[e.edge].length;
  return total;
}

Rat Tree::displacement(const Word& w) const {
  return path_length(reduce_path(express(w), g_.base));
}

Rat Tree::translation_length(const Word& w) const {
  PathExpr ew = express(w);
  Rat d1 = path_length(reduce_path(ew, g_.base));
  if (d1 == Rat(0)) return Rat(0);  // fixes the base lift
  Rat dm = path_length(reduce_path(inverse_expr(spec(), ew), g_.base));
  Rat d2 = path_length(reduce_path(concat_expr(ew, ew), g_.base));
  Rat delta = (d1 + dm - d2) / Rat(2);
  Rat len = d1 - Rat(2) * delta;
  return len > Rat(0) ? len : Rat(0);
}

std::vector<Rat> Tree::length_spectrum(std::span<const Word> words) const {
  std::vector<Rat> out;
  out.reserve(words.size());
  for (const Word& w : words) out.push_back(translation_length(w));
  return out;
}

Rat Tree::coset_distance(const Word& a, int u, const Word& b, int v) const {
  return path_length(coset_path(a, u, b, v));
}

ReducedPath Tree::coset_path(const Word& a, int u, const Word& b, int v) const {
  // d(a.u~, b.v~) = d(u~, (a^-1 b).v~): walk to the base, apply the marking
  // expression of a^-1 b, walk out to v. Entry positions are reported in the
  // frame where the start vertex sits at 1*u~; prepending `a` to all entry
  // positions transports them to the original frame if needed.
  Word g = multiply(spec(), invert(spec(), a), b);
  PathExpr expr = tree_path(u, g_.base);
  expr = concat_expr(expr, express(g));
  expr = concat_expr(expr, tree_path(g_.base, v));
  return reduce_path(expr, u);
}

}  // namespace freeprod
