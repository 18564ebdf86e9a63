#include "freeprod/corpus.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace freeprod {

namespace {
Letter xg(int j, long e = 1) { return Letter::free_gen(j, e); }
Rat pick(const std::vector<Rat>& v, size_t i, const Rat& dflt) {
  return i < v.size() ? v[i] : dflt;
}
}  // namespace

MarkedGraphOfGroups standard_rose(std::shared_ptr<const FactorSpec> spec,
                                  const std::vector<Rat>& loop_lengths,
                                  const std::vector<Rat>& spoke_lengths) {
  const FactorSpec& s = *spec;
  MarkedGraphOfGroups g;
  g.spec = std::move(spec);
  g.base = 0;
  g.vertices.push_back(VertexData{"v0", {}, {}});
  for (int i = 1; i <= s.num_factors(); ++i) {
    g.vertices.push_back(VertexData{"p" + std::to_string(i), {{i, Word{}}}, {}});
    EdgeData e;
    e.id = "spoke" + std::to_string(i);
    e.tail = 0;
    e.head = i;
    e.length = pick(spoke_lengths, static_cast<size_t>(i - 1), Rat(1));
    g.edges.push_back(e);
  }
  for (int j = 1; j <= s.free_rank(); ++j) {
    EdgeData e;
    e.id = "loop" + std::to_string(j);
    e.tail = 0;
    e.head = 0;
    e.length = pick(loop_lengths, static_cast<size_t>(j - 1), Rat(1));
    e.stable_letter = Word{{xg(j)}};
    g.edges.push_back(e);
  }
  for (int j = 1; j <= s.free_rank(); ++j) {
    PathExpr expr;
    expr.steps.push_back(PathStep::traverse(s.num_factors() + j - 1, true));
    g.free_marking.push_back(expr);
  }
  for (int i = 1; i <= s.num_factors(); ++i) {
    FactorMarking fm;
    auto loop_for = [&](const BigInt& e) {
      PathExpr expr;
      expr.steps.push_back(PathStep::traverse(i - 1, true));
      expr.steps.push_back(PathStep::element(Word{{Letter::peripheral(i, e)}}));
      expr.steps.push_back(PathStep::traverse(i - 1, false));
      return expr;
    };
    if (auto gen = s.cyclic_generator(i)) {
      fm.gen = loop_for(*gen);
    } else {
      for (const BigInt& e : s.elements(i)) fm.elements[e.convert_to<long>()] = loop_for(e);
    }
    g.factor_marking.push_back(fm);
  }
  return g;
}

MarkedGraphOfGroups barbell_f2(std::shared_ptr<const FactorSpec> spec, const Rat& eps) {
  MarkedGraphOfGroups g;
  g.spec = std::move(spec);
  g.base = 0;
  g.vertices = {VertexData{"u", {}, {}}, VertexData{"w", {}, {}}};
  EdgeData la{"loopa", 0, 0, eps, std::nullopt, Word{{xg(1)}}};
  EdgeData br{"bridge", 0, 1, Rat(1), std::nullopt, std::nullopt};
  EdgeData lb{"loopb", 1, 1, eps, std::nullopt, Word{{xg(2)}}};
  g.edges = {la, br, lb};
  PathExpr m1;
  m1.steps.push_back(PathStep::traverse(0, true));
  PathExpr m2;
  m2.steps.push_back(PathStep::traverse(1, true));
  m2.steps.push_back(PathStep::traverse(2, true));
  m2.steps.push_back(PathStep::traverse(1, false));
  g.free_marking = {m1, m2};
  return g;
}

MarkedGraphOfGroups edge_of_groups_f2(std::shared_ptr<const FactorSpec> spec, const Rat& len) {
  MarkedGraphOfGroups g;
  g.spec = std::move(spec);
  g.base = 0;
  g.vertices = {VertexData{"A", {}, {Word{{xg(1)}}}}, VertexData{"B", {}, {Word{{xg(2)}}}}};
  EdgeData e{"e", 0, 1, len, std::nullopt, std::nullopt};
  g.edges = {e};
  PathExpr m1;
  m1.steps.push_back(PathStep::element(Word{{xg(1)}}));
  PathExpr m2;
  m2.steps.push_back(PathStep::traverse(0, true));
  m2.steps.push_back(PathStep::element(Word{{xg(2)}}));
  m2.steps.push_back(PathStep::traverse(0, false));
  g.free_marking = {m1, m2};
  return g;
}

MarkedGraphOfGroups hnn_over_c_f2(std::shared_ptr<const FactorSpec> spec, const Rat& len) {
  const FactorSpec& s = *spec;
  MarkedGraphOfGroups g;
  g.spec = spec;
  g.base = 0;
  Word c{{xg(1)}};
  Word a = reduce(s, {xg(2), xg(1), xg(2, -1)});
  g.vertices = {VertexData{"v", {}, {c, a}}};
  EdgeData f;
  f.id = "f";
  f.tail = 0;
  f.head = 0;
  f.length = len;
  f.stable_letter = Word{{xg(2)}};
  f.group = EdgeGroupData{a, c};  // t c t^-1 = a across the loop
  g.edges = {f};
  PathExpr m1;
  m1.steps.push_back(PathStep::element(c));
  PathExpr m2;
  m2.steps.push_back(PathStep::traverse(0, true));
  g.free_marking = {m1, m2};
  return g;
}

MarkedGraphOfGroups tame_chain_f2(std::shared_ptr<const FactorSpec> spec, int depth) {
  if (depth < 1) throw TreeError("chain depth must be >= 1");
  const FactorSpec& s = *spec;
  MarkedGraphOfGroups g;
  g.spec = spec;
  g.base = 0;
  auto apow = [&](long e) { return Word{{xg(1, e)}}; };
  for (int j = 0; j <= depth; ++j)
    g.vertices.push_back(VertexData{"c" + std::to_string(j), {}, {apow(1L << j)}});
  for (int j = 1; j <= depth; ++j) {
    EdgeData e;
    e.id = "z" + std::to_string(j);
    e.tail = j - 1;
    e.head = j;
    e.length = Rat(1, BigInt(1L << j));
    e.group = EdgeGroupData{apow(1L << j), apow(1L << j)};
    g.edges.push_back(e);
  }
  EdgeData loop;
  loop.id = "bloop";
  loop.tail = depth;
  loop.head = depth;
  loop.length = Rat(1);
  loop.stable_letter = Word{{xg(2)}};
  g.edges.push_back(loop);
  PathExpr m1;
  m1.steps.push_back(PathStep::element(apow(1)));
  PathExpr m2;
  for (int j = 1; j <= depth; ++j) m2.steps.push_back(PathStep::traverse(j - 1, true));
  m2.steps.push_back(PathStep::traverse(depth, true));
  for (int j = depth; j >= 1; --j) m2.steps.push_back(PathStep::traverse(j - 1, false));
  g.free_marking = {m1, m2};
  return g;
}

std::vector<Word> probe_words(const FactorSpec& spec, int max_syllables, size_t cap) {
  std::vector<Word> alphabet;
  for (const auto& mg : marking_generators(spec)) {
    alphabet.push_back(mg.value);
    Word inv = invert(spec, mg.value);
    if (!(inv == mg.value)) alphabet.push_back(inv);
  }
  std::vector<Word> out;
  std::set<std::string> seen;
  std::deque<Word> frontier{Word{}};
  seen.insert(to_string(spec, Word{}));
  while (!frontier.empty() && out.size() < cap) {
    Word u = frontier.front();
    frontier.pop_front();
    for (const Word& a : alphabet) {
      Word p = multiply(spec, u, a);
      if (p.is_identity()) continue;
      if (static_cast<int>(p.syllables()) > max_syllables) continue;
      if (!seen.insert(to_string(spec, p)).second) continue;
      out.push_back(p);
      if (out.size() >= cap) break;
      frontier.push_back(p);
    }
  }
  return out;
}

std::vector<CorpusEntry> generate_corpus(const CorpusSpec& cs) {
  (void)cs;
  throw TreeError("corpus generator wired up after the fold machinery");
}

}  // namespace freeprod
