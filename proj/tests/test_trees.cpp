#include "doctest.h"
#include "freeprod/corpus.hpp"
#include "freeprod/tree.hpp"
#include "oracles.hpp"
#include "tree_oracle.hpp"

using namespace freeprod;

namespace {
Letter x(int i, long e = 1) { return Letter::free_gen(i, e); }
Letter per(int f, long e) { return Letter::peripheral(f, e); }

std::shared_ptr<const FactorSpec> sp(FactorSpec s) {
  return std::make_shared<const FactorSpec>(std::move(s));
}
}  // namespace

TEST_CASE("F2 rose: Grushko, unit lengths, spectrum [1,1,2]") {
  auto spec = sp(oracle::f2());
  Tree t = Tree::analyze(standard_rose(spec));
  auto rep = validate(t);
  CHECK(rep.is_grushko);
  CHECK(rep.is_very_small);
  CHECK(rep.is_small);
  CHECK(rep.minimal);
  REQUIRE(rep.tame_index.has_value());
  CHECK(*rep.tame_index == 1);

  Word w1{{x(1)}}, w2{{x(2)}}, w12 = reduce(*spec, {x(1), x(2)});
  CHECK(t.translation_length(w1) == Rat(1));
  CHECK(t.translation_length(w2) == Rat(1));
  CHECK(t.translation_length(w12) == Rat(2));
  CHECK(t.translation_length(Word{}) == Rat(0));
  CHECK(t.quotient_volume() == Rat(2));

  // Oracle equivalence (brute-force ball minimization).
  oracle::TreeBall ball(t.data(), 5);
  for (const Word& w : {w1, w2, w12}) {
    auto o = ball.translation_length(w);
    REQUIRE(o.has_value());
    CHECK(*o == t.translation_length(w));
  }
}

TEST_CASE("standard rose of Z/2*Z/3*F1: peripheral lengths vanish, a.x1 -> 3") {
  auto spec = sp(FactorSpec(1, {FiniteCyclic{2}, FiniteCyclic{3}}));
  Tree t = Tree::analyze(standard_rose(spec));
  auto rep = validate(t);
  CHECK(rep.is_grushko);

  Word a{{per(1, 1)}};
  Word b{{per(2, 1)}};
  CHECK(t.translation_length(a) == Rat(0));
  CHECK(t.translation_length(b) == Rat(0));
  Word ax = reduce(*spec, {per(1, 1), x(1)});
  CHECK(t.translation_length(ax) == Rat(3));

  oracle::TreeBall ball(t.data(), 6);
  auto o = ball.translation_length(ax);
  REQUIRE(o.has_value());
  CHECK(*o == Rat(3));
  // Conjugates of peripherals are elliptic too.
  Word conj_a = reduce(*spec, {x(1), per(1, 1), x(1, -1)});
  CHECK(t.translation_length(conj_a) == Rat(0));
}

TEST_CASE("barbell: spectrum [eps, eps, 2+2eps] and volume") {
  auto spec = sp(oracle::f2());
  Rat eps(1, 10);
  Tree t = Tree::analyze(barbell_f2(spec, eps));
  auto rep = validate(t);
  CHECK(rep.is_grushko);
  CHECK(t.quotient_volume() == Rat(12, 10));

  Word a{{x(1)}}, b{{x(2)}}, ab = reduce(*spec, {x(1), x(2)});
  CHECK(t.translation_length(a) == eps);
  CHECK(t.translation_length(b) == eps);
  CHECK(t.translation_length(ab) == Rat(22, 10));

  oracle::TreeBall ball(t.data(), 6);
  for (const Word& w : {a, b, ab}) {
    auto o = ball.translation_length(w);
    REQUIRE(o.has_value());
    CHECK(*o == t.translation_length(w));
  }
}

TEST_CASE("edge of groups: very small, Grushko only with peripheral structure") {
  auto spec = sp(oracle::f2());
  Tree t = Tree::analyze(edge_of_groups_f2(spec, Rat(1)));
  auto rep = validate(t);
  CHECK(rep.is_very_small);
  CHECK_FALSE(rep.is_grushko);  // Z vertex groups are nonperipheral
  CHECK(rep.minimal);

  CHECK(t.translation_length(Word{{x(1)}}) == Rat(0));
  CHECK(t.translation_length(Word{{x(2)}}) == Rat(0));
  Word ab = reduce(*spec, {x(1), x(2)});
  CHECK(t.translation_length(ab) == Rat(2));

  // The same shape with genuine peripheral factors is a Grushko tree.
  auto spec2 = sp(FactorSpec(0, {InfiniteCyclic{}, InfiniteCyclic{}}));
  MarkedGraphOfGroups g;
  g.spec = spec2;
  g.base = 0;
  g.vertices = {VertexData{"A", {{1, Word{}}}, {}}, VertexData{"B", {{2, Word{}}}, {}}};
  g.edges = {EdgeData{"e", 0, 1, Rat(1), std::nullopt, std::nullopt}};
  FactorMarking f1, f2;
  PathExpr e1;
  e1.steps.push_back(PathStep::element(Word{{per(1, 1)}}));
  f1.gen = e1;
  PathExpr e2;
  e2.steps.push_back(PathStep::traverse(0, true));
  e2.steps.push_back(PathStep::element(Word{{per(2, 1)}}));
  e2.steps.push_back(PathStep::traverse(0, false));
  f2.gen = e2;
  g.factor_marking = {f1, f2};
  Tree t2 = Tree::analyze(g);
  CHECK(validate(t2).is_grushko);
}

TEST_CASE("HNN over <c>: very small, lengths") {
  auto spec = sp(oracle::f2());
  Tree t = Tree::analyze(hnn_over_c_f2(spec, Rat(1)));
  auto rep = validate(t);
  CHECK(rep.is_small);
  CHECK(rep.is_very_small);
  REQUIRE(rep.tame_index.has_value());
  CHECK(*rep.tame_index == 1);
  CHECK_FALSE(rep.is_grushko);

  Word c{{x(1)}};
  Word tt{{x(2)}};
  Word a = reduce(*spec, {x(2), x(1), x(2, -1)});
  CHECK(t.translation_length(c) == Rat(0));
  CHECK(t.translation_length(a) == Rat(0));
  CHECK(t.translation_length(tt) == Rat(1));

  oracle::TreeBall ball(t.data(), 2, 2, 6);
  auto o = ball.translation_length(tt);
  REQUIRE(o.has_value());
  CHECK(*o == Rat(1));
  auto oc = ball.translation_length(c);
  REQUIRE(oc.has_value());
  CHECK(*oc == Rat(0));
}

TEST_CASE("truncated chains: small, tame index 2^d, not very small") {
  auto spec = sp(oracle::f2());
  for (int d = 1; d <= 3; ++d) {
    Tree t = Tree::analyze(tame_chain_f2(spec, d));
    auto rep = validate(t);
    CHECK(rep.is_small);
    CHECK_FALSE(rep.is_very_small);
    CHECK(rep.minimal);
    REQUIRE(rep.tame_index.has_value());
    CHECK(*rep.tame_index == BigInt(1L << d));
    bool root_violation = false;
    for (const auto& v : rep.violations) root_violation |= v.axiom == "root-closed";
    CHECK(root_violation);
  }
}

TEST_CASE("length properties: scaling, conjugacy, powers, peripheral zero") {
  auto spec = sp(FactorSpec(2, {FiniteCyclic{3}}));
  MarkedGraphOfGroups rose = standard_rose(spec);
  MarkedGraphOfGroups scaled = rose;
  for (auto& e : scaled.edges) e.length *= Rat(5, 3);
  Tree t = Tree::analyze(rose);
  Tree ts = Tree::analyze(scaled);

  oracle::WordGen gen(*spec, 0xc0ffee);
  for (int i = 0; i < 60; ++i) {
    Word w = gen.reduced_word(1 + static_cast<int>(gen.next(4)));
    Word u = gen.reduced_word(static_cast<int>(gen.next(3)));
    Rat lw = t.translation_length(w);
    CHECK(ts.translation_length(w) == lw * Rat(5, 3));
    CHECK(t.translation_length(conjugate(*spec, u, w)) == lw);
    for (long n = 2; n <= 4; ++n)
      CHECK(t.translation_length(power(*spec, w, n)) == Rat(BigInt(n)) * lw);
    if (auto perw = is_peripheral(*spec, w)) CHECK(lw == Rat(0));
    if (!is_peripheral(*spec, w) && !w.is_identity())
      CHECK(lw > Rat(0));  // Grushko point stabilizers are peripheral only
  }
}

TEST_CASE("Lipschitz window across trees (finite Prop-1.4 shadow)") {
  auto spec = sp(oracle::f2());
  Tree rose = Tree::analyze(standard_rose(spec));
  Tree barb = Tree::analyze(barbell_f2(spec, Rat(1, 10)));
  Tree hnn = Tree::analyze(hnn_over_c_f2(spec, Rat(1)));
  // Y = generators and pairwise products.
  std::vector<Word> ybasis;
  for (const auto& mg : marking_generators(*spec)) ybasis.push_back(mg.value);
  std::vector<Word> year = ybasis;
  for (const auto& u : ybasis)
    for (const auto& v : ybasis) year.push_back(multiply(*spec, u, v));

  oracle::WordGen gen(*spec, 0xdecade);
  for (const Tree* T : {&barb, &hnn}) {
    Rat M(0);
    for (const auto& h : year) M = std::max(M, T->translation_length(h));
    for (int i = 0; i < 80; ++i) {
      Word w = gen.reduced_word(1 + static_cast<int>(gen.next(5)));
      CHECK(T->translation_length(w) <= M * rose.translation_length(w));
    }
  }
}

TEST_CASE("malformed trees are refused") {
  auto spec = sp(oracle::f2());

  SUBCASE("marking loop evaluating to the wrong element") {
    MarkedGraphOfGroups g = standard_rose(spec);
    std::swap(g.free_marking[0], g.free_marking[1]);
    CHECK_THROWS_AS(Tree::analyze(g), TreeError);
  }
  SUBCASE("non-loop marking expression") {
    MarkedGraphOfGroups g = edge_of_groups_f2(spec, Rat(1));
    g.free_marking[1].steps.pop_back();  // drop the return traversal
    CHECK_THROWS_AS(Tree::analyze(g), TreeError);
  }
  SUBCASE("rank accounting rejects a redundant rose") {
    // Rose with three petals t, c, tct^-1 is not an F2 tree.
    MarkedGraphOfGroups g = standard_rose(sp(FactorSpec(3, {})));
    auto spec2 = sp(oracle::f2());
    MarkedGraphOfGroups bad;
    bad.spec = spec2;
    bad.base = 0;
    bad.vertices = {VertexData{"v", {}, {}}};
    Word c{{x(1)}}, t{{x(2)}}, a = reduce(*spec2, {x(2), x(1), x(2, -1)});
    bad.edges = {EdgeData{"l1", 0, 0, Rat(1), std::nullopt, t},
                 EdgeData{"l2", 0, 0, Rat(1), std::nullopt, c},
                 EdgeData{"l3", 0, 0, Rat(1), std::nullopt, a}};
    PathExpr m1;
    m1.steps.push_back(PathStep::traverse(1, true));
    PathExpr m2;
    m2.steps.push_back(PathStep::traverse(0, true));
    bad.free_marking = {m1, m2};
    CHECK_THROWS_AS(Tree::analyze(bad), TreeError);
  }
  SUBCASE("nonpositive length") {
    MarkedGraphOfGroups g = standard_rose(spec);
    g.edges[0].length = Rat(0);
    CHECK_THROWS_AS(Tree::analyze(g), TreeError);
  }
  SUBCASE("edge group outside vertex group") {
    MarkedGraphOfGroups g = hnn_over_c_f2(spec, Rat(1));
    g.edges[0].group->tail_word = Word{{x(2)}};  // t is not in <c, tct^-1>
    CHECK_THROWS_AS(Tree::analyze(g), TreeError);
  }
}

TEST_CASE("subdivision leaves lengths intact") {
  auto spec = sp(oracle::f2());
  // Subdivide the barbell bridge by hand and compare spectra.
  MarkedGraphOfGroups g = barbell_f2(spec, Rat(1, 10));
  // bridge is edge 1 (u -> w); split into u -> m -> w of lengths 1/3, 2/3.
  g.vertices.push_back(VertexData{"m", {}, {}});
  g.edges[1].head = 2;
  g.edges[1].length = Rat(1, 3);
  g.edges.push_back(EdgeData{"bridge2", 2, 1, Rat(2, 3), std::nullopt, std::nullopt});
  // x2 marking: bridge, bridge2, loopb, bridge2 back, bridge back.
  PathExpr m2;
  m2.steps.push_back(PathStep::traverse(1, true));
  m2.steps.push_back(PathStep::traverse(3, true));
  m2.steps.push_back(PathStep::traverse(2, true));
  m2.steps.push_back(PathStep::traverse(3, false));
  m2.steps.push_back(PathStep::traverse(1, false));
  g.free_marking[1] = m2;
  Tree sub = Tree::analyze(g);
  Tree orig = Tree::analyze(barbell_f2(spec, Rat(1, 10)));
  auto probes = probe_words(*spec, 3, 40);
  CHECK(sub.length_spectrum(probes) == orig.length_spectrum(probes));
}
