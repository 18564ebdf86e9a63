#include "doctest.h"
#include "freeprod/words.hpp"
#include "oracles.hpp"

using namespace freeprod;

namespace {
Word W(std::vector<Letter> ls) { return Word{std::move(ls)}; }
Letter x(int i, long e = 1) { return Letter::free_gen(i, e); }
Letter per(int f, long e) { return Letter::peripheral(f, e); }
}  // namespace

TEST_CASE("reduce: free cancellation and finite-order pooling") {
  auto spec = oracle::z2_z3_f2();
  CHECK(reduce(spec, {x(1), x(1, -1)}).is_identity());
  // a.a in Z/2 is the identity.
  CHECK(reduce(spec, {per(1, 1), per(1, 1)}).is_identity());
  // a x1 x1^2 b with a in G1, b in G2 pools to three syllables.
  FactorSpec two_factors(1, {FiniteCyclic{2}, FiniteCyclic{3}});
  Word w = reduce(two_factors, {per(1, 1), x(1), x(1, 2), per(2, 1)});
  CHECK(w.syllables() == 3);
  CHECK(w.letters[1] == x(1, 3));
  // Matches the naive rewriting oracle on the same raw input.
  auto naive = oracle::naive_reduce(two_factors, {per(1, 1), x(1), x(1, 2), per(2, 1)});
  CHECK(w == Word{naive});
}

TEST_CASE("reduce rejects out-of-range input") {
  auto spec = oracle::f2();
  CHECK_THROWS_AS(reduce(spec, {x(3)}), WordError);
  CHECK_THROWS_AS(reduce(spec, {per(1, 1)}), WordError);
  auto z6 = oracle::z6_f1();
  CHECK_THROWS_AS(reduce(z6, {per(1, 6)}), WordError);
}

TEST_CASE("multiply: identities and junction cancellation") {
  auto spec = oracle::z2_z3_f2();
  Word u = reduce(spec, {x(1), per(1, 1)});
  Word v = reduce(spec, {per(1, 1), x(1, 2)});
  // (x1 a)(a^-1 x1^2): a has order 2 so the a's cancel and exponents pool.
  CHECK(multiply(spec, u, v) == W({x(1, 3)}));
  CHECK(multiply(spec, Word{}, v) == v);
  CHECK(multiply(spec, u, invert(spec, u)).is_identity());

  // (a x1)(x1^-1 a) in Z/3 gives a^2.
  FactorSpec z3(1, {FiniteCyclic{3}});
  Word p = reduce(z3, {per(1, 1), x(1)});
  Word q = reduce(z3, {x(1, -1), per(1, 1)});
  CHECK(multiply(z3, p, q) == W({per(1, 2)}));
}

TEST_CASE("cyclic_reduce examples") {
  auto spec = oracle::z2_z3_f2();
  SUBCASE("explicit conjugate") {
    Word w = reduce(spec, {x(1), x(2), x(1, -1)});
    auto cr = cyclic_reduce(spec, w);
    CHECK(cr.core.rep == W({x(2)}));
    CHECK(cr.conjugator == W({x(1)}));
    CHECK(conjugate(spec, cr.conjugator, cr.core.rep) == w);
  }
  SUBCASE("single peripheral letter is cyclically reduced") {
    Word w = W({per(1, 1)});
    auto cr = cyclic_reduce(spec, w);
    CHECK(cr.core.rep == w);
    CHECK(cr.conjugator.is_identity());
  }
  SUBCASE("strip matched ends to fixpoint") {
    // x1 a x2 a^-1 x1^-1 with a in G2 (order 3). Both the free pair and the
    // peripheral pair strip: the core is x2 with conjugator x1.a.
    Word w = reduce(spec, {x(1), per(2, 1), x(2), per(2, 2), x(1, -1)});
    auto cr = cyclic_reduce(spec, w);
    CHECK(cr.core.rep == W({x(2)}));
    CHECK(cr.conjugator == reduce(spec, {x(1), per(2, 1)}));
    CHECK(conjugate(spec, cr.conjugator, cr.core.rep) == w);
  }
  SUBCASE("rotation canonicalization keeps the conjugacy certificate") {
    Word w = reduce(spec, {x(2), per(2, 2), x(1), per(2, 1)});
    auto cr = cyclic_reduce(spec, w);
    CHECK(conjugate(spec, cr.conjugator, cr.core.rep) == w);
    // Any rotation of the syllables yields the same canonical core.
    Word rot = reduce(spec, {per(2, 2), x(1), per(2, 1), x(2)});
    CHECK(cyclic_reduce(spec, rot).core.rep == cr.core.rep);
  }
}

TEST_CASE("max_root examples") {
  auto spec = oracle::f2();
  SUBCASE("(x1x2)^3") {
    Word base = reduce(spec, {x(1), x(2)});
    Word w = power(spec, base, 3);
    auto mr = max_root(spec, w);
    CHECK(mr.multiplicity == 3);
    CHECK(mr.root == base);
  }
  SUBCASE("primitive word") {
    Word w = reduce(spec, {x(1), x(2)});
    auto mr = max_root(spec, w);
    CHECK(mr.multiplicity == 1);
    CHECK(mr.root == w);
  }
  SUBCASE("peripheral root in Z/6 per the exhaustive-scan tie-break") {
    auto z6 = oracle::z6_f1();
    Word w = W({per(1, 2)});  // t^2
    auto mr = max_root(z6, w);
    auto [elt, mult] = oracle::factor_root_scan(z6, 1, BigInt(2));
    CHECK(mr.multiplicity == mult);
    CHECK(mr.root == W({Letter::peripheral(1, elt)}));
    CHECK(power(z6, mr.root, mr.multiplicity) == w);
    // At least as good as the visible solution (t^4)^2 = t^8 = t^2.
    CHECK(mr.multiplicity >= 2);
  }
  SUBCASE("identity refused") {
    CHECK_THROWS_AS(max_root(spec, Word{}), WordError);
  }
}

TEST_CASE("is_peripheral") {
  auto spec = oracle::z2_z3_f2();
  auto w1 = is_peripheral(spec, W({per(1, 1)}));
  REQUIRE(w1.has_value());
  CHECK(w1->factor == 1);
  CHECK(w1->conjugator.is_identity());

  auto w2 = is_peripheral(spec, reduce(spec, {x(1), per(1, 1), x(1, -1)}));
  REQUIRE(w2.has_value());
  CHECK(w2->factor == 1);
  CHECK(w2->conjugator == W({x(1)}));

  CHECK_FALSE(is_peripheral(spec, reduce(spec, {x(1), per(2, 1)})).has_value());
  CHECK_FALSE(is_peripheral(spec, Word{}).has_value());
}

TEST_CASE("solve_power") {
  auto spec = oracle::f2();
  Word u = reduce(spec, {x(1), x(2)});
  CHECK(solve_power(spec, u, power(spec, u, 4)) == BigInt(4));
  CHECK(solve_power(spec, u, power(spec, u, -2)) == BigInt(-2));
  CHECK(solve_power(spec, u, Word{}) == BigInt(0));
  CHECK_FALSE(solve_power(spec, u, W({x(1)})).has_value());

  auto z6 = oracle::z6_f1();
  Word t_gen = W({per(1, 1)});
  CHECK(solve_power(z6, t_gen, W({per(1, 4)})) == BigInt(4));
  Word conj_t = reduce(z6, {x(1), per(1, 2), x(1, -1)});
  Word g = reduce(z6, {x(1), per(1, 4), x(1, -1)});
  CHECK(solve_power(z6, conj_t, g) == BigInt(2));
}

TEST_CASE("fuzz: reduce idempotence, associativity, inverse, roots") {
  for (const FactorSpec& spec : {oracle::z2_z3_f2(), oracle::zinf_f1(), oracle::s3_f1()}) {
    oracle::WordGen gen(spec, 0xfeedbeef);
    for (int iter = 0; iter < 400; ++iter) {
      auto raw = gen.raw_letters(static_cast<int>(gen.next(10)));
      Word r = reduce(spec, raw);
      CHECK(reduce(spec, r.letters) == r);
      CHECK(r == Word{oracle::naive_reduce(spec, raw)});

      Word u = gen.reduced_word(5), v = gen.reduced_word(5), w = gen.reduced_word(4);
      CHECK(multiply(spec, multiply(spec, u, v), w) == multiply(spec, u, multiply(spec, v, w)));
      CHECK(multiply(spec, u, invert(spec, u)).is_identity());

      if (!u.is_identity()) {
        auto mr = max_root(spec, u);
        CHECK(power(spec, mr.root, mr.multiplicity) == u);
        if (!is_peripheral(spec, u)) {
          Word cyc = cyclic_reduce(spec, u).core.rep;
          CHECK(mr.multiplicity == BigInt(oracle::divisor_scan_multiplicity(spec, cyc)));
        }
      }
    }
  }
}

TEST_CASE("conjugacy keys are rotation and inversion stable") {
  auto spec = oracle::f2();
  Word w = reduce(spec, {x(1), x(2, -1), x(1), x(1)});
  Word c = reduce(spec, {x(2), x(1, -1)});
  CHECK(conjugacy_key(spec, w) == conjugacy_key(spec, conjugate(spec, c, w)));
  CHECK(conjugacy_key(spec, w) == conjugacy_key(spec, invert(spec, w)));
}
