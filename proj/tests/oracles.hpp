// Independent test oracles. Everything here recomputes expected values by
// brute force and must stay independent of the implementation paths it
// checks: no calls into reduce()/multiply()/KuroshGraph beyond plain word
// equality where noted.
#pragma once

#include <optional>
#include <random>
#include <set>
#include <vector>

#include "freeprod/factors.hpp"
#include "freeprod/words.hpp"

namespace oracle {

using freeprod::BigInt;
using freeprod::FactorSpec;
using freeprod::Letter;
using freeprod::Word;

// Naive reduction: scan for an adjacent interacting pair, rewrite, restart.
inline std::vector<Letter> naive_reduce(const FactorSpec& spec, std::vector<Letter> v) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i + 1 < v.size(); ++i) {
      const Letter a = v[i];
      const Letter b = v[i + 1];
      if (a.is_free() && b.is_free() && a.index == b.index) {
        BigInt e = a.exp + b.exp;
        v.erase(v.begin() + i, v.begin() + i + 2);
        if (e != 0) v.insert(v.begin() + i, Letter::free_gen(a.index, e));
        changed = true;
        break;
      }
      if (!a.is_free() && !b.is_free() && a.factor == b.factor) {
        auto p = spec.elt_mul(a.factor, a.exp, b.exp);
        v.erase(v.begin() + i, v.begin() + i + 2);
        if (p) v.insert(v.begin() + i, Letter::peripheral(a.factor, *p));
        changed = true;
        break;
      }
    }
  }
  return v;
}

// Concatenate-and-naively-reduce product.
inline Word naive_mul(const FactorSpec& spec, const Word& u, const Word& v) {
  std::vector<Letter> cat = u.letters;
  cat.insert(cat.end(), v.letters.begin(), v.letters.end());
  return Word{naive_reduce(spec, cat)};
}

inline Word naive_pow(const FactorSpec& spec, const Word& u, long m) {
  Word acc;
  Word base = u;
  if (m < 0) {
    std::vector<Letter> inv;
    for (auto it = u.letters.rbegin(); it != u.letters.rend(); ++it) {
      if (it->is_free()) inv.push_back(Letter::free_gen(it->index, -it->exp));
      else inv.push_back(Letter::peripheral(it->factor, spec.elt_inverse(it->factor, it->exp)));
    }
    base = Word{inv};
    m = -m;
  }
  for (long i = 0; i < m; ++i) acc = naive_mul(spec, acc, base);
  return acc;
}

// Brute-force maximal root for nonperipheral cyclically reduced words: try
// every divisor of the syllable count as a candidate period. Returns the
// multiplicity only.
inline long divisor_scan_multiplicity(const FactorSpec& spec, const Word& cyc) {
  const long m = static_cast<long>(cyc.syllables());
  if (m == 1) {
    const Letter& l = cyc.letters[0];
    if (l.is_free()) {
      auto v = freeprod::to_small(freeprod::big_abs(l.exp));
      return v ? static_cast<long>(*v) : 1;
    }
    return 1;  // peripheral handled by its own oracle
  }
  for (long p = 1; p < m; ++p) {
    if (m % p != 0) continue;
    Word cand{std::vector<Letter>(cyc.letters.begin(), cyc.letters.begin() + p)};
    if (naive_pow(spec, cand, m / p) == cyc) return m / p;
  }
  return 1;
}

// Exhaustive h^m scan inside a finite factor.
inline std::pair<BigInt, BigInt> factor_root_scan(const FactorSpec& spec, int factor, const BigInt& target) {
  BigInt best_mult = 1, best_elt = target;
  for (const BigInt& h : spec.elements(factor)) {
    BigInt ord = *spec.elt_order(factor, h);
    for (BigInt mm = 1; mm <= ord; ++mm) {
      auto p = spec.elt_pow(factor, h, mm);
      if (p && *p == target && (mm > best_mult || (mm == best_mult && h < best_elt))) {
        best_mult = mm;
        best_elt = h;
      }
    }
  }
  return {best_elt, best_mult};
}

// Membership oracle: enumerate all products of at most `depth` generators
// (and inverses), naively reduced, and test for w among them.
inline bool enumerated_member(const FactorSpec& spec, const std::vector<Word>& gens,
                              const Word& w, int depth) {
  std::vector<Word> alphabet;
  for (const Word& g : gens) {
    alphabet.push_back(g);
    alphabet.push_back(naive_pow(spec, g, -1));
  }
  std::set<std::string> seen;
  std::vector<Word> frontier{Word{}};
  seen.insert(freeprod::to_string(spec, Word{}));
  if (w.is_identity()) return true;
  for (int d = 0; d < depth; ++d) {
    std::vector<Word> next;
    for (const Word& u : frontier) {
      for (const Word& a : alphabet) {
        Word p = naive_mul(spec, u, a);
        if (p == w) return true;
        if (seen.insert(freeprod::to_string(spec, p)).second) next.push_back(p);
      }
    }
    frontier = std::move(next);
  }
  return false;
}

// Deterministic cross-platform random words (mt19937_64 + modulo, no
// distribution objects).
class WordGen {
 public:
  WordGen(const FactorSpec& spec, uint64_t seed) : spec_(spec), rng_(seed) {}

  uint64_t next(uint64_t bound) { return rng_() % bound; }

  Letter random_letter() {
    const long n = spec_.free_rank();
    const int k = spec_.num_factors();
    for (;;) {
      uint64_t pick = next(static_cast<uint64_t>(n + k));
      if (pick < static_cast<uint64_t>(n)) {
        long e = static_cast<long>(next(6)) - 3;
        if (e == 0) continue;
        return Letter::free_gen(static_cast<int>(pick) + 1, e);
      }
      int f = static_cast<int>(pick - n) + 1;
      if (spec_.is_finite(f)) {
        auto elems = spec_.elements(f);
        return Letter::peripheral(f, elems[next(elems.size())]);
      }
      long e = static_cast<long>(next(8)) - 4;
      if (e == 0) continue;
      return Letter::peripheral(f, e);
    }
  }

  std::vector<Letter> raw_letters(int len) {
    std::vector<Letter> v;
    for (int i = 0; i < len; ++i) v.push_back(random_letter());
    return v;
  }

  Word reduced_word(int len) { return Word{naive_reduce(spec_, raw_letters(len))}; }

 private:
  const FactorSpec& spec_;
  std::mt19937_64 rng_;
};

// Common specs used across the test suite.
inline FactorSpec f2() { return FactorSpec(2, {}); }
inline FactorSpec z2_z3_f2() {
  return FactorSpec(2, {freeprod::FiniteCyclic{2}, freeprod::FiniteCyclic{3}});
}
inline FactorSpec z6_f1() { return FactorSpec(1, {freeprod::FiniteCyclic{6}}); }
inline FactorSpec zinf_f1() { return FactorSpec(1, {freeprod::InfiniteCyclic{}}); }
inline FactorSpec s3_f1() {
  // Symmetric group on 3 letters as an explicit table: e,r,rr,s,sr,srr.
  using freeprod::TableGroup;
  TableGroup t;
  t.names = {"e", "r", "rr", "s", "sr", "srr"};
  auto compose = [](int a, int b) {
    // encode: index = rot + 3*flip where element = s^flip r^rot
    int ra = a % 3, fa = a / 3, rb = b % 3, fb = b / 3;
    // (s^fa r^ra)(s^fb r^rb) = s^(fa+fb) r^(ra' + rb) with ra' = ra or -ra.
    int ra2 = fb ? (3 - ra) % 3 : ra;
    return ((ra2 + rb) % 3) + 3 * ((fa + fb) % 2);
  };
  t.mul.assign(6, std::vector<int>(6));
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) t.mul[a][b] = compose(a, b);
  return FactorSpec(1, {t});
}

}  // namespace oracle
