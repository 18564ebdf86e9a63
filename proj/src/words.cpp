#include "freeprod/words.hpp"

#include <algorithm>
#include <sstream>

namespace freeprod {

namespace {

void check_letter(const FactorSpec& spec, const Letter& l) {
  if (l.is_free()) {
    if (l.index < 1 || l.index > spec.free_rank())
      throw WordError("free generator index out of range: " + std::to_string(l.index));
    if (l.exp == 0) throw WordError("free generator with zero exponent");
  } else {
    if (l.factor < 1 || l.factor > spec.num_factors())
      throw WordError("factor index out of range: " + std::to_string(l.factor));
    if (!spec.valid_elt(l.factor, l.exp))
      throw WordError("invalid element id for factor " + std::to_string(l.factor));
  }
}

// Appends letter l to the normal-form stack `out`, merging with the top.
void push_letter(const FactorSpec& spec, std::vector<Letter>& out, const Letter& l) {
  if (!out.empty()) {
    Letter& t = out.back();
    if (l.is_free() && t.is_free() && l.index == t.index) {
      t.exp += l.exp;
      if (t.exp == 0) out.pop_back();
      return;
    }
    if (!l.is_free() && !t.is_free() && l.factor == t.factor) {
      auto prod = spec.elt_mul(l.factor, t.exp, l.exp);
      if (prod) t.exp = *prod; else out.pop_back();
      return;
    }
  }
  out.push_back(l);
}

Letter invert_letter(const FactorSpec& spec, const Letter& l) {
  if (l.is_free()) return Letter::free_gen(l.index, -l.exp);
  return Letter::peripheral(l.factor, spec.elt_inverse(l.factor, l.exp));
}

// Splits a letter into (prefix, rest) where prefix is a "unit": for free
// letters x^e the unit is x^sgn(e); for peripheral letters the letter itself.
// Used by cyclic reduction when only part of a syllable cancels.
bool is_cyclically_reduced(const FactorSpec& spec, const Word& w) {
  if (w.syllables() < 2) return true;
  const Letter& a = w.letters.front();
  const Letter& b = w.letters.back();
  if (a.is_free() && b.is_free() && a.index == b.index) return false;
  if (!a.is_free() && !b.is_free() && a.factor == b.factor) return false;
  return true;
}

// Lexicographically least rotation of the syllable sequence; returns the
// rotation offset. Naive O(m^2), fine at this scale.
size_t least_rotation(const std::vector<Letter>& s) {
  const size_t m = s.size();
  size_t best = 0;
  for (size_t r = 1; r < m; ++r) {
    for (size_t i = 0; i < m; ++i) {
      int c = letter_cmp(s[(r + i) % m], s[(best + i) % m]);
      if (c < 0) { best = r; break; }
      if (c > 0) break;
    }
  }
  return best;
}

}  // namespace

int letter_cmp(const Letter& a, const Letter& b) {
  if (a.is_free() != b.is_free()) return a.is_free() ? -1 : 1;
  if (a.is_free()) {
    if (a.index != b.index) return a.index < b.index ? -1 : 1;
    int sa = sgn(a.exp) > 0 ? 0 : 1, sb = sgn(b.exp) > 0 ? 0 : 1;
    if (sa != sb) return sa < sb ? -1 : 1;
    BigInt ma = big_abs(a.exp), mb = big_abs(b.exp);
    if (ma != mb) return ma < mb ? -1 : 1;
    return 0;
  }
  if (a.factor != b.factor) return a.factor < b.factor ? -1 : 1;
  if (a.exp != b.exp) return a.exp < b.exp ? -1 : 1;
  return 0;
}

Word reduce(const FactorSpec& spec, const std::vector<Letter>& raw) {
  std::vector<Letter> out;
  out.reserve(raw.size());
  for (const Letter& l : raw) {
    check_letter(spec, l);
    push_letter(spec, out, l);
  }
  return Word{std::move(out)};
}

Word multiply(const FactorSpec& spec, const Word& u, const Word& v) {
  std::vector<Letter> out = u.letters;
  for (const Letter& l : v.letters) push_letter(spec, out, l);
  return Word{std::move(out)};
}

Word multiply(const FactorSpec& spec, const Word& u, const Word& v, const Word& w) {
  return multiply(spec, multiply(spec, u, v), w);
}

Word invert(const FactorSpec& spec, const Word& u) {
  std::vector<Letter> out;
  out.reserve(u.letters.size());
  for (auto it = u.letters.rbegin(); it != u.letters.rend(); ++it)
    out.push_back(invert_letter(spec, *it));
  return Word{std::move(out)};
}

Word power(const FactorSpec& spec, const Word& u, const BigInt& m) {
  if (m == 0 || u.is_identity()) return Word{};
  // Single-syllable powers close in one step; general powers by repeated
  // multiplication of the (small) base.
  if (u.syllables() == 1) {
    const Letter& l = u.letters[0];
    if (l.is_free()) return Word{{Letter::free_gen(l.index, l.exp * m)}};
    auto p = spec.elt_pow(l.factor, l.exp, m);
    if (!p) return Word{};
    return Word{{Letter::peripheral(l.factor, *p)}};
  }
  Word base = m < 0 ? invert(spec, u) : u;
  auto n = to_small(big_abs(m));
  if (!n) throw WordError("power exponent too large to expand");
  Word acc;
  for (long long i = 0; i < *n; ++i) acc = multiply(spec, acc, base);
  return acc;
}

Word conjugate(const FactorSpec& spec, const Word& g, const Word& u) {
  return multiply(spec, multiply(spec, g, u), invert(spec, g));
}

CyclicReduction cyclic_reduce(const FactorSpec& spec, const Word& w) {
  Word core = w;
  Word conj;  // accumulated left conjugator
  while (!is_cyclically_reduced(spec, core)) {
    const Letter first = core.letters.front();
    const Letter last = core.letters.back();
    std::vector<Letter> mid(core.letters.begin() + 1, core.letters.end() - 1);
    Word inner{std::move(mid)};
    // w' = first * inner * last with first,last interacting.
    // Conjugating by last^-1 turns it into (last*first) * inner.
    Word s = invert(spec, Word{{last}});
    conj = multiply(spec, conj, s);
    std::vector<Letter> merged;
    push_letter(spec, merged, last);
    push_letter(spec, merged, first);
    Word head{std::move(merged)};
    core = multiply(spec, head, inner);
  }
  // Rotate to the canonical representative; fold the rotation prefix into the
  // conjugator: p.q ~ q.p with p.q = p (q.p) p^-1.
  if (core.syllables() >= 2) {
    size_t r = least_rotation(core.letters);
    if (r != 0) {
      Word prefix{std::vector<Letter>(core.letters.begin(), core.letters.begin() + r)};
      Word suffix{std::vector<Letter>(core.letters.begin() + r, core.letters.end())};
      conj = multiply(spec, conj, prefix);
      core = multiply(spec, suffix, prefix);
    }
  }
  return CyclicReduction{CyclicWord{core}, conj};
}

MaxRoot max_root(const FactorSpec& spec, const Word& w) {
  if (w.is_identity()) throw WordError("max_root of the identity");
  CyclicReduction cr = cyclic_reduce(spec, w);
  const Word& core = cr.core.rep;
  const Word& conj = cr.conjugator;
  const size_t m = core.syllables();

  if (m == 1) {
    const Letter& l = core.letters[0];
    if (l.is_free()) {
      BigInt mult = big_abs(l.exp);
      Word root{{Letter::free_gen(l.index, sgn(l.exp))}};
      return MaxRoot{conjugate(spec, conj, root), mult};
    }
    // Peripheral: exhaustive search in the factor model.
    const int i = l.factor;
    if (!spec.is_finite(i)) {
      BigInt mult = big_abs(l.exp);
      Word root{{Letter::peripheral(i, sgn(l.exp))}};
      return MaxRoot{conjugate(spec, conj, root), mult};
    }
    BigInt best_mult = 1, best_elt = l.exp;
    for (const BigInt& h : spec.elements(i)) {
      BigInt ord = *spec.elt_order(i, h);
      for (BigInt mm = 1; mm <= ord; ++mm) {
        auto p = spec.elt_pow(i, h, mm);
        if (p && *p == l.exp && (mm > best_mult || (mm == best_mult && h < best_elt))) {
          best_mult = mm;
          best_elt = h;
        }
      }
    }
    Word root{{Letter::peripheral(i, best_elt)}};
    return MaxRoot{conjugate(spec, conj, root), best_mult};
  }

  // Smallest period p of the cyclic syllable sequence with p | m.
  for (const BigInt& pb : divisors(BigInt(static_cast<long>(m)))) {
    size_t p = static_cast<size_t>(pb.convert_to<long>());
    if (p == m) break;
    bool periodic = true;
    for (size_t idx = 0; idx + p < m && periodic; ++idx)
      periodic = core.letters[idx] == core.letters[idx + p];
    if (periodic) {
      Word root{std::vector<Letter>(core.letters.begin(), core.letters.begin() + p)};
      return MaxRoot{conjugate(spec, conj, root), BigInt(static_cast<long>(m / p))};
    }
  }
  return MaxRoot{conjugate(spec, conj, core), 1};
}

std::optional<PeripheralWitness> is_peripheral(const FactorSpec& spec, const Word& w) {
  if (w.is_identity()) return std::nullopt;
  CyclicReduction cr = cyclic_reduce(spec, w);
  if (cr.core.rep.syllables() != 1) return std::nullopt;
  const Letter& l = cr.core.rep.letters[0];
  if (l.is_free()) return std::nullopt;
  return PeripheralWitness{l.factor, cr.conjugator, l.exp};
}

std::optional<BigInt> solve_power(const FactorSpec& spec, const Word& u, const Word& g) {
  if (u.is_identity()) {
    if (g.is_identity()) return BigInt(0);
    return std::nullopt;
  }
  if (g.is_identity()) return BigInt(0);
  auto per_u = is_peripheral(spec, u);
  if (per_u) {
    // g must be d * e * d^-1 with e in the same factor and e == elt^m.
    Word moved = multiply(spec, multiply(spec, invert(spec, per_u->conjugator), g), per_u->conjugator);
    if (moved.syllables() != 1) return std::nullopt;
    const Letter& l = moved.letters[0];
    if (l.is_free() || l.factor != per_u->factor) return std::nullopt;
    const int i = l.factor;
    if (!spec.is_finite(i)) {
      if (l.exp % per_u->elt != 0) return std::nullopt;
      return l.exp / per_u->elt;
    }
    BigInt ord = *spec.elt_order(i, per_u->elt);
    for (BigInt mm = 1; mm <= ord; ++mm) {
      auto p = spec.elt_pow(i, per_u->elt, mm);
      if (p && *p == l.exp) return mm;
    }
    return std::nullopt;
  }
  // Nonperipheral: multiplicities pin |m|; verify the sign directly.
  MaxRoot ru = max_root(spec, u);
  MaxRoot rg = max_root(spec, g);
  if (rg.multiplicity % ru.multiplicity != 0) return std::nullopt;
  BigInt cand = rg.multiplicity / ru.multiplicity;
  if (power(spec, u, cand) == g) return cand;
  if (power(spec, u, -cand) == g) return -cand;
  return std::nullopt;
}

bool same_cyclic_root(const FactorSpec& spec, const Word& u, const Word& v) {
  if (u.is_identity() || v.is_identity()) return false;
  return conjugacy_key(spec, max_root(spec, u).root) == conjugacy_key(spec, max_root(spec, v).root);
}

std::string to_string(const FactorSpec& spec, const Word& w) {
  if (w.is_identity()) return "1";
  std::ostringstream os;
  bool first = true;
  for (const Letter& l : w.letters) {
    if (!first) os << ".";
    first = false;
    if (l.is_free()) {
      os << "x" << l.index;
      if (l.exp != 1) os << "^" << l.exp.str();
    } else {
      os << spec.elt_name(l.factor, l.exp) << "@" << l.factor;
    }
  }
  return os.str();
}

std::string conjugacy_key(const FactorSpec& spec, const Word& w) {
  Word a = cyclic_reduce(spec, w).core.rep;
  Word b = cyclic_reduce(spec, invert(spec, w)).core.rep;
  std::string sa = to_string(spec, a), sb = to_string(spec, b);
  return std::min(sa, sb);
}

}  // namespace freeprod
