// Normal forms for elements of G = G_1 * ... * G_k * F_N.
//
// A Word is a sequence of syllables: free-generator letters with pooled
// nonzero exponents, and nonidentity peripheral letters. Reduced means no two
// consecutive syllables share a free-generator index or a peripheral factor.
// The empty word is the identity.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "freeprod/factors.hpp"

namespace freeprod {

struct Letter {
  // factor == 0: free generator `index` (1-based) with exponent `exp` != 0.
  // factor >= 1: peripheral element `exp` of that factor (see factors.hpp).
  int factor = 0;
  int index = 0;
  BigInt exp;

  static Letter free_gen(int index, BigInt e) { return Letter{0, index, std::move(e)}; }
  static Letter peripheral(int factor, BigInt elt) { return Letter{factor, 0, std::move(elt)}; }
  bool is_free() const { return factor == 0; }
  bool operator==(const Letter& o) const {
    return factor == o.factor && index == o.index && exp == o.exp;
  }
};

struct Word {
  std::vector<Letter> letters;

  bool is_identity() const { return letters.empty(); }
  size_t syllables() const { return letters.size(); }
  bool operator==(const Word& o) const { return letters == o.letters; }
  bool operator!=(const Word& o) const { return !(*this == o); }
};

// Deterministic total order on letters: free before peripheral, then by
// index/factor, positive exponent before negative, then magnitude / element id.
// Used only to pick canonical cyclic rotations.
int letter_cmp(const Letter& a, const Letter& b);

// A cyclically reduced word stored in its lexicographically least rotation.
struct CyclicWord {
  Word rep;
  bool operator==(const CyclicWord& o) const { return rep == o.rep; }
};

class WordError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// --- core operations; all words are over `spec` ---

// Reduces an arbitrary letter sequence to normal form. Throws WordError on
// out-of-range generator/factor indices or invalid peripheral elements.
Word reduce(const FactorSpec& spec, const std::vector<Letter>& raw);

Word multiply(const FactorSpec& spec, const Word& u, const Word& v);
Word multiply(const FactorSpec& spec, const Word& u, const Word& v, const Word& w);
Word invert(const FactorSpec& spec, const Word& u);
Word power(const FactorSpec& spec, const Word& u, const BigInt& m);
Word conjugate(const FactorSpec& spec, const Word& g, const Word& u);  // g u g^-1

struct CyclicReduction {
  CyclicWord core;
  Word conjugator;  // w == conjugator * core.rep * conjugator^-1
};
CyclicReduction cyclic_reduce(const FactorSpec& spec, const Word& w);

struct MaxRoot {
  Word root;
  BigInt multiplicity;  // root^multiplicity == w, maximal (see below)
};
// For nonperipheral w the multiplicity is maximal over all factorizations,
// found through periodicity of the cyclic syllable sequence. For w conjugate
// into a factor, the root is searched inside the factor model; in a finite
// factor "maximal" means over exponents up to the candidate's order, ties
// broken by least element id. Throws WordError on the identity.
MaxRoot max_root(const FactorSpec& spec, const Word& w);

struct PeripheralWitness {
  int factor;
  Word conjugator;  // w == conjugator * (single letter of `factor`) * conjugator^-1
  BigInt elt;       // that letter's element
};
// Present iff w is conjugate into some G_i. The identity is not reported.
std::optional<PeripheralWitness> is_peripheral(const FactorSpec& spec, const Word& w);

// Solves u^m == g; nullopt when no integer m works. u == identity matches
// only g == identity (m = 0). For finite-order u the least nonnegative m is
// returned.
std::optional<BigInt> solve_power(const FactorSpec& spec, const Word& u, const Word& g);

// True iff <u> and <v> intersect nontrivially, i.e. share a primitive root.
// Both nontrivial.
bool same_cyclic_root(const FactorSpec& spec, const Word& u, const Word& v);

// Stable text form, e.g. "x1^3.a@2.x2^-1"; identity is "1". Used for display,
// memo keys, and deterministic ordering.
std::string to_string(const FactorSpec& spec, const Word& w);

// Canonical conjugacy-class key: the least of the canonical rotations of the
// cores of w and w^-1, rendered as text.
std::string conjugacy_key(const FactorSpec& spec, const Word& w);

}  // namespace freeprod
