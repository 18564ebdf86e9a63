// Folded subgroup graphs for finitely generated H <= G_1 * ... * G_k * F_N.
//
// Free-generator edges form a folded labeled graph as in Stallings' classic
// construction. Peripheral syllables route through factor-clusters: a cluster
// is attached to regular vertices at cosets of the subgroup of G_i it
// carries, so folding stays finite for finite factors and gcd-bounded for
// cyclic ones. Membership, free rank (first Betti number after collapsing
// clusters), and the peripheral pieces of the Kurosh decomposition are read
// off the folded graph.
#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "freeprod/words.hpp"

namespace freeprod {

// Subgroup of one factor model.
struct FactorSubgroup {
  // Cyclic models: subgroup <t^d>. Finite order n: d | n, d == n means
  // trivial. Infinite: d == 0 means trivial.
  BigInt d;
  // Table model: sorted element indices, always containing the identity.
  std::vector<int> elems;

  static FactorSubgroup trivial(const FactorSpec& spec, int factor);
  static FactorSubgroup full(const FactorSpec& spec, int factor);
  bool is_trivial(const FactorSpec& spec, int factor) const;
  bool is_full(const FactorSpec& spec, int factor) const;
  bool contains(const FactorSpec& spec, int factor, const BigInt& e) const;
  void join(const FactorSpec& spec, int factor, const BigInt& e);
  // Canonical key of the right coset (this)*e; e may be the identity (0 for
  // cyclic models, identity index for tables).
  BigInt coset_key(const FactorSpec& spec, int factor, const BigInt& e) const;
  // A representative of the coset with the given key (identity allowed).
  BigInt coset_rep(const FactorSpec& spec, int factor, const BigInt& key) const;
  // Generators of the subgroup within the factor (nonidentity elements).
  std::vector<BigInt> generators(const FactorSpec& spec, int factor) const;
};

class KuroshGraph {
 public:
  KuroshGraph(const FactorSpec& spec, std::vector<Word> generators);

  const FactorSpec& spec() const { return *spec_; }
  const std::vector<Word>& generators() const { return gens_; }

  bool contains(const Word& w) const;

  long free_rank() const { return free_rank_; }
  long kurosh_rank() const { return free_rank_ + static_cast<long>(pieces_.size()); }
  bool is_trivial_group() const { return free_rank_ == 0 && pieces_.empty(); }

  struct PeripheralPiece {
    int factor;
    Word conjugator;      // H contains conjugator * <sub> * conjugator^-1
    FactorSubgroup sub;   // nontrivial subgroup of the factor model
    bool full;            // sub == whole factor
  };
  const std::vector<PeripheralPiece>& peripheral_pieces() const { return pieces_; }

  size_t vertex_count() const { return nvert_; }
  size_t edge_count() const { return nedge_; }

 private:
  struct Cluster {
    int factor;
    FactorSubgroup sub;
    std::map<BigInt, int> spokes;  // coset key -> regular vertex
  };

  const FactorSpec* spec_;
  std::vector<Word> gens_;
  int base_ = 0;

  // Folded structures.
  std::vector<std::map<int, int>> out_, in_;        // vertex -> gen -> vertex
  std::vector<std::map<int, int>> vertex_cluster_;  // vertex -> factor -> cluster
  std::vector<Cluster> clusters_;
  std::vector<char> cluster_alive_;
  size_t nvert_ = 0, nedge_ = 0;
  long free_rank_ = 0;
  std::vector<PeripheralPiece> pieces_;

  void build();
  // Follows gen-j edges `e` times from v (e may be negative); -1 if stuck.
  int follow_free(int v, int gen, const BigInt& e) const;
  int follow_peripheral(int v, int factor, const BigInt& elt) const;
};

}  // namespace freeprod
