// Peripheral factor models for free products G = G_1 * ... * G_k * F_N.
//
// Factors are finite cyclic, infinite cyclic, or explicit finite groups given
// by a multiplication table. Elements of cyclic factors are represented by
// their exponent (BigInt, canonical range [1, n-1] for finite order n);
// elements of table factors by their 0-based index into the element list.
#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "freeprod/numeric.hpp"

namespace freeprod {

struct FiniteCyclic {
  BigInt order;  // >= 2
};

struct InfiniteCyclic {};

struct TableGroup {
  std::vector<std::string> names;
  std::vector<std::vector<int>> mul;  // mul[a][b] = index of product
  int identity = -1;                  // derived at construction
  std::vector<int> inverse;           // derived at construction
};

using PeripheralModel = std::variant<FiniteCyclic, InfiniteCyclic, TableGroup>;

class FactorSpec {
 public:
  FactorSpec() = default;
  // Throws std::invalid_argument on rk_K == 0, bad orders, or a table that is
  // not a Latin square with identity and inverses.
  FactorSpec(long free_rank, std::vector<PeripheralModel> factors);

  long free_rank() const { return free_rank_; }
  int num_factors() const { return static_cast<int>(factors_.size()); }
  long kurosh_rank() const { return free_rank_ + num_factors(); }
  const PeripheralModel& factor(int i) const { return factors_.at(i - 1); }  // 1-based

  bool operator==(const FactorSpec& o) const;

  // --- element algebra inside factor i (1-based); elements are nonidentity ---
  bool valid_elt(int i, const BigInt& e) const;
  BigInt elt_inverse(int i, const BigInt& e) const;
  // Product; nullopt when the product is the identity.
  std::optional<BigInt> elt_mul(int i, const BigInt& a, const BigInt& b) const;
  // Order of the element; nullopt for infinite.
  std::optional<BigInt> elt_order(int i, const BigInt& e) const;
  // e^m; nullopt when the power is the identity. m may be any integer.
  std::optional<BigInt> elt_pow(int i, const BigInt& e, const BigInt& m) const;
  // All nonidentity elements, for finite factors only (ascending id order).
  std::vector<BigInt> elements(int i) const;
  bool is_finite(int i) const;
  // |G_i| for finite factors.
  BigInt factor_order(int i) const;
  // Canonical single generator for cyclic factors (exponent 1); table factors
  // have no distinguished generator and return nullopt.
  std::optional<BigInt> cyclic_generator(int i) const;

  std::string elt_name(int i, const BigInt& e) const;

 private:
  long free_rank_ = 0;
  std::vector<PeripheralModel> factors_;
};

}  // namespace freeprod
