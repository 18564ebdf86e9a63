#include "freeprod/factors.hpp"

#include <algorithm>

namespace freeprod {

namespace {

void check_table(TableGroup& t) {
  const int n = static_cast<int>(t.names.size());
  if (n < 1) throw std::invalid_argument("table factor must have at least one element");
  if (static_cast<int>(t.mul.size()) != n)
    throw std::invalid_argument("multiplication table has wrong number of rows");
  for (const auto& row : t.mul) {
    if (static_cast<int>(row.size()) != n)
      throw std::invalid_argument("multiplication table has wrong number of columns");
    for (int v : row)
      if (v < 0 || v >= n) throw std::invalid_argument("multiplication table entry out of range");
  }
  // Latin square.
  for (int r = 0; r < n; ++r) {
    std::vector<bool> seen_r(n, false), seen_c(n, false);
    for (int c = 0; c < n; ++c) {
      if (seen_r[t.mul[r][c]]) throw std::invalid_argument("table row is not a permutation");
      seen_r[t.mul[r][c]] = true;
      if (seen_c[t.mul[c][r]]) throw std::invalid_argument("table column is not a permutation");
      seen_c[t.mul[c][r]] = true;
    }
  }
  // Two-sided identity.
  t.identity = -1;
  for (int e = 0; e < n; ++e) {
    bool ok = true;
    for (int x = 0; x < n && ok; ++x) ok = t.mul[e][x] == x && t.mul[x][e] == x;
    if (ok) { t.identity = e; break; }
  }
  if (t.identity < 0) throw std::invalid_argument("multiplication table has no identity");
  // Inverses.
  t.inverse.assign(n, -1);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b)
      if (t.mul[a][b] == t.identity && t.mul[b][a] == t.identity) { t.inverse[a] = b; break; }
    if (t.inverse[a] < 0) throw std::invalid_argument("table element without inverse");
  }
  // Associativity spot check is deliberately full: tables are small.
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (t.mul[t.mul[a][b]][c] != t.mul[a][t.mul[b][c]])
          throw std::invalid_argument("multiplication table is not associative");
}

}  // namespace

FactorSpec::FactorSpec(long free_rank, std::vector<PeripheralModel> factors)
    : free_rank_(free_rank), factors_(std::move(factors)) {
  if (free_rank_ < 0) throw std::invalid_argument("negative free rank");
  if (free_rank_ + static_cast<long>(factors_.size()) < 1)
    throw std::invalid_argument("Kurosh rank must be at least 1");
  for (auto& f : factors_) {
    if (auto* fc = std::get_if<FiniteCyclic>(&f)) {
      if (fc->order < 2) throw std::invalid_argument("finite cyclic factor needs order >= 2");
    } else if (auto* tg = std::get_if<TableGroup>(&f)) {
      check_table(*tg);
    }
  }
}

bool FactorSpec::operator==(const FactorSpec& o) const {
  if (free_rank_ != o.free_rank_ || factors_.size() != o.factors_.size()) return false;
  for (size_t i = 0; i < factors_.size(); ++i) {
    const auto& a = factors_[i];
    const auto& b = o.factors_[i];
    if (a.index() != b.index()) return false;
    if (auto* fa = std::get_if<FiniteCyclic>(&a)) {
      if (fa->order != std::get<FiniteCyclic>(b).order) return false;
    } else if (auto* ta = std::get_if<TableGroup>(&a)) {
      const auto& tb = std::get<TableGroup>(b);
      if (ta->names != tb.names || ta->mul != tb.mul) return false;
    }
  }
  return true;
}

bool FactorSpec::valid_elt(int i, const BigInt& e) const {
  const auto& f = factor(i);
  if (auto* fc = std::get_if<FiniteCyclic>(&f)) return e >= 1 && e < fc->order;
  if (std::get_if<InfiniteCyclic>(&f)) return e != 0;
  const auto& t = std::get<TableGroup>(f);
  return e >= 0 && e < static_cast<long>(t.names.size()) && e != t.identity;
}

BigInt FactorSpec::elt_inverse(int i, const BigInt& e) const {
  const auto& f = factor(i);
  if (auto* fc = std::get_if<FiniteCyclic>(&f)) return fc->order - e;
  if (std::get_if<InfiniteCyclic>(&f)) return -e;
  const auto& t = std::get<TableGroup>(f);
  return t.inverse[e.convert_to<int>()];
}

std::optional<BigInt> FactorSpec::elt_mul(int i, const BigInt& a, const BigInt& b) const {
  const auto& f = factor(i);
  if (auto* fc = std::get_if<FiniteCyclic>(&f)) {
    BigInt r = (a + b) % fc->order;
    if (r == 0) return std::nullopt;
    return r;
  }
  if (std::get_if<InfiniteCyclic>(&f)) {
    BigInt r = a + b;
    if (r == 0) return std::nullopt;
    return r;
  }
  const auto& t = std::get<TableGroup>(f);
  int r = t.mul[a.convert_to<int>()][b.convert_to<int>()];
  if (r == t.identity) return std::nullopt;
  return BigInt(r);
}

std::optional<BigInt> FactorSpec::elt_order(int i, const BigInt& e) const {
  const auto& f = factor(i);
  if (auto* fc = std::get_if<FiniteCyclic>(&f)) return fc->order / big_gcd(fc->order, e);
  if (std::get_if<InfiniteCyclic>(&f)) return std::nullopt;
  const auto& t = std::get<TableGroup>(f);
  int x = e.convert_to<int>(), acc = x, ord = 1;
  while (acc != t.identity) { acc = t.mul[acc][x]; ++ord; }
  return BigInt(ord);
}

std::optional<BigInt> FactorSpec::elt_pow(int i, const BigInt& e, const BigInt& m) const {
  const auto& f = factor(i);
  if (auto* fc = std::get_if<FiniteCyclic>(&f)) {
    BigInt r = (e * m) % fc->order;
    if (r < 0) r += fc->order;
    if (r == 0) return std::nullopt;
    return r;
  }
  if (std::get_if<InfiniteCyclic>(&f)) {
    BigInt r = e * m;
    if (r == 0) return std::nullopt;
    return r;
  }
  const auto& t = std::get<TableGroup>(f);
  BigInt ord = *elt_order(i, e);
  BigInt mm = m % ord;
  if (mm < 0) mm += ord;
  if (mm == 0) return std::nullopt;
  int acc = t.identity, x = e.convert_to<int>();
  for (BigInt j = 0; j < mm; ++j) acc = t.mul[acc][x];
  if (acc == t.identity) return std::nullopt;
  return BigInt(acc);
}

std::vector<BigInt> FactorSpec::elements(int i) const {
  const auto& f = factor(i);
  std::vector<BigInt> out;
  if (auto* fc = std::get_if<FiniteCyclic>(&f)) {
    for (BigInt e = 1; e < fc->order; ++e) out.push_back(e);
  } else if (auto* t = std::get_if<TableGroup>(&f)) {
    for (int e = 0; e < static_cast<int>(t->names.size()); ++e)
      if (e != t->identity) out.push_back(BigInt(e));
  } else {
    throw std::logic_error("elements() called on infinite factor");
  }
  return out;
}

bool FactorSpec::is_finite(int i) const { return !std::holds_alternative<InfiniteCyclic>(factor(i)); }

BigInt FactorSpec::factor_order(int i) const {
  const auto& f = factor(i);
  if (auto* fc = std::get_if<FiniteCyclic>(&f)) return fc->order;
  if (auto* t = std::get_if<TableGroup>(&f)) return BigInt(static_cast<long>(t->names.size()));
  throw std::logic_error("factor_order() called on infinite factor");
}

std::optional<BigInt> FactorSpec::cyclic_generator(int i) const {
  const auto& f = factor(i);
  if (std::holds_alternative<TableGroup>(f)) return std::nullopt;
  return BigInt(1);
}

std::string FactorSpec::elt_name(int i, const BigInt& e) const {
  const auto& f = factor(i);
  if (auto* t = std::get_if<TableGroup>(&f)) return t->names.at(e.convert_to<int>());
  return e.str();
}

}  // namespace freeprod
