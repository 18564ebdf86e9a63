// Exact arithmetic: arbitrary-precision integers and rationals.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>
#include <optional>
#include <stdexcept>
#include <string>

namespace freeprod {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::rational<BigInt>;

inline BigInt big_gcd(const BigInt& a, const BigInt& b) { return boost::multiprecision::gcd(a, b); }
inline BigInt big_lcm(const BigInt& a, const BigInt& b) { return boost::multiprecision::lcm(a, b); }
inline BigInt big_abs(const BigInt& a) { return a < 0 ? BigInt(-a) : a; }
inline int sgn(const BigInt& a) { return a < 0 ? -1 : (a > 0 ? 1 : 0); }

// Parses "p/q" or "p". Throws std::invalid_argument on garbage or q == 0.
Rat parse_rat(const std::string& s);
std::string rat_to_string(const Rat& r);

// Fits-in-long check for places where we must materialize a count.
std::optional<long long> to_small(const BigInt& v);

// Positive divisors of n (n > 0), ascending. Intended for syllable counts and
// finite-factor orders, so trial division is fine.
std::vector<BigInt> divisors(const BigInt& n);

}  // namespace freeprod
