#pragma once

// Exact rational arithmetic used everywhere a measure, ratio or bound is
// computed. No floating point is allowed on these code paths.

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace odoforge {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Canonical "p/q" encoding: normalized, q > 0, integers rendered as "p/1".
std::string rational_str(const Rational& r);

// Accepts "p/q" or a bare integer "p".
Rational parse_rational(const std::string& s);

// 2^e for any integer e (negative exponents give 1/2^|e|).
Rational pow2(long e);

}  // namespace odoforge
