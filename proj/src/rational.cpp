#include "odoforge/rational.hpp"

#include "odoforge/errors.hpp"

namespace odoforge {

std::string rational_str(const Rational& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

Rational parse_rational(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(BigInt(s));
    BigInt num(s.substr(0, slash));
    BigInt den(s.substr(slash + 1));
    if (den == 0) throw FormatError("rational with zero denominator: " + s);
    return Rational(num, den);
  } catch (const std::exception& e) {
    throw FormatError("bad rational '" + s + "': " + e.what());
  }
}

Rational pow2(long e) {
  BigInt p = BigInt(1) << static_cast<unsigned>(e < 0 ? -e : e);
  return e >= 0 ? Rational(p) : Rational(1, p);
}

}  // namespace odoforge
