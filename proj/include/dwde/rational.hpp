#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace dwde {

using Rational = mpq_class;
using BigInt = mpz_class;

/// num/den in canonical form (mpq_class's two-argument constructor does not
/// canonicalise).
inline Rational ratio(long num, long den) {
  Rational r{BigInt(num), BigInt(den)};
  r.canonicalize();
  return r;
}

/// Parses "p/q", "p" or a terminating decimal such as "0.25". Throws
/// Error(config_error) on malformed input or a zero denominator.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" form ("p" when the denominator is 1).
std::string to_string(const Rational& value);
std::string to_string(const BigInt& value);

double to_double(const Rational& value);


}  // namespace dwde
