#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace delaystab {

/// Arbitrary-precision exact fraction used by all certificate algebra.
using Rational = boost::multiprecision::cpp_rational;

/// Parses "p", "p/q", or a decimal literal such as "-0.125" or "2.5e-3".
/// Decimal text is read exactly (no binary rounding). Throws SpecError.
Rational parse_rational(std::string_view text);

/// Exact rational equal to the shortest round-trip decimal of `value`,
/// so 0.1 becomes 1/10 rather than the binary double.
Rational rational_from_double(double value);

/// "p/q", or "p" when the denominator is one.
std::string to_string(const Rational& value);

inline double to_double(const Rational& value) { return value.convert_to<double>(); }

inline Rational abs_exact(const Rational& value) { return value < 0 ? Rational(-value) : value; }

}  // namespace delaystab
