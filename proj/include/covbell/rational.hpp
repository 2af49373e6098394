#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>

namespace covbell {

// Exact arithmetic vehicle for the certification path. cpp_rational keeps the
// fraction reduced with a positive denominator, which is exactly the invariant
// we need; arbitrary-precision integers avoid overflow in the elimination.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// "p/q" for non-integers, "p" for integers (e.g. "16/7", "2", "-3/8").
std::string to_string_ratio(const Rational& r);

// Accepts "p/q", "p", and plain decimal strings with optional exponent
// ("0.375", "-1", "2.5e-1"); returns nullopt when the text is not a number.
std::optional<Rational> parse_rational(const std::string& text);

double to_double(const Rational& r);

}  // namespace covbell
