#include "covbell/rational.hpp"

#include <cctype>
#include <cstdlib>

namespace covbell {

std::string to_string_ratio(const Rational& r) {
  const BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

// Decimal digit run -> integer. Leading zeros are stripped first; the cpp_int
// string constructor would otherwise read them as an octal prefix.
BigInt digits_to_int(const std::string& digits) {
  const auto nz = digits.find_first_not_of('0');
  if (nz == std::string::npos) return BigInt(0);
  return BigInt(digits.substr(nz));
}

// Integer with optional sign.
std::optional<BigInt> parse_int(const std::string& s) {
  std::string body = s;
  bool neg = false;
  if (!body.empty() && (body[0] == '+' || body[0] == '-')) {
    neg = body[0] == '-';
    body = body.substr(1);
  }
  if (!all_digits(body)) return std::nullopt;
  BigInt v = digits_to_int(body);
  return neg ? -v : v;
}

}  // namespace

std::optional<Rational> parse_rational(const std::string& text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  }
  if (s.empty()) return std::nullopt;

  if (auto slash = s.find('/'); slash != std::string::npos) {
    auto num = parse_int(s.substr(0, slash));
    auto den = parse_int(s.substr(slash + 1));
    if (!num || !den || *den == 0) return std::nullopt;
    // The two-argument constructor rejects negative denominators outright.
    if (*den < 0) return Rational(-*num, -*den);
    return Rational(*num, *den);
  }

  // Decimal: split off exponent, then mantissa digits become num/10^k.
  std::string mant = s;
  long exp10 = 0;
  if (auto e = s.find_first_of("eE"); e != std::string::npos) {
    mant = s.substr(0, e);
    auto ex = parse_int(s.substr(e + 1));
    if (!ex) return std::nullopt;
    if (*ex > 4096 || *ex < -4096) return std::nullopt;
    exp10 = static_cast<long>(*ex);
  }
  bool neg = false;
  if (!mant.empty() && (mant[0] == '+' || mant[0] == '-')) {
    neg = mant[0] == '-';
    mant = mant.substr(1);
  }
  std::string digits;
  long frac_digits = 0;
  bool seen_dot = false;
  for (char c : mant) {
    if (c == '.') {
      if (seen_dot) return std::nullopt;
      seen_dot = true;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      if (seen_dot) ++frac_digits;
    } else {
      return std::nullopt;
    }
  }
  if (digits.empty()) return std::nullopt;
  BigInt num = digits_to_int(digits);
  if (neg) num = -num;
  long net = exp10 - frac_digits;
  BigInt den = 1;
  if (net >= 0) {
    num *= boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(net));
  } else {
    den = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(-net));
  }
  return Rational(num, den);
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace covbell
