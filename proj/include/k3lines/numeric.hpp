#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace k3lines {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input that cannot be parsed or violates a documented precondition.
class InputError : public Error {
 public:
  using Error::Error;
};

// A search or enumeration would exceed its configured size cap.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

inline Integer numerator(const Rational& q) { return boost::multiprecision::numerator(q); }
inline Integer denominator(const Rational& q) { return boost::multiprecision::denominator(q); }

inline Integer abs(const Integer& a) { return a < 0 ? Integer(-a) : a; }
inline Rational abs(const Rational& a) { return a < 0 ? Rational(-a) : a; }

inline Integer gcd(const Integer& a, const Integer& b) { return boost::multiprecision::gcd(a, b); }
inline Integer lcm(const Integer& a, const Integer& b) {
  if (a == 0 || b == 0) return 0;
  return abs(a / gcd(a, b) * b);
}

// Floor division and the matching non-negative remainder (for m > 0).
inline Integer floor_div(const Integer& a, const Integer& m) {
  Integer q = a / m;
  if ((a % m != 0) && ((a < 0) != (m < 0))) --q;
  return q;
}
inline Integer mod(const Integer& a, const Integer& m) {
  Integer r = a % m;
  if (r < 0) r += abs(m);
  return r;
}

// Representative of q modulo `period` in [0, period).
inline Rational mod(const Rational& q, const Rational& period) {
  Rational ratio = q / period;
  Integer fl = floor_div(numerator(ratio), denominator(ratio));
  return q - Rational(fl) * period;
}

inline std::int64_t to_int64(const Integer& a) {
  if (a > Integer(std::numeric_limits<std::int64_t>::max()) ||
      a < Integer(std::numeric_limits<std::int64_t>::min()))
    throw CapExceeded("integer does not fit in 64 bits: " + a.str());
  return a.convert_to<std::int64_t>();
}

inline int sign(const Integer& a) { return a > 0 ? 1 : (a < 0 ? -1 : 0); }
inline int sign(const Rational& a) { return a > 0 ? 1 : (a < 0 ? -1 : 0); }

inline std::string to_string(const Integer& a) { return a.str(); }
inline std::string to_string(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

// Parses "a" or "a/b" with optional sign and surrounding whitespace.
inline Rational parse_rational(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  auto parse_int = [&](std::string_view s) {
    s = trim(s);
    if (s.empty()) throw InputError("empty integer");
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) throw InputError("malformed integer: " + std::string(s));
    for (std::size_t j = i; j < s.size(); ++j)
      if (!std::isdigit(static_cast<unsigned char>(s[j])))
        throw InputError("malformed integer: " + std::string(s));
    return Integer(std::string(s[0] == '+' ? s.substr(1) : s));
  };
  text = trim(text);
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  Integer den = parse_int(text.substr(slash + 1));
  if (den == 0) throw InputError("zero denominator: " + std::string(text));
  return Rational(parse_int(text.substr(0, slash)), den);
}

}  // namespace k3lines
