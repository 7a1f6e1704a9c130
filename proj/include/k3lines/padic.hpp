#pragma once

// Primes, valuations and p-adic square classes of nonzero rationals.

#include "k3lines/numeric.hpp"

#include <vector>

namespace k3lines {

inline bool is_prime(const Integer& n) {
  if (n < 2) return false;
  if (n < 4) return true;
  if (n % 2 == 0) return false;
  for (Integer d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

// Distinct prime divisors in increasing order (trial division).
inline std::vector<Integer> prime_divisors(Integer n) {
  n = abs(n);
  std::vector<Integer> out;
  if (n < 2) return out;
  for (Integer d = 2; d * d <= n; d += (d == 2 ? 1 : 2)) {
    if (n % d != 0) continue;
    out.push_back(d);
    while (n % d == 0) n /= d;
  }
  if (n > 1) out.push_back(n);
  return out;
}

// p-adic valuation of a nonzero integer.
inline int valuation(Integer n, const Integer& p) {
  if (n == 0) throw std::invalid_argument("valuation of zero");
  int v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

inline int valuation(const Rational& q, const Integer& p) {
  return valuation(numerator(q), p) - valuation(denominator(q), p);
}

inline Integer power(const Integer& b, unsigned e) { return boost::multiprecision::pow(b, e); }

// Unit part of q at p, as an integer coprime to p (numerator times denominator
// stripped of p; equal to q / p^v up to a square factor).
inline Integer unit_part(const Rational& q, const Integer& p) {
  Integer a = numerator(q), b = denominator(q);
  while (a % p == 0) a /= p;
  while (b % p == 0) b /= p;
  return a * b;
}

// Legendre symbol (a/p) for odd prime p, via Euler's criterion.
inline int legendre(const Integer& a, const Integer& p) {
  Integer r = mod(a, p);
  if (r == 0) return 0;
  Integer e = boost::multiprecision::powm(r, (p - 1) / 2, p);
  return e == 1 ? 1 : -1;
}

// True iff a/b is a square in Q_p.
inline bool square_class_equal(const Rational& a, const Rational& b, const Integer& p) {
  if (a == 0 || b == 0) throw InputError("square_class_equal: zero argument");
  if (!is_prime(p)) throw InputError("square_class_equal: " + p.str() + " is not prime");
  Rational ratio = a / b;
  if (valuation(ratio, p) % 2 != 0) return false;
  Integer u = unit_part(ratio, p);
  if (p == 2) return mod(u, Integer(8)) == 1;
  return legendre(u, p) == 1;
}

}  // namespace k3lines
