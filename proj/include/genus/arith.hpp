#pragma once

// Exact integers and rationals, primality, factorization and p-adic valuations.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "genus/error.hpp"

namespace genus {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using Prime = std::uint64_t;

namespace detail {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

inline std::uint64_t gcd64(std::uint64_t a, std::uint64_t b) { return std::gcd(a, b); }

// Pollard rho (Brent variant); n is odd, composite, > 3.
inline std::uint64_t rho_factor(std::uint64_t n) {
  for (std::uint64_t c = 1;; ++c) {
    std::uint64_t x = 2, y = 2, d = 1;
    auto f = [&](std::uint64_t v) { return (mulmod(v, v, n) + c) % n; };
    while (d == 1) {
      x = f(x);
      y = f(f(y));
      d = gcd64(x > y ? x - y : y - x, n);
    }
    if (d != n) return d;
  }
}

}  // namespace detail

/// Deterministic Miller-Rabin for every 64-bit input.
inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = detail::powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < r; ++i) {
      x = detail::mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

inline bool is_prime(const Integer& n) {
  if (n < 2) return false;
  if (n > std::numeric_limits<std::uint64_t>::max())
    throw input_error("primality is only decided below 2^64");
  return is_prime(static_cast<std::uint64_t>(n));
}

/// Smallest prime strictly greater than p.
inline Prime next_prime(Prime p) {
  Prime q = p + 1;
  while (!is_prime(q)) ++q;
  return q;
}

inline void require_prime(Prime p) {
  if (!is_prime(p)) throw input_error(std::to_string(p) + " is not prime");
}

/// Prime factorization of n >= 1 as prime -> exponent.
inline std::map<Prime, int> factorize(std::uint64_t n) {
  std::map<Prime, int> out;
  if (n == 0) throw input_error("cannot factor 0");
  for (Prime p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL}) {
    while (n % p == 0) {
      ++out[p];
      n /= p;
    }
  }
  std::vector<std::uint64_t> stack;
  if (n > 1) stack.push_back(n);
  while (!stack.empty()) {
    std::uint64_t m = stack.back();
    stack.pop_back();
    if (m == 1) continue;
    if (is_prime(m)) {
      ++out[m];
      continue;
    }
    std::uint64_t d = detail::rho_factor(m);
    stack.push_back(d);
    stack.push_back(m / d);
  }
  return out;
}

/// Factorization of |n|, n != 0. Inputs of 64 bits or more are split by trial
/// division of known factors only, so they must reduce below 2^64.
inline std::map<Prime, int> factorize(const Integer& n) {
  Integer m = abs(n);
  if (m == 0) throw input_error("cannot factor 0");
  if (m > std::numeric_limits<std::uint64_t>::max()) {
    std::map<Prime, int> out;
    for (Prime p = 2; p < 1000 && m > std::numeric_limits<std::uint64_t>::max(); p = next_prime(p)) {
      while (m % p == 0) {
        ++out[p];
        m /= p;
      }
    }
    if (m > std::numeric_limits<std::uint64_t>::max())
      throw input_error("integer too large to factor: " + n.str());
    for (auto [p, e] : factorize(static_cast<std::uint64_t>(m))) out[p] += e;
    return out;
  }
  return factorize(static_cast<std::uint64_t>(m));
}

/// v_p(n) for n != 0.
inline int valuation(const Integer& n, Prime p) {
  if (n == 0) throw input_error("valuation of 0 is undefined");
  Integer m = abs(n);
  int v = 0;
  while (m % p == 0) {
    m /= p;
    ++v;
  }
  return v;
}

/// v_p(q) for q != 0.
inline int valuation(const Rational& q, Prime p) {
  if (q == 0) throw input_error("valuation of 0 is undefined");
  return valuation(numerator(q), p) - valuation(denominator(q), p);
}

/// Prime factorization of a nonzero rational as prime -> valuation.
inline std::map<Prime, int> factorize(const Rational& q) {
  if (q == 0) throw input_error("cannot factor 0");
  auto out = factorize(numerator(q));
  for (auto [p, e] : factorize(denominator(q))) out[p] -= e;
  return out;
}

inline Integer ipow(const Integer& base, unsigned exp) { return boost::multiprecision::pow(base, exp); }

inline Rational rpow(const Rational& base, int exp) {
  if (exp >= 0) return Rational(ipow(numerator(base), exp), ipow(denominator(base), exp));
  if (base == 0) throw input_error("0 has no negative powers");
  Rational inv = 1 / base;
  return Rational(ipow(numerator(inv), -exp), ipow(denominator(inv), -exp));
}

/// +-prod p^e.
inline Rational from_valuations(const std::map<Prime, int>& vals) {
  Rational r = 1;
  for (auto [p, e] : vals) r *= rpow(Rational(p), e);
  return r;
}

inline std::string to_string(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

struct Bezout {
  Integer g, u, v;  // g = u*a + v*b
};

/// Extended Euclid; g may be negative when a or b is.
inline Bezout ext_gcd(const Integer& a, const Integer& b) {
  Integer r0 = a, r1 = b, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
  while (r1 != 0) {
    Integer q = r0 / r1;
    Integer tmp = r0 - q * r1;
    r0 = r1, r1 = tmp;
    tmp = s0 - q * s1;
    s0 = s1, s1 = tmp;
    tmp = t0 - q * t1;
    t0 = t1, t1 = tmp;
  }
  return {r0, s0, t0};
}

}  // namespace genus
