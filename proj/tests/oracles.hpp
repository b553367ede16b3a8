#pragma once

// Independent reference computations used to cross-check the library.
// Everything here is brute force and shares no code with include/genus.

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace oracle {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline int valuation(Int n, std::uint64_t p) {
  if (n == 0) return 1 << 20;
  if (n < 0) n = -n;
  int v = 0;
  while (n % p == 0) n /= p, ++v;
  return v;
}

inline int valuation(const Rat& q, std::uint64_t p) {
  return valuation(boost::multiprecision::numerator(q), p) - valuation(boost::multiprecision::denominator(q), p);
}

inline std::map<std::uint64_t, int> trial_factor(std::uint64_t n) {
  std::map<std::uint64_t, int> out;
  for (std::uint64_t d = 2; d <= n; ++d)
    while (n % d == 0) n /= d, ++out[d];
  return out;
}

inline Int gcd(Int a, Int b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    Int r = a % b;
    a = b;
    b = r;
  }
  return a;
}

using Grid = std::vector<std::vector<Int>>;

/// Determinant by cofactor expansion along the first row.
inline Int det(const Grid& m) {
  std::size_t n = m.size();
  if (n == 0) return 1;
  if (n == 1) return m[0][0];
  Int out = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (m[0][j] == 0) continue;
    Grid minor;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<Int> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != j) row.push_back(m[i][k]);
      minor.push_back(row);
    }
    Int c = m[0][j] * det(minor);
    out += (j % 2 == 0) ? c : Int(-c);
  }
  return out;
}

inline void subsets(std::size_t n, std::size_t k, std::size_t start, std::vector<std::size_t>& cur,
                    std::vector<std::vector<std::size_t>>& out) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = start; i < n; ++i) {
    cur.push_back(i);
    subsets(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

/// Determinantal divisors: gcd of all k x k minors, k = 1..min(r, c).
inline std::vector<Int> determinantal_divisors(const Grid& a) {
  std::size_t r = a.size(), c = r ? a[0].size() : 0;
  std::vector<Int> out;
  for (std::size_t k = 1; k <= std::min(r, c); ++k) {
    std::vector<std::vector<std::size_t>> rs, cs;
    std::vector<std::size_t> cur;
    subsets(r, k, 0, cur, rs);
    subsets(c, k, 0, cur, cs);
    Int g = 0;
    for (const auto& ri : rs)
      for (const auto& ci : cs) {
        Grid m(k, std::vector<Int>(k));
        for (std::size_t i = 0; i < k; ++i)
          for (std::size_t j = 0; j < k; ++j) m[i][j] = a[ri[i]][ci[j]];
        g = gcd(g, det(m));
      }
    out.push_back(g);
  }
  return out;
}

/// Smith invariants over Z: d_k = D_k / D_{k-1}, stopping at the first zero D_k.
inline std::vector<Int> smith_invariants(const Grid& a) {
  std::vector<Int> out;
  Int prev = 1;
  for (const Int& dk : determinantal_divisors(a)) {
    if (dk == 0) break;
    out.push_back(dk / prev);
    prev = dk;
  }
  return out;
}

/// Upper unitriangular 3x3 matrix [[1,a,c],[0,1,b],[0,0,1]].
struct U3 {
  Rat m[3][3];
  U3(const Rat& a, const Rat& b, const Rat& c) : m{{1, a, c}, {0, 1, b}, {0, 0, 1}} {}
  U3 operator*(const U3& o) const {
    U3 r(0, 0, 0);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        Rat s = 0;
        for (int k = 0; k < 3; ++k) s += m[i][k] * o.m[k][j];
        r.m[i][j] = s;
      }
    return r;
  }
  Rat a() const { return m[0][1]; }
  Rat b() const { return m[1][2]; }
  Rat c() const { return m[0][2]; }
};

inline U3 u3_pow(const U3& g, long n) {
  U3 r(0, 0, 0);
  U3 base = g;
  if (n < 0) {
    // inverse of [[1,a,c],[0,1,b],[0,0,1]] is [[1,-a,ab-c],[0,1,-b],[0,0,1]]
    base = U3(-g.a(), -g.b(), g.a() * g.b() - g.c());
    n = -n;
  }
  for (long k = 0; k < n; ++k) r = r * base;
  return r;
}

/// Membership in <x^k, y^k> inside H3(Z): exactly (k i, k j, k^2 l).
inline bool in_power_subgroup(const U3& g, long k) {
  auto divisible = [](const Rat& q, long m) {
    return boost::multiprecision::denominator(q) == 1 && boost::multiprecision::numerator(q) % m == 0;
  };
  return divisible(g.a(), k) && divisible(g.b(), k) && divisible(g.c(), k * k);
}

/// Rank-1 pullback membership: x is in the pullback of alpha iff v_p(x) >= v_p(alpha_block(p)) for
/// residual primes p and v_p(x) >= 0 on S. `alpha_at` maps a residual prime to its block's alpha.
template <class AlphaAt, class InS, class InResidual>
bool pullback_contains(const Rat& x, AlphaAt alpha_at, InS in_s, InResidual in_res, std::uint64_t bound) {
  if (x == 0) return true;
  for (std::uint64_t p = 2; p < bound; ++p) {
    if (!is_prime(p)) continue;
    int v = valuation(x, p);
    if (in_s(p) && v < 0) return false;
    if (in_res(p) && v < valuation(alpha_at(p), p)) return false;
  }
  return true;
}

}  // namespace oracle
