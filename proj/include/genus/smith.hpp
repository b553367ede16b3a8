#pragma once

// Smith normal form over Z with unimodular certificates, its reading over the
// ring Z_T of T-integers, and the lattice primitives built on it.

#include <optional>
#include <vector>

#include "genus/matrix.hpp"
#include "genus/primeset.hpp"

namespace genus {

/// U * A * V = D with U, V unimodular and D diagonal, d_0 | d_1 | ..., d_k >= 0.
struct SmithForm {
  IntMatrix u;
  IntMatrix v;
  IntMatrix d;
  std::size_t rank = 0;

  /// d_k for every column k of A (0 past the rank, i.e. free coordinates).
  Integer diagonal(std::size_t k) const { return k < d.rows() && k < d.cols() ? d(k, k) : Integer(0); }

  /// d_k read over Z_T: its T-part (1 = trivial coordinate, 0 = free coordinate).
  Integer diagonal_over(std::size_t k, const PrimeSet& t) const {
    Integer dk = diagonal(k);
    return dk == 0 ? Integer(0) : x_part(dk, t);
  }
};

/// Smith normal form. Pivot: smallest nonzero |entry|, ties broken by lowest
/// row then lowest column.
inline SmithForm smith_normal_form(const IntMatrix& a) {
  const std::size_t m = a.rows(), n = a.cols();
  SmithForm f{IntMatrix::identity(m), IntMatrix::identity(n), a, 0};
  IntMatrix& d = f.d;
  auto swap_r = [&](std::size_t i, std::size_t j) {
    d.swap_rows(i, j);
    f.u.swap_rows(i, j);
  };
  auto swap_c = [&](std::size_t i, std::size_t j) {
    d.swap_cols(i, j);
    f.v.swap_cols(i, j);
  };
  auto add_r = [&](std::size_t dst, std::size_t src, const Integer& k) {
    d.add_row(dst, src, k);
    f.u.add_row(dst, src, k);
  };
  auto add_c = [&](std::size_t dst, std::size_t src, const Integer& k) {
    d.add_col(dst, src, k);
    f.v.add_col(dst, src, k);
  };

  std::size_t t = 0;
  for (; t < m && t < n; ++t) {
    // Pivot over the remaining submatrix.
    std::optional<std::pair<std::size_t, std::size_t>> best;
    for (std::size_t i = t; i < m; ++i)
      for (std::size_t j = t; j < n; ++j)
        if (d(i, j) != 0 && (!best || abs(d(i, j)) < abs(d(best->first, best->second)))) best = {i, j};
    if (!best) break;
    swap_r(t, best->first);
    swap_c(t, best->second);

    for (;;) {
      bool dirty = false;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (d(i, t) == 0) continue;
        add_r(i, t, -(d(i, t) / d(t, t)));
        if (d(i, t) != 0) dirty = true;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (d(t, j) == 0) continue;
        add_c(j, t, -(d(t, j) / d(t, t)));
        if (d(t, j) != 0) dirty = true;
      }
      if (dirty) {
        // Move the smallest remainder in row/column t to the pivot.
        std::size_t bi = t, bj = t;
        for (std::size_t i = t + 1; i < m; ++i)
          if (d(i, t) != 0 && abs(d(i, t)) < abs(d(bi, bj))) bi = i, bj = t;
        for (std::size_t j = t + 1; j < n; ++j)
          if (d(t, j) != 0 && abs(d(t, j)) < abs(d(bi, bj))) bi = t, bj = j;
        swap_r(t, bi);
        swap_c(t, bj);
        continue;
      }
      // Row and column are clear; enforce divisibility of the rest.
      std::optional<std::size_t> bad;
      for (std::size_t i = t + 1; i < m && !bad; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (d(i, j) % d(t, t) != 0) {
            bad = i;
            break;
          }
      if (!bad) break;
      add_r(t, *bad, Integer(1));
    }
    if (d(t, t) < 0) {
      d.negate_row(t);
      f.u.negate_row(t);
    }
  }
  f.rank = t;
  return f;
}

/// Invariant factors over Z_T as free rank plus the nonunit torsion invariants.
struct ModuleInvariants {
  std::size_t free_rank = 0;
  std::vector<Integer> torsion;  // increasing under divisibility, all > 1

  bool trivial() const { return free_rank == 0 && torsion.empty(); }
  std::string str() const {
    std::string out;
    for (const auto& t : torsion) out += (out.empty() ? "" : " + ") + ("Z/" + t.str());
    if (free_rank) out += (out.empty() ? "" : " + ") + std::string("Z_T^") + std::to_string(free_rank);
    return out.empty() ? "0" : out;
  }
  friend bool operator==(const ModuleInvariants&, const ModuleInvariants&) = default;
};

/// Invariants of coker(relations) over Z_T, with `gens` generators.
inline ModuleInvariants invariants_over(const SmithForm& f, std::size_t gens, const PrimeSet& t) {
  ModuleInvariants inv;
  for (std::size_t k = 0; k < gens; ++k) {
    Integer dk = f.diagonal_over(k, t);
    if (dk == 0) ++inv.free_rank;
    else if (dk != 1) inv.torsion.push_back(dk);
  }
  return inv;
}

/// Z-basis of the row space of an integer matrix.
inline IntMatrix row_basis(const IntMatrix& gens) {
  if (gens.rows() == 0) return IntMatrix(0, gens.cols());
  auto f = smith_normal_form(gens);
  // rowspace(A) = rowspace(D V^{-1}); V^{-1} is integral since V is unimodular.
  auto vinv = inverse(to_rational(f.v));
  assert(vinv);
  IntMatrix out(f.rank, gens.cols());
  for (std::size_t k = 0; k < f.rank; ++k)
    for (std::size_t j = 0; j < gens.cols(); ++j) out(k, j) = f.d(k, k) * numerator((*vinv)(k, j));
  return out;
}

/// Z-basis of {y : y * A = 0}.
inline IntMatrix left_kernel(const IntMatrix& a) {
  auto f = smith_normal_form(a);
  IntMatrix out(a.rows() - f.rank, a.rows());
  for (std::size_t i = f.rank; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.rows(); ++j) out(i - f.rank, j) = f.u(i, j);
  return out;
}

/// Is the rational row vector y in the Z_X-span of the rows of r?
inline bool in_rowspace(const std::vector<Rational>& y, const IntMatrix& r, const PrimeSet& x) {
  const std::size_t n = y.size();
  RatMatrix yv(1, n, y);
  if (r.rows() == 0) {
    for (const auto& e : y)
      if (e != 0) return false;
    return true;
  }
  auto f = smith_normal_form(r);
  RatMatrix w = yv * to_rational(f.v);
  for (std::size_t k = 0; k < n; ++k) {
    Integer dk = f.diagonal_over(k, x);
    if (dk == 0) {
      if (w(0, k) != 0) return false;
    } else if (!is_x_integer(w(0, k) / Rational(dk), x)) {
      return false;
    }
  }
  return true;
}

/// Smallest positive integer t supported on X with t * y in the Z_X-span of r; nullopt if none.
inline std::optional<Integer> annihilator(const std::vector<Rational>& y, const IntMatrix& r, const PrimeSet& x) {
  const std::size_t n = y.size();
  RatMatrix yv(1, n, y);
  IntMatrix rr = r.rows() ? r : IntMatrix(1, n);
  auto f = smith_normal_form(rr);
  RatMatrix w = yv * to_rational(f.v);
  Integer t = 1;
  for (std::size_t k = 0; k < n; ++k) {
    if (w(0, k) == 0) continue;
    Integer dk = f.diagonal_over(k, x);
    if (dk == 0) return std::nullopt;
    Rational q = w(0, k) / Rational(dk);
    t = boost::multiprecision::lcm(t, x_part(denominator(q), x));
  }
  return t;
}

/// One constraint z * a in rowspace_{ring}(r) on z in Z_T^n.
struct LatticeConstraint {
  RatMatrix a;   // n x k
  IntMatrix r;   // rows x k
  PrimeSet ring; // subset of T
};

/// Z-basis of Lambda = { z in Z^n : z * a_j in rowspace_{ring_j}(r_j) for all j }.
/// The Z_T-module of solutions in Z_T^n is Lambda tensored with Z_T whenever
/// every ring_j is contained in T.
inline IntMatrix lattice_preimage(std::size_t n, const std::vector<LatticeConstraint>& cs) {
  // Columns: exact equations (kernel) and congruences modulo m_k.
  std::vector<std::vector<Integer>> eq_cols;
  std::vector<std::pair<std::vector<Integer>, Integer>> cong_cols;
  for (const auto& c : cs) {
    const std::size_t k = c.a.cols();
    assert(c.a.rows() == n);
    RatMatrix b = c.a;
    std::vector<Integer> dk(k, Integer(0));
    if (c.r.rows()) {
      auto f = smith_normal_form(c.r);
      b = c.a * to_rational(f.v);
      for (std::size_t j = 0; j < k; ++j) dk[j] = f.diagonal_over(j, c.ring);
    }
    for (std::size_t j = 0; j < k; ++j) {
      std::vector<Rational> col(n);
      Integer den = 1;
      for (std::size_t i = 0; i < n; ++i) {
        col[i] = dk[j] == 0 ? b(i, j) : b(i, j) / Rational(dk[j]);
        den = boost::multiprecision::lcm(den, denominator(col[i]));
      }
      std::vector<Integer> w(n);
      bool nonzero = false;
      for (std::size_t i = 0; i < n; ++i) {
        w[i] = numerator(col[i] * Rational(den));
        if (w[i] != 0) nonzero = true;
      }
      if (!nonzero) continue;
      if (dk[j] == 0) {
        eq_cols.push_back(std::move(w));
      } else {
        Integer mod = x_part(den, c.ring);
        if (mod != 1) cong_cols.emplace_back(std::move(w), mod);
      }
    }
  }
  const std::size_t ne = eq_cols.size(), nc = cong_cols.size();
  if (ne + nc == 0) return IntMatrix::identity(n);
  IntMatrix big(n + nc, ne + nc);
  for (std::size_t j = 0; j < ne; ++j)
    for (std::size_t i = 0; i < n; ++i) big(i, j) = eq_cols[j][i];
  for (std::size_t j = 0; j < nc; ++j) {
    for (std::size_t i = 0; i < n; ++i) big(i, ne + j) = cong_cols[j].first[i];
    big(n + j, ne + j) = cong_cols[j].second;
  }
  IntMatrix ker = left_kernel(big);
  return row_basis(ker.sub(0, 0, ker.rows(), n));
}

/// Given a Z-basis of a lattice in Z^{n+1}, an element (z, g) with g a unit of
/// Z_X of least size is found and z / g returned; nullopt if the last
/// coordinates only generate a proper ideal of Z_X.
inline std::optional<std::vector<Rational>> solve_unit_last(const IntMatrix& basis, const PrimeSet& x) {
  const std::size_t n1 = basis.cols();
  assert(n1 >= 1);
  std::vector<Integer> acc(n1, Integer(0));
  Integer g = 0;
  for (std::size_t i = 0; i < basis.rows(); ++i) {
    Integer b = basis(i, n1 - 1);
    if (b == 0) continue;
    if (g == 0) {
      g = b;
      acc = basis.row(i);
      continue;
    }
    Bezout e = ext_gcd(g, b);
    for (std::size_t j = 0; j < n1; ++j) acc[j] = e.u * acc[j] + e.v * basis(i, j);
    g = e.g;
  }
  if (g == 0 || x_part(g, x) != 1) return std::nullopt;
  std::vector<Rational> out(n1 - 1);
  for (std::size_t j = 0; j + 1 < n1; ++j) out[j] = Rational(acc[j]) / Rational(g);
  return out;
}

}  // namespace genus
