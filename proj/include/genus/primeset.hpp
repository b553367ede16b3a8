#pragma once

// Finite and cofinite sets of primes, X-numbers and partition families
// (T, S, {T_i}) with T = union of the T_i and T_i, T_j meeting exactly in S.

#include <algorithm>
#include <compare>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "genus/arith.hpp"

namespace genus {

class PrimeSet {
 public:
  /// The empty set.
  PrimeSet() = default;

  static PrimeSet finite(std::vector<Prime> primes) { return PrimeSet(false, normalize(std::move(primes))); }
  static PrimeSet cofinite(std::vector<Prime> excluded) { return PrimeSet(true, normalize(std::move(excluded))); }
  static PrimeSet all() { return cofinite({}); }
  static PrimeSet none() { return finite({}); }

  bool is_cofinite() const noexcept { return cofinite_; }
  bool is_finite() const noexcept { return !cofinite_; }
  bool empty() const noexcept { return !cofinite_ && list_.empty(); }
  bool is_all() const noexcept { return cofinite_ && list_.empty(); }

  /// Members for a finite set, excluded primes for a cofinite one.
  const std::vector<Prime>& listed() const noexcept { return list_; }

  bool contains(Prime p) const {
    require_prime(p);
    return contains_unchecked(p);
  }

  PrimeSet complement() const { return PrimeSet(!cofinite_, list_); }

  PrimeSet unite(const PrimeSet& o) const {
    if (!cofinite_ && !o.cofinite_) return PrimeSet(false, set_union(list_, o.list_));
    if (cofinite_ && o.cofinite_) return PrimeSet(true, set_intersection(list_, o.list_));
    const PrimeSet& fin = cofinite_ ? o : *this;
    const PrimeSet& cof = cofinite_ ? *this : o;
    return PrimeSet(true, set_difference(cof.list_, fin.list_));
  }

  PrimeSet intersect(const PrimeSet& o) const {
    if (!cofinite_ && !o.cofinite_) return PrimeSet(false, set_intersection(list_, o.list_));
    if (cofinite_ && o.cofinite_) return PrimeSet(true, set_union(list_, o.list_));
    const PrimeSet& fin = cofinite_ ? o : *this;
    const PrimeSet& cof = cofinite_ ? *this : o;
    return PrimeSet(false, set_difference(fin.list_, cof.list_));
  }

  PrimeSet difference(const PrimeSet& o) const { return intersect(o.complement()); }

  bool subset_of(const PrimeSet& o) const { return difference(o).empty(); }

  /// Smallest member, if any.
  std::optional<Prime> first() const { return next_after(1); }

  /// Smallest member strictly greater than p.
  std::optional<Prime> next_after(Prime p) const {
    if (!cofinite_) {
      auto it = std::upper_bound(list_.begin(), list_.end(), p);
      if (it == list_.end()) return std::nullopt;
      return *it;
    }
    Prime q = next_prime(p);
    while (!contains_unchecked(q)) q = next_prime(q);
    return q;
  }

  /// Members up to and including bound, in increasing order.
  std::vector<Prime> members_up_to(Prime bound) const {
    std::vector<Prime> out;
    for (auto p = first(); p && *p <= bound; p = next_after(*p)) out.push_back(*p);
    return out;
  }

  /// Canonical DSL text: {2,3}, all, all\{2,3}.
  std::string str() const {
    std::ostringstream os;
    if (cofinite_) {
      os << "all";
      if (list_.empty()) return os.str();
      os << "\\";
    }
    os << "{";
    for (std::size_t i = 0; i < list_.size(); ++i) os << (i ? "," : "") << list_[i];
    os << "}";
    return os.str();
  }

  friend bool operator==(const PrimeSet&, const PrimeSet&) = default;

 private:
  PrimeSet(bool cofinite, std::vector<Prime> list) : cofinite_(cofinite), list_(std::move(list)) {}

  bool contains_unchecked(Prime p) const {
    bool listed = std::binary_search(list_.begin(), list_.end(), p);
    return cofinite_ ? !listed : listed;
  }

  static std::vector<Prime> normalize(std::vector<Prime> v) {
    for (Prime p : v) require_prime(p);
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
  }

  static std::vector<Prime> set_union(const std::vector<Prime>& a, const std::vector<Prime>& b) {
    std::vector<Prime> out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
  }
  static std::vector<Prime> set_intersection(const std::vector<Prime>& a, const std::vector<Prime>& b) {
    std::vector<Prime> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
  }
  static std::vector<Prime> set_difference(const std::vector<Prime>& a, const std::vector<Prime>& b) {
    std::vector<Prime> out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
  }

  bool cofinite_ = false;
  std::vector<Prime> list_;
};

// --- X-numbers -------------------------------------------------------------
//
// An X-number is a positive integer none of whose prime factors lie in X.
// Exactly these integers act invertibly on X-local groups.

inline bool is_x_number(const Integer& n, const PrimeSet& x) {
  if (n <= 0) throw input_error("X-number test needs n >= 1");
  if (n == 1) return true;
  for (auto [p, e] : factorize(n))
    if (x.contains(p)) return false;
  return true;
}

/// A positive integer certified to have no prime factor in `avoided`.
class XNumber {
 public:
  XNumber(Integer value, PrimeSet avoided) : value_(std::move(value)), avoided_(std::move(avoided)) {
    if (!is_x_number(value_, avoided_))
      throw input_error(value_.str() + " has a prime factor in " + avoided_.str());
  }
  const Integer& value() const noexcept { return value_; }
  const PrimeSet& avoided() const noexcept { return avoided_; }

 private:
  Integer value_;
  PrimeSet avoided_;
};

/// True iff the rational q lies in the ring of X-integers (its denominator is an X-number).
inline bool is_x_integer(const Rational& q, const PrimeSet& x) { return is_x_number(denominator(q), x); }

/// The part of n != 0 supported on primes of X, as a positive integer.
inline Integer x_part(const Integer& n, const PrimeSet& x) {
  Integer out = 1;
  for (auto [p, e] : factorize(n))
    if (x.contains(p)) out *= ipow(Integer(p), e);
  return out;
}

// --- partition families ------------------------------------------------------

/// Index of a block: for SingletonPerResidualPrime, the residual prime p of
/// T_p = S + {p}; for Explicit families, the position in the block list.
using BlockIndex = std::uint64_t;

class PartitionFamily {
 public:
  enum class Shape { SingletonPerResidualPrime, Explicit };

  /// Validated family of singleton-extended blocks over the residual primes T - S.
  static PartitionFamily singletons(PrimeSet t, PrimeSet s) {
    check_outer(t, s);
    return PartitionFamily(std::move(t), std::move(s), Shape::SingletonPerResidualPrime, {});
  }

  /// Validated finite family; every pair of blocks meets in S and the union is T.
  static PartitionFamily explicit_blocks(PrimeSet t, PrimeSet s, std::vector<PrimeSet> blocks) {
    check_outer(t, s);
    if (blocks.empty()) throw input_error("a family needs at least one block");
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      if (!s.subset_of(blocks[i]))
        throw input_error("block " + std::to_string(i) + " " + blocks[i].str() + " does not contain S = " + s.str());
      if (!blocks[i].subset_of(t))
        throw input_error("block " + std::to_string(i) + " " + blocks[i].str() + " is not contained in T = " + t.str());
    }
    for (std::size_t i = 0; i < blocks.size(); ++i)
      for (std::size_t j = i + 1; j < blocks.size(); ++j) {
        PrimeSet meet = blocks[i].intersect(blocks[j]);
        if (meet != s)
          throw input_error("T_i ∩ T_j = S violated: blocks " + std::to_string(i) + " and " + std::to_string(j) +
                            " meet in " + meet.str() + " but S = " + s.str());
      }
    PrimeSet un = s;
    for (const auto& b : blocks) un = un.unite(b);
    if (un != t) {
      PrimeSet missing = t.difference(un);
      throw input_error("union of blocks is " + un.str() + " but T = " + t.str() + "; missing e.g. " +
                        std::to_string(*missing.first()));
    }
    return PartitionFamily(std::move(t), std::move(s), Shape::Explicit, std::move(blocks));
  }

  Shape shape() const noexcept { return shape_; }
  bool is_singletons() const noexcept { return shape_ == Shape::SingletonPerResidualPrime; }
  const PrimeSet& t() const noexcept { return t_; }
  const PrimeSet& s() const noexcept { return s_; }
  /// T - S: every residual prime lies in exactly one block.
  PrimeSet residual() const { return t_.difference(s_); }
  bool has_infinite_index() const { return is_singletons() && residual().is_cofinite(); }
  const std::vector<PrimeSet>& explicit_list() const noexcept { return blocks_; }

  /// Block indices; only defined when the index set is finite.
  std::vector<BlockIndex> indices() const {
    std::vector<BlockIndex> out;
    if (is_singletons()) {
      if (has_infinite_index()) throw domain_error("index set is infinite");
      PrimeSet res = residual();
      for (Prime p : res.listed()) out.push_back(p);
    } else {
      for (std::size_t i = 0; i < blocks_.size(); ++i) out.push_back(i);
    }
    return out;
  }

  bool valid_index(BlockIndex i) const {
    if (is_singletons()) return is_prime(i) && residual().contains(i);
    return i < blocks_.size();
  }

  PrimeSet block(BlockIndex i) const {
    if (!valid_index(i)) throw input_error("invalid block index " + std::to_string(i));
    if (is_singletons()) return s_.unite(PrimeSet::finite({i}));
    return blocks_[i];
  }

  /// T_i - S.
  PrimeSet block_residual(BlockIndex i) const { return block(i).difference(s_); }

  /// The block whose residual part contains p; p must lie in T - S.
  BlockIndex block_of(Prime p) const {
    require_prime(p);
    if (!residual().contains(p))
      throw input_error("prime " + std::to_string(p) + " is not in T - S = " + residual().str());
    if (is_singletons()) return p;
    for (std::size_t i = 0; i < blocks_.size(); ++i)
      if (blocks_[i].contains(p)) return i;
    throw input_error("prime " + std::to_string(p) + " lies in no block");
  }

  /// Smallest residual prime of block i, used to name the block in text.
  std::optional<Prime> label(BlockIndex i) const { return block_residual(i).first(); }

  /// Canonical DSL text.
  std::string str() const {
    if (is_singletons()) return "singletons(" + t_.str() + "," + s_.str() + ")";
    std::string out = "blocks(" + t_.str() + "," + s_.str() + ";";
    for (std::size_t i = 0; i < blocks_.size(); ++i) out += (i ? "," : "") + blocks_[i].str();
    return out + ")";
  }

  friend bool operator==(const PartitionFamily&, const PartitionFamily&) = default;

 private:
  PartitionFamily(PrimeSet t, PrimeSet s, Shape shape, std::vector<PrimeSet> blocks)
      : t_(std::move(t)), s_(std::move(s)), shape_(shape), blocks_(std::move(blocks)) {}

  static void check_outer(const PrimeSet& t, const PrimeSet& s) {
    if (!s.subset_of(t)) throw input_error("S = " + s.str() + " is not contained in T = " + t.str());
    if (s == t) throw input_error("T = S = " + t.str() + " is not allowed");
  }

  PrimeSet t_;
  PrimeSet s_;
  Shape shape_;
  std::vector<PrimeSet> blocks_;
};

}  // namespace genus
