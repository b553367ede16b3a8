#pragma once

// The rank-1 case G = Z_T: automorphism families of prod G_S, the boundedness
// predicates, pullbacks along the diagonal, and the double-coset classes of the
// genus and extended genus.
//
// Everything reduces to the valuation profile p -> v_p(alpha_{block(p)}) on the
// residual primes T - S. Each residual prime lies in exactly one block, and only
// the valuation of alpha_i at primes of T_i - S constrains im(alpha_i phi_i).
//
// Note: the informal "finitely many primes divide some u_i or v_i" condition is
// stronger than the boundedness definitions implemented here. For singleton
// families only v_{p_i}(alpha_i) matters, so prod (3/1) over all primes is
// bounded even though 3 divides every numerator.

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "genus/primeset.hpp"
#include "genus/report.hpp"

namespace genus::rank1 {

struct TailIdentity {
  friend bool operator==(const TailIdentity&, const TailIdentity&) = default;
};
struct TailConstant {
  Rational value;
  friend bool operator==(const TailConstant&, const TailConstant&) = default;
};
/// alpha_{T_p} = p^k; singleton families only.
struct TailIndexPrimePower {
  int k = 0;
  friend bool operator==(const TailIndexPrimePower&, const TailIndexPrimePower&) = default;
};
using Tail = std::variant<TailIdentity, TailConstant, TailIndexPrimePower>;

inline std::string tail_str(const Tail& t) {
  if (std::holds_alternative<TailIdentity>(t)) return "id";
  if (auto c = std::get_if<TailConstant>(&t)) return to_string(c->value);
  return "p^" + std::to_string(std::get<TailIndexPrimePower>(t).k);
}

/// Rejects q unless it is an automorphism of Z_S, i.e. q != 0 and v_p(q) = 0 for p in S.
inline void require_s_unit(const Rational& q, const PrimeSet& s, const std::string& what) {
  if (q == 0) throw input_error(what + " is 0, not an automorphism");
  for (auto [p, e] : factorize(q))
    if (s.contains(p))
      throw input_error(what + " = " + to_string(q) + " has valuation " + std::to_string(e) + " at " +
                        std::to_string(p) + " in S, so it is not an automorphism of G_S");
}

/// A family i -> alpha_i of nonzero rationals given by finite exceptions and a tail rule.
class AutFamily1 {
 public:
  AutFamily1(PartitionFamily family, std::map<BlockIndex, Rational> exceptions, Tail tail)
      : family_(std::move(family)), exceptions_(std::move(exceptions)), tail_(std::move(tail)) {
    for (const auto& [i, a] : exceptions_) {
      if (!family_.valid_index(i)) throw input_error("exception index invalid: " + std::to_string(i));
      if (!family_.label(i)) throw input_error("block " + std::to_string(i) + " has no residual primes");
      require_s_unit(a, family_.s(), "alpha_" + std::to_string(i));
    }
    if (auto c = std::get_if<TailConstant>(&tail_)) require_s_unit(c->value, family_.s(), "tail constant");
    if (std::holds_alternative<TailIndexPrimePower>(tail_) && !family_.is_singletons())
      throw input_error("tail p^k applies only to singletons families");
  }

  /// The identity family.
  explicit AutFamily1(PartitionFamily family) : AutFamily1(std::move(family), {}, TailIdentity{}) {}

  const PartitionFamily& family() const noexcept { return family_; }
  const std::map<BlockIndex, Rational>& exceptions() const noexcept { return exceptions_; }
  const Tail& tail() const noexcept { return tail_; }

  Rational tail_value(BlockIndex i) const {
    if (auto c = std::get_if<TailConstant>(&tail_)) return c->value;
    if (auto k = std::get_if<TailIndexPrimePower>(&tail_)) return rpow(Rational(i), k->k);
    return 1;
  }

  Rational alpha(BlockIndex i) const {
    if (!family_.valid_index(i)) throw input_error("invalid block index " + std::to_string(i));
    auto it = exceptions_.find(i);
    return it != exceptions_.end() ? it->second : tail_value(i);
  }

  AutFamily1 inverse() const {
    std::map<BlockIndex, Rational> inv;
    for (const auto& [i, a] : exceptions_) inv.emplace(i, 1 / a);
    Tail t = tail_;
    if (auto c = std::get_if<TailConstant>(&t)) c->value = 1 / c->value;
    if (auto k = std::get_if<TailIndexPrimePower>(&t)) k->k = -k->k;
    return AutFamily1(family_, std::move(inv), t);
  }

  /// Canonical DSL text, exceptions named by the smallest residual prime of their block.
  std::string str() const {
    std::string out = "aut(" + family_.str() + "; tail=" + tail_str(tail_);
    if (!exceptions_.empty()) {
      out += ";";
      bool first = true;
      for (const auto& [i, a] : exceptions_) {
        out += (first ? " " : ", ") + std::to_string(*family_.label(i)) + " -> " + to_string(a);
        first = false;
      }
    }
    return out + ")";
  }

  friend bool operator==(const AutFamily1&, const AutFamily1&) = default;

 private:
  PartitionFamily family_;
  std::map<BlockIndex, Rational> exceptions_;
  Tail tail_;
};

/// p -> v_p(alpha_{block(p)}) on T - S: explicit values plus a default that
/// applies to all remaining residual primes when there are infinitely many.
struct ValuationProfile {
  std::map<Prime, int> values;
  int tail = 0;
  bool tail_infinite = false;

  int at(Prime p) const {
    auto it = values.find(p);
    return it != values.end() ? it->second : tail;
  }
};

inline ValuationProfile valuation_profile(const AutFamily1& a) {
  const auto& fam = a.family();
  ValuationProfile prof;
  auto add_support = [&](BlockIndex i, const Rational& q) {
    PrimeSet res = fam.block_residual(i);
    for (auto [p, e] : factorize(q))
      if (res.contains(p)) prof.values[p] = e;
  };
  if (!fam.is_singletons()) {
    for (BlockIndex i : fam.indices()) add_support(i, a.alpha(i));
    return prof;
  }
  PrimeSet res = fam.residual();
  const Tail& tail = a.tail();
  if (auto c = std::get_if<TailConstant>(&tail)) {
    for (auto [p, e] : factorize(c->value))
      if (res.contains(p)) prof.values[p] = e;
  } else if (auto k = std::get_if<TailIndexPrimePower>(&tail)) {
    if (res.is_cofinite()) {
      prof.tail = k->k;
      prof.tail_infinite = true;
    } else {
      for (Prime p : res.listed()) prof.values[p] = k->k;
    }
  }
  for (const auto& [i, q] : a.exceptions()) prof.values[i] = valuation(q, i);
  return prof;
}

struct BoundDecision {
  bool holds = false;
  std::optional<Integer> s;  // minimal S-number when holds
  std::string witness;       // description of the violating set otherwise
};

namespace detail {

inline std::string violating_tail(const AutFamily1& a, const ValuationProfile& prof) {
  std::string out = "v_p(alpha_p) = " + std::to_string(prof.tail) +
                    " for every residual prime p outside the exceptions (infinitely many), e.g.";
  PrimeSet res = a.family().residual();
  int shown = 0;
  for (auto p = res.first(); p && shown < 3; p = res.next_after(*p)) {
    if (prof.values.count(*p)) continue;
    out += " " + std::to_string(*p);
    ++shown;
  }
  return out;
}

}  // namespace detail

/// S-bounded: some S-number s has |v_p(alpha_i)| <= v_p(s) for all i, p in T_i - S.
inline BoundDecision is_bounded(const AutFamily1& a) {
  auto prof = valuation_profile(a);
  if (prof.tail_infinite && prof.tail != 0) return {false, std::nullopt, detail::violating_tail(a, prof)};
  Integer s = 1;
  for (auto [p, v] : prof.values) s *= ipow(Integer(p), static_cast<unsigned>(std::abs(v)));
  return {true, s, {}};
}

/// S-bounded above: some S-number s has v_p(alpha_i) <= v_p(s) for all i, p in T_i - S.
inline BoundDecision is_bounded_above(const AutFamily1& a) {
  auto prof = valuation_profile(a);
  if (prof.tail_infinite && prof.tail > 0) return {false, std::nullopt, detail::violating_tail(a, prof)};
  Integer s = 1;
  for (auto [p, v] : prof.values)
    if (v > 0) s *= ipow(Integer(p), static_cast<unsigned>(v));
  return {true, s, {}};
}

/// A T-local subgroup of Q of rank at most 1:
///   { x : v_p(x) >= 0 for p in S, v_p(x) >= c_p for p in T - S },
/// with c_p = exceptions[p] or tail. The tail only applies to infinitely many
/// primes when T - S is infinite; otherwise all c_p are explicit and tail = 0.
class HeightSequence {
 public:
  HeightSequence(PrimeSet t, PrimeSet s, std::map<Prime, int> exceptions, int tail = 0)
      : t_(std::move(t)), s_(std::move(s)), tail_(tail) {
    PrimeSet res = t_.difference(s_);
    if (!res.is_cofinite()) tail_ = 0;
    for (auto [p, c] : exceptions) {
      if (!res.contains(p)) throw input_error("height exception at " + std::to_string(p) + " outside T - S");
      if (c != (res.is_cofinite() ? tail_ : 0)) exceptions_.emplace(p, c);
    }
    if (res.is_cofinite() && tail_ > 0) {
      trivial_ = true;
      exceptions_.clear();
      tail_ = 0;
    }
  }

  static HeightSequence zero(PrimeSet t, PrimeSet s) { return HeightSequence(std::move(t), std::move(s), {}, 0); }
  static HeightSequence trivial_group(PrimeSet t, PrimeSet s) {
    HeightSequence h(std::move(t), std::move(s), {}, 0);
    h.trivial_ = true;
    return h;
  }

  const PrimeSet& t() const noexcept { return t_; }
  const PrimeSet& s() const noexcept { return s_; }
  bool trivial() const noexcept { return trivial_; }
  const std::map<Prime, int>& exceptions() const noexcept { return exceptions_; }
  int tail() const noexcept { return tail_; }
  bool tail_infinite() const { return t_.difference(s_).is_cofinite() && tail_ != 0; }

  int requirement(Prime p) const {
    auto it = exceptions_.find(p);
    return it != exceptions_.end() ? it->second : tail_;
  }

  bool contains(const Rational& x) const {
    if (x == 0) return true;
    if (trivial_) return false;
    PrimeSet res = t_.difference(s_);
    auto vals = factorize(x);
    for (auto [p, v] : vals) {
      if (s_.contains(p) && v < 0) return false;
      if (res.contains(p) && v < requirement(p)) return false;
    }
    for (auto [p, c] : exceptions_)
      if (!vals.count(p) && c > 0) return false;
    return true;
  }

  std::string str() const {
    if (trivial_) return "0";
    std::string out = "c = {";
    bool first = true;
    for (auto [p, c] : exceptions_) {
      out += (first ? "" : ", ") + std::to_string(p) + ":" + std::to_string(c);
      first = false;
    }
    out += "}";
    if (tail_ != 0) out += ", tail " + std::to_string(tail_);
    return out;
  }

  Json json() const {
    Json ex = Json::object();
    for (auto [p, c] : exceptions_) ex[std::to_string(p)] = c;
    return Json{{"T", t_.str()}, {"S", s_.str()}, {"trivial", trivial_}, {"exceptions", ex}, {"tail", tail_}};
  }

  friend bool operator==(const HeightSequence&, const HeightSequence&) = default;

 private:
  PrimeSet t_;
  PrimeSet s_;
  std::map<Prime, int> exceptions_;
  int tail_ = 0;
  bool trivial_ = false;
};

/// Pullback of (Delta, prod alpha_i phi_i), identified with {x in G_S : x in alpha_i Z_{T_i} for all i}.
inline HeightSequence pullback_rank1(const AutFamily1& a) {
  auto prof = valuation_profile(a);
  const auto& fam = a.family();
  return HeightSequence(fam.t(), fam.s(), prof.values, prof.tail_infinite ? prof.tail : 0);
}

struct IsoDecision {
  bool iso = false;
  std::optional<Rational> lambda;  // lambda * H2 = H1
};

/// Isomorphism of rank-1 groups: heights differing at finitely many primes.
inline IsoDecision rank1_iso(const HeightSequence& h1, const HeightSequence& h2) {
  if (h1.t() != h2.t() || h1.s() != h2.s())
    throw input_error("height sequences over different families: (" + h1.t().str() + "," + h1.s().str() + ") vs (" +
                      h2.t().str() + "," + h2.s().str() + ")");
  if (h1.trivial() || h2.trivial()) {
    if (h1.trivial() && h2.trivial()) return {true, Rational(1)};
    return {false, std::nullopt};
  }
  if (h1.tail() != h2.tail()) return {false, std::nullopt};
  std::map<Prime, int> diff;
  for (auto [p, c] : h1.exceptions()) diff[p] = c - h2.requirement(p);
  for (auto [p, c] : h2.exceptions()) diff[p] = h1.requirement(p) - c;
  return {true, from_valuations(diff)};
}

struct FgDecision {
  bool finitely_generated = false;
  std::string explanation;
};

inline FgDecision is_finitely_generated(const HeightSequence& h) {
  if (h.trivial()) throw domain_error("finite generation is asked of nontrivial groups only; got the zero group");
  if (h.tail_infinite() && h.tail() < 0)
    return {false, "heights " + std::to_string(h.tail()) +
                       " at infinitely many primes: elements are divisible by infinitely many primes of T, "
                       "so no finite set generates over Z_T"};
  return {true, "finitely many nonzero heights, so multiplication by " + to_string(from_valuations(h.exceptions())) +
                    " identifies the group with Z_T"};
}

/// A double-coset class, stored as its canonical height sequence: the left
/// action of Aut(G_S) absorbs every finitely supported shift, so only the
/// tail germ survives.
class ExtGenusClass {
 public:
  explicit ExtGenusClass(const HeightSequence& h)
      : rep_(h.trivial() ? h : HeightSequence(h.t(), h.s(), {}, h.tail())) {}
  const HeightSequence& representative() const noexcept { return rep_; }
  bool is_zero() const { return !rep_.trivial() && rep_.tail() == 0; }
  std::string str() const { return rep_.tail() == 0 ? "[Z_T]" : "[tail " + std::to_string(rep_.tail()) + "]"; }
  friend bool operator==(const ExtGenusClass&, const ExtGenusClass&) = default;

 private:
  HeightSequence rep_;
};

/// Class of alpha in Aut(G_S) \ Aut_b.a.(prod G_S) / prod Aut(G_{T_i}).
inline ExtGenusClass double_coset_class(const AutFamily1& a) {
  auto d = is_bounded_above(a);
  if (!d.holds) throw domain_error("alpha is not S-bounded above: " + d.witness);
  return ExtGenusClass(pullback_rank1(a));
}

/// Class of alpha in Aut(G_S) \ Aut_b(prod G_S) / prod Aut(G_{T_i}).
inline ExtGenusClass genus_class(const AutFamily1& a) {
  auto d = is_bounded(a);
  if (!d.holds) throw domain_error("alpha is not S-bounded: " + d.witness);
  return ExtGenusClass(pullback_rank1(a));
}

/// lambda in Aut(G_S) with v_p(lambda alpha_i) = v_p(beta_i) at every residual
/// prime, if it exists; then lambda alpha and beta agree up to prod Aut(G_{T_i}).
inline std::optional<Rational> left_action_witness(const AutFamily1& a, const AutFamily1& b) {
  if (a.family() != b.family()) throw input_error("families differ");
  auto pa = valuation_profile(a);
  auto pb = valuation_profile(b);
  if ((pa.tail_infinite ? pa.tail : 0) != (pb.tail_infinite ? pb.tail : 0)) return std::nullopt;
  std::map<Prime, int> shift;
  for (auto [p, v] : pa.values) shift[p] = pb.at(p) - v;
  for (auto [p, v] : pb.values) shift[p] = v - pa.at(p);
  return from_valuations(shift);
}

namespace detail {

// Smallest t, supported on `allowed` primes, with t * y in H; nullopt if none.
inline std::optional<Integer> multiplier_into(const HeightSequence& h, const Rational& y, const PrimeSet& allowed) {
  if (h.trivial()) return std::nullopt;
  if (y == 0) return Integer(1);
  PrimeSet res = h.t().difference(h.s());
  if (res.is_cofinite() && h.tail() > 0) return std::nullopt;
  std::map<Prime, int> vals = factorize(y);
  std::map<Prime, int> need;
  auto consider = [&](Prime p) {
    int deficit = 0;
    int v = vals.count(p) ? vals.at(p) : 0;
    if (h.s().contains(p)) deficit = -v;
    else if (res.contains(p)) deficit = h.requirement(p) - v;
    if (deficit > 0) need[p] = deficit;
  };
  for (auto [p, v] : vals) consider(p);
  for (auto [p, c] : h.exceptions()) consider(p);
  Integer t = 1;
  for (auto [p, e] : need) {
    if (!allowed.contains(p)) return std::nullopt;
    t *= ipow(Integer(p), static_cast<unsigned>(e));
  }
  return t;
}

}  // namespace detail

/// Localization properties of the pullback H of alpha at block i:
///   kernel of phi~_i : H -> G_{T_i}, x -> x / alpha_i, is T_i'-torsion;
///   every g in G_{T_i} has a T_i-number multiple in phi~_i(H);
///   mu : H -> G_S is an S-monomorphism and an S-epimorphism.
/// The first entry records S-boundedness above, naming a failing block otherwise.
inline std::vector<PropertyResult> verify_localization_properties(const AutFamily1& a, BlockIndex i) {
  const auto& fam = a.family();
  if (!fam.valid_index(i)) throw input_error("invalid block index " + std::to_string(i));
  std::vector<PropertyResult> out;
  auto ba = is_bounded_above(a);
  {
    PropertyResult r{"bounded_above", ba.holds, Json::object()};
    if (ba.holds) {
      r.witness["s"] = ba.s->str();
    } else {
      auto prof = valuation_profile(a);
      PrimeSet res = fam.residual();
      for (auto p = res.first(); p; p = res.next_after(*p))
        if (!prof.values.count(*p) && *p != i) {
          r.witness["failing_block"] = *p;
          break;
        }
      r.witness["reason"] = ba.witness;
    }
    out.push_back(std::move(r));
  }

  HeightSequence h = pullback_rank1(a);
  Rational ai = a.alpha(i);
  PrimeSet ti = fam.block(i);

  out.push_back({"phi_i kernel is T_i'-torsion", true, Json{{"kernel", "0"}, {"block", i}}});

  // Sample elements of G_{T_i}: 1 and 1/q for the first primes q outside T_i.
  std::vector<Rational> samples{Rational(1)};
  {
    PrimeSet outside = ti.complement();
    int n = 0;
    for (auto q = outside.first(); q && n < 3; q = outside.next_after(*q), ++n) samples.emplace_back(1, *q);
  }
  {
    PropertyResult r{"phi_i is a T_i-epimorphism", true, Json{{"block", i}, {"samples", Json::array()}}};
    if (h.trivial()) {
      r.pass = false;
      r.witness["reason"] = "pullback is the trivial group, so 1 in G_{T_i} has no multiple in the image";
    }
    for (const auto& g : samples) {
      if (!r.pass) break;
      // t*g in phi~_i(H)  <=>  alpha_i * t * g in H.
      auto t = detail::multiplier_into(h, ai * g, ti.complement());
      if (!t || !h.contains(ai * g * Rational(*t))) {
        r.pass = false;
        r.witness["reason"] = "no T_i-number multiple of " + to_string(g) + " lies in the image";
        break;
      }
      r.witness["samples"].push_back(Json{{"g", to_string(g)}, {"t", t->str()}});
    }
    out.push_back(std::move(r));
  }
  out.push_back({"mu is an S-monomorphism", true, Json{{"kernel", "0"}}});
  {
    PropertyResult r{"mu is an S-epimorphism", true, Json{{"samples", Json::array()}}};
    std::vector<Rational> xs{Rational(1)};
    if (auto p = fam.residual().first()) xs.emplace_back(1, *p);
    for (const auto& x : xs) {
      auto s = detail::multiplier_into(h, x, fam.s().complement());
      if (!s || !h.contains(x * Rational(*s))) {
        r.pass = false;
        r.witness["reason"] = h.trivial() ? "pullback is trivial" : "no S-number multiple of " + to_string(x) + " in H";
        break;
      }
      r.witness["samples"].push_back(Json{{"x", to_string(x)}, {"s", s->str()}});
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace genus::rank1
