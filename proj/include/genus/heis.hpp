#pragma once

// The Heisenberg group of upper unitriangular 3x3 matrices over Z_T, its
// T-local subgroups, and the exponent bound for words in A and H.

#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "genus/error.hpp"
#include "genus/primeset.hpp"
#include "genus/report.hpp"

namespace genus::heis {

/// (a, b, c) = [[1, a, c], [0, 1, b], [0, 0, 1]].
class HeisElement {
 public:
  HeisElement(Rational a, Rational b, Rational c, PrimeSet t = PrimeSet::all())
      : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), t_(std::move(t)) {
    for (const Rational* q : {&a_, &b_, &c_})
      if (!is_x_integer(*q, t_)) throw input_error("coordinate " + to_string(*q) + " is not a " + t_.str() + "-integer");
  }
  static HeisElement identity(PrimeSet t = PrimeSet::all()) { return HeisElement(0, 0, 0, std::move(t)); }

  const Rational& a() const noexcept { return a_; }
  const Rational& b() const noexcept { return b_; }
  const Rational& c() const noexcept { return c_; }
  const PrimeSet& t() const noexcept { return t_; }
  bool is_identity() const { return a_ == 0 && b_ == 0 && c_ == 0; }

  std::string str() const {
    std::string out = "heis(" + to_string(a_) + "," + to_string(b_) + "," + to_string(c_);
    if (!t_.is_all()) out += "; T=" + t_.str();
    return out + ")";
  }

  friend bool operator==(const HeisElement&, const HeisElement&) = default;

 private:
  Rational a_, b_, c_;
  PrimeSet t_;
};

inline void same_ring(const HeisElement& g, const HeisElement& h) {
  if (g.t() != h.t()) throw input_error("elements over " + g.t().str() + " and " + h.t().str());
}

inline HeisElement mul(const HeisElement& g, const HeisElement& h) {
  same_ring(g, h);
  return HeisElement(g.a() + h.a(), g.b() + h.b(), g.c() + h.c() + g.a() * h.b(), g.t());
}

inline HeisElement inv(const HeisElement& g) { return HeisElement(-g.a(), -g.b(), -g.c() + g.a() * g.b(), g.t()); }

/// g^n for n in Z_T: (na, nb, nc + n(n-1)/2 ab).
inline HeisElement pow(const HeisElement& g, const Rational& n) {
  if (!is_x_integer(n, g.t())) throw input_error("exponent " + to_string(n) + " is not a " + g.t().str() + "-integer");
  return HeisElement(n * g.a(), n * g.b(), n * g.c() + n * (n - 1) / 2 * g.a() * g.b(), g.t());
}

/// g h g^-1 h^-1.
inline HeisElement commutator(const HeisElement& g, const HeisElement& h) {
  same_ring(g, h);
  return HeisElement(0, 0, g.a() * h.b() - h.a() * g.b(), g.t());
}

// --- words ------------------------------------------------------------------------

/// A product of powers; a factor is a generator index or a nested word.
struct Word {
  struct Factor {
    std::variant<std::size_t, std::shared_ptr<const Word>> base;
    Rational exp;
  };
  std::vector<Factor> factors;

  static Word gen(std::size_t i, Rational e = 1) { return Word{{Factor{i, std::move(e)}}}; }

  Word times(const Word& o) const {
    Word w = *this;
    w.factors.insert(w.factors.end(), o.factors.begin(), o.factors.end());
    return w;
  }
  Word power(const Rational& e) const {
    if (e == 0) return Word{};
    if (e == 1) return *this;
    if (factors.size() == 1) return Word{{Factor{factors[0].base, factors[0].exp * e}}};
    return Word{{Factor{std::make_shared<const Word>(*this), e}}};
  }

  HeisElement eval(const std::vector<HeisElement>& gens, const PrimeSet& t) const {
    HeisElement out = HeisElement::identity(t);
    for (const auto& f : factors) {
      HeisElement base = std::holds_alternative<std::size_t>(f.base)
                             ? gens.at(std::get<std::size_t>(f.base))
                             : std::get<std::shared_ptr<const Word>>(f.base)->eval(gens, t);
      out = mul(out, pow(base, f.exp));
    }
    return out;
  }

  std::string str() const {
    if (factors.empty()) return "1";
    std::string out;
    for (const auto& f : factors) {
      if (!out.empty()) out += " ";
      if (std::holds_alternative<std::size_t>(f.base))
        out += "g" + std::to_string(std::get<std::size_t>(f.base));
      else
        out += "(" + std::get<std::shared_ptr<const Word>>(f.base)->str() + ")";
      if (f.exp != 1) out += "^" + to_string(f.exp);
    }
    return out;
  }
};

// --- subgroups --------------------------------------------------------------------

/// The T-local subgroup generated by a finite list, with echelon data
/// g1 = (a1, *, *), g2 = (0, b2, *), g3 = (0, 0, m) so that every element is
/// uniquely g1^x g2^y g3^z with x, y, z in Z_T.
class HeisSubgroup {
 public:
  struct Slot {
    HeisElement elt;
    Word word;
  };

  HeisSubgroup(std::vector<HeisElement> gens, PrimeSet t = PrimeSet::all()) : gens_(std::move(gens)), t_(std::move(t)) {
    for (const auto& g : gens_)
      if (g.t() != t_) throw input_error("generator " + g.str() + " is not over " + t_.str());
    for (std::size_t i = 0; i < gens_.size(); ++i) insert({gens_[i], Word::gen(i)});
    if (slots_[0] && slots_[1])
      insert({commutator(slots_[0]->elt, slots_[1]->elt), commutator_word(slots_[0]->word, slots_[1]->word)});
    for (std::size_t i = 0; i < gens_.size(); ++i)
      if (!member(gens_[i])) throw std::logic_error("echelon data lost generator " + std::to_string(i));
  }

  static HeisSubgroup full(PrimeSet t = PrimeSet::all()) {
    return HeisSubgroup({HeisElement(1, 0, 0, t), HeisElement(0, 1, 0, t)}, t);
  }

  const std::vector<HeisElement>& gens() const noexcept { return gens_; }
  const PrimeSet& t() const noexcept { return t_; }
  const std::optional<Slot>& slot(std::size_t k) const { return slots_.at(k); }

  /// Basis of the projection lattice L of (a, b) pairs.
  std::vector<std::pair<Rational, Rational>> lattice() const {
    std::vector<std::pair<Rational, Rational>> out;
    for (std::size_t k = 0; k < 2; ++k)
      if (slots_[k]) out.emplace_back(slots_[k]->elt.a(), slots_[k]->elt.b());
    return out;
  }
  /// Generator m of the central part M = H ∩ Z (0 when trivial).
  Rational center() const { return slots_[2] ? slots_[2]->elt.c() : Rational(0); }

  bool trivial() const { return !slots_[0] && !slots_[1] && !slots_[2]; }
  bool is_abelian() const { return !(slots_[0] && slots_[1]); }

  struct Membership {
    bool member = false;
    std::optional<Word> certificate;
  };

  Membership membership(const HeisElement& g) const {
    if (g.t() != t_) throw input_error("element over " + g.t().str() + " but subgroup over " + t_.str());
    HeisElement r = g;
    Word w;
    for (std::size_t k = 0; k < 3; ++k) {
      const Rational& coord = k == 0 ? r.a() : k == 1 ? r.b() : r.c();
      if (coord == 0) continue;
      if (!slots_[k]) return {};
      const Rational& pivot = k == 0 ? slots_[k]->elt.a() : k == 1 ? slots_[k]->elt.b() : slots_[k]->elt.c();
      Rational x = coord / pivot;
      if (!is_x_integer(x, t_)) return {};
      r = mul(inv(pow(slots_[k]->elt, x)), r);
      w = w.times(slots_[k]->word.power(x));
    }
    return {true, w};
  }
  bool member(const HeisElement& g) const { return membership(g).member; }

  bool contains(const HeisSubgroup& o) const {
    for (const auto& g : o.gens_)
      if (!member(g)) return false;
    return true;
  }

  std::string str() const {
    std::string out = "subgroup(";
    for (std::size_t i = 0; i < gens_.size(); ++i) out += (i ? ", " : "") + gens_[i].str();
    if (!t_.is_all()) out += std::string(gens_.empty() ? "" : "; ") + "T=" + t_.str();
    return out + ")";
  }

  friend bool operator==(const HeisSubgroup& a, const HeisSubgroup& b) { return a.t_ == b.t_ && a.gens_ == b.gens_; }

 private:
  static Word commutator_word(const Word& g, const Word& h) {
    return g.times(h).times(g.power(-1)).times(h.power(-1));
  }

  /// Coordinate that slot k pivots on.
  static const Rational& coord(const HeisElement& g, std::size_t k) { return k == 0 ? g.a() : k == 1 ? g.b() : g.c(); }

  void insert(Slot h) {
    std::size_t k = 0;
    while (k < 3 && coord(h.elt, k) == 0) ++k;
    if (k == 3) return;
    if (!slots_[k]) {
      slots_[k] = normalize(std::move(h), k);
      return;
    }
    Slot old = *slots_[k];
    // Bezout on numerators: old^(u d1) h^(v d2) has pivot coordinate gcd(n1, n2).
    const Rational &q1 = coord(old.elt, k), &q2 = coord(h.elt, k);
    Bezout e = ext_gcd(numerator(q1), numerator(q2));
    Rational eu = Rational(e.u * denominator(q1)), ev = Rational(e.v * denominator(q2));
    Slot comb{mul(pow(old.elt, eu), pow(h.elt, ev)), old.word.power(eu).times(h.word.power(ev))};
    Slot fresh = normalize(std::move(comb), k);
    slots_[k] = fresh;
    for (Slot* s : {&old, &h}) {
      Rational x = coord(s->elt, k) / coord(fresh.elt, k);
      Slot rest{mul(inv(pow(fresh.elt, x)), s->elt), fresh.word.power(-x).times(s->word)};
      insert(std::move(rest));
    }
  }

  /// Raise to a unit of Z_T so the pivot coordinate becomes its positive T-part.
  Slot normalize(Slot s, std::size_t k) const {
    const Rational& q = coord(s.elt, k);
    Rational target = Rational(x_part(numerator(q), t_));
    Rational u = target / q;
    return {pow(s.elt, u), s.word.power(u)};
  }

  std::vector<HeisElement> gens_;
  PrimeSet t_;
  std::vector<std::optional<Slot>> slots_ = std::vector<std::optional<Slot>>(3);
};

/// Gamma^0 = H, Gamma^1 = [H, H], ... ending at the trivial group.
inline std::vector<HeisSubgroup> lower_central_series(const HeisSubgroup& h) {
  std::vector<HeisSubgroup> out{h};
  if (h.trivial()) return out;
  if (h.is_abelian()) {
    out.emplace_back(std::vector<HeisElement>{}, h.t());
    return out;
  }
  HeisSubgroup g1({commutator(h.slot(0)->elt, h.slot(1)->elt)}, h.t());
  out.push_back(g1);
  out.emplace_back(std::vector<HeisElement>{}, h.t());
  if (out.size() > 3) throw std::logic_error("class exceeds 2");
  return out;
}

inline int nilpotency_class(const HeisSubgroup& h) { return static_cast<int>(lower_central_series(h).size()) - 1; }

// --- exponent bound -----------------------------------------------------------------

struct SamplerConfig {
  std::uint64_t seed = 7;
  std::size_t samples = 500;
  std::size_t max_length = 8;
  std::optional<int> d;  // overrides c(c+1)/2
};

struct ExponentBoundReport {
  std::size_t samples = 0;
  int nilpotency_class = 0;
  int d = 0;
  Integer s;
  std::vector<Json> violations;
  std::map<int, std::size_t> histogram;  // smallest e with g^(s^e) in H

  bool pass() const { return violations.empty(); }
  Json json() const {
    Json hist = Json::object();
    for (auto [e, n] : histogram) hist[std::to_string(e)] = n;
    return Json{{"samples", samples},
                {"class", nilpotency_class},
                {"d", d},
                {"s", s.str()},
                {"violations", violations},
                {"tightness_histogram", hist},
                {"pass", pass()}};
  }
};

/// Samples words g in A and H, checks g^(s^d) in H and records the tight exponent.
inline ExponentBoundReport exponent_bound_check(const std::vector<HeisElement>& a, const HeisSubgroup& h, const Integer& s,
                                     const SamplerConfig& cfg = {}) {
  if (s < 1) throw input_error("s must be a positive integer");
  for (const auto& x : a)
    if (!h.member(pow(x, Rational(s)))) throw domain_error("hypothesis fails: " + x.str() + "^" + s.str() + " is not in H");
  std::vector<HeisElement> letters = a;
  letters.insert(letters.end(), h.gens().begin(), h.gens().end());
  HeisSubgroup k(letters, h.t());
  ExponentBoundReport rep;
  rep.nilpotency_class = std::max(1, nilpotency_class(k));
  rep.d = cfg.d ? *cfg.d : rep.nilpotency_class * (rep.nilpotency_class + 1) / 2;
  rep.s = s;
  rep.samples = cfg.samples;
  if (letters.empty()) {
    rep.histogram[1] = cfg.samples;
    return rep;
  }
  std::mt19937_64 rng(cfg.seed);
  for (std::size_t n = 0; n < cfg.samples; ++n) {
    std::size_t len = 1 + rng() % cfg.max_length;
    HeisElement g = HeisElement::identity(h.t());
    std::string word;
    for (std::size_t j = 0; j < len; ++j) {
      std::size_t pick = rng() % (2 * letters.size());
      bool invert = pick >= letters.size();
      const HeisElement& l = letters[pick % letters.size()];
      g = mul(g, invert ? inv(l) : l);
      word += (j ? " " : "") + std::string(pick % letters.size() < a.size() ? "a" : "h") +
              std::to_string(pick % letters.size() < a.size() ? pick % letters.size() : pick % letters.size() - a.size()) +
              (invert ? "^-1" : "");
    }
    std::optional<int> tight;
    if (h.member(g)) tight = 1;
    Integer power = s;
    for (int e = 1; e <= rep.d && !tight; ++e, power *= s)
      if (h.member(pow(g, Rational(power)))) tight = e;
    if (!tight) {
      rep.violations.push_back(Json{{"word", word}, {"g", g.str()}});
    } else {
      ++rep.histogram[*tight];
    }
  }
  return rep;
}

// --- localization ------------------------------------------------------------------

inline HeisElement localize_heis(const HeisElement& g, const PrimeSet& s) {
  if (!s.subset_of(g.t())) throw input_error("S = " + s.str() + " is not contained in T = " + g.t().str());
  return HeisElement(g.a(), g.b(), g.c(), s);
}

inline HeisSubgroup localize_heis(const HeisSubgroup& h, const PrimeSet& s) {
  std::vector<HeisElement> gens;
  for (const auto& g : h.gens()) gens.push_back(localize_heis(g, s));
  if (!s.subset_of(h.t())) throw input_error("S = " + s.str() + " is not contained in T = " + h.t().str());
  return HeisSubgroup(gens, s);
}

/// For x in H_S, an S-number t with x^t in the image of H: t = D^k with D the
/// common denominator of the echelon exponents of x and k <= 3.
inline std::optional<Integer> localization_power(const HeisSubgroup& h, const HeisSubgroup& hs, const HeisElement& x) {
  if (!hs.member(x)) return std::nullopt;
  // Echelon exponents of x in H_S.
  Integer d = 1;
  HeisElement r = x;
  for (std::size_t k = 0; k < 3; ++k) {
    const auto& sl = hs.slot(k);
    if (!sl) continue;
    const Rational& pv = k == 0 ? sl->elt.a() : k == 1 ? sl->elt.b() : sl->elt.c();
    const Rational& cv = k == 0 ? r.a() : k == 1 ? r.b() : r.c();
    Rational e = cv / pv;
    d = boost::multiprecision::lcm(d, denominator(e));
    r = mul(inv(pow(sl->elt, e)), r);
  }
  Integer t = 1;
  for (int k = 0; k <= 3; ++k, t *= d) {
    HeisElement p = pow(x, Rational(t));
    if (is_x_integer(p.a(), h.t()) && is_x_integer(p.b(), h.t()) && is_x_integer(p.c(), h.t()) &&
        h.member(HeisElement(p.a(), p.b(), p.c(), h.t())))
      return t;
  }
  return std::nullopt;
}

struct HeisLocalizationCheck {
  bool kernel_trivial = true;
  bool epi = true;
  Json witness;
};

/// Checks H -> H_S on generators of H and on sample elements of H_S.
inline HeisLocalizationCheck check_localization(const HeisSubgroup& h, const PrimeSet& s,
                                                const std::vector<HeisElement>& samples_in_hs) {
  HeisSubgroup hs = localize_heis(h, s);
  HeisLocalizationCheck out;
  Json per = Json::array();
  for (const auto& g : h.gens())
    if (!g.is_identity() && localize_heis(g, s).is_identity()) out.kernel_trivial = false;
  for (const auto& x : samples_in_hs) {
    auto t = localization_power(h, hs, x);
    if (!t || !is_x_number(*t, s)) out.epi = false;
    per.push_back(Json{{"element", x.str()}, {"t", t ? Json(t->str()) : Json(nullptr)}});
  }
  out.witness = Json{{"S", s.str()}, {"powers", per}};
  return out;
}

}  // namespace genus::heis
