#pragma once

// Finitely generated modules over the ring Z_T of T-integers, maps between
// them, explicit fracture squares and their pullbacks.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "genus/error.hpp"
#include "genus/matrix.hpp"
#include "genus/primeset.hpp"
#include "genus/report.hpp"
#include "genus/smith.hpp"

namespace genus {

using Vec = std::vector<Rational>;

inline Vec row_times(const Vec& y, const RatMatrix& a) {
  RatMatrix r = RatMatrix(1, y.size(), y) * a;
  return r.row(0);
}

inline Vec to_vec(const std::vector<Integer>& v) { return Vec(v.begin(), v.end()); }

/// coker(relations) tensored with Z_T. Relations are rows; columns are generators.
class FGModule {
 public:
  FGModule(PrimeSet t, IntMatrix relations, std::size_t gens)
      : t_(std::move(t)), rel_(std::move(relations)), gens_(gens) {
    if (rel_.rows() == 0) rel_ = IntMatrix(0, gens_);
    if (rel_.cols() != gens_)
      throw input_error("relation rows have " + std::to_string(rel_.cols()) + " entries but there are " +
                        std::to_string(gens_) + " generators");
    snf_ = std::make_shared<const SmithForm>(smith_normal_form(rel_));
  }
  FGModule(PrimeSet t, IntMatrix relations) : FGModule(std::move(t), relations, relations.cols()) {}

  static FGModule free(PrimeSet t, std::size_t n) { return FGModule(std::move(t), IntMatrix(0, n), n); }

  /// Z/d_1 + Z/d_2 + ... with d = 0 giving a free summand.
  static FGModule cyclic_sum(PrimeSet t, const std::vector<Integer>& d) {
    IntMatrix r(d.size(), d.size());
    for (std::size_t k = 0; k < d.size(); ++k) r(k, k) = d[k];
    return FGModule(std::move(t), r, d.size());
  }

  const PrimeSet& t() const noexcept { return t_; }
  const IntMatrix& relations() const noexcept { return rel_; }
  std::size_t gens() const noexcept { return gens_; }
  const SmithForm& smith() const noexcept { return *snf_; }

  ModuleInvariants invariants() const { return genus::invariants_over(*snf_, gens_, t_); }
  /// Invariants of the localization at X (taken inside T).
  ModuleInvariants invariants_over(const PrimeSet& x) const { return genus::invariants_over(*snf_, gens_, x.intersect(t_)); }

  bool is_element(const Vec& y) const {
    if (y.size() != gens_) return false;
    for (const auto& e : y)
      if (!is_x_integer(e, t_)) return false;
    return true;
  }
  bool is_zero(const Vec& y) const { return in_rowspace(y, rel_, t_); }

  std::string str() const {
    return "module(T=" + t_.str() + "; gens=" + std::to_string(gens_) + "; rel=" + rel_.str() + ")";
  }

  friend bool operator==(const FGModule& a, const FGModule& b) {
    return a.t_ == b.t_ && a.gens_ == b.gens_ && a.rel_ == b.rel_;
  }

 private:
  PrimeSet t_;
  IntMatrix rel_;
  std::size_t gens_;
  std::shared_ptr<const SmithForm> snf_;
};

/// A homomorphism given by a rational matrix, generator j of the source
/// going to row j. The target ring must be a localization of the source ring.
class ModuleMap {
 public:
  ModuleMap(FGModule source, FGModule target, RatMatrix m)
      : src_(std::move(source)), dst_(std::move(target)), m_(std::move(m)) {
    if (m_.rows() != src_.gens() || m_.cols() != dst_.gens())
      throw input_error("map matrix is " + std::to_string(m_.rows()) + "x" + std::to_string(m_.cols()) +
                        ", expected " + std::to_string(src_.gens()) + "x" + std::to_string(dst_.gens()));
    if (!dst_.t().subset_of(src_.t()))
      throw input_error("target ring over " + dst_.t().str() + " is not a localization of source ring over " +
                        src_.t().str());
    for (std::size_t i = 0; i < m_.rows(); ++i)
      if (!dst_.is_element(m_.row(i)))
        throw input_error("row " + std::to_string(i) + " of the map has a denominator not invertible over " +
                          dst_.t().str());
    const auto& r = src_.relations();
    for (std::size_t i = 0; i < r.rows(); ++i)
      if (!dst_.is_zero(row_times(to_vec(r.row(i)), m_)))
        throw input_error("relation " + std::to_string(i) + " of the source does not map to zero");
  }

  static ModuleMap identity(const FGModule& m) { return ModuleMap(m, m, RatMatrix::identity(m.gens())); }

  const FGModule& source() const noexcept { return src_; }
  const FGModule& target() const noexcept { return dst_; }
  const RatMatrix& matrix() const noexcept { return m_; }

  Vec apply(const Vec& y) const { return row_times(y, m_); }

 private:
  FGModule src_;
  FGModule dst_;
  RatMatrix m_;
};

/// first, then second.
inline ModuleMap compose(const ModuleMap& first, const ModuleMap& second) {
  if (!(first.target() == second.source())) throw input_error("maps are not composable");
  return ModuleMap(first.source(), second.target(), first.matrix() * second.matrix());
}

inline bool maps_equal(const ModuleMap& f, const ModuleMap& g) {
  if (!(f.source() == g.source()) || !(f.target() == g.target())) return false;
  RatMatrix d = f.matrix() - g.matrix();
  for (std::size_t i = 0; i < d.rows(); ++i)
    if (!f.target().is_zero(d.row(i))) return false;
  return true;
}

struct Localized {
  FGModule module;
  ModuleMap map;
};

/// M over S together with the canonical map M -> M_S.
inline Localized localize(const FGModule& m, const PrimeSet& s) {
  if (!s.subset_of(m.t())) throw input_error("S = " + s.str() + " is not contained in T = " + m.t().str());
  FGModule ms(s, m.relations(), m.gens());
  return {ms, ModuleMap(m, ms, RatMatrix::identity(m.gens()))};
}

struct Kernel {
  FGModule module;
  ModuleMap inclusion;
};

inline Kernel kernel(const ModuleMap& f) {
  const auto& s = f.source();
  const auto& t = f.target();
  IntMatrix basis = lattice_preimage(s.gens(), {{f.matrix(), t.relations(), t.t()}});
  auto y = solve_left(to_rational(basis), to_rational(s.relations()));
  if (!y) throw std::logic_error("source relations escaped the kernel lattice");
  IntMatrix yi(y->rows(), y->cols());
  for (std::size_t i = 0; i < y->rows(); ++i)
    for (std::size_t j = 0; j < y->cols(); ++j) {
      if (denominator((*y)(i, j)) != 1) throw std::logic_error("non-integral kernel relation");
      yi(i, j) = numerator((*y)(i, j));
    }
  FGModule k(s.t(), yi, basis.rows());
  return {k, ModuleMap(k, s, to_rational(basis))};
}

inline bool is_injective(const ModuleMap& f) { return kernel(f).module.invariants().trivial(); }

/// coker(f) localized at W (W inside the target ring), as a module over W.
inline FGModule cokernel_over(const ModuleMap& f, const PrimeSet& w) {
  const auto& t = f.target();
  Integer c = common_denominator(f.matrix());
  IntMatrix rel = t.relations().stack(clear_denominators(f.matrix(), c));
  return FGModule(w.intersect(t.t()), rel, t.gens());
}

struct LocalizationDecision {
  bool holds = false;
  bool kernel_ok = false;
  bool coker_ok = false;
  Json witness;
};

/// Is f an X-isomorphism: kernel and cokernel both killed elementwise by X-numbers.
inline LocalizationDecision is_localization(const ModuleMap& f, const PrimeSet& x) {
  LocalizationDecision out;
  const PrimeSet y1 = x.intersect(f.source().t());
  const PrimeSet w = x.intersect(f.target().t());
  Kernel k = kernel(f);
  ModuleInvariants kinv = k.module.invariants();
  out.kernel_ok = k.module.invariants_over(y1).trivial();
  Json killers = Json::array();
  for (const auto& d : kinv.torsion) killers.push_back(d.str());

  FGModule c = cokernel_over(f, w);
  out.coker_ok = c.invariants().trivial();
  // A finitely generated image over the source ring cannot fill a free
  // summand that is divisible by primes of X outside the target ring.
  if (out.coker_ok && y1 != w && f.target().invariants_over(w).free_rank > 0) out.coker_ok = false;
  Json mult = Json::array();
  {
    Integer den = common_denominator(f.matrix());
    IntMatrix img = f.target().relations().stack(clear_denominators(f.matrix(), den));
    for (std::size_t j = 0; j < f.target().gens(); ++j) {
      Vec e(f.target().gens(), Rational(0));
      e[j] = 1;
      auto t = annihilator(e, img, f.target().t());
      mult.push_back(t ? Json(t->str()) : Json(nullptr));
    }
  }
  out.holds = out.kernel_ok && out.coker_ok;
  out.witness = Json{{"X", x.str()},
                     {"kernel", kinv.str()},
                     {"kernel_annihilators", killers},
                     {"kernel_at_X", k.module.invariants_over(y1).str()},
                     {"cokernel_at_X", c.invariants().str()},
                     {"generator_multipliers", mult}};
  return out;
}

/// Given a Z-basis of a lattice in Z^{n+1}, an element whose last coordinate
/// is a unit of Z_X, normalised to last coordinate 1.
inline std::optional<Vec> unit_last(const IntMatrix& basis, const PrimeSet& x) { return solve_unit_last(basis, x); }

/// Two-sided inverse of an isomorphism between modules over the same ring.
inline ModuleMap inverse(const ModuleMap& f) {
  const auto& s = f.source();
  const auto& t = f.target();
  if (s.t() != t.t()) throw domain_error("inverse needs source and target over the same ring");
  if (!is_injective(f)) throw domain_error("map is not invertible: nonzero kernel");
  const std::size_t n = s.gens(), m = t.gens();
  RatMatrix inv(m, n);
  for (std::size_t j = 0; j < m; ++j) {
    // (z, w) with z * f - w * e_j = 0 in the target.
    RatMatrix a(n + 1, m);
    a.set_block(0, 0, f.matrix());
    a(n, j) = -1;
    auto sol = unit_last(lattice_preimage(n + 1, {{a, t.relations(), t.t()}}), t.t());
    if (!sol) throw domain_error("map is not invertible: generator " + std::to_string(j) + " is not in the image");
    for (std::size_t i = 0; i < n; ++i) inv(j, i) = (*sol)[i];
  }
  ModuleMap g(t, s, inv);
  if (!maps_equal(compose(f, g), ModuleMap::identity(s)) || !maps_equal(compose(g, f), ModuleMap::identity(t)))
    throw std::logic_error("inverse failed to certify");
  return g;
}

// --- fracture squares -----------------------------------------------------------

/// Direct sum of copies of the same relations, block diagonal.
inline IntMatrix block_diagonal(const IntMatrix& r, std::size_t copies) {
  IntMatrix out(r.rows() * copies, r.cols() * copies);
  for (std::size_t c = 0; c < copies; ++c) out.set_block(c * r.rows(), c * r.cols(), r);
  return out;
}

struct FractureSquare {
  PartitionFamily family;
  FGModule g;
  std::vector<FGModule> locals;  // G_{T_i}
  FGModule gs;                   // G_S
  FGModule prod_s;               // (prod G_{T_i})_S, a finite sum of copies of G_S
  std::vector<ModuleMap> psi;    // G -> G_{T_i}
  ModuleMap sigma;               // G -> G_S
  std::vector<ModuleMap> phi_i;  // G_{T_i} -> G_S
  std::vector<ModuleMap> phi;    // components of phi: G_{T_i} -> (prod G_{T_i})_S
  ModuleMap omega;               // G_S -> (prod G_{T_i})_S
  ModuleMap pi;                  // (prod G_{T_i})_S -> prod G_S
  ModuleMap delta;               // G_S -> prod G_S

  std::size_t size() const { return locals.size(); }
};

/// A finite singletons family rewritten with explicit blocks.
inline PartitionFamily as_explicit(const PartitionFamily& f) {
  if (!f.is_singletons()) return f;
  if (f.has_infinite_index()) throw domain_error("fracture squares need a finite family; " + f.str() + " is infinite");
  std::vector<PrimeSet> blocks;
  for (BlockIndex p : f.indices()) blocks.push_back(f.block(p));
  return PartitionFamily::explicit_blocks(f.t(), f.s(), blocks);
}

inline FractureSquare build_fracture(const FGModule& g, const PartitionFamily& family_in) {
  PartitionFamily family = as_explicit(family_in);
  if (family.t() != g.t())
    throw input_error("family is over T = " + family.t().str() + " but the module is over " + g.t().str());
  const std::size_t n = g.gens(), k = family.explicit_list().size();
  const PrimeSet& s = family.s();
  FGModule gs(s, g.relations(), n);
  FGModule prod_s(s, block_diagonal(g.relations(), k), n * k);
  std::vector<FGModule> locals;
  std::vector<ModuleMap> psi, phi_i, phi;
  RatMatrix id = RatMatrix::identity(n);
  RatMatrix row_of_ids(n, n * k);
  for (std::size_t i = 0; i < k; ++i) {
    locals.emplace_back(family.explicit_list()[i], g.relations(), n);
    psi.emplace_back(g, locals.back(), id);
    phi_i.emplace_back(locals.back(), gs, id);
    RatMatrix incl(n, n * k);
    incl.set_block(0, i * n, id);
    phi.emplace_back(locals.back(), prod_s, incl);
    row_of_ids.set_block(0, i * n, id);
  }
  FractureSquare sq{family,
                    g,
                    locals,
                    gs,
                    prod_s,
                    psi,
                    ModuleMap(g, gs, id),
                    phi_i,
                    phi,
                    ModuleMap(gs, prod_s, row_of_ids),
                    ModuleMap(prod_s, prod_s, RatMatrix::identity(n * k)),
                    ModuleMap(gs, prod_s, row_of_ids)};

  for (std::size_t i = 0; i < k; ++i) {
    if (!maps_equal(compose(sq.psi[i], sq.phi_i[i]), sq.sigma))
      throw std::logic_error("phi_i psi_i != sigma for block " + std::to_string(i));
    if (!is_localization(sq.psi[i], family.explicit_list()[i]).holds)
      throw std::logic_error("psi_" + std::to_string(i) + " is not a localization");
    if (!is_localization(sq.phi_i[i], s).holds)
      throw std::logic_error("phi_" + std::to_string(i) + " is not a localization");
  }
  if (!is_localization(sq.sigma, s).holds) throw std::logic_error("sigma is not a localization");
  if (!maps_equal(compose(sq.omega, sq.pi), sq.delta)) throw std::logic_error("pi omega != delta");
  return sq;
}

struct BlockTorsion {
  std::size_t index;
  PrimeSet block;
  std::vector<Integer> torsion;  // (T_i - S)-primary invariants of G_{T_i}
  bool phi_injective;
};

struct TorsionReport {
  std::vector<BlockTorsion> blocks;
  bool pi_mono = false;
  std::string pi_kernel;

  Json json() const {
    Json b = Json::array();
    for (const auto& t : blocks) {
      Json tor = Json::array();
      for (const auto& d : t.torsion) tor.push_back(d.str());
      b.push_back(Json{{"block", t.block.str()}, {"torsion", tor}, {"phi_injective", t.phi_injective}});
    }
    return Json{{"blocks", b}, {"pi_mono", pi_mono}, {"pi_kernel", pi_kernel}};
  }
};

inline TorsionReport torsion_check(const FractureSquare& sq) {
  TorsionReport rep;
  for (std::size_t i = 0; i < sq.size(); ++i) {
    PrimeSet res = sq.family.explicit_list()[i].difference(sq.family.s());
    BlockTorsion bt{i, sq.family.explicit_list()[i], sq.g.invariants_over(res).torsion, is_injective(sq.phi_i[i])};
    if (bt.phi_injective != bt.torsion.empty()) throw std::logic_error("torsion and injectivity disagree");
    rep.blocks.push_back(std::move(bt));
  }
  Kernel k = kernel(sq.pi);
  rep.pi_kernel = k.module.invariants().str();
  rep.pi_mono = k.module.invariants().trivial();
  return rep;
}

// --- pullbacks ------------------------------------------------------------------

inline int min_valuation(const RatMatrix& m, Prime p) {
  int v = 0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (m(i, j) != 0) v = std::min(v, valuation(m(i, j), p));
  return v;
}

/// Residual primes dividing some entry of the given matrices.
inline std::vector<Prime> residual_support(const std::vector<RatMatrix>& ms, const PrimeSet& residual) {
  std::map<Prime, int> seen;
  for (const auto& m : ms)
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j)
        if (m(i, j) != 0)
          for (auto [p, e] : factorize(m(i, j))) seen[p] = 1;
  std::vector<Prime> out;
  for (auto [p, one] : seen)
    if (residual.contains(p)) out.push_back(p);
  return out;
}

struct Pullback {
  FGModule module;
  ModuleMap mu;                 // P -> G_S
  std::vector<ModuleMap> proj;  // P -> G_{T_i}
  IntMatrix basis;              // rows: N * (x, g_1, ..., g_k)
  Integer scale;                // N
};

namespace detail {

inline RatMatrix selector(std::size_t blocks, std::size_t n, std::size_t which) {
  RatMatrix e(blocks * n, n);
  e.set_block(which * n, 0, RatMatrix::identity(n));
  return e;
}

/// Conditions for an element N*(x, g) of the pullback to be zero.
inline std::vector<LatticeConstraint> zero_constraints(const FractureSquare& sq, const RatMatrix& coords,
                                                       const Integer& scale) {
  const std::size_t n = sq.g.gens();
  IntMatrix nr = sq.g.relations().scaled(scale);
  std::vector<LatticeConstraint> cs;
  cs.push_back({coords * selector(sq.size() + 1, n, 0), nr, sq.family.s()});
  for (std::size_t i = 0; i < sq.size(); ++i)
    cs.push_back({coords * selector(sq.size() + 1, n, i + 1), nr, sq.family.explicit_list()[i]});
  return cs;
}

}  // namespace detail

/// Pullback of (prod alpha_i phi_i, Delta); alpha_i are automorphisms of G_S.
inline Pullback pullback(const FractureSquare& sq, const std::vector<ModuleMap>& alpha, const Integer& extra_scale = 1) {
  const std::size_t n = sq.g.gens(), k = sq.size();
  if (alpha.size() != k)
    throw input_error("expected " + std::to_string(k) + " automorphisms, got " + std::to_string(alpha.size()));
  std::vector<RatMatrix> inv;
  for (std::size_t i = 0; i < k; ++i) {
    if (!(alpha[i].source() == sq.gs) || !(alpha[i].target() == sq.gs))
      throw input_error("alpha_" + std::to_string(i) + " is not an endomorphism of G_S");
    inv.push_back(inverse(alpha[i]).matrix());
  }

  // Scale N so that N*(x, g) is T-integral for suitably chosen representatives.
  std::vector<RatMatrix> all;
  for (std::size_t i = 0; i < k; ++i) all.push_back(alpha[i].matrix()), all.push_back(inv[i]);
  Integer scale = extra_scale;
  for (Prime p : residual_support(all, sq.family.residual())) {
    std::size_t j = sq.family.block_of(p);
    int a = min_valuation(alpha[j].matrix(), p);
    int b = 0;
    for (const auto& m : inv) b = std::min(b, min_valuation(m, p));
    int e = std::max({0, -a, -(std::min(0, a) + b)});
    scale *= ipow(Integer(p), e);
  }

  const std::size_t dim = n * (k + 1);
  std::vector<LatticeConstraint> cs;
  RatMatrix nid = RatMatrix::identity(n);
  IntMatrix nr = sq.g.relations().scaled(scale);
  for (std::size_t i = 0; i < k; ++i) {
    cs.push_back({detail::selector(k + 1, n, i + 1), IntMatrix::identity(n).scaled(scale), sq.family.explicit_list()[i]});
    RatMatrix a = detail::selector(k + 1, n, 0) - detail::selector(k + 1, n, i + 1) * alpha[i].matrix();
    cs.push_back({a, nr, sq.family.s()});
  }
  IntMatrix basis = lattice_preimage(dim, cs);
  IntMatrix zero = lattice_preimage(dim, detail::zero_constraints(sq, RatMatrix::identity(dim), scale));
  auto y = solve_left(to_rational(basis), to_rational(zero));
  if (!y) throw std::logic_error("zero lattice is not inside the pullback lattice");
  IntMatrix yi(y->rows(), y->cols());
  for (std::size_t i = 0; i < y->rows(); ++i)
    for (std::size_t j = 0; j < y->cols(); ++j) yi(i, j) = numerator((*y)(i, j));

  FGModule p(sq.g.t(), yi, basis.rows());
  RatMatrix b = to_rational(basis).scaled(Rational(1) / Rational(scale));
  ModuleMap mu(p, sq.gs, b.sub(0, 0, b.rows(), n));
  std::vector<ModuleMap> proj;
  for (std::size_t i = 0; i < k; ++i) proj.emplace_back(p, sq.locals[i], b.sub(0, (i + 1) * n, b.rows(), n));
  return {p, mu, proj, basis, scale};
}

/// The unique map Q -> P with mediating * mu = q0 and mediating * proj_i = q_i.
inline ModuleMap mediating_map(const FractureSquare& sq, const Pullback& pb, const ModuleMap& q0,
                               const std::vector<ModuleMap>& q) {
  const std::size_t n = sq.g.gens(), k = sq.size(), r = pb.basis.rows();
  const FGModule& src = q0.source();
  RatMatrix out(src.gens(), r);
  for (std::size_t e = 0; e < src.gens(); ++e) {
    RatMatrix coords(r + 1, n * (k + 1));
    coords.set_block(0, 0, to_rational(pb.basis));
    for (std::size_t j = 0; j < n; ++j) {
      coords(r, j) = -q0.matrix()(e, j) * pb.scale;
      for (std::size_t i = 0; i < k; ++i) coords(r, (i + 1) * n + j) = -q[i].matrix()(e, j) * pb.scale;
    }
    auto sol = unit_last(lattice_preimage(r + 1, detail::zero_constraints(sq, coords, pb.scale)), sq.g.t());
    if (!sol) throw domain_error("cone generator " + std::to_string(e) + " has no preimage in the pullback");
    for (std::size_t j = 0; j < r; ++j) out(e, j) = (*sol)[j];
  }
  return ModuleMap(src, pb.module, out);
}

/// Elements of P that vanish under mu and every proj_i are zero in P.
inline bool jointly_injective(const FractureSquare& sq, const Pullback& pb) {
  IntMatrix z = lattice_preimage(pb.basis.rows(), detail::zero_constraints(sq, to_rational(pb.basis), pb.scale));
  for (std::size_t i = 0; i < z.rows(); ++i)
    if (!pb.module.is_zero(to_vec(z.row(i)))) return false;
  return true;
}

// --- boundedness ----------------------------------------------------------------

struct MatrixBound {
  bool holds = true;
  Integer s = 1;
  Json witness;
};

namespace detail {

/// Least t (supported on T_i) with t * y in the image of phi_i.
inline Integer image_multiplier(const FractureSquare& sq, std::size_t i, const Vec& y) {
  const std::size_t n = sq.g.gens();
  RatMatrix a(n + 1, n);
  a.set_block(0, 0, RatMatrix::identity(n));
  for (std::size_t j = 0; j < n; ++j) a(n, j) = -y[j];
  IntMatrix basis = lattice_preimage(n + 1, {{a, sq.g.relations(), sq.family.s()}});
  Integer g = 0;
  for (std::size_t r = 0; r < basis.rows(); ++r) g = boost::multiprecision::gcd(g, basis(r, n));
  if (g == 0) throw std::logic_error("no multiple lands in the image");
  return x_part(g, sq.family.explicit_list()[i]);
}

inline MatrixBound bound_from(const FractureSquare& sq, const std::vector<ModuleMap>& alpha, bool two_sided) {
  MatrixBound out;
  Json per = Json::array();
  for (std::size_t i = 0; i < sq.size(); ++i) {
    std::vector<RatMatrix> ms{inverse(alpha[i]).matrix()};
    if (two_sided) ms.push_back(alpha[i].matrix());
    Integer si = 1;
    for (const auto& m : ms)
      for (std::size_t r = 0; r < m.rows(); ++r) si = boost::multiprecision::lcm(si, image_multiplier(sq, i, m.row(r)));
    out.s = boost::multiprecision::lcm(out.s, si);
    per.push_back(Json{{"block", sq.family.explicit_list()[i].str()}, {"s", si.str()}});
  }
  out.witness = Json{{"s", out.s.str()}, {"per_block", per}};
  return out;
}

}  // namespace detail

/// Least S-number s with s * alpha_i and s * alpha_i^{-1} carrying generators into im(phi_i).
inline MatrixBound is_bounded_matrix(const FractureSquare& sq, const std::vector<ModuleMap>& alpha) {
  return detail::bound_from(sq, alpha, true);
}

/// Least S-number s with s * alpha_i^{-1} carrying generators into im(phi_i).
inline MatrixBound is_bounded_above_matrix(const FractureSquare& sq, const std::vector<ModuleMap>& alpha) {
  return detail::bound_from(sq, alpha, false);
}

// --- genus witness --------------------------------------------------------------

struct GenusWitness {
  FGModule p;
  ModuleMap f;  // P -> G
  ModuleMap g;  // P -> H
  LocalizationDecision f_check;
  LocalizationDecision g_check;
};

/// An isomorphism H_S -> G_S matching the Smith coordinates that survive at S.
inline RatMatrix canonical_identification(const FGModule& g, const FGModule& h, const PrimeSet& s) {
  auto nontrivial = [&](const FGModule& m) {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < m.gens(); ++k)
      if (m.smith().diagonal_over(k, s) != 1) out.push_back(k);
    return out;
  };
  auto kg = nontrivial(g), kh = nontrivial(h);
  RatMatrix pi(h.gens(), g.gens());
  for (std::size_t t = 0; t < kh.size(); ++t) pi(kh[t], kg[t]) = 1;
  auto vginv = inverse(to_rational(g.smith().v));
  return to_rational(h.smith().v) * pi * *vginv;
}

/// The pullback P of G -> G_S <- H with its S-isomorphisms to G and H.
/// theta: H_S -> G_S; when absent, the canonical identification is used.
inline GenusWitness genus_witness(const FGModule& g, const FGModule& h, const PrimeSet& s,
                                  std::optional<RatMatrix> theta = std::nullopt) {
  if (g.t() != h.t()) throw input_error("G and H must be over the same T");
  if (!s.subset_of(g.t())) throw input_error("S = " + s.str() + " is not contained in T = " + g.t().str());
  auto ig = g.invariants_over(s), ih = h.invariants_over(s);
  if (!(ig == ih))
    throw domain_error("localizations at S differ: G_S = " + ig.str() + " but H_S = " + ih.str());
  RatMatrix th = theta ? *theta : canonical_identification(g, h, s);
  FGModule gs(s, g.relations(), g.gens()), hs(s, h.relations(), h.gens());
  ModuleMap thm(hs, gs, th);  // validates theta
  if (!is_injective(thm) || !cokernel_over(thm, s).invariants().trivial())
    throw domain_error("theta is not an isomorphism H_S -> G_S");

  const std::size_t ng = g.gens(), nh = h.gens(), dim = ng + nh;
  RatMatrix eg(dim, ng), eh(dim, nh);
  eg.set_block(0, 0, RatMatrix::identity(ng));
  eh.set_block(ng, 0, RatMatrix::identity(nh));
  IntMatrix basis = lattice_preimage(dim, {{eg - eh * th, g.relations(), s}});
  IntMatrix zero = lattice_preimage(dim, {{eg, g.relations(), g.t()}, {eh, h.relations(), h.t()}});
  auto y = solve_left(to_rational(basis), to_rational(zero));
  if (!y) throw std::logic_error("zero lattice is not inside the pullback lattice");
  IntMatrix yi(y->rows(), y->cols());
  for (std::size_t i = 0; i < y->rows(); ++i)
    for (std::size_t j = 0; j < y->cols(); ++j) yi(i, j) = numerator((*y)(i, j));
  FGModule p(g.t(), yi, basis.rows());
  RatMatrix b = to_rational(basis);
  ModuleMap f(p, g, b.sub(0, 0, b.rows(), ng));
  ModuleMap gm(p, h, b.sub(0, ng, b.rows(), nh));
  auto fc = is_localization(f, s), gc = is_localization(gm, s);
  return {p, f, gm, fc, gc};
}

}  // namespace genus
