#pragma once

// Command implementations behind the genus-kit CLI. Each command returns a
// JSON report, a text rendering and an exit code.

#include <chrono>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "genus/abmod.hpp"
#include "genus/dsl.hpp"
#include "genus/heis.hpp"
#include "genus/rank1.hpp"
#include "genus/report.hpp"
#include "genus/sample.hpp"

namespace genus::cmd {

enum Exit { Ok = 0, InputError = 2, DomainError = 3, VerificationFailure = 4 };

struct Request {
  std::string subcommand;
  std::string input;  // DSL text; empty when the command takes none
  std::string lemma;  // verify only
  std::string family; // counterexample override
  std::uint64_t seed = 7;
  std::size_t samples = 500;
  Prime prime_max = 100;
};

struct Outcome {
  int exit_code = Ok;
  Json json;
  std::string text;
};

inline std::string yes_no(bool b) { return b ? "true" : "false"; }

inline std::vector<dsl::Value> read_values(const std::string& text) {
  auto vals = dsl::elaborate_document(dsl::parse(text));
  if (vals.empty()) throw input_error("no input expression given");
  return vals;
}

template <class T>
const T& expect(const dsl::Value& v, const std::string& what) {
  if (auto p = std::get_if<T>(&v)) return *p;
  throw input_error("expected " + what + ", got " + dsl::print(v));
}

inline std::vector<ModuleMap> alpha_maps(const FractureSquare& sq, const std::vector<RatMatrix>& alpha) {
  std::vector<ModuleMap> out;
  for (std::size_t i = 0; i < sq.size(); ++i)
    out.emplace_back(sq.gs, sq.gs, alpha.empty() ? RatMatrix::identity(sq.g.gens()) : alpha[i]);
  return out;
}

// --- bounded ------------------------------------------------------------------------

inline Outcome bounded(const Request& rq) {
  Outcome out;
  auto vals = read_values(rq.input);
  Json records = Json::array();
  for (const auto& v : vals) {
    Json rec;
    if (auto a = std::get_if<rank1::AutFamily1>(&v)) {
      auto b = rank1::is_bounded(*a), ba = rank1::is_bounded_above(*a);
      rec = Json{{"input", a->str()},
                 {"bounded", b.holds},
                 {"bounded_above", ba.holds},
                 {"s_bounded", b.s ? Json(b.s->str()) : Json(nullptr)},
                 {"s_bounded_above", ba.s ? Json(ba.s->str()) : Json(nullptr)}};
      if (!b.holds) rec["bounded_witness"] = b.witness;
      if (!ba.holds) rec["bounded_above_witness"] = ba.witness;
      out.text += a->str() + "\n  bounded=" + yes_no(b.holds) + (b.s ? " s=" + b.s->str() : "") +
                  "\n  bounded_above=" + yes_no(ba.holds) + (ba.s ? " s=" + ba.s->str() : "") + "\n";
    } else {
      const auto& sp = expect<dsl::SquareSpec>(v, "an aut(...) or square(...) expression");
      auto sq = build_fracture(sp.g, sp.family);
      auto al = alpha_maps(sq, sp.alpha);
      auto b = is_bounded_matrix(sq, al), ba = is_bounded_above_matrix(sq, al);
      rec = Json{{"input", dsl::print(v)},
                 {"bounded", b.holds},
                 {"bounded_above", ba.holds},
                 {"s_bounded", b.s.str()},
                 {"s_bounded_above", ba.s.str()},
                 {"bounded_witness", b.witness},
                 {"bounded_above_witness", ba.witness}};
      out.text += dsl::print(v) + "\n  bounded=true s=" + b.s.str() + "\n  bounded_above=true s=" + ba.s.str() + "\n";
    }
    records.push_back(rec);
  }
  out.json = Json{{"command", "bounded"}, {"results", records}};
  return out;
}

// --- pullback -----------------------------------------------------------------------

/// Up to three blocks of the family used for localization reports.
inline std::vector<BlockIndex> report_blocks(const rank1::AutFamily1& a) {
  std::vector<BlockIndex> out;
  for (const auto& [i, q] : a.exceptions()) out.push_back(i);
  const auto& f = a.family();
  if (f.is_singletons()) {
    PrimeSet res = f.residual();
    for (auto p = res.first(); p && out.size() < 3; p = res.next_after(*p))
      if (std::find(out.begin(), out.end(), *p) == out.end()) out.push_back(*p);
  } else {
    for (BlockIndex i = 0; i < f.explicit_list().size() && out.size() < 3; ++i)
      if (std::find(out.begin(), out.end(), i) == out.end()) out.push_back(i);
  }
  if (out.size() > 3) out.resize(3);
  return out;
}

inline Json rank1_pullback_record(const rank1::AutFamily1& a, std::string& verdict) {
  auto h = rank1::pullback_rank1(a);
  auto b = rank1::is_bounded(a), ba = rank1::is_bounded_above(a);
  Json rec{{"input", a.str()}, {"height_sequence", h.json()}, {"bounded", b.holds}, {"bounded_above", ba.holds}};
  Json loc = Json::array();
  bool loc_ok = true;
  for (BlockIndex i : report_blocks(a)) {
    auto props = rank1::verify_localization_properties(a, i);
    loc_ok = loc_ok && all_pass(props);
    loc.push_back(Json{{"block", a.family().label(i) ? Json(*a.family().label(i)) : Json(i)}, {"properties", to_json(props)}});
  }
  rec["localization"] = loc;
  if (h.trivial()) {
    rec["trivial"] = true;
    rec["finitely_generated"] = nullptr;
    verdict = "trivial group; phi_i not a localisation";
  } else {
    auto fg = rank1::is_finitely_generated(h);
    rec["trivial"] = false;
    rec["finitely_generated"] = fg.finitely_generated;
    rec["explanation"] = fg.explanation;
    verdict = fg.finitely_generated ? "≅ Z_T" : "extended genus member, not finitely generated";
  }
  rec["localizations_hold"] = loc_ok;
  rec["verdict"] = verdict;
  return rec;
}

inline Json module_pullback_record(const dsl::SquareSpec& sp, std::string& text) {
  auto sq = build_fracture(sp.g, sp.family);
  auto al = alpha_maps(sq, sp.alpha);
  auto pb = pullback(sq, al);
  auto inv = pb.module.invariants();
  Json loc = Json::array();
  bool ok = true;
  for (std::size_t i = 0; i < sq.size(); ++i) {
    auto d = is_localization(pb.proj[i], sq.family.explicit_list()[i]);
    ok = ok && d.holds;
    bool same = pb.module.invariants_over(sq.family.explicit_list()[i]) == sq.g.invariants_over(sq.family.explicit_list()[i]);
    loc.push_back(Json{{"block", sq.family.explicit_list()[i].str()}, {"is_localization", d.holds}, {"same_localization", same}, {"witness", d.witness}});
  }
  auto mu = is_localization(pb.mu, sq.family.s());
  Json rec{{"input", dsl::print(sp)},
           {"invariants", inv.str()},
           {"free_rank", inv.free_rank},
           {"scale", pb.scale.str()},
           {"mu", pb.mu.matrix().str()},
           {"mu_is_S_localization", mu.holds},
           {"projections", loc},
           {"isomorphic_to_G", inv == sq.g.invariants()}};
  text += dsl::print(sp) + "\n  pullback: " + inv.str() + (inv == sq.g.invariants() ? " (≅ G)" : "") +
          "\n  mu is an S-localisation: " + yes_no(mu.holds) + "\n  projections are T_i-localisations: " + yes_no(ok) + "\n";
  return rec;
}

inline Outcome pullback_cmd(const Request& rq) {
  Outcome out;
  Json records = Json::array();
  for (const auto& v : read_values(rq.input)) {
    if (auto a = std::get_if<rank1::AutFamily1>(&v)) {
      std::string verdict;
      records.push_back(rank1_pullback_record(*a, verdict));
      out.text += a->str() + "\n  pullback: " + rank1::pullback_rank1(*a).str() + "\n  " + verdict + "\n";
    } else {
      records.push_back(module_pullback_record(expect<dsl::SquareSpec>(v, "an aut(...) or square(...) expression"), out.text));
    }
  }
  out.json = Json{{"command", "pullback"}, {"results", records}};
  return out;
}

// --- genus / extended genus -----------------------------------------------------------

inline Outcome classify(const Request& rq, bool extended) {
  Outcome out;
  auto vals = read_values(rq.input);
  std::vector<rank1::AutFamily1> alphas;
  std::optional<PartitionFamily> fam;
  for (const auto& v : vals) {
    if (auto f = std::get_if<PartitionFamily>(&v)) {
      sample::Rng rng(rq.seed);
      for (std::size_t k = 0; k < rq.samples; ++k)
        alphas.push_back(extended ? sample::random_bounded_above(rng, *f, rq.prime_max) : sample::random_bounded(rng, *f, rq.prime_max));
    } else {
      alphas.push_back(expect<rank1::AutFamily1>(v, "a family or aut(...) expression"));
    }
    const auto& f = alphas.back().family();
    if (fam && *fam != f) throw input_error("all automorphism families must share one partition family");
    fam = f;
  }

  std::vector<rank1::ExtGenusClass> reps;
  std::vector<std::size_t> class_of;
  std::vector<rank1::HeightSequence> pulls;
  for (const auto& a : alphas) {
    auto c = extended ? rank1::double_coset_class(a) : rank1::genus_class(a);
    auto it = std::find(reps.begin(), reps.end(), c);
    class_of.push_back(static_cast<std::size_t>(it - reps.begin()));
    if (it == reps.end()) reps.push_back(c);
    pulls.push_back(rank1::pullback_rank1(a));
  }
  // Cross-check against the pullback isomorphism oracle on pairs spread over the inputs.
  std::size_t n = alphas.size(), budget = std::min(rq.samples, n * (n - 1) / 2), checked = 0, disagreements = 0;
  Json bad = Json::array();
  sample::Rng pick(rq.seed ^ 0x9e3779b97f4a7c15ULL);
  for (std::size_t k = 0; k < budget; ++k, ++checked) {
    std::size_t i = k, j = k + 1;
    if (budget < n * (n - 1) / 2) {
      i = pick.below(n);
      j = (i + 1 + pick.below(n - 1)) % n;
    } else {
      // Enumerate all pairs in order.
      std::size_t r = k;
      for (i = 0; r >= n - 1 - i; ++i) r -= n - 1 - i;
      j = i + 1 + r;
    }
    bool same = class_of[i] == class_of[j];
    bool iso = rank1::rank1_iso(pulls[i], pulls[j]).iso;
    if (same != iso) {
      ++disagreements;
      bad.push_back(Json{{"a", alphas[i].str()}, {"b", alphas[j].str()}});
    }
  }
  Json classes = Json::array();
  for (std::size_t c = 0; c < reps.size(); ++c) {
    Json members = Json::array();
    for (std::size_t i = 0; i < alphas.size(); ++i)
      if (class_of[i] == c && members.size() < 5) members.push_back(alphas[i].str());
    std::size_t count = std::count(class_of.begin(), class_of.end(), c);
    classes.push_back(Json{{"representative", reps[c].representative().json()}, {"label", reps[c].str()}, {"size", count}, {"examples", members}});
    out.text += "class " + std::to_string(c) + " " + reps[c].str() + ": " + std::to_string(count) + " member(s)\n";
  }
  out.text += std::to_string(reps.size()) + " class(es); oracle checked " + std::to_string(checked) + " pair(s), " +
              std::to_string(disagreements) + " disagreement(s)\n";
  out.json = Json{{"command", extended ? "extgenus" : "genus"},
                  {"family", fam->str()},
                  {"inputs", alphas.size()},
                  {"classes", classes},
                  {"oracle_pairs", checked},
                  {"oracle_disagreements", bad}};
  if (disagreements) out.exit_code = VerificationFailure;
  return out;
}

// --- verify -------------------------------------------------------------------------

struct Suite {
  bool pass = true;
  Json cases = Json::array();
  Json summary = Json::object();
};

inline Suite verify_torsion(const Request& rq, bool pi_only) {
  Suite s;
  sample::Rng rng(rq.seed);
  std::size_t n = std::max<std::size_t>(50, std::min<std::size_t>(rq.samples, 200));
  std::size_t torsion_blocks = 0;
  for (std::size_t k = 0; k < n; ++k) {
    auto fam = sample::random_explicit_family(rng);
    auto g = sample::random_module(rng, fam.t());
    auto sq = build_fracture(g, fam);
    auto rep = torsion_check(sq);
    bool ok = rep.pi_mono;
    for (const auto& b : rep.blocks) torsion_blocks += !b.torsion.empty();
    s.pass = s.pass && ok;
    Json c{{"case", k}, {"module", g.str()}, {"family", fam.str()}, {"pi_mono", rep.pi_mono}};
    if (!pi_only) c["report"] = rep.json();
    s.cases.push_back(c);
  }
  s.summary = Json{{"squares", n}, {"blocks_with_torsion", torsion_blocks}};
  return s;
}

struct HeisInstance {
  std::string name;
  std::vector<heis::HeisElement> a;
  heis::HeisSubgroup h;
  Integer s;
};

inline std::vector<HeisInstance> heis_instances() {
  using heis::HeisElement;
  using heis::HeisSubgroup;
  HeisElement x(1, 0, 0), y(0, 1, 0), z(0, 0, 1);
  PrimeSet two = PrimeSet::finite({2});
  HeisElement x2(1, 0, 0, two), y2(0, 1, 0, two);
  return {
      {"A={x,y}, H=<x^2,y^2>", {x, y}, HeisSubgroup({heis::pow(x, 2), heis::pow(y, 2)}), 2},
      {"A={x,y}, H=<x^3,y^3>", {x, y}, HeisSubgroup({heis::pow(x, 3), heis::pow(y, 3)}), 3},
      {"A={xy,y}, H=<x^2,y^2,z>", {heis::mul(x, y), y}, HeisSubgroup({heis::pow(x, 2), heis::pow(y, 2), z}), 2},
      {"A={x}, H=<x^3> (abelian)", {x}, HeisSubgroup({heis::pow(x, 3)}), 3},
      {"T={2}: A={x,y}, H=<x^2,y^2>", {x2, y2}, HeisSubgroup({heis::pow(x2, 2), heis::pow(y2, 2)}, two), 2},
  };
}

inline Suite verify_exponent_bound(const Request& rq) {
  Suite s;
  std::map<int, std::size_t> hist;
  std::size_t violations = 0;
  auto inst = heis_instances();
  for (std::size_t k = 0; k < inst.size(); ++k) {
    heis::SamplerConfig cfg;
    cfg.seed = rq.seed + k;
    cfg.samples = rq.samples;
    auto rep = heis::exponent_bound_check(inst[k].a, inst[k].h, inst[k].s, cfg);
    for (auto [e, c] : rep.histogram) hist[e] += c;
    violations += rep.violations.size();
    s.pass = s.pass && rep.pass();
    Json c = rep.json();
    c["instance"] = inst[k].name;
    s.cases.push_back(c);
  }
  Json h = Json::object();
  for (auto [e, c] : hist) h[std::to_string(e)] = c;
  s.summary = Json{{"violations", violations}, {"tightness_histogram", h}};
  return s;
}

inline Suite verify_constant_families(const Request& rq) {
  Suite s;
  sample::Rng rng(rq.seed);
  std::vector<PartitionFamily> fams{PartitionFamily::singletons(PrimeSet::all(), PrimeSet::none()),
                                    PartitionFamily::singletons(PrimeSet::all(), PrimeSet::finite({2}))};
  std::size_t n = std::max<std::size_t>(100, std::min<std::size_t>(rq.samples, 1000));
  for (std::size_t k = 0; k < n; ++k) {
    const auto& fam = fams[k % fams.size()];
    Rational beta;
    do {
      beta = Rational(Integer(rng.in(1, 999)) * (rng.coin() ? 1 : -1), Integer(rng.in(1, 999)));
    } while (valuation(beta, 2) != 0 && fam.s().contains(2));
    Integer predicted = 1;
    for (auto [p, e] : factorize(beta))
      if (!fam.s().contains(p)) predicted *= ipow(Integer(p), static_cast<unsigned>(std::abs(e)));
    rank1::AutFamily1 a(fam, {}, rank1::TailConstant{beta});
    auto d = rank1::is_bounded(a);
    bool ok = d.holds && d.s && *d.s == predicted;
    s.pass = s.pass && ok;
    s.cases.push_back(Json{{"beta", to_string(beta)}, {"family", fam.str()}, {"s", d.s ? Json(d.s->str()) : Json(nullptr)}, {"predicted", predicted.str()}, {"pass", ok}});
  }
  s.summary = Json{{"constants", n}};
  return s;
}

inline Suite verify_double_cosets(const Request& rq) {
  Suite s;
  sample::Rng rng(rq.seed);
  std::vector<PartitionFamily> fams{PartitionFamily::singletons(PrimeSet::all(), PrimeSet::none()),
                                    PartitionFamily::singletons(PrimeSet::all(), PrimeSet::finite({2})),
                                    PartitionFamily::singletons(PrimeSet::finite({2, 3, 5, 7}), PrimeSet::none())};
  std::size_t n = std::max<std::size_t>(50, std::min<std::size_t>(rq.samples, 300));
  std::size_t unbounded_checked = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const auto& fam = fams[k % fams.size()];
    auto a = sample::random_bounded_above(rng, fam, rq.prime_max);
    bool ok = rank1::is_bounded_above(a).holds;
    // bounded implies bounded above for alpha and its inverse
    if (rank1::is_bounded(a).holds) ok = ok && rank1::is_bounded_above(a.inverse()).holds;
    Json blocks = Json::array();
    for (BlockIndex i : report_blocks(a)) {
      auto props = rank1::verify_localization_properties(a, i);
      ok = ok && all_pass(props);
      blocks.push_back(to_json(props));
    }
    // Not bounded above: the localization properties must fail somewhere.
    if (fam.has_infinite_index() && k % 5 == 0) {
      rank1::AutFamily1 bad(fam, {}, rank1::TailIndexPrimePower{static_cast<int>(rng.in(1, 3))});
      auto props = rank1::verify_localization_properties(bad, fam.residual().first().value());
      ok = ok && !all_pass(props) && rank1::pullback_rank1(bad).trivial();
      ++unbounded_checked;
    }
    s.pass = s.pass && ok;
    s.cases.push_back(Json{{"alpha", a.str()}, {"pass", ok}, {"blocks", blocks}});
  }
  s.summary = Json{{"families", n}, {"unbounded_controls", unbounded_checked}};
  return s;
}

inline Outcome verify(const Request& rq) {
  Suite s;
  const std::string& l = rq.lemma;
  if (l == "111") s = verify_torsion(rq, false);
  else if (l == "pi-mono") s = verify_torsion(rq, true);
  else if (l == "112") s = verify_exponent_bound(rq);
  else if (l == "124") s = verify_constant_families(rq);
  else if (l == "142-145") s = verify_double_cosets(rq);
  else throw input_error("unknown suite '" + l + "' (expected 111, 112, 124, 142-145 or pi-mono)");
  Outcome out;
  out.json = Json{{"command", "verify"}, {"lemma", l}, {"seed", rq.seed}, {"samples", rq.samples}, {"pass", s.pass}, {"summary", s.summary}, {"cases", s.cases}};
  out.text = "verify " + l + ": " + (s.pass ? "pass" : "FAIL") + "\n  " + s.summary.dump() + "\n";
  if (!s.pass) out.exit_code = VerificationFailure;
  return out;
}

// --- counterexample -----------------------------------------------------------------

inline Outcome counterexample(const Request& rq) {
  Outcome out;
  PartitionFamily fam = PartitionFamily::singletons(PrimeSet::all(), PrimeSet::none());
  if (!rq.family.empty()) fam = expect<PartitionFamily>(dsl::read(rq.family), "a family");
  std::vector<std::pair<std::string, rank1::AutFamily1>> cases;
  // A bounded finite-support family: the identity away from the blocks of 2 and 5.
  std::map<BlockIndex, Rational> exc;
  for (Prime p : {Prime(2), Prime(5)})
    if (fam.residual().contains(p)) exc[fam.block_of(p)] = p == 2 ? Rational(3, 2) : Rational(5);
  if (fam.has_infinite_index()) {
    cases.emplace_back("prod p_i", rank1::AutFamily1(fam, {}, rank1::TailIndexPrimePower{1}));
    cases.emplace_back("bounded finite support", rank1::AutFamily1(fam, exc, rank1::TailIdentity{}));
    cases.emplace_back("prod 1/p_i", rank1::AutFamily1(fam, {}, rank1::TailIndexPrimePower{-1}));
  } else {
    cases.emplace_back("bounded finite support", rank1::AutFamily1(fam, exc, rank1::TailIdentity{}));
  }
  Json records = Json::array();
  for (const auto& [name, a] : cases) {
    std::string verdict;
    Json rec = rank1_pullback_record(a, verdict);
    rec["case"] = name;
    records.push_back(rec);
    out.text += name + ": " + a.str() + "\n  " + verdict + "\n";
  }
  out.json = Json{{"command", "counterexample"}, {"family", fam.str()}, {"results", records}};
  return out;
}

// --- dispatch -----------------------------------------------------------------------

inline Outcome run(const Request& rq) {
  Outcome out;
  try {
    if (rq.subcommand == "bounded") out = bounded(rq);
    else if (rq.subcommand == "pullback") out = pullback_cmd(rq);
    else if (rq.subcommand == "genus") out = classify(rq, false);
    else if (rq.subcommand == "extgenus") out = classify(rq, true);
    else if (rq.subcommand == "verify") out = verify(rq);
    else if (rq.subcommand == "counterexample") out = counterexample(rq);
    else throw input_error("unknown subcommand '" + rq.subcommand + "'");
  } catch (const Error& e) {
    out.exit_code = e.kind() == ErrorKind::Input ? InputError : e.kind() == ErrorKind::Domain ? DomainError : VerificationFailure;
    std::string kind = e.kind() == ErrorKind::Input ? "input" : e.kind() == ErrorKind::Domain ? "domain" : "verification";
    out.json = Json{{"command", rq.subcommand}, {"error", {{"kind", kind}, {"message", e.what()}}}};
    out.text = "error (" + kind + "): " + std::string(e.what()) + "\n";
  }
  return out;
}

/// key = value lines; '#' comments. Unknown keys are rejected.
inline void apply_config(const std::string& text, Request& rq) {
  std::istringstream in(text);
  std::string line;
  std::size_t no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    auto eq = line.find('=');
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t\r\"");
      auto e = s.find_last_not_of(" \t\r\"");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    if (trim(line).empty()) continue;
    if (eq == std::string::npos) throw input_error("config line " + std::to_string(no) + ": expected key = value");
    std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
    try {
      if (key == "seed") rq.seed = std::stoull(val);
      else if (key == "samples") rq.samples = std::stoull(val);
      else if (key == "prime_max") rq.prime_max = std::stoull(val);
      else throw input_error("config line " + std::to_string(no) + ": unknown key '" + key + "'");
    } catch (const std::logic_error&) {
      throw input_error("config line " + std::to_string(no) + ": bad value '" + val + "' for " + key);
    }
  }
}

}  // namespace genus::cmd
