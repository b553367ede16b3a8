// Acceptance run: one PASS/FAIL line per criterion, exit status 1 on any failure.

#include <chrono>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "genus/genus.hpp"
#include "oracles.hpp"

using namespace genus;

namespace {

using Clock = std::chrono::steady_clock;

struct Verdict {
  bool pass;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& name, double limit_s, const std::function<Verdict()>& body) {
  auto t0 = Clock::now();
  Verdict v{false, ""};
  try {
    v = body();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  bool in_time = limit_s <= 0 || secs < limit_s;
  bool ok = v.pass && in_time;
  if (!ok) ++failures;
  std::ostringstream line;
  line << (ok ? "PASS" : "FAIL") << " " << id << ": " << name << " (" << v.detail << "; " << secs << " s";
  if (limit_s > 0) line << " < " << limit_s << " s" << (in_time ? "" : " exceeded");
  line << ")";
  std::cout << line.str() << std::endl;
}

PartitionFamily integers() { return PartitionFamily::singletons(PrimeSet::all(), PrimeSet::none()); }

/// +-prod q^v over up to three distinct primes q < 100 with v in [-3, 3].
Rational exception_value(sample::Rng& rng, const std::vector<Prime>& primes) {
  Rational q = rng.coin() ? 1 : -1;
  std::set<Prime> used;
  for (std::uint64_t n = rng.below(4), k = 0; k < n; ++k) {
    Prime p = rng.pick(primes);
    if (!used.insert(p).second) continue;
    q *= rpow(Rational(p), static_cast<int>(rng.in(-3, 3)));
  }
  return q;
}

rank1::AutFamily1 bounded_sample(sample::Rng& rng, const std::vector<Prime>& primes) {
  std::map<BlockIndex, Rational> exc;
  for (std::uint64_t n = 1 + rng.below(4), k = 0; k < n; ++k) {
    Prime p = rng.pick(primes);
    exc[p] = exception_value(rng, primes) * rpow(Rational(p), static_cast<int>(rng.in(-3, 3)));
  }
  return rank1::AutFamily1(integers(), exc, rank1::TailIdentity{});
}

}  // namespace

int main() {
  const std::vector<Prime> below100 = sample::primes_below(100);

  criterion(1, "counterexample pullback of prod p_i is the trivial group", 1.0, [] {
    auto out = cmd::counterexample(cmd::Request{});
    const auto& rec = out.json["results"][0];
    bool trivial = rec["trivial"] == true && rec["height_sequence"]["trivial"] == true;
    auto h = rank1::pullback_rank1(rank1::AutFamily1(integers(), {}, rank1::TailIndexPrimePower{1}));
    return Verdict{trivial && h.trivial(), "verdict: " + rec["verdict"].get<std::string>()};
  });

  criterion(2, "bounded samples have pullback isomorphic to Z", 5.0, [&] {
    sample::Rng rng(2);
    const int n = 150;
    int good = 0;
    auto zero = rank1::HeightSequence::zero(PrimeSet::all(), PrimeSet::none());
    for (int k = 0; k < n; ++k) {
      auto a = bounded_sample(rng, below100);
      if (rank1::is_bounded(a).holds && rank1::rank1_iso(rank1::pullback_rank1(a), zero).iso) ++good;
    }
    return Verdict{good == n, std::to_string(good) + "/" + std::to_string(n) + " samples"};
  });

  criterion(3, "prod 1/p_i: nontrivial, not finitely generated, localization checks pass", 0, [] {
    rank1::AutFamily1 a(integers(), {}, rank1::TailIndexPrimePower{-1});
    auto h = rank1::pullback_rank1(a);
    bool fg = rank1::is_finitely_generated(h).finitely_generated;
    bool loc = true;
    std::size_t checks = 0;
    for (Prime p : {2, 3, 5, 7, 97}) {
      auto props = rank1::verify_localization_properties(a, p);
      loc = loc && all_pass(props);
      checks += props.size();
    }
    return Verdict{!h.trivial() && !fg && loc, "nontrivial=" + std::string(h.trivial() ? "false" : "true") +
                                                   ", finitely_generated=" + (fg ? "true" : "false") + ", " +
                                                   std::to_string(checks) + " property checks over 5 blocks"};
  });

  criterion(4, "double-coset class equality agrees with the pullback isomorphism oracle", 30.0, [] {
    sample::Rng rng(4);
    std::vector<PartitionFamily> fams{integers(), PartitionFamily::singletons(PrimeSet::all(), PrimeSet::finite({2}))};
    const int n = 400;
    int agree = 0, same = 0;
    for (int k = 0; k < n; ++k) {
      const auto& f = fams[k % 2];
      auto a = sample::random_bounded_above(rng, f);
      // half of the pairs share a class by construction: perturb one exception
      rank1::AutFamily1 b = sample::random_bounded_above(rng, f);
      if (k % 4 < 2) {
        auto exc = a.exceptions();
        exc[f.block_of(rng.pick(std::vector<Prime>{3, 5, 7, 11}))] = sample::random_rational(rng, {3, 5, 7, 11});
        b = rank1::AutFamily1(f, exc, a.tail());
      }
      bool cls = rank1::double_coset_class(a) == rank1::double_coset_class(b);
      bool iso = rank1::rank1_iso(rank1::pullback_rank1(a), rank1::pullback_rank1(b)).iso;
      agree += cls == iso;
      same += cls;
    }
    return Verdict{agree == n, std::to_string(agree) + "/" + std::to_string(n) + " pairs agree, " + std::to_string(same) +
                                   " in the same class"};
  });

  criterion(5, "exponent bound suite at seed 7, 500 samples: no violations, e = 3 observed", 30.0, [] {
    cmd::Request rq;
    rq.subcommand = "verify";
    rq.lemma = "112";
    rq.seed = 7;
    rq.samples = 500;
    auto out = cmd::run(rq);
    const auto& sum = out.json["summary"];
    bool e3 = sum["tightness_histogram"].contains("3") && sum["tightness_histogram"]["3"].get<int>() > 0;
    // the documented witness g = xy against H = <x^2, y^2>
    heis::HeisSubgroup h({heis::HeisElement(2, 0, 0), heis::HeisElement(0, 2, 0)});
    auto g = heis::mul(heis::HeisElement(1, 0, 0), heis::HeisElement(0, 1, 0));
    bool witness = !h.member(heis::pow(g, 4)) && h.member(heis::pow(g, 8));
    return Verdict{out.exit_code == 0 && sum["violations"] == 0 && e3 && witness,
                   "violations=" + sum["violations"].dump() + ", histogram=" + sum["tightness_histogram"].dump()};
  });

  criterion(6, "pi~ kernel is zero on randomized finite-family squares", 10.0, [] {
    sample::Rng rng(6);
    const int n = 80;
    int mono = 0, torsion = 0;
    for (int k = 0; k < n; ++k) {
      auto fam = sample::random_explicit_family(rng);
      auto g = sample::random_module(rng, fam.t());
      if (k % 4 == 0) g = FGModule::cyclic_sum(fam.t(), {0, Integer(rng.in(2, 30))});
      auto rep = torsion_check(build_fracture(g, fam));
      mono += rep.pi_mono;
      torsion += !g.invariants().torsion.empty();
    }
    return Verdict{mono == n && torsion > 0,
                   std::to_string(mono) + "/" + std::to_string(n) + " squares mono, " + std::to_string(torsion) + " with torsion"};
  });

  criterion(7, "constant families are bounded with the predicted minimal s", 0, [] {
    sample::Rng rng(7);
    const int n = 200;
    int good = 0;
    for (int k = 0; k < n; ++k) {
      Rational beta(Integer(rng.in(1, 999)) * (rng.coin() ? 1 : -1), Integer(rng.in(1, 999)));
      Integer predicted = 1;
      for (auto [p, e] : oracle::trial_factor(static_cast<std::uint64_t>(abs(numerator(beta) * denominator(beta)))))
        predicted *= ipow(Integer(p), static_cast<unsigned>(std::abs(oracle::valuation(beta, p))));
      auto d = rank1::is_bounded(rank1::AutFamily1(integers(), {}, rank1::TailConstant{beta}));
      good += d.holds && d.s && *d.s == predicted;
    }
    return Verdict{good == n, std::to_string(good) + "/" + std::to_string(n) + " constants"};
  });

  criterion(8, "Smith normal form certificates", 10.0, [] {
    sample::Rng rng(8);
    const int n = 500;
    int good = 0;
    for (int k = 0; k < n; ++k) {
      std::size_t r = 1 + rng.below(6), c = 1 + rng.below(6);
      IntMatrix a(r, c);
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) a(i, j) = rng.in(-50, 50);
      auto f = smith_normal_form(a);
      bool ok = f.u * a * f.v == f.d && abs(determinant(f.u)) == 1 && abs(determinant(f.v)) == 1;
      for (std::size_t i = 0; i < r && ok; ++i)
        for (std::size_t j = 0; j < c && ok; ++j)
          if (i != j && f.d(i, j) != 0) ok = false;
      for (std::size_t i = 0; i + 1 < f.rank && ok; ++i) ok = f.d(i, i) > 0 && f.d(i + 1, i + 1) % f.d(i, i) == 0;
      // diagonal entries over T = {2, 3}: the T-parts of the integer invariants
      for (std::size_t i = 0; i < f.rank && ok; ++i)
        ok = f.diagonal_over(i, PrimeSet::finite({2, 3})) == x_part(f.diagonal(i), PrimeSet::finite({2, 3}));
      good += ok;
    }
    return Verdict{good == n, std::to_string(good) + "/" + std::to_string(n) + " matrices up to 6x6"};
  });

  criterion(9, "module pullback agrees with the rank-1 pullback", 0, [] {
    sample::Rng rng(9);
    int n = 0, good = 0;
    while (n < 120) {
      auto fam = sample::random_explicit_family(rng);
      auto a = sample::random_bounded(rng, fam, 12);
      auto sq = build_fracture(FGModule::free(fam.t(), 1), fam);
      std::vector<ModuleMap> alpha;
      for (std::size_t i = 0; i < sq.size(); ++i) alpha.emplace_back(sq.gs, sq.gs, RatMatrix::from_rows({{a.alpha(i)}}, 1));
      auto pb = pullback(sq, alpha);
      auto h = rank1::pullback_rank1(a);
      ++n;
      if (pb.module.invariants().free_rank != 1 || !pb.module.invariants().torsion.empty()) continue;
      Rational gen = pb.mu.matrix()(0, 0);
      std::map<Prime, int> heights;
      for (Prime p : fam.residual().members_up_to(100))
        if (valuation(gen, p) != 0) heights[p] = valuation(gen, p);
      rank1::HeightSequence from_module(fam.t(), fam.s(), heights);
      good += rank1::rank1_iso(from_module, h).iso && from_module == h;
    }
    return Verdict{good == n, std::to_string(good) + "/" + std::to_string(n) + " finite-family instances"};
  });

  criterion(10, "DSL round trip on generated values", 0, [] {
    sample::Rng rng(10);
    const int n = 600;
    int good = 0;
    for (int k = 0; k < n; ++k) {
      dsl::Value v;
      switch (k % 5) {
        case 0: v = sample::random_explicit_family(rng); break;
        case 1: v = sample::random_bounded_above(rng, integers()); break;
        case 2: v = sample::random_module(rng, rng.coin() ? PrimeSet::all() : PrimeSet::finite({2, 5})); break;
        case 3: v = heis::HeisElement(rng.in(-9, 9), Rational(rng.in(-9, 9), 5), rng.in(-9, 9), PrimeSet::finite({2})); break;
        default: {
          auto f = PartitionFamily::singletons(PrimeSet::cofinite({3}), PrimeSet::finite({2}));
          v = sample::random_bounded(rng, f);
        }
      }
      good += dsl::read(dsl::print(v)) == v;
    }
    return Verdict{good == n, std::to_string(good) + "/" + std::to_string(n) + " values"};
  });

  std::cout << (failures ? "FAIL" : "PASS") << " overall: " << (10 - failures) << "/10 criteria" << std::endl;
  return failures ? 1 : 0;
}
