#include <gtest/gtest.h>

#include "genus/commands.hpp"
#include "oracles.hpp"

using namespace genus;

namespace {

cmd::Outcome run(const std::string& sub, const std::string& input = "", const std::string& lemma = "",
                 std::size_t samples = 500) {
  cmd::Request rq;
  rq.subcommand = sub;
  rq.input = input;
  rq.lemma = lemma;
  rq.samples = samples;
  return cmd::run(rq);
}

const char* integers = "singletons(all,{})";

}  // namespace

TEST(CmdBounded, Examples) {
  auto o = run("bounded", "aut(singletons(all,{}); tail=p^1) aut(singletons(all,{}); tail=p^-1) aut(singletons(all,{}); tail=id)");
  ASSERT_EQ(o.exit_code, 0);
  const auto& r = o.json["results"];
  EXPECT_FALSE(r[0]["bounded"]);
  EXPECT_FALSE(r[0]["bounded_above"]);
  EXPECT_FALSE(r[1]["bounded"]);
  EXPECT_TRUE(r[1]["bounded_above"]);
  EXPECT_TRUE(r[2]["bounded"]);
  EXPECT_TRUE(r[2]["bounded_above"]);
  EXPECT_EQ(r[2]["s_bounded"], "1");
}

TEST(CmdBounded, SquareInput) {
  auto o = run("bounded", "square(module(T={2}; gens=1), blocks({2},{}; {2}); [[1/2]])");
  ASSERT_EQ(o.exit_code, 0);
  EXPECT_EQ(o.json["results"][0]["s_bounded"], "2");
  EXPECT_EQ(o.json["results"][0]["s_bounded_above"], "1");
}

TEST(CmdBounded, InputErrors) {
  EXPECT_EQ(run("bounded", "aut(singletons(all,{}); tail=").exit_code, cmd::InputError);
  EXPECT_EQ(run("bounded", "{2,3}").exit_code, cmd::InputError);
  EXPECT_EQ(run("bounded", "").exit_code, cmd::InputError);
  EXPECT_EQ(run("nonsense").exit_code, cmd::InputError);
}

TEST(CmdPullback, Verdicts) {
  auto o = run("pullback", "aut(singletons(all,{}); tail=p^1) aut(singletons(all,{}); tail=id; 2 -> 3/2, 5 -> 5) aut(singletons(all,{}); tail=p^-1)");
  ASSERT_EQ(o.exit_code, 0);
  const auto& r = o.json["results"];
  EXPECT_EQ(r[0]["verdict"], "trivial group; phi_i not a localisation");
  EXPECT_FALSE(r[0]["localizations_hold"]);
  EXPECT_EQ(r[1]["verdict"], "≅ Z_T");
  EXPECT_TRUE(r[1]["localizations_hold"]);
  EXPECT_EQ(r[2]["verdict"], "extended genus member, not finitely generated");
  EXPECT_TRUE(r[2]["localizations_hold"]);
}

TEST(CmdPullback, ModulePath) {
  auto o = run("pullback", "square(module(T={2,3}; gens=2; rel=[[0,4]]), blocks({2,3},{}; {2},{3}); [[3/2,0],[0,3/2]], [[1,0],[0,1]])");
  ASSERT_EQ(o.exit_code, 0);
  const auto& r = o.json["results"][0];
  EXPECT_EQ(r["invariants"], "Z/4 + Z_T^1");
  EXPECT_TRUE(r["isomorphic_to_G"]);
  EXPECT_TRUE(r["mu_is_S_localization"]);
  for (const auto& p : r["projections"]) EXPECT_TRUE(p["is_localization"]);
}

TEST(CmdGenus, SampledBoundedIsOneClass) {
  auto o = run("genus", integers, "", 200);
  ASSERT_EQ(o.exit_code, 0);
  ASSERT_EQ(o.json["classes"].size(), 1u);
  EXPECT_EQ(o.json["classes"][0]["label"], "[Z_T]");
  EXPECT_TRUE(o.json["oracle_disagreements"].empty());
  EXPECT_EQ(o.json["inputs"], 200);
}

TEST(CmdExtGenus, Examples) {
  auto two = run("extgenus", "aut(singletons(all,{}); tail=id) aut(singletons(all,{}); tail=p^-1)");
  ASSERT_EQ(two.exit_code, 0);
  EXPECT_EQ(two.json["classes"].size(), 2u);
  auto one = run("extgenus", "aut(singletons(all,{}); tail=id; 3 -> 7) aut(singletons(all,{}); tail=id; 3 -> 1/9)");
  ASSERT_EQ(one.exit_code, 0);
  EXPECT_EQ(one.json["classes"].size(), 1u);
  auto sampled = run("extgenus", integers, "", 300);
  EXPECT_EQ(sampled.exit_code, 0);
  EXPECT_GT(sampled.json["classes"].size(), 1u);
  EXPECT_TRUE(sampled.json["oracle_disagreements"].empty());
}

TEST(CmdGenus, DomainErrors) {
  EXPECT_EQ(run("genus", "aut(singletons(all,{}); tail=p^-1)").exit_code, cmd::DomainError);
  EXPECT_EQ(run("extgenus", "aut(singletons(all,{}); tail=p^1)").exit_code, cmd::DomainError);
  auto mixed = run("genus", "aut(singletons(all,{}); tail=id) aut(singletons(all,{2}); tail=id)");
  EXPECT_EQ(mixed.exit_code, cmd::InputError);
}

TEST(CmdVerify, Suites) {
  auto bound = run("verify", "", "112", 500);
  ASSERT_EQ(bound.exit_code, 0);
  EXPECT_TRUE(bound.json["pass"]);
  EXPECT_EQ(bound.json["summary"]["violations"], 0);
  EXPECT_TRUE(bound.json["summary"]["tightness_histogram"].contains("3"));
  for (const char* l : {"111", "pi-mono", "124", "142-145"}) {
    auto o = run("verify", "", l, 100);
    EXPECT_EQ(o.exit_code, 0) << l;
    EXPECT_TRUE(o.json["pass"]) << l;
    EXPECT_FALSE(o.json["cases"].empty()) << l;
  }
  EXPECT_EQ(run("verify", "", "999").exit_code, cmd::InputError);
}

TEST(CmdVerify, Deterministic) {
  EXPECT_EQ(run("verify", "", "124", 100).json.dump(), run("verify", "", "124", 100).json.dump());
  EXPECT_EQ(run("extgenus", integers, "", 100).json.dump(), run("extgenus", integers, "", 100).json.dump());
}

TEST(CmdCounterexample, Narrative) {
  auto o = run("counterexample");
  ASSERT_EQ(o.exit_code, 0);
  const auto& r = o.json["results"];
  ASSERT_EQ(r.size(), 3u);
  EXPECT_EQ(r[0]["verdict"], "trivial group; phi_i not a localisation");
  EXPECT_EQ(r[1]["verdict"], "≅ Z_T");
  EXPECT_EQ(r[2]["verdict"], "extended genus member, not finitely generated");
  for (const auto& x : r) EXPECT_TRUE(x.contains("verdict"));
}

TEST(CmdCounterexample, FiniteFamilyOverride) {
  cmd::Request rq;
  rq.subcommand = "counterexample";
  rq.family = "blocks({2,3,5},{}; {2},{3},{5})";
  auto o = cmd::run(rq);
  ASSERT_EQ(o.exit_code, 0);
  ASSERT_EQ(o.json["results"].size(), 1u);
  EXPECT_EQ(o.json["results"][0]["verdict"], "≅ Z_T");
}

TEST(CmdConfig, KeyValue) {
  cmd::Request rq;
  cmd::apply_config("# defaults\nseed = 11\nsamples=40\nprime_max = 50\n", rq);
  EXPECT_EQ(rq.seed, 11u);
  EXPECT_EQ(rq.samples, 40u);
  EXPECT_EQ(rq.prime_max, 50u);
  EXPECT_THROW(cmd::apply_config("colour = blue\n", rq), Error);
  EXPECT_THROW(cmd::apply_config("seed = x\n", rq), Error);
  EXPECT_THROW(cmd::apply_config("seed\n", rq), Error);
}
