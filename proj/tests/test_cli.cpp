#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>

#include "genus/dsl.hpp"
#include "genus/report.hpp"

namespace {

struct Run {
  int code;
  std::string out;
};

Run kit(const std::string& args) {
  std::string cmd = std::string(GENUS_KIT) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return {-1, ""};
  std::string out;
  std::array<char, 4096> buf;
  while (std::size_t n = fread(buf.data(), 1, buf.size(), p)) out.append(buf.data(), n);
  int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string sample(const std::string& name) { return std::string(SAMPLES_DIR) + "/" + name; }

genus::Json json_of(const Run& r) { return genus::Json::parse(r.out); }

}  // namespace

TEST(Cli, BoundedExamples) {
  auto r = kit("bounded --format json 'aut(singletons(all,{}); tail=p^-1)'");
  ASSERT_EQ(r.code, 0);
  auto j = json_of(r)["results"][0];
  EXPECT_FALSE(j["bounded"]);
  EXPECT_TRUE(j["bounded_above"]);
  EXPECT_EQ(kit("bounded 'aut(singletons(all,{}); tail=id)'").out.find("bounded=true s=1") != std::string::npos, true);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(kit("bounded 'aut(singletons(all,{}); tail='").code, 2);
  EXPECT_EQ(kit("bounded").code, 2);
  EXPECT_EQ(kit("bounded --input /nonexistent/file.gns").code, 2);
  EXPECT_EQ(kit("frobnicate").code, 2);
  EXPECT_EQ(kit("verify 113").code, 2);
  EXPECT_EQ(kit("genus 'aut(singletons(all,{}); tail=p^-1)'").code, 3);
  EXPECT_EQ(kit("extgenus 'aut(singletons(all,{}); tail=p^1)'").code, 3);
  EXPECT_EQ(kit("--help").code, 0);
}

TEST(Cli, ErrorJson) {
  auto r = kit("--format json genus 'aut(singletons(all,{}); tail=p^-1)'");
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(json_of(r)["error"]["kind"], "domain");
}

TEST(Cli, StdinAndFileInput) {
  auto file = kit("pullback --format json --input " + sample("counterexample.gns"));
  ASSERT_EQ(file.code, 0);
  auto piped = kit("pullback --format json --input - < " + sample("counterexample.gns"));
  ASSERT_EQ(piped.code, 0);
  EXPECT_EQ(file.out, piped.out);
  EXPECT_EQ(json_of(file)["results"].size(), 3u);
}

TEST(Cli, VerifyExponentBound) {
  auto r = kit("verify 112 --seed 7 --samples 500 --format json");
  ASSERT_EQ(r.code, 0);
  auto j = json_of(r);
  EXPECT_TRUE(j["pass"]);
  EXPECT_TRUE(j["summary"]["tightness_histogram"].contains("3"));
  EXPECT_EQ(j["seed"], 7);
}

TEST(Cli, VerifyOtherSuites) {
  for (const char* l : {"pi-mono", "124", "111", "142-145"}) EXPECT_EQ(kit(std::string("verify ") + l + " --samples 60").code, 0) << l;
}

TEST(Cli, CounterexampleJson) {
  auto r = kit("counterexample --format json");
  ASSERT_EQ(r.code, 0);
  auto rs = json_of(r)["results"];
  ASSERT_EQ(rs.size(), 3u);
  for (const auto& x : rs) EXPECT_TRUE(x.contains("verdict"));
  auto fin = kit("counterexample --format json --family 'blocks({2,3},{}; {2},{3})'");
  ASSERT_EQ(fin.code, 0);
  EXPECT_EQ(json_of(fin)["results"].size(), 1u);
}

TEST(Cli, JsonIsDeterministic) {
  EXPECT_EQ(kit("extgenus --format json --seed 3 --samples 80 'singletons(all,{})'").out,
            kit("extgenus --format json --seed 3 --samples 80 'singletons(all,{})'").out);
  EXPECT_EQ(kit("verify 124 --format json --samples 100").out, kit("verify 124 --format json --samples 100").out);
  EXPECT_NE(kit("extgenus --format json --seed 3 --samples 80 'singletons(all,{})'").out,
            kit("extgenus --format json --seed 4 --samples 80 'singletons(all,{})'").out);
}

TEST(Cli, ConfigFile) {
  std::string path = testing::TempDir() + "genus-kit-test.toml";
  std::ofstream(path) << "seed = 3\nsamples = 80\n";
  EXPECT_EQ(kit("extgenus --format json --config " + path + " 'singletons(all,{})'").out,
            kit("extgenus --format json --seed 3 --samples 80 'singletons(all,{})'").out);
  std::ofstream(path) << "colour = red\n";
  EXPECT_EQ(kit("verify 124 --config " + path).code, 2);
}

TEST(Cli, SamplesParse) {
  for (const char* name : {"counterexample.gns", "bounded.gns", "square.gns", "extgenus.gns", "values.gns"}) {
    std::ifstream f(sample(name));
    std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    ASSERT_FALSE(text.empty()) << name;
    EXPECT_NO_THROW(genus::dsl::elaborate_document(genus::dsl::parse(text))) << name;
  }
  EXPECT_EQ(kit("bounded --input " + sample("bounded.gns")).code, 0);
  EXPECT_EQ(kit("pullback --input " + sample("square.gns")).code, 0);
  EXPECT_EQ(kit("extgenus --input " + sample("extgenus.gns")).code, 0);
}
