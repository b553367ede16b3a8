#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include <CLI11.hpp>

#include "genus/commands.hpp"

namespace {

std::string slurp(std::istream& in) { return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()}; }

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw genus::input_error("cannot open '" + path + "'");
  return slurp(f);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"genus-kit: fracture squares, pullbacks and the (extended) genus"};
  app.require_subcommand(1);

  std::string format = "text", input_file, config, family, lemma;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  std::string inline_expr;
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--seed", seed, "Random seed (default 7)");
  app.add_option("--samples", samples, "Sample budget (default 500)");
  app.add_option("--config", config, "key = value defaults file (default ./genus-kit.toml if present)");

  auto add_input = [&](CLI::App* sub) {
    auto* file = sub->add_option("--input", input_file, "Read the expression from FILE, or stdin with '-'");
    auto* expr = sub->add_option("expr", inline_expr, "Inline expression");
    file->excludes(expr);
    expr->excludes(file);
  };
  auto* bounded = app.add_subcommand("bounded", "S-boundedness predicates of an automorphism family or square");
  auto* pullback = app.add_subcommand("pullback", "Pullback group of an automorphism along the fracture base");
  auto* genus_cmd = app.add_subcommand("genus", "Genus classes of bounded automorphisms (listed or sampled on a family)");
  auto* ext = app.add_subcommand("extgenus", "Extended genus classes of bounded-above automorphisms");
  for (auto* s : {bounded, pullback, genus_cmd, ext}) add_input(s);
  auto* verify = app.add_subcommand("verify", "Randomized verification suites");
  verify->add_option("lemma", lemma, "Suite id")->required()->check(CLI::IsMember({"111", "112", "124", "142-145", "pi-mono"}));
  auto* counter = app.add_subcommand("counterexample", "The three-automorphism counterexample narrative");
  counter->add_option("--family", family, "Partition family override");
  for (auto* s : {bounded, pullback, genus_cmd, ext, verify, counter}) {
    s->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));
    s->add_option("--seed", seed, "Random seed");
    s->add_option("--samples", samples, "Sample budget");
    s->add_option("--config", config, "Defaults file");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : genus::cmd::InputError;
  }

  genus::cmd::Request rq;
  genus::cmd::Outcome out;
  try {
    if (config.empty() && std::filesystem::exists("genus-kit.toml")) config = "genus-kit.toml";
    if (!config.empty()) genus::cmd::apply_config(read_file(config), rq);
    if (seed) rq.seed = *seed;
    if (samples) rq.samples = *samples;
    rq.subcommand = app.get_subcommands().front()->get_name();
    rq.lemma = lemma;
    rq.family = family;
    if (input_file == "-") rq.input = slurp(std::cin);
    else if (!input_file.empty()) rq.input = read_file(input_file);
    else rq.input = inline_expr;
    bool needs_input = rq.subcommand != "verify" && rq.subcommand != "counterexample";
    if (needs_input && rq.input.empty()) throw genus::input_error("no input: give an inline expression or --input FILE|-");
    out = genus::cmd::run(rq);
  } catch (const genus::Error& e) {
    out.exit_code = genus::cmd::InputError;
    out.json = genus::Json{{"command", rq.subcommand}, {"error", {{"kind", "input"}, {"message", e.what()}}}};
    out.text = "error (input): " + std::string(e.what()) + "\n";
  }

  if (format == "json") std::cout << out.json.dump(2) << "\n";
  else (out.exit_code == 0 || out.exit_code == genus::cmd::VerificationFailure ? std::cout : std::cerr) << out.text;
  return out.exit_code;
}
