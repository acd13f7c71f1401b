#include <CLI11.hpp>

#include <iostream>
#include <optional>

#include "elid/app/experiment.hpp"

using namespace elid::app;

int main(int argc, char** argv) {
  CLI::App app{"Derive and numerically verify scaling identities of elastic systems"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  std::string config_path, out_dir, identity;
  std::vector<std::string> sets;
  std::optional<int> n;
  std::optional<std::string> a, b;
  std::optional<std::uint64_t> seed;
  bool require_star = false;

  const std::pair<const char*, const char*> commands[] = {
      {"derive", "Print the machine derivation of an identity and write the coefficient tables"},
      {"verify-static", "Solve the static problem over the grid.h list and check the static identity"},
      {"verify-dynamic", "Integrate in time and check the dynamic identity"},
      {"certify", "Check the non-existence certificate, optionally followed by seeded solves"},
      {"selftest", "Run the symbolic and integrator self-tests"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("-c,--config", config_path, "Experiment config file (key = value lines)")->check(CLI::ExistingFile);
    sub->add_option("-s,--set", sets, "Override a config key, KEY=VALUE (repeatable)");
    sub->add_option("-o,--out", out_dir, "Output directory (overrides output.dir and ELID_OUTPUT_DIR)");
    sub->add_option("--identity", identity, "Sets verify.identity");
    sub->add_option("--n", n, "Sets n");
    sub->add_option("--a", a, "Sets identity.a");
    sub->add_option("--b", b, "Sets identity.b");
    sub->add_option("--seed", seed, "Sets seed");
    if (std::string_view(name) == "verify-static")
      sub->add_flag("--require-star-shaped", require_star, "Reject domains that are not star-shaped");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kPass : kInputError;
  }

  ExperimentConfig cfg;
  try {
    if (!config_path.empty()) cfg = ExperimentConfig::load(config_path);
    for (const auto& s : sets) cfg.set_assignment(s);
    if (!identity.empty()) cfg.set("verify.identity", identity);
    if (n) cfg.set("n", std::to_string(*n));
    if (a) cfg.set("identity.a", *a);
    if (b) cfg.set("identity.b", *b);
    if (seed) cfg.set("seed", std::to_string(*seed));
    if (require_star) cfg.set("verify.require_star_shaped", "true");
  } catch (const ConfigError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  return run_command(command, cfg, resolve_output_dir(cfg, out_dir), std::cout, std::cerr);
}
