#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "alab/commands.hpp"
#include "alab/config.hpp"
#include "alab/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{"annulus-lab: Green function decay experiments on periodic lattices"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::string preset_name;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;

  const char* commands[][2] = {
      {"identities", "fuzz the exact discrete identities"},
      {"quenched", "per-sample annulus norms and band ratios"},
      {"annealed", "annealed moments, jackknife errors and power-law fits"},
      {"solve", "solve one Green column and export it"},
      {"fit", "power-law fit of a moments CSV"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "JSON config file");
    sub->add_option("--preset", preset_name, "named preset applied before the config file");
    sub->add_option("--seed", seed, "master seed override");
    sub->add_option("--out", out, "output directory override");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : alab::kExitConfig;
  }

  alab::RunConfig cfg;
  try {
    if (!preset_name.empty()) cfg = alab::preset(preset_name);
    if (!config_path.empty()) cfg = alab::load_config(config_path, cfg);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return alab::kExitConfig;
  }
  if (seed) cfg.ensemble.seed = *seed;
  if (out) cfg.out = *out;

  return alab::run_command(app.get_subcommands().front()->get_name(), cfg, std::cout, std::cerr);
}
