#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "rotornav/commands.hpp"
#include "rotornav/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "Velocity-model identification and sliding-mode point-to-point navigation "
      "for a stabilized rotorcraft simulation"};
  app.require_subcommand(1);
  app.fallthrough(true);

  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  int jobs = 1;
  app.add_option("--config", config_path, "Key-value config file (one file per run)");
  app.add_option("--out", out_dir, "Output directory for artifacts");
  auto* seed_opt = app.add_option("--seed", seed, "Experiment seed (overrides the config)");
  auto* jobs_opt = app.add_option("--jobs", jobs, "Parallel workers for sweep points");

  app.add_subcommand("sysid", "Sine sweep, magnitude plot, model identification");
  app.add_subcommand("validate", "Step-response validation (MAPD) of a model");
  app.add_subcommand("navigate", "Fly one point-to-point mission");
  app.add_subcommand("compare", "Fly the same mission under SMC and PD");

  CLI11_PARSE(app, argc, argv);

  try {
    rotornav::KeyValueConfig cfg;
    if (!config_path.empty()) {
      cfg = rotornav::KeyValueConfig::parse_file(config_path);
    }
    rotornav::CommandOptions opt;
    opt.out_dir = out_dir;
    if (seed_opt->count() > 0) {
      opt.seed = seed;
    }
    if (jobs_opt->count() > 0) {
      opt.jobs = jobs;
    }
    return rotornav::run_command(app.get_subcommands().front()->get_name(), cfg, opt);
  } catch (const rotornav::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return rotornav::kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
