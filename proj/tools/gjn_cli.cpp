#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

#include "gjn/commands.hpp"
#include "gjn/errors.hpp"
#include "gjn/run_config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Large-deviation toolkit for generalised Jackson networks"};
  app.require_subcommand(1);

  std::string config_path;
  gjn::Overrides flags;
  std::string out, spec;
  std::uint64_t seed = 0;
  int reps = 0, threads = 0;

  const char* names[] = {"validate", "rate", "fluid", "quasipotential", "simulate", "verify"};
  for (const char* name : names) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config,-c", config_path, "run configuration (JSON)");
    sub->add_option("--spec", spec, "network spec, overrides the config");
    sub->add_option("--out,-o", out, "output directory");
    sub->add_option("--seed", seed, "master seed");
    sub->add_option("--reps", reps, "replications")->check(CLI::PositiveNumber);
    sub->add_option("--threads", threads, "OpenMP threads")->check(CLI::PositiveNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : gjn::kExitMalformed;
  }
  auto* sub = app.get_subcommands().front();
  flags.command = sub->get_name();
  if (sub->count("--spec")) flags.spec = spec;
  if (sub->count("--out")) flags.out = out;
  if (sub->count("--seed")) flags.seed = seed;
  if (sub->count("--reps")) flags.reps = reps;
  if (sub->count("--threads")) flags.threads = threads;

  gjn::RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = gjn::load_run_config(config_path);
    gjn::apply_overrides(cfg, gjn::env_overrides([](const char* k) { return std::getenv(k); }));
    gjn::apply_overrides(cfg, flags);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return gjn::kExitMalformed;
  }
  return gjn::run_command(cfg, std::cerr);
}
