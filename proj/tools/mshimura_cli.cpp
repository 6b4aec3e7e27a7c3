#include "cli/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Experiments on lattice counts, weakly special data and Galois bounds"};
  mshimura::cli::Options opts;
  app.add_option("--config", opts.config, "JSON experiment descriptor")->required()->check(CLI::ExistingFile);
  app.add_option("--out", opts.out, "Output directory");
  app.add_option("--threads", opts.threads, "Worker threads (0: hardware concurrency)");
  app.add_option("--seed", opts.seed, "Seed recorded in the manifest");
  app.require_subcommand(1);
  for (const auto& name : mshimura::cli::subcommands()) app.add_subcommand(name)->fallthrough();
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  return mshimura::cli::run(app.get_subcommands().front()->get_name(), opts, std::cerr);
}
