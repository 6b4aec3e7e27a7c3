#pragma once

// Subcommands of mshimura-cli. Each reads a JSON config, writes its
// results and a manifest into the output directory and returns the exit
// code: 0 success, 1 config error, 2 low-confidence result.

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace mshimura::cli {

struct Options {
  std::string config;
  std::string out = ".";
  unsigned threads = 0;
  std::uint64_t seed = 0;
};

const std::vector<std::string>& subcommands();

int run(const std::string& subcommand, const Options& opts, std::ostream& log);

}  // namespace mshimura::cli
