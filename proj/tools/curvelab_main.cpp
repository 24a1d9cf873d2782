#include <iostream>
#include <string>
#include <vector>

#include "curvelab/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  if (args.empty()) {
    std::cout << curvelab::cli::usage_text();
    return curvelab::cli::kExitUsage;
  }
  const curvelab::cli::ParseResult parsed =
      curvelab::cli::parse_args(args, std::cerr);
  if (parsed.help_requested) {
    std::cout << curvelab::cli::usage_text();
    return curvelab::cli::kExitPass;
  }
  if (!parsed.ok) {
    return curvelab::cli::kExitUsage;
  }
  return curvelab::cli::dispatch(parsed.config, std::cout, std::cerr);
}
