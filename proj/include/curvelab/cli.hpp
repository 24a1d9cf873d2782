#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "curvelab/common.hpp"

namespace curvelab::cli {

inline constexpr const char* kVersion = "0.1.0";

/// One experiment invocation. Serializes to a flat key=value file; flags
/// given on the command line override file entries.
struct ExperimentConfig {
  std::string command;  // run-gd | run-flow | scan | counterexample | verify | fuzz
  std::string function_id = "square";
  Vec x0;               // empty means "not provided"
  double eta = 0.1;
  double eta_min = 0.0;  // 0 means "derive from L"
  double eta_max = 0.0;
  int grid = 50;
  long steps = 20;
  double horizon = 1.0;
  std::uint64_t seed = 42;
  long trials = 100;
  std::string output_dir = "out";
  double tol = 1e-10;
  std::string mode = "safe";  // fuzz: safe | danger

  std::string to_kv() const;
  static ExperimentConfig from_kv(std::string_view text);

  bool operator==(const ExperimentConfig&) const = default;
};

inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

/// Parses argv (without the program name). On usage errors prints a
/// message to err and leaves ok=false.
struct ParseResult {
  ExperimentConfig config;
  bool ok = false;
  bool help_requested = false;
};
ParseResult parse_args(const std::vector<std::string>& args, std::ostream& err);

std::string usage_text();

/// Runs the configured experiment, writes artifacts under
/// config.output_dir, prints a verdict summary to out. Returns one of the
/// kExit* codes.
int dispatch(const ExperimentConfig& config, std::ostream& out,
             std::ostream& err);

}  // namespace curvelab::cli
