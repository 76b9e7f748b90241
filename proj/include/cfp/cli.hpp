#pragma once

#include <cstdint>
#include <string>

#include "cfp/io.hpp"
#include "cfp/rng.hpp"

namespace cfp {

/// Flags shared by all commands plus the per-command selections; the
/// front end fills only the fields its subcommand exposes.
struct CliOptions {
  std::string command;  // certify | iterate | hausdorff | bellman | selftest
  std::string input_path;
  std::string output_path;  // empty -> stdout
  std::uint64_t seed = kDefaultSeed;
  double tol = 1e-9;
  int max_iter = 1000;
  bool strict = false;

  std::string map_name;        // certify, iterate
  std::string condition;       // certify
  std::string gauge_name;      // certify, iterate
  std::string potential_name;  // certify (caristi conditions)
  std::string start_label;     // iterate
  std::string set_a;           // hausdorff, comma-separated labels
  std::string set_b;
  std::string h0_name;  // bellman starting value function
  int samples = 200;    // bellman certification sample count
};

/// Exit-code contract: 0 the checked property holds, 1 it fails
/// mathematically (witness in the report), 2 the input is unusable.
struct CommandResult {
  int exit_code = 0;
  Json report;
  std::string summary;  // one human-readable line
};

CommandResult run_command(const CliOptions& opt);

}  // namespace cfp
