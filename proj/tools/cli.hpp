// Copyright (c) The gltmean authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gltmean::cli {

enum class Command { list, run, help };

struct RunConfig {
  Command command = Command::help;
  std::vector<std::string> ids;
  std::string config_path;
  std::vector<long> n_list;  // empty: experiment default
  std::string out_dir = "results";
  std::optional<std::pair<long, long>> grid;
  std::optional<double> threshold;
  std::optional<double> eps_tol;
  bool svg = false;
  int threads = 1;
  std::string help_text;  // filled for Command::help
};

/// Bad arguments; the CLI exits with status 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

RunConfig parse_args(int argc, const char* const* argv);

/// Executes a parsed config through the C API. Returns the process exit code.
int execute(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_args + execute with usage errors mapped to exit code 2.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gltmean::cli
