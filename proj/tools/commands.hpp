#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "config.hpp"

namespace minmaxlab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitNotConverged = 4;

struct CommandOptions {
  std::filesystem::path out_dir = ".";
  bool allow_nonconverged = false;
};

const std::vector<std::string>& command_names();

/// Runs one subcommand. Library errors propagate; map them with exit_code_for.
int run_command(const std::string& name, const RunConfig& cfg, const CommandOptions& opts,
                std::ostream& out);

/// 3 for numerical failures, 2 for everything caused by the configuration.
int exit_code_for(const Error& e);

}  // namespace minmaxlab::cli
