#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "commands.hpp"
#include "minmaxlab/version.hpp"

namespace cli = minmaxlab::cli;

int main(int argc, char** argv) {
  CLI::App app{"Minimax risk under power losses in the Gaussian location model"};
  app.set_version_flag("--version", minmaxlab::kVersion);

  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  bool allow_nonconverged = false;

  std::string command;
  for (const auto& name : cli::command_names()) {
    auto* sub = app.add_subcommand(name);
    sub->callback([&command, name] { command = name; });
    sub->add_option("--config", config_path, "Run configuration file")->required();
    sub->add_option("--out", out_dir, "Output directory");
    sub->add_option("--seed", seed, "Master seed (overrides [run] seed)");
    sub->add_flag("--allow-nonconverged", allow_nonconverged,
                  "Exit 0 even when the minimax solver did not converge");
  }
  app.require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitConfig;
  }

  try {
    const auto cfg = cli::load_config(config_path, seed);
    return cli::run_command(command, cfg, {out_dir, allow_nonconverged}, std::cout);
  } catch (const minmaxlab::Error& e) {
    fmt::print(stderr, "error ({}): {}\n", minmaxlab::to_string(e.kind()), e.what());
    return cli::exit_code_for(e);
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
}
