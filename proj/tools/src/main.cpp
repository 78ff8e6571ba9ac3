#include "experiment.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

int fail(const dispersim::cli::CliError &e) {
  std::cerr << "error code=" << e.code() << ' ' << e.what() << '\n';
  return e.code();
}

} // namespace

int main(int argc, char **argv) {
  using namespace dispersim::cli;

  CLI::App app{"dispersim: spectral solver and diagnostics for third-order dispersive equations"};
  app.require_subcommand(0, 1);

  std::string config_path, out_dir;
  std::uint64_t seed = 0;
  bool quiet = false;
  auto add_run_flags = [&](CLI::App *cmd) {
    cmd->add_option("--out", out_dir, "Output directory (overrides the config)");
    cmd->add_option("--seed", seed, "Random seed (overrides the config)");
    cmd->add_flag("--quiet", quiet, "Suppress progress output");
  };

  auto *run = app.add_subcommand("run", "Run the experiment described by a JSON config");
  run->add_option("config", config_path, "Path to the JSON config")->required();
  add_run_flags(run);

  std::string report_dir;
  auto *rep = app.add_subcommand("report", "Print the summary of a finished run");
  rep->add_option("dir", report_dir, "Output directory of the run")->required();

  // A bare config path is shorthand for `run <config>`.
  app.add_option("config", config_path, "Path to the JSON config");
  add_run_flags(&app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : config_error;
  }

  try {
    if (*rep) {
      report(report_dir, std::cout);
      return ok;
    }
    if (config_path.empty()) {
      std::cerr << "error code=1 config: no config given\n" << app.help();
      return config_error;
    }
    auto cfg = load_config(config_path);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (seed != 0) cfg.seed = seed;
    update_echo(cfg);
    run_experiment(cfg, RunOptions{quiet, worker_count()}, std::cout);
    return ok;
  } catch (const CliError &e) {
    return fail(e);
  } catch (const std::exception &e) {
    std::cerr << "error code=1 internal: " << e.what() << '\n';
    return config_error;
  }
}
