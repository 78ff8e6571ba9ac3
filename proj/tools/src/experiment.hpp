#pragma once

#include "dispersim/evolution.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dispersim::cli {

/// Exit codes of the driver.
enum ExitCode : int { ok = 0, config_error = 1, nonconvergence = 2, calibration_failure = 3 };

/// Failure with its exit code and a one-line reason for the error stream.
class CliError : public std::runtime_error {
public:
  CliError(ExitCode code, const std::string &reason) : std::runtime_error(reason), code_(code) {}
  ExitCode code() const { return code_; }

private:
  ExitCode code_;
};

enum class ExperimentKind { solve, continuation, smoothing, gauge_growth, convergence, estimate_probe };

std::string to_string(ExperimentKind kind);

/// Initial datum: an analytic profile or a snapshot file.
struct InitialData {
  std::string profile = "gaussian-packet"; // gaussian-packet | plane-wave | random-bandlimited | file
  double amplitude = 1e-2;
  std::array<double, 2> center{};          // defaults to the domain centre
  bool center_set = false;
  std::array<double, 2> carrier{4.0, 0.0};
  double width = 0.5;
  std::array<int, 2> wavenumber{1, 0};
  int kmax = 4;
  double decay = 0.0;
  std::string path;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::solve;
  std::string preset = "dysthe";
  std::vector<double> preset_params;
  int n1 = 64, n2 = 64;
  double l1 = 0.0, l2 = 0.0; // 0 means 2 pi
  RunConfig run;
  InitialData initial;
  std::filesystem::path out_dir = "out";
  std::uint64_t seed = 1;
  bool write_snapshots = false;

  // continuation
  std::vector<double> epsilon_ladder{1e-1, 1e-2, 1e-3, 1e-4, 0.0};
  // smoothing
  double smoothing_T = 0.006;
  double window_width = 0.4;
  int time_intervals = 64;
  bool compare_trapping = true;
  // gauge-growth
  double lambda = 0.0; // 0 means calibrate
  double calibration_tol = 0.1;
  int test_fields = 4;
  // convergence
  std::string axis = "dt";
  std::vector<double> ladder;
  // estimate-probe
  std::vector<int> sizes{16, 32, 64};
  int count = 20;
  int kmax = 0;

  /// Every consumed key with its value as written in the summary.
  std::vector<std::pair<std::string, std::string>> echo;
};

/// Parses and validates a config object. Throws CliError(config_error).
ExperimentConfig parse_config(const nlohmann::json &doc);
ExperimentConfig load_config(const std::filesystem::path &path);

/// Rebuilds cfg.echo after fields were changed programmatically.
void update_echo(ExperimentConfig &cfg);

struct RunOptions {
  bool quiet = false;
  int threads = 1;
};

/// Runs the experiment and writes its artifacts into cfg.out_dir.
/// Throws CliError on failure.
void run_experiment(const ExperimentConfig &cfg, const RunOptions &opts, std::ostream &log);

/// Prints summary.txt of a finished run plus a cross-check against its CSV
/// artifacts. Throws CliError(config_error) when artifacts are missing.
void report(const std::filesystem::path &dir, std::ostream &os);

/// Worker cap from DISPERSIM_THREADS, else the hardware concurrency.
int worker_count();

} // namespace dispersim::cli
