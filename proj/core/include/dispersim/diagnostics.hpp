#pragma once

#include "dispersim/evolution.hpp"
#include "dispersim/gauge.hpp"
#include "dispersim/records.hpp"

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace dispersim {

// ---------------------------------------------------------------------------
// Local smoothing

struct SmoothingReport {
  std::string symbol_name;
  std::string window;
  double T = 0.0;
  /// (r, G_r) with G_r = int_0^T ||window (-Delta)^{r/2} e^{-t p(d)} u0||^2 dt.
  std::vector<std::pair<double, double>> gains;
  double nontrapping_margin = 0.0;

  /// G_r for r = 1, the one-derivative gain.
  double gain() const;
};

/// Time integral by composite Simpson over `time_intervals` (even) subintervals.
SmoothingReport smoothing_probe(const DispersiveSymbol &sym, const SpectralField &u0, double T,
                                const SpectralField &window, int time_intervals = 64,
                                std::string symbol_name = {}, std::string window_name = {});

// ---------------------------------------------------------------------------
// Norm ledger

/// Per-step records of the trajectory (or per-snapshot ones when the
/// trajectory has no step records) with dl2_dt filled by finite differences
/// of ||u||^2: centred inside, one-sided at the ends.
std::vector<DiagnosticsRecord> energy_ledger(const Trajectory &traj, const RunConfig &cfg);

// ---------------------------------------------------------------------------
// Continuous dependence

struct UniquenessEntry {
  double delta = 0.0;
  /// ||u_delta(T) - u(T)|| / delta, or the raw difference when delta = 0.
  double ratio = 0.0;
  double difference = 0.0;
  bool failed = false;
  std::string error;
};

struct UniquenessReport {
  std::vector<UniquenessEntry> entries;
  /// max ratio / min ratio over the successful entries with delta > 0.
  double spread() const;
};

/// Perturbs u0 by delta g with g = random_bandlimited(grid, kmax, seed).
UniquenessReport uniqueness_probe(const SpectralField &u0, const std::vector<double> &deltas,
                                  const RunConfig &cfg, std::uint64_t seed = 11, int kmax = 4);

// ---------------------------------------------------------------------------
// Convergence studies

enum class StudyAxis { grid, dt, epsilon };

StudyAxis parse_study_axis(const std::string &name);
std::string to_string(StudyAxis axis);

struct ConvergenceRow {
  static constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  double value = 0.0;      // n, dt or epsilon
  double difference = nan; // L2 distance of the terminal state to the next entry
  double ratio = nan;      // difference / next difference
  double order = nan;      // log(ratio) / log(value / next value)
};

struct ConvergenceTable {
  StudyAxis axis = StudyAxis::dt;
  std::vector<ConvergenceRow> rows;
};

/// Solves once per ladder entry and compares consecutive terminal states.
/// For the grid axis the ladder holds n (square grids of u0's side lengths)
/// and u0 is resampled onto each grid; comparisons happen on the coarser grid.
ConvergenceTable convergence_study(const SpectralField &u0, const RunConfig &cfg,
                                   StudyAxis axis, const std::vector<double> &ladder);

// ---------------------------------------------------------------------------
// Gauged energy

struct GaugeRow {
  double t = 0.0;
  double lambda = 1.0;
  double kk_inv_err = 0.0;
  double N_t = 0.0;
  double hs_norm = 0.0;
  double ratio = 0.0;
};

struct GaugeGrowthReport {
  std::vector<GaugeRow> rows;
  double lambda = 1.0;
  double sigma = 0.0;
  /// Least-squares slopes of log N(t) and log ||u(t)||_s.
  double gauged_rate = 0.0;
  double bare_rate = 0.0;
};

/// Least-squares slope of log(y) against t.
double log_growth_rate(const std::vector<double> &t, const std::vector<double> &y);

/// Gauges every snapshot of the trajectory with a fixed lambda and records
/// N(t). Needs a square grid.
GaugeGrowthReport gauge_growth(const Trajectory &traj, const RunConfig &cfg, double lambda,
                               int test_fields = 4, std::uint64_t seed = 5);

/// Smallest power-of-two lambda that makes K invertible to `tol` for the
/// gauge built from u.
LambdaCalibration calibrate_snapshot_lambda(const SpectralField &u, const RunConfig &cfg,
                                            double tol = 0.1, int test_fields = 4,
                                            std::uint64_t seed = 5);

/// Q0 + A for the snapshot u, with Q0 built from the combined profile.
MatrixSymbol snapshot_energy_symbol(const SpectralField &u, const RunConfig &cfg, double lambda);

// ---------------------------------------------------------------------------
// Nonlinearity constants

/// ||f_j(u)||_{s-1} / ||u||_s^3.
double nonlinearity_constant(int j, const SpectralField &u, double s);

struct EstimateRow {
  int n = 0;
  int term = 0;
  double constant = 0.0; // max over the field family
};

/// Max of nonlinearity_constant over `count` random band-limited fields with
/// modes up to kmax, for every n and every term j = 0..3. With kmax <= 0 the
/// band grows with the grid (n/4 - 1) and the envelope decays like
/// <omega>^{-(s+2)}, which keeps ||u||_s of the family bounded as n grows.
std::vector<EstimateRow> estimate_probe(const std::vector<int> &sizes, double side, double s,
                                        int count, int kmax, std::uint64_t seed);

// ---------------------------------------------------------------------------
// CSV output (one header row, %.17g numbers)

std::string csv_number(double v);
void write_diagnostics_csv(std::ostream &os, const std::vector<DiagnosticsRecord> &records);
void write_gauge_csv(std::ostream &os, const std::vector<GaugeRow> &rows);
void write_smoothing_csv(std::ostream &os, const std::vector<SmoothingReport> &reports);
void write_convergence_csv(std::ostream &os, const ConvergenceTable &table);
void write_continuation_csv(std::ostream &os, const ContinuationReport &report);
void write_uniqueness_csv(std::ostream &os, const UniquenessReport &report);
void write_estimate_csv(std::ostream &os, const std::vector<EstimateRow> &rows);

} // namespace dispersim
