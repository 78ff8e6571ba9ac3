#pragma once

#include "dispersim/coefficients.hpp"
#include "dispersim/grid.hpp"
#include "dispersim/records.hpp"
#include "dispersim/symbols.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dispersim {

struct RunConfig {
  DispersiveSymbol symbol;
  NonlinearCoefficients coefficients;
  double epsilon = 0.0;     // parabolic regularization
  double s = 3.5;           // Sobolev index of the diagnostics
  double dt = 1e-3;
  double T = 0.1;
  double picard_tol = 1e-10;
  int picard_max_iters = 50;
  int quadrature_nodes = 9;
  /// Keep a snapshot every this many steps (0: initial and final only).
  int snapshot_every = 0;

  /// Throws std::invalid_argument on violated invariants.
  void validate() const;

  static RunConfig from_preset(const ModelPreset &model);
};

struct Snapshot {
  double t;
  SpectralField field;
};

struct Trajectory {
  std::vector<Snapshot> snapshots;
  std::vector<DiagnosticsRecord> records;

  const SpectralField &final_state() const { return snapshots.back().field; }
  double final_time() const { return snapshots.back().t; }
};

/// The Duhamel fixed point did not converge: the step is too large for the
/// data (contraction constant above one).
class ConvergenceError : public std::runtime_error {
public:
  ConvergenceError(const std::string &what, double last_good_time, int iterations)
      : std::runtime_error(what), last_good_time_(last_good_time),
        iterations_(iterations) {}
  double last_good_time() const { return last_good_time_; }
  int iterations() const { return iterations_; }

private:
  double last_good_time_;
  int iterations_;
};

/// exp(t(-p(d) + eps Delta)) u, exact in time.
SpectralField linear_propagate(const SpectralField &u, double t, double eps,
                               const DispersiveSymbol &sym);

struct SemigroupBound {
  double measured;  // max_k <omega_k> exp(-t eps |omega_k|^2)
  double analytic;  // 1 + (2 t eps e)^{-1/2}
};

SemigroupBound semigroup_bound_check(double t, double eps, double s,
                                     const Grid2D &grid);

struct PicardResult {
  SpectralField field;
  int iterations = 0;
  /// Last ratio of successive iterate differences (0 when one iteration
  /// sufficed).
  double contraction_ratio = 0.0;
  /// H^s size of each iterate update, relative to ||u||_s.
  std::vector<double> iterate_diffs;
};

/// Solves u(t+dt) = E(dt) u + int_0^dt E(dt - tau) F(u(t + tau)) dtau by
/// fixed-point iteration over the quadrature nodes. E is applied exactly;
/// the integral uses the composite trapezoid rule.
class DuhamelStepper {
public:
  DuhamelStepper(const Grid2D &grid, const RunConfig &cfg, double dt);

  PicardResult step(const SpectralField &u, double t_start = 0.0) const;
  double dt() const { return dt_; }

private:
  Grid2D grid_;
  RunConfig cfg_;
  double dt_;
  // propagators_[m] tabulates E(m * dt / (nodes - 1)).
  std::vector<std::vector<Complex>> propagators_;
  std::vector<double> weights_;
};

PicardResult picard_step(const SpectralField &u, double dt, const RunConfig &cfg);

/// Repeated picard_step from 0 to cfg.T. Throws ConvergenceError carrying
/// the last time reached.
Trajectory solve(const SpectralField &u0, const RunConfig &cfg);

struct ContinuationEntry {
  double epsilon;
  std::optional<SpectralField> final_state;
  double sup_hs = 0.0;
  bool failed = false;
  std::string error;
  double last_good_time = 0.0;
};

struct ContinuationReport {
  std::vector<ContinuationEntry> entries;
  /// ||u_{eps_i}(T) - u_{eps_{i+1}}(T)||_s for consecutive successful pairs
  /// (NaN when either run failed).
  std::vector<double> differences;

  /// max sup_t ||u_eps||_s over the ladder divided by that of the last
  /// entry (the smallest eps).
  double uniform_bound_ratio() const;
  bool differences_strictly_decreasing() const;
};

/// Solves for every eps of a strictly decreasing ladder. Runs are
/// independent and may use up to max_workers threads.
ContinuationReport epsilon_continuation(const SpectralField &u0, const RunConfig &cfg,
                                        const std::vector<double> &ladder,
                                        int max_workers = 1);

} // namespace dispersim
