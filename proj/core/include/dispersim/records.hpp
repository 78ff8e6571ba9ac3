#pragma once

#include <array>
#include <optional>

namespace dispersim {

/// One row of the per-step norm/energy ledger.
struct DiagnosticsRecord {
  double t = 0.0;
  double l2_norm = 0.0;
  double hs_norm = 0.0;
  std::optional<double> gauged_norm;
  int picard_iters = 0;
  double contraction_ratio = 0.0;
  /// Integral of phi over each axis, when profiles were computed.
  std::optional<std::array<double, 2>> phi_mass;
  /// d/dt ||u||^2 by finite differences; filled in by energy_ledger.
  double dl2_dt = 0.0;
};

} // namespace dispersim
