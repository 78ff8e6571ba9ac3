#include "dispersim/diagnostics.hpp"
#include "dispersim/initial_data.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <sstream>

namespace dispersim {
namespace {

using testing::pi;
using testing::square_grid;

RunConfig linear_config() {
  auto cfg = RunConfig::from_preset(preset("dysthe"));
  cfg.coefficients = {};
  return cfg;
}

std::string first_line(const std::string &text) { return text.substr(0, text.find('\n')); }

TEST(Smoothing, PlaneWaveUnderFlatWindow) {
  const auto g = square_grid(16);
  const auto u = plane_wave(g, 1.0, 2, 0);
  const auto flat = plane_wave(g, 1.0, 0, 0);
  const double T = 0.3;
  const auto rep = smoothing_probe(preset("dysthe").symbol, u, T, flat, 8, "dysthe", "flat");
  ASSERT_EQ(rep.gains.size(), 3u);
  EXPECT_NEAR(rep.gains[0].second, T * 4 * pi * pi, 1e-12);
  EXPECT_NEAR(rep.gains[1].second, T * 2 * 4 * pi * pi, 1e-12);
  EXPECT_NEAR(rep.gain(), T * 4 * 4 * pi * pi, 1e-11);
  EXPECT_GT(rep.nontrapping_margin, 0.0);
  EXPECT_EQ(rep.symbol_name, "dysthe");
}

TEST(Smoothing, ZeroHorizonAndArgumentChecks) {
  const auto g = square_grid(16);
  const auto u = random_bandlimited(g, 3, 1);
  const auto w = smooth_window(g, {pi, pi}, 0.5);
  const auto sym = preset("dysthe").symbol;
  EXPECT_EQ(smoothing_probe(sym, u, 0.0, w).gain(), 0.0);
  EXPECT_THROW(smoothing_probe(sym, u, 0.1, w, 3), std::invalid_argument);
  EXPECT_THROW(smoothing_probe(sym, u, -1.0, w), std::invalid_argument);
  EXPECT_THROW(smoothing_probe(sym, u, 0.1, smooth_window(square_grid(8), {pi, pi}, 0.5)),
               std::invalid_argument);
}

TEST(Smoothing, TimeQuadratureConverged) {
  const auto g = square_grid(64);
  const auto u = gaussian_packet(g, 1.0, {pi, pi}, {8.0, 0.0}, 0.4);
  const auto w = smooth_window(g, {pi, pi}, 0.4);
  const auto sym = preset("dysthe").symbol;
  const double a = smoothing_probe(sym, u, 0.01, w, 32).gain();
  const double b = smoothing_probe(sym, u, 0.01, w, 64).gain();
  EXPECT_NEAR(a, b, 1e-8 * b);
}

TEST(Smoothing, NontrappingGainStaysBoundedWhileTrappedGrows) {
  // Packets with carrier (0, k) sit on the axis where grad xi1^3 vanishes, so
  // the trapped flow keeps them under the window; the Dysthe flow moves them out.
  const auto g = square_grid(128);
  const auto window = smooth_window(g, {pi, pi}, 0.4);
  DispersiveSymbol trap;
  trap.p0 = {1.0, 0.0, 0.0, 0.0};
  const auto dysthe = preset("dysthe").symbol;
  const double T = 0.006;
  std::vector<double> gd, gt;
  for (double k : {8.0, 16.0, 32.0}) {
    auto u = gaussian_packet(g, 1.0, {pi, pi}, {0.0, k}, 0.4);
    u *= 1.0 / l2_norm(u);
    gd.push_back(smoothing_probe(dysthe, u, T, window).gain());
    gt.push_back(smoothing_probe(trap, u, T, window).gain());
  }
  for (int i = 0; i < 2; ++i) {
    EXPECT_GT(gd[i] / gt[i], gd[i + 1] / gt[i + 1]);
    EXPECT_GE(gt[i + 1] / gt[i], 3.0);
    EXPECT_LE(gd[i + 1] / gd[i], 3.0);
  }
  EXPECT_LE(gd[2] / gd[1], 1.5);
}

TEST(Ledger, CentredDifferences) {
  Trajectory traj;
  for (int i = 0; i <= 10; ++i) {
    DiagnosticsRecord r;
    r.t = 0.1 * i;
    r.l2_norm = std::sqrt(1.0 + r.t * r.t);
    traj.records.push_back(r);
  }
  traj.snapshots.push_back({0.0, SpectralField::zeros(square_grid(8))});
  const auto ledger = energy_ledger(traj, linear_config());
  ASSERT_EQ(ledger.size(), 11u);
  for (int i = 1; i < 10; ++i) EXPECT_NEAR(ledger[i].dl2_dt, 2.0 * ledger[i].t, 1e-12);
  EXPECT_NEAR(ledger.front().dl2_dt, 0.1, 1e-12);
  EXPECT_NEAR(ledger.back().dl2_dt, 1.9, 1e-12);
}

TEST(Ledger, FallsBackToSnapshots) {
  const auto g = square_grid(8);
  Trajectory traj;
  traj.snapshots.push_back({0.0, plane_wave(g, 1.0, 0, 0)});
  traj.snapshots.push_back({0.5, plane_wave(g, 2.0, 0, 0)});
  const auto ledger = energy_ledger(traj, linear_config());
  ASSERT_EQ(ledger.size(), 2u);
  EXPECT_NEAR(ledger[0].l2_norm, 2 * pi, 1e-13);
  const double expected = (16 * pi * pi - 4 * pi * pi) / 0.5;
  EXPECT_NEAR(ledger[0].dl2_dt, expected, 1e-10);
  EXPECT_NEAR(ledger[1].dl2_dt, expected, 1e-10);
}

TEST(Ledger, SolverTrajectoryIsFlat) {
  auto cfg = RunConfig::from_preset(preset("dysthe"));
  cfg.T = 0.02;
  cfg.dt = 2e-3;
  auto u = random_bandlimited(square_grid(16), 3, 4);
  u *= 0.2;
  for (const auto &r : energy_ledger(solve(u, cfg), cfg)) EXPECT_LE(std::abs(r.dl2_dt), 1e-9);
}

TEST(Uniqueness, LinearFlowHasUnitRatio) {
  auto cfg = linear_config();
  cfg.T = 0.05;
  cfg.dt = 0.01;
  const auto u = random_bandlimited(square_grid(16), 3, 1);
  const auto rep = uniqueness_probe(u, {1e-2, 1e-3, 1e-4}, cfg);
  ASSERT_EQ(rep.entries.size(), 3u);
  for (const auto &e : rep.entries) {
    EXPECT_FALSE(e.failed);
    EXPECT_NEAR(e.ratio, 1.0, 1e-8);
  }
  EXPECT_NEAR(rep.spread(), 1.0, 1e-8);
  EXPECT_THROW(uniqueness_probe(u, {1e-3, 1e-2}, cfg), std::invalid_argument);
}

TEST(Uniqueness, NonlinearRatiosSettle) {
  auto cfg = RunConfig::from_preset(preset("dysthe"));
  cfg.T = 0.05;
  cfg.dt = 5e-3;
  auto u = random_bandlimited(square_grid(16), 3, 2);
  u *= 0.3;
  const auto rep = uniqueness_probe(u, {1e-2, 1e-3, 1e-4, 1e-5}, cfg);
  EXPECT_LE(rep.spread(), 1.1);
}

TEST(Convergence, AxisNames) {
  for (auto a : {StudyAxis::grid, StudyAxis::dt, StudyAxis::epsilon})
    EXPECT_EQ(parse_study_axis(to_string(a)), a);
  EXPECT_THROW(parse_study_axis("space"), std::invalid_argument);
}

TEST(Convergence, GridLadderIsSpectrallyExactForLinearFlow) {
  auto cfg = linear_config();
  cfg.T = 0.05;
  cfg.dt = 0.01;
  const auto u = random_bandlimited(square_grid(16), 3, 5);
  const auto table = convergence_study(u, cfg, StudyAxis::grid, {16, 32, 64});
  ASSERT_EQ(table.rows.size(), 3u);
  EXPECT_LE(table.rows[0].difference, 1e-12);
  EXPECT_LE(table.rows[1].difference, 1e-12);
  EXPECT_TRUE(std::isnan(table.rows[2].difference));
}

TEST(Convergence, TimeLadderIsSecondOrder) {
  auto cfg = RunConfig::from_preset(preset("dysthe"));
  cfg.T = 0.08;
  auto u = random_bandlimited(square_grid(16), 3, 5);
  u *= 0.5;
  const auto table = convergence_study(u, cfg, StudyAxis::dt, {0.02, 0.01, 0.005, 0.0025});
  EXPECT_NEAR(table.rows[0].ratio, 4.0, 0.4);
  EXPECT_NEAR(table.rows[1].order, 2.0, 0.15);
  EXPECT_THROW(convergence_study(u, cfg, StudyAxis::dt, {0.01}), std::invalid_argument);
}

TEST(GaugeGrowth, LogRate) {
  std::vector<double> t, y;
  for (int i = 0; i < 5; ++i) {
    t.push_back(0.1 * i);
    y.push_back(3.0 * std::exp(0.5 * t.back()));
  }
  EXPECT_NEAR(log_growth_rate(t, y), 0.5, 1e-12);
  EXPECT_THROW(log_growth_rate({0.0}, {1.0}), std::invalid_argument);
}

TEST(GaugeGrowth, LinearFlowKeepsGaugedNorm) {
  auto cfg = linear_config();
  cfg.T = 0.1;
  cfg.dt = 0.02;
  cfg.snapshot_every = 1;
  const auto traj = solve(random_bandlimited(square_grid(16), 3, 6), cfg);
  const auto rep = gauge_growth(traj, cfg, 2.0, 2);
  ASSERT_EQ(rep.rows.size(), traj.snapshots.size());
  EXPECT_NEAR(rep.gauged_rate, 0.0, 1e-10);
  EXPECT_NEAR(rep.bare_rate, 0.0, 1e-10);
  for (const auto &r : rep.rows) EXPECT_LE(r.kk_inv_err, 1e-12);
}

TEST(Constants, ConstantField) {
  const auto one = plane_wave(square_grid(16), 1.0, 0, 0);
  EXPECT_NEAR(nonlinearity_constant(3, one, 3.5), 1.0 / (4 * pi * pi), 1e-14);
  EXPECT_EQ(nonlinearity_constant(1, one, 3.5), 0.0);
  EXPECT_THROW(nonlinearity_constant(0, SpectralField::zeros(one.grid()), 3.5), std::domain_error);
}

TEST(Constants, ProbeTable) {
  const auto rows = estimate_probe({32, 64}, 2 * pi, 3.5, 2, 3, 1);
  ASSERT_EQ(rows.size(), 8u);
  for (const auto &r : rows) {
    EXPECT_GT(r.constant, 0.0);
    EXPECT_TRUE(std::isfinite(r.constant));
  }
  // Same fields on both grids: the constants agree.
  for (int j = 0; j < 4; ++j) EXPECT_NEAR(rows[j].constant, rows[4 + j].constant, 1e-10);
}

TEST(Csv, NumbersAndHeaders) {
  EXPECT_EQ(csv_number(0.1), "0.10000000000000001");
  EXPECT_EQ(csv_number(std::nan("")), "nan");
  std::ostringstream d, c, u, e;
  write_diagnostics_csv(d, {DiagnosticsRecord{}});
  EXPECT_EQ(first_line(d.str()),
            "t,l2_norm,hs_norm,gauged_norm,picard_iters,contraction_ratio,phi_mass_1,phi_mass_2,"
            "dl2_dt");
  ConvergenceTable table;
  table.rows.push_back({0.01});
  write_convergence_csv(c, table);
  EXPECT_EQ(c.str(), "axis,value,difference,ratio,order\ndt,0.01,nan,nan,nan\n");
  write_uniqueness_csv(u, UniquenessReport{{UniquenessEntry{0.5, 2.0, 1.0, false, {}}}});
  EXPECT_EQ(u.str(), "delta,difference,ratio,failed\n0.5,1,2,0\n");
  write_estimate_csv(e, {EstimateRow{16, 2, 0.25}});
  EXPECT_EQ(e.str(), "n,term,constant\n16,2,0.25\n");
}

} // namespace
} // namespace dispersim
