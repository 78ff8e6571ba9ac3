#include "dispersim/diagnostics.hpp"

#include "dispersim/initial_data.hpp"
#include "dispersim/nonlinear.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace dispersim {

namespace {

constexpr double nan_value = std::numeric_limits<double>::quiet_NaN();

std::string bool_text(bool b) { return b ? "1" : "0"; }

// Terminal-state distance, compared on the coarser of the two grids.
double terminal_distance(const SpectralField &a, const SpectralField &b) {
  if (a.grid() == b.grid()) return l2_norm(a - b);
  const bool a_coarse = a.grid().size() <= b.grid().size();
  const SpectralField &coarse = a_coarse ? a : b;
  const SpectralField &fine = a_coarse ? b : a;
  return l2_norm(coarse - resample(fine, coarse.grid()));
}

} // namespace

double SmoothingReport::gain() const {
  for (const auto &[r, g] : gains)
    if (r == 1.0) return g;
  throw std::logic_error("smoothing report: no order-1 gain");
}

SmoothingReport smoothing_probe(const DispersiveSymbol &sym, const SpectralField &u0, double T,
                                const SpectralField &window, int time_intervals,
                                std::string symbol_name, std::string window_name) {
  if (!(T >= 0.0)) throw std::invalid_argument("smoothing_probe: T must be >= 0");
  if (time_intervals < 2 || time_intervals % 2 != 0)
    throw std::invalid_argument("smoothing_probe: time_intervals must be even and >= 2");
  if (!(u0.grid() == window.grid()))
    throw std::invalid_argument("smoothing_probe: window grid mismatch");

  const Grid2D &g = u0.grid();
  const auto c0 = u0.to_spectral();
  const auto m = evolution_multiplier(sym).sample(g);
  const auto w = window.to_physical();
  const std::array<double, 3> orders{0.0, 0.5, 1.0};

  SmoothingReport rep;
  rep.symbol_name = std::move(symbol_name);
  rep.window = std::move(window_name);
  rep.T = T;
  rep.nontrapping_margin = nontrapping_margin(sym);

  const double h = T / time_intervals;
  std::array<double, 3> acc{};
  std::vector<Complex> c(g.size());
  for (int q = 0; q <= time_intervals; ++q) {
    const double t = q * h;
    const double weight = (q == 0 || q == time_intervals) ? 1.0 : (q % 2 == 1 ? 4.0 : 2.0);
    for (std::size_t o = 0; o < orders.size(); ++o) {
      for (int j = 0; j < g.n2(); ++j)
        for (int i = 0; i < g.n1(); ++i) {
          const std::size_t k = g.index(i, j);
          const double r2 = g.omega1(i) * g.omega1(i) + g.omega2(j) * g.omega2(j);
          c[k] = c0.values()[k] * std::exp(-t * m[k]) * std::pow(r2, 0.5 * orders[o]);
        }
      auto p = SpectralField::from_spectral(g, c).to_physical();
      for (std::size_t k = 0; k < g.size(); ++k) p.values()[k] *= w.values()[k];
      const double n = l2_norm(p);
      acc[o] += weight * n * n;
    }
  }
  for (std::size_t o = 0; o < orders.size(); ++o)
    rep.gains.emplace_back(orders[o], acc[o] * h / 3.0);
  return rep;
}

std::vector<DiagnosticsRecord> energy_ledger(const Trajectory &traj, const RunConfig &cfg) {
  std::vector<DiagnosticsRecord> out = traj.records;
  if (out.empty()) {
    for (const auto &snap : traj.snapshots) {
      DiagnosticsRecord r;
      r.t = snap.t;
      r.l2_norm = l2_norm(snap.field);
      r.hs_norm = sobolev_norm(snap.field, cfg.s);
      out.push_back(r);
    }
  }
  const std::size_t n = out.size();
  auto e = [&](std::size_t i) { return out[i].l2_norm * out[i].l2_norm; };
  for (std::size_t i = 0; i < n && n > 1; ++i) {
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = i + 1 == n ? i : i + 1;
    out[i].dl2_dt = (e(hi) - e(lo)) / (out[hi].t - out[lo].t);
  }
  return out;
}

// ---------------------------------------------------------------------------

double UniquenessReport::spread() const {
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto &e : entries) {
    if (e.failed || e.delta == 0.0) continue;
    lo = std::min(lo, e.ratio);
    hi = std::max(hi, e.ratio);
  }
  return hi > 0.0 ? hi / lo : nan_value;
}

UniquenessReport uniqueness_probe(const SpectralField &u0, const std::vector<double> &deltas,
                                  const RunConfig &cfg, std::uint64_t seed, int kmax) {
  for (std::size_t i = 1; i < deltas.size(); ++i)
    if (!(deltas[i] < deltas[i - 1]))
      throw std::invalid_argument("uniqueness_probe: delta ladder must be decreasing");
  const auto base = solve(u0, cfg).final_state();
  const auto g = random_bandlimited(u0.grid(), kmax, seed);

  UniquenessReport rep;
  for (double delta : deltas) {
    UniquenessEntry e;
    e.delta = delta;
    try {
      const auto end = solve(u0 + Complex(delta) * g, cfg).final_state();
      e.difference = l2_norm(end - base);
      e.ratio = delta > 0.0 ? e.difference / delta : e.difference;
    } catch (const std::exception &err) {
      e.failed = true;
      e.error = err.what();
      e.ratio = e.difference = nan_value;
    }
    rep.entries.push_back(std::move(e));
  }
  return rep;
}

// ---------------------------------------------------------------------------

StudyAxis parse_study_axis(const std::string &name) {
  if (name == "grid") return StudyAxis::grid;
  if (name == "dt") return StudyAxis::dt;
  if (name == "epsilon") return StudyAxis::epsilon;
  throw std::invalid_argument("unknown study axis '" + name + "' (grid, dt, epsilon)");
}

std::string to_string(StudyAxis axis) {
  switch (axis) {
  case StudyAxis::grid: return "grid";
  case StudyAxis::dt: return "dt";
  default: return "epsilon";
  }
}

ConvergenceTable convergence_study(const SpectralField &u0, const RunConfig &cfg,
                                   StudyAxis axis, const std::vector<double> &ladder) {
  if (ladder.size() < 2) throw std::invalid_argument("convergence_study: need >= 2 ladder entries");
  std::vector<SpectralField> finals;
  finals.reserve(ladder.size());
  for (double v : ladder) {
    RunConfig c = cfg;
    SpectralField start = u0;
    switch (axis) {
    case StudyAxis::dt: c.dt = v; break;
    case StudyAxis::epsilon: c.epsilon = v; break;
    case StudyAxis::grid: {
      const int n = static_cast<int>(std::lround(v));
      start = resample(u0, make_grid(n, n, u0.grid().l1(), u0.grid().l2()));
      break;
    }
    }
    finals.push_back(solve(start, c).final_state());
  }

  ConvergenceTable table;
  table.axis = axis;
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    ConvergenceRow row;
    row.value = ladder[i];
    if (i + 1 < ladder.size()) row.difference = terminal_distance(finals[i], finals[i + 1]);
    table.rows.push_back(row);
  }
  for (std::size_t i = 0; i + 2 < ladder.size(); ++i) {
    auto &row = table.rows[i];
    row.ratio = row.difference / table.rows[i + 1].difference;
    const double scale = ladder[i] / ladder[i + 1];
    if (axis != StudyAxis::grid && ladder[i + 1] > 0.0 && scale != 1.0)
      row.order = std::log(row.ratio) / std::log(scale);
  }
  return table;
}

// ---------------------------------------------------------------------------

double log_growth_rate(const std::vector<double> &t, const std::vector<double> &y) {
  if (t.size() != y.size() || t.size() < 2)
    throw std::invalid_argument("log_growth_rate: need >= 2 matching samples");
  const double n = static_cast<double>(t.size());
  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double ly = std::log(y[i]);
    st += t[i];
    sy += ly;
    stt += t[i] * t[i];
    sty += t[i] * ly;
  }
  return (n * sty - st * sy) / (n * stt - st * st);
}

GaugeGrowthReport gauge_growth(const Trajectory &traj, const RunConfig &cfg, double lambda,
                               int test_fields, std::uint64_t seed) {
  if (traj.snapshots.size() < 2)
    throw std::invalid_argument("gauge_growth: need at least two snapshots");
  GaugeGrowthReport rep;
  rep.lambda = lambda;
  rep.sigma = default_sigma(cfg.s);
  const Grid2D &grid = traj.snapshots.front().field.grid();
  const auto fields = gauge_test_fields(grid, test_fields, seed);

  std::vector<double> ts, ns, hs;
  for (const auto &snap : traj.snapshots) {
    const auto sg = snapshot_gauge(snap.field, cfg.coefficients, rep.sigma, snap.t);
    const auto K = build_gauge(grid, sg.Phi, sg.Phi, cfg.symbol, lambda);
    GaugeRow row;
    row.t = snap.t;
    row.lambda = lambda;
    row.kk_inv_err = kk_inverse_error(K, fields);
    row.N_t = gauged_norm(snap.field, cfg.s, K);
    row.hs_norm = sobolev_norm(snap.field, cfg.s);
    row.ratio = row.N_t / row.hs_norm;
    rep.rows.push_back(row);
    ts.push_back(row.t);
    ns.push_back(row.N_t);
    hs.push_back(row.hs_norm);
  }
  rep.gauged_rate = log_growth_rate(ts, ns);
  rep.bare_rate = log_growth_rate(ts, hs);
  return rep;
}

LambdaCalibration calibrate_snapshot_lambda(const SpectralField &u, const RunConfig &cfg,
                                            double tol, int test_fields, std::uint64_t seed) {
  const auto sg = snapshot_gauge(u, cfg.coefficients, default_sigma(cfg.s));
  const auto fields = gauge_test_fields(u.grid(), test_fields, seed);
  return calibrate_lambda(
      [&](double lambda) { return build_gauge(u.grid(), sg.Phi, sg.Phi, cfg.symbol, lambda); },
      fields, tol);
}

MatrixSymbol snapshot_energy_symbol(const SpectralField &u, const RunConfig &cfg, double lambda) {
  const auto sg = snapshot_gauge(u, cfg.coefficients, default_sigma(cfg.s));
  PhiProfile on_axis2 = sg.phi;
  on_axis2.axis = 2;
  return q0_symbol(sg.phi, on_axis2, cfg.symbol, lambda) + a_symbol(u, cfg.coefficients, cfg.symbol);
}

// ---------------------------------------------------------------------------

double nonlinearity_constant(int j, const SpectralField &u, double s) {
  const double n = sobolev_norm(u, s);
  if (n == 0.0) throw std::domain_error("nonlinearity_constant: zero field");
  return sobolev_norm(eval_f(j, u), s - 1.0) / (n * n * n);
}

std::vector<EstimateRow> estimate_probe(const std::vector<int> &sizes, double side, double s,
                                        int count, int kmax, std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("estimate_probe: count must be >= 1");
  std::vector<EstimateRow> rows;
  for (int n : sizes) {
    const Grid2D grid = make_grid(n, n, side, side);
    const int band = kmax > 0 ? kmax : n / 4 - 1;
    const double decay = kmax > 0 ? 0.0 : s + 2.0;
    std::array<double, 4> worst{};
    for (int i = 0; i < count; ++i) {
      const auto u = random_bandlimited(grid, band, seed + static_cast<std::uint64_t>(i), decay);
      for (int j = 0; j < 4; ++j) worst[j] = std::max(worst[j], nonlinearity_constant(j, u, s));
    }
    for (int j = 0; j < 4; ++j) rows.push_back({n, j, worst[j]});
  }
  return rows;
}

// ---------------------------------------------------------------------------

std::string csv_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_diagnostics_csv(std::ostream &os, const std::vector<DiagnosticsRecord> &records) {
  os << "t,l2_norm,hs_norm,gauged_norm,picard_iters,contraction_ratio,phi_mass_1,phi_mass_2,"
        "dl2_dt\n";
  for (const auto &r : records) {
    os << csv_number(r.t) << ',' << csv_number(r.l2_norm) << ',' << csv_number(r.hs_norm) << ','
       << (r.gauged_norm ? csv_number(*r.gauged_norm) : "") << ',' << r.picard_iters << ','
       << csv_number(r.contraction_ratio) << ','
       << (r.phi_mass ? csv_number((*r.phi_mass)[0]) : "") << ','
       << (r.phi_mass ? csv_number((*r.phi_mass)[1]) : "") << ',' << csv_number(r.dl2_dt)
       << '\n';
  }
}

void write_gauge_csv(std::ostream &os, const std::vector<GaugeRow> &rows) {
  os << "t,lambda,kk_inv_err,N_t,hs_norm,ratio\n";
  for (const auto &r : rows)
    os << csv_number(r.t) << ',' << csv_number(r.lambda) << ',' << csv_number(r.kk_inv_err)
       << ',' << csv_number(r.N_t) << ',' << csv_number(r.hs_norm) << ','
       << csv_number(r.ratio) << '\n';
}

void write_smoothing_csv(std::ostream &os, const std::vector<SmoothingReport> &reports) {
  os << "symbol_name,window,T,order,gain,nontrapping_margin\n";
  for (const auto &rep : reports)
    for (const auto &[r, g] : rep.gains)
      os << rep.symbol_name << ',' << rep.window << ',' << csv_number(rep.T) << ','
         << csv_number(r) << ',' << csv_number(g) << ',' << csv_number(rep.nontrapping_margin)
         << '\n';
}

void write_convergence_csv(std::ostream &os, const ConvergenceTable &table) {
  os << "axis,value,difference,ratio,order\n";
  for (const auto &r : table.rows)
    os << to_string(table.axis) << ',' << csv_number(r.value) << ','
       << csv_number(r.difference) << ',' << csv_number(r.ratio) << ',' << csv_number(r.order)
       << '\n';
}

void write_continuation_csv(std::ostream &os, const ContinuationReport &report) {
  os << "epsilon,sup_hs,failed,last_good_time,difference\n";
  for (std::size_t i = 0; i < report.entries.size(); ++i) {
    const auto &e = report.entries[i];
    const double d = i < report.differences.size() ? report.differences[i] : nan_value;
    os << csv_number(e.epsilon) << ',' << csv_number(e.sup_hs) << ',' << bool_text(e.failed)
       << ',' << csv_number(e.last_good_time) << ',' << csv_number(d) << '\n';
  }
}

void write_uniqueness_csv(std::ostream &os, const UniquenessReport &report) {
  os << "delta,difference,ratio,failed\n";
  for (const auto &e : report.entries)
    os << csv_number(e.delta) << ',' << csv_number(e.difference) << ',' << csv_number(e.ratio)
       << ',' << bool_text(e.failed) << '\n';
}

void write_estimate_csv(std::ostream &os, const std::vector<EstimateRow> &rows) {
  os << "n,term,constant\n";
  for (const auto &r : rows) os << r.n << ',' << r.term << ',' << csv_number(r.constant) << '\n';
}

} // namespace dispersim
