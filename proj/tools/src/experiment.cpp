#include "experiment.hpp"

#include "dispersim/diagnostics.hpp"
#include "dispersim/initial_data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

namespace dispersim::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int max_halvings = 6;

[[noreturn]] void config_fail(const std::string &reason) {
  throw CliError(config_error, "config: " + reason);
}

ExperimentKind parse_kind(const std::string &name) {
  static const std::map<std::string, ExperimentKind> kinds{
      {"solve", ExperimentKind::solve},
      {"continuation", ExperimentKind::continuation},
      {"smoothing", ExperimentKind::smoothing},
      {"gauge-growth", ExperimentKind::gauge_growth},
      {"convergence", ExperimentKind::convergence},
      {"estimate-probe", ExperimentKind::estimate_probe}};
  const auto it = kinds.find(name);
  if (it == kinds.end()) config_fail("unknown kind '" + name + "'");
  return it->second;
}

// Reads doc[key] into out when present, converting type errors into config errors.
template <typename T> bool read(const json &doc, const std::string &key, T &out) {
  const auto it = doc.find(key);
  if (it == doc.end()) return false;
  try {
    out = it->get<T>();
  } catch (const json::exception &) {
    config_fail("key '" + key + "' has the wrong type (" + it->dump() + ")");
  }
  return true;
}

bool read_complex(const json &doc, const std::string &key, Complex &out) {
  std::array<double, 2> parts{};
  if (!read(doc, key, parts)) return false;
  out = {parts[0], parts[1]};
  return true;
}

std::string num(double v) { return csv_number(v); }

template <typename T> std::string list(const std::vector<T> &v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    if constexpr (std::is_floating_point_v<T>)
      s += num(v[i]);
    else
      s += std::to_string(v[i]);
  }
  return s + "]";
}

std::string pair_text(const std::array<double, 2> &v) { return list(std::vector<double>(v.begin(), v.end())); }

// Adding 0.0 turns -0 into 0.
std::string complex_text(Complex z) {
  return "[" + num(z.real() + 0.0) + ", " + num(z.imag() + 0.0) + "]";
}

} // namespace

void update_echo(ExperimentConfig &c) {
  auto &e = c.echo;
  e.clear();
  e.emplace_back("kind", to_string(c.kind));
  e.emplace_back("preset", c.preset);
  if (!c.preset_params.empty()) e.emplace_back("preset_params", list(c.preset_params));
  e.emplace_back("n1", std::to_string(c.n1));
  e.emplace_back("n2", std::to_string(c.n2));
  e.emplace_back("l1", num(c.l1));
  e.emplace_back("l2", num(c.l2));
  e.emplace_back("seed", std::to_string(c.seed));
  e.emplace_back("out", c.out_dir.string());
  for (int j = 0; j < 4; ++j)
    e.emplace_back("a" + std::to_string(j), complex_text(c.run.coefficients[j]));

  if (c.kind != ExperimentKind::estimate_probe) {
    const auto &d = c.initial;
    e.emplace_back("profile", d.profile);
    if (d.profile == "gaussian-packet") {
      e.emplace_back("amplitude", num(d.amplitude));
      e.emplace_back("center", pair_text(d.center));
      e.emplace_back("carrier", pair_text(d.carrier));
      e.emplace_back("width", num(d.width));
    } else if (d.profile == "plane-wave") {
      e.emplace_back("amplitude", num(d.amplitude));
      e.emplace_back("wavenumber", list(std::vector<int>(d.wavenumber.begin(), d.wavenumber.end())));
    } else if (d.profile == "random-bandlimited") {
      e.emplace_back("amplitude", num(d.amplitude));
      e.emplace_back("kmax", std::to_string(d.kmax));
      e.emplace_back("decay", num(d.decay));
    } else {
      e.emplace_back("path", d.path);
    }
  }

  const auto &r = c.run;
  e.emplace_back("s", num(r.s));
  switch (c.kind) {
  case ExperimentKind::solve:
  case ExperimentKind::continuation:
  case ExperimentKind::gauge_growth:
  case ExperimentKind::convergence:
    e.emplace_back("epsilon", num(r.epsilon));
    e.emplace_back("dt", num(r.dt));
    e.emplace_back("T", num(r.T));
    e.emplace_back("picard_tol", num(r.picard_tol));
    e.emplace_back("picard_max_iters", std::to_string(r.picard_max_iters));
    e.emplace_back("quadrature_nodes", std::to_string(r.quadrature_nodes));
    e.emplace_back("snapshot_every", std::to_string(r.snapshot_every));
    e.emplace_back("write_snapshots", c.write_snapshots ? "true" : "false");
    break;
  default: break;
  }
  switch (c.kind) {
  case ExperimentKind::continuation: e.emplace_back("epsilon_ladder", list(c.epsilon_ladder)); break;
  case ExperimentKind::smoothing:
    e.emplace_back("smoothing_T", num(c.smoothing_T));
    e.emplace_back("window_width", num(c.window_width));
    e.emplace_back("time_intervals", std::to_string(c.time_intervals));
    e.emplace_back("compare_trapping", c.compare_trapping ? "true" : "false");
    break;
  case ExperimentKind::gauge_growth:
    e.emplace_back("lambda", c.lambda > 0.0 ? num(c.lambda) : "calibrate");
    e.emplace_back("calibration_tol", num(c.calibration_tol));
    e.emplace_back("test_fields", std::to_string(c.test_fields));
    break;
  case ExperimentKind::convergence:
    e.emplace_back("axis", c.axis);
    e.emplace_back("ladder", list(c.ladder));
    break;
  case ExperimentKind::estimate_probe:
    e.emplace_back("sizes", list(c.sizes));
    e.emplace_back("count", std::to_string(c.count));
    e.emplace_back("kmax", std::to_string(c.kmax));
    break;
  default: break;
  }
}

namespace {

Grid2D make_experiment_grid(const ExperimentConfig &c) {
  try {
    return make_grid(c.n1, c.n2, c.l1, c.l2);
  } catch (const std::invalid_argument &e) {
    config_fail(e.what());
  }
}

SpectralField initial_field(const ExperimentConfig &c, const Grid2D &grid) {
  const auto &d = c.initial;
  if (d.profile == "gaussian-packet")
    return gaussian_packet(grid, d.amplitude, d.center, d.carrier, d.width);
  if (d.profile == "plane-wave")
    return plane_wave(grid, d.amplitude, d.wavenumber[0], d.wavenumber[1]);
  if (d.profile == "random-bandlimited") {
    try {
      return Complex(d.amplitude) * random_bandlimited(grid, d.kmax, c.seed, d.decay);
    } catch (const std::invalid_argument &e) {
      config_fail(e.what());
    }
  }
  try {
    auto u = read_snapshot(d.path);
    if (!(u.grid() == grid))
      config_fail("snapshot '" + d.path + "' does not match the configured grid");
    return u;
  } catch (const std::runtime_error &e) {
    if (dynamic_cast<const CliError *>(&e)) throw;
    config_fail(e.what());
  }
}

std::ofstream open_artifact(const fs::path &path) {
  std::ofstream os(path);
  if (!os) throw CliError(config_error, "io: cannot write " + path.string());
  return os;
}

class Summary {
public:
  void add(const std::string &key, const std::string &value) { rows_.emplace_back(key, value); }
  void add(const std::string &key, double value) { add(key, num(value)); }

  void write(const ExperimentConfig &c) const {
    auto os = open_artifact(c.out_dir / "summary.txt");
    os << "[config]\n";
    for (const auto &[k, v] : c.echo) os << k << " = " << v << '\n';
    os << "[results]\n";
    for (const auto &[k, v] : rows_) os << k << " = " << v << '\n';
  }

private:
  std::vector<std::pair<std::string, std::string>> rows_;
};

struct SolveOutcome {
  Trajectory traj;
  RunConfig run; // with the step actually used
  int retries = 0;
  double stable_time = 0.0;
};

// Solves, halving dt after each contraction failure.
SolveOutcome solve_with_retries(const SpectralField &u0, const RunConfig &base, std::ostream &log,
                                bool quiet) {
  SolveOutcome out;
  out.run = base;
  for (int attempt = 0;; ++attempt) {
    try {
      out.traj = solve(u0, out.run);
      out.retries = attempt;
      out.stable_time = out.traj.final_time();
      return out;
    } catch (const ConvergenceError &e) {
      out.stable_time = std::max(out.stable_time, e.last_good_time());
      if (attempt == max_halvings) {
        std::ostringstream msg;
        msg << "nonconvergence: Picard iteration failed after " << max_halvings
            << " step halvings (dt=" << out.run.dt << ", last good t=" << out.stable_time << ")";
        throw CliError(nonconvergence, msg.str());
      }
      if (!quiet)
        log << "retry: dt=" << out.run.dt << " failed at t=" << e.last_good_time()
            << "; halving\n";
      out.run.dt *= 0.5;
    }
  }
}

// Marks the records that coincide with a snapshot time.
template <typename F> void for_snapshot_records(std::vector<DiagnosticsRecord> &records,
                                                const Trajectory &traj, F &&fill) {
  for (const auto &snap : traj.snapshots)
    for (auto &r : records)
      if (std::abs(r.t - snap.t) <= 1e-12 * std::max(1.0, std::abs(snap.t))) fill(r, snap);
}

void write_snapshots(const ExperimentConfig &c, const Trajectory &traj) {
  if (!c.write_snapshots) return;
  const fs::path dir = c.out_dir / "snapshots";
  fs::create_directories(dir);
  for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "snapshot_%04zu.bin", i);
    write_snapshot((dir / name).string(), traj.snapshots[i].field);
  }
}

void add_norm_summary(Summary &s, const SolveOutcome &o) {
  const auto &recs = o.traj.records;
  const double m0 = recs.front().l2_norm, m1 = recs.back().l2_norm;
  double max_hs = 0.0, max_ratio = 0.0;
  long iters = 0;
  for (const auto &r : recs) {
    max_hs = std::max(max_hs, r.hs_norm);
    max_ratio = std::max(max_ratio, r.contraction_ratio);
    iters += r.picard_iters;
  }
  s.add("dt_used", o.run.dt);
  s.add("retries", std::to_string(o.retries));
  s.add("final_time", o.traj.final_time());
  s.add("empirical_stable_time", o.stable_time);
  s.add("initial_l2", m0);
  s.add("final_l2", m1);
  s.add("l2_drift_rel", std::abs(m1 - m0) / m0);
  s.add("initial_hs", recs.front().hs_norm);
  s.add("final_hs", recs.back().hs_norm);
  s.add("max_hs", max_hs);
  s.add("picard_iters_total", std::to_string(iters));
  s.add("max_contraction_ratio", max_ratio);
}

void run_solve(const ExperimentConfig &c, const SpectralField &u0, const RunOptions &opts,
               std::ostream &log, Summary &s) {
  const auto o = solve_with_retries(u0, c.run, log, opts.quiet);
  auto records = energy_ledger(o.traj, o.run);
  const double sigma = default_sigma(o.run.s);
  for_snapshot_records(records, o.traj, [&](DiagnosticsRecord &r, const Snapshot &snap) {
    const auto [phi1, phi2] = phi_profiles(snap.field, sigma, snap.t);
    r.phi_mass = std::array<double, 2>{phi1.mass(), phi2.mass()};
  });
  auto os = open_artifact(c.out_dir / "diagnostics.csv");
  write_diagnostics_csv(os, records);
  write_snapshots(c, o.traj);
  add_norm_summary(s, o);
  s.add("sigma", sigma);
}

void run_continuation(const ExperimentConfig &c, const SpectralField &u0, const RunOptions &opts,
                      Summary &s) {
  ContinuationReport rep;
  try {
    rep = epsilon_continuation(u0, c.run, c.epsilon_ladder, opts.threads);
  } catch (const std::invalid_argument &e) {
    config_fail(e.what());
  }
  auto os = open_artifact(c.out_dir / "continuation.csv");
  write_continuation_csv(os, rep);

  int failed = 0;
  double stable = c.run.T;
  for (const auto &e : rep.entries)
    if (e.failed) {
      ++failed;
      stable = std::min(stable, e.last_good_time);
    }
  if (failed == static_cast<int>(rep.entries.size()))
    throw CliError(nonconvergence, "nonconvergence: every epsilon of the ladder failed (" +
                                       rep.entries.front().error + ")");
  s.add("failed_entries", std::to_string(failed));
  s.add("empirical_stable_time", stable);
  s.add("uniform_bound_ratio", rep.uniform_bound_ratio());
  s.add("differences", list(rep.differences));
  s.add("differences_strictly_decreasing", rep.differences_strictly_decreasing() ? "true" : "false");
}

void run_smoothing(const ExperimentConfig &c, const Grid2D &grid, const SpectralField &u0,
                   Summary &s) {
  const auto window = smooth_window(grid, c.initial.center, c.window_width);
  std::vector<SmoothingReport> reports;
  try {
    reports.push_back(smoothing_probe(c.run.symbol, u0, c.smoothing_T, window, c.time_intervals,
                                      c.preset, "gaussian"));
    if (c.compare_trapping) {
      DispersiveSymbol trap;
      trap.p0 = {1.0, 0.0, 0.0, 0.0};
      reports.push_back(
          smoothing_probe(trap, u0, c.smoothing_T, window, c.time_intervals, "xi1^3", "gaussian"));
    }
  } catch (const std::invalid_argument &e) {
    config_fail(e.what());
  }
  auto os = open_artifact(c.out_dir / "smoothing.csv");
  write_smoothing_csv(os, reports);
  for (const auto &r : reports) {
    s.add("gain_" + r.symbol_name, r.gain());
    s.add("nontrapping_margin_" + r.symbol_name, r.nontrapping_margin);
  }
  if (reports.size() == 2) s.add("gain_ratio", reports[0].gain() / reports[1].gain());
}

void run_gauge_growth(const ExperimentConfig &c, const SpectralField &u0, const RunOptions &opts,
                      std::ostream &log, Summary &s) {
  if (c.n1 != c.n2 || c.l1 != c.l2) config_fail("gauge-growth needs a square grid");
  double lambda = c.lambda;
  if (lambda <= 0.0) {
    try {
      const auto cal = calibrate_snapshot_lambda(u0, c.run, c.calibration_tol, c.test_fields, c.seed);
      lambda = cal.lambda;
      std::string sweep;
      for (const auto &[l, e] : cal.sweep) sweep += (sweep.empty() ? "" : " ") + num(l) + ":" + num(e);
      s.add("calibration_sweep", sweep);
    } catch (const CalibrationError &e) {
      throw CliError(calibration_failure, std::string("calibration: ") + e.what());
    } catch (const TrappingError &e) {
      config_fail(e.what());
    }
  }
  if (!opts.quiet) log << "gauge: lambda=" << lambda << '\n';
  const auto o = solve_with_retries(u0, c.run, log, opts.quiet);
  GaugeGrowthReport rep;
  try {
    rep = gauge_growth(o.traj, o.run, lambda, c.test_fields, c.seed);
  } catch (const std::domain_error &e) {
    throw CliError(calibration_failure, std::string("calibration: ") + e.what());
  }
  auto records = energy_ledger(o.traj, o.run);
  for (const auto &row : rep.rows)
    for (auto &r : records)
      if (std::abs(r.t - row.t) <= 1e-12 * std::max(1.0, std::abs(row.t))) r.gauged_norm = row.N_t;
  auto gos = open_artifact(c.out_dir / "gauge.csv");
  write_gauge_csv(gos, rep.rows);
  auto dos = open_artifact(c.out_dir / "diagnostics.csv");
  write_diagnostics_csv(dos, records);
  write_snapshots(c, o.traj);
  add_norm_summary(s, o);
  s.add("lambda", lambda);
  s.add("sigma", rep.sigma);
  s.add("gauged_rate", rep.gauged_rate);
  s.add("bare_rate", rep.bare_rate);
  double worst = 0.0;
  for (const auto &row : rep.rows) worst = std::max(worst, row.kk_inv_err);
  s.add("max_kk_inv_err", worst);
}

void run_convergence(const ExperimentConfig &c, const SpectralField &u0, Summary &s) {
  StudyAxis axis;
  try {
    axis = parse_study_axis(c.axis);
  } catch (const std::invalid_argument &e) {
    config_fail(e.what());
  }
  ConvergenceTable table;
  try {
    table = convergence_study(u0, c.run, axis, c.ladder);
  } catch (const ConvergenceError &e) {
    throw CliError(nonconvergence, std::string("nonconvergence: ") + e.what());
  } catch (const std::invalid_argument &e) {
    config_fail(e.what());
  }
  auto os = open_artifact(c.out_dir / "convergence.csv");
  write_convergence_csv(os, table);
  std::vector<double> ratios, orders;
  for (const auto &r : table.rows)
    if (!std::isnan(r.ratio)) {
      ratios.push_back(r.ratio);
      orders.push_back(r.order);
    }
  s.add("ratios", list(ratios));
  s.add("orders", list(orders));
}

void run_estimate(const ExperimentConfig &c, Summary &s) {
  std::vector<EstimateRow> rows;
  try {
    rows = estimate_probe(c.sizes, c.l1, c.run.s, c.count, c.kmax, c.seed);
  } catch (const std::invalid_argument &e) {
    config_fail(e.what());
  }
  auto os = open_artifact(c.out_dir / "estimate.csv");
  write_estimate_csv(os, rows);
  for (int j = 0; j < 4; ++j) {
    double lo = INFINITY, hi = 0.0;
    for (const auto &r : rows)
      if (r.term == j) {
        lo = std::min(lo, r.constant);
        hi = std::max(hi, r.constant);
      }
    s.add("constant_f" + std::to_string(j) + "_max", hi);
    s.add("constant_f" + std::to_string(j) + "_spread", hi / lo);
  }
}

// Minimal CSV reader for the report cross-checks.
std::vector<std::vector<std::string>> read_csv(const fs::path &path) {
  std::ifstream is(path);
  if (!is) throw CliError(config_error, "report: missing " + path.filename().string());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(is, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(std::move(cells));
  }
  if (rows.size() < 2) throw CliError(config_error, "report: " + path.filename().string() + " has no data");
  return rows;
}

std::size_t column(const std::vector<std::string> &header, const std::string &name) {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw CliError(config_error, "report: column '" + name + "' missing");
  return static_cast<std::size_t>(it - header.begin());
}

void check_final_norms(const fs::path &dir, const std::map<std::string, std::string> &summary,
                       std::ostream &os) {
  const auto rows = read_csv(dir / "diagnostics.csv");
  const auto &last = rows.back();
  for (const auto &[col, key] : {std::pair{"l2_norm", "final_l2"}, {"hs_norm", "final_hs"}}) {
    const std::string csv = last.at(column(rows.front(), col));
    const auto it = summary.find(key);
    const bool match = it != summary.end() && it->second == csv;
    os << "check " << key << ": diagnostics.csv " << csv << ", summary "
       << (it == summary.end() ? "missing" : it->second) << (match ? " (match)" : " (MISMATCH)")
       << '\n';
  }
}

void print_table(const fs::path &path, const std::vector<std::string> &cols, std::ostream &os) {
  const auto rows = read_csv(path);
  std::vector<std::size_t> idx;
  for (const auto &c : cols) idx.push_back(column(rows.front(), c));
  char buf[64];
  for (const auto &c : cols) {
    std::snprintf(buf, sizeof buf, "%-24s", c.c_str());
    os << buf;
  }
  os << '\n';
  for (std::size_t r = 1; r < rows.size(); ++r) {
    for (std::size_t i : idx) {
      std::snprintf(buf, sizeof buf, "%-24s", rows[r].at(i).c_str());
      os << buf;
    }
    os << '\n';
  }
}

} // namespace

std::string to_string(ExperimentKind kind) {
  switch (kind) {
  case ExperimentKind::solve: return "solve";
  case ExperimentKind::continuation: return "continuation";
  case ExperimentKind::smoothing: return "smoothing";
  case ExperimentKind::gauge_growth: return "gauge-growth";
  case ExperimentKind::convergence: return "convergence";
  case ExperimentKind::estimate_probe: return "estimate-probe";
  }
  return "unknown";
}

ExperimentConfig parse_config(const json &doc) {
  if (!doc.is_object()) config_fail("top level must be an object");
  static const std::set<std::string> known{
      "kind", "preset", "preset_params", "n", "n1", "n2", "length", "l1", "l2", "seed", "out",
      "a0", "a1", "a2", "a3", "profile", "amplitude", "center", "carrier", "width", "wavenumber",
      "kmax", "decay", "path", "s", "epsilon", "dt", "T", "picard_tol", "picard_max_iters",
      "quadrature_nodes", "snapshot_every", "write_snapshots", "epsilon_ladder", "smoothing_T",
      "window_width", "time_intervals", "compare_trapping", "lambda", "calibration_tol",
      "test_fields", "axis", "ladder", "sizes", "count", "probe_kmax"};
  for (const auto &[key, value] : doc.items())
    if (!known.contains(key)) config_fail("unknown key '" + key + "'");

  ExperimentConfig c;
  std::string kind;
  if (!read(doc, "kind", kind)) config_fail("missing key 'kind'");
  c.kind = parse_kind(kind);

  read(doc, "preset", c.preset);
  read(doc, "preset_params", c.preset_params);
  ModelPreset model;
  try {
    model = preset(c.preset, c.preset_params);
  } catch (const std::invalid_argument &e) {
    config_fail(e.what());
  }
  c.run = RunConfig::from_preset(model);
  for (int j = 0; j < 4; ++j) {
    Complex a;
    if (!read_complex(doc, "a" + std::to_string(j), a)) continue;
    switch (j) {
    case 0: c.run.coefficients.a0 = a; break;
    case 1: c.run.coefficients.a1 = a; break;
    case 2: c.run.coefficients.a2 = a; break;
    default: c.run.coefficients.a3 = a; break;
    }
  }

  int n = 0;
  if (read(doc, "n", n)) c.n1 = c.n2 = n;
  read(doc, "n1", c.n1);
  read(doc, "n2", c.n2);
  double length = Grid2D::two_pi;
  read(doc, "length", length);
  c.l1 = c.l2 = length;
  read(doc, "l1", c.l1);
  read(doc, "l2", c.l2);
  read(doc, "seed", c.seed);
  std::string out;
  if (read(doc, "out", out)) c.out_dir = out;

  auto &d = c.initial;
  read(doc, "profile", d.profile);
  static const std::set<std::string> profiles{"gaussian-packet", "plane-wave",
                                              "random-bandlimited", "file"};
  if (!profiles.contains(d.profile)) config_fail("unknown profile '" + d.profile + "'");
  read(doc, "amplitude", d.amplitude);
  d.center = {0.5 * c.l1, 0.5 * c.l2};
  d.center_set = read(doc, "center", d.center);
  read(doc, "carrier", d.carrier);
  read(doc, "width", d.width);
  read(doc, "wavenumber", d.wavenumber);
  read(doc, "kmax", d.kmax);
  read(doc, "decay", d.decay);
  if (d.profile == "file" && !read(doc, "path", d.path)) config_fail("profile 'file' needs 'path'");
  if (!(d.width > 0.0)) config_fail("width must be positive");
  if (!std::isfinite(d.amplitude)) config_fail("amplitude must be finite");

  auto &r = c.run;
  read(doc, "s", r.s);
  read(doc, "epsilon", r.epsilon);
  read(doc, "dt", r.dt);
  read(doc, "T", r.T);
  read(doc, "picard_tol", r.picard_tol);
  read(doc, "picard_max_iters", r.picard_max_iters);
  read(doc, "quadrature_nodes", r.quadrature_nodes);
  read(doc, "snapshot_every", r.snapshot_every);
  read(doc, "write_snapshots", c.write_snapshots);
  try {
    r.validate();
  } catch (const std::invalid_argument &e) {
    config_fail(e.what());
  }

  read(doc, "epsilon_ladder", c.epsilon_ladder);
  read(doc, "smoothing_T", c.smoothing_T);
  read(doc, "window_width", c.window_width);
  read(doc, "time_intervals", c.time_intervals);
  read(doc, "compare_trapping", c.compare_trapping);
  read(doc, "lambda", c.lambda);
  read(doc, "calibration_tol", c.calibration_tol);
  read(doc, "test_fields", c.test_fields);
  read(doc, "axis", c.axis);
  read(doc, "ladder", c.ladder);
  read(doc, "sizes", c.sizes);
  read(doc, "count", c.count);
  read(doc, "probe_kmax", c.kmax);
  if (c.kind == ExperimentKind::convergence && c.ladder.size() < 2)
    config_fail("convergence needs a 'ladder' with at least two entries");
  if (c.kind == ExperimentKind::gauge_growth && r.snapshot_every == 0)
    r.snapshot_every = std::max(1, static_cast<int>(std::ceil(r.T / r.dt)) / 10);

  update_echo(c);
  return c;
}

ExperimentConfig load_config(const fs::path &path) {
  std::ifstream is(path);
  if (!is) config_fail("cannot open '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(is);
  } catch (const json::parse_error &e) {
    config_fail(std::string("malformed JSON: ") + e.what());
  }
  return parse_config(doc);
}

void run_experiment(const ExperimentConfig &c, const RunOptions &opts, std::ostream &log) {
  const Grid2D grid = make_experiment_grid(c);
  std::error_code ec;
  fs::create_directories(c.out_dir, ec);
  if (ec) throw CliError(config_error, "io: cannot create " + c.out_dir.string());

  Summary s;
  if (c.kind == ExperimentKind::estimate_probe) {
    run_estimate(c, s);
  } else {
    const auto u0 = initial_field(c, grid);
    s.add("nontrapping_margin", nontrapping_margin(c.run.symbol));
    if (!opts.quiet) log << to_string(c.kind) << ": n=" << c.n1 << "x" << c.n2 << '\n';
    switch (c.kind) {
    case ExperimentKind::solve: run_solve(c, u0, opts, log, s); break;
    case ExperimentKind::continuation: run_continuation(c, u0, opts, s); break;
    case ExperimentKind::smoothing: run_smoothing(c, grid, u0, s); break;
    case ExperimentKind::gauge_growth: run_gauge_growth(c, u0, opts, log, s); break;
    case ExperimentKind::convergence: run_convergence(c, u0, s); break;
    case ExperimentKind::estimate_probe: break;
    }
  }
  s.write(c);
  if (!opts.quiet) log << "wrote " << (c.out_dir / "summary.txt").string() << '\n';
}

void report(const fs::path &dir, std::ostream &os) {
  const fs::path path = dir / "summary.txt";
  std::ifstream is(path);
  if (!is) throw CliError(config_error, "report: no summary.txt in " + dir.string());
  std::map<std::string, std::string> values;
  std::string line;
  while (std::getline(is, line)) {
    os << line << '\n';
    const auto eq = line.find(" = ");
    if (eq != std::string::npos) values.emplace(line.substr(0, eq), line.substr(eq + 3));
  }
  const auto kind = values.find("kind");
  if (kind == values.end()) throw CliError(config_error, "report: summary.txt has no kind");
  os << "[checks]\n";
  const ExperimentKind k = parse_kind(kind->second);
  switch (k) {
  case ExperimentKind::solve:
  case ExperimentKind::gauge_growth: check_final_norms(dir, values, os); break;
  case ExperimentKind::continuation:
    print_table(dir / "continuation.csv", {"epsilon", "sup_hs", "failed", "difference"}, os);
    break;
  case ExperimentKind::convergence:
    print_table(dir / "convergence.csv", {"value", "difference", "ratio", "order"}, os);
    break;
  case ExperimentKind::smoothing:
    print_table(dir / "smoothing.csv", {"symbol_name", "order", "gain"}, os);
    break;
  case ExperimentKind::estimate_probe:
    print_table(dir / "estimate.csv", {"n", "term", "constant"}, os);
    break;
  }
}

int worker_count() {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char *env = std::getenv("DISPERSIM_THREADS")) {
    char *end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<int>(v);
  }
  return static_cast<int>(hw);
}

} // namespace dispersim::cli
