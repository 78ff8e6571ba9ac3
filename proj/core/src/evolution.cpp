#include "dispersim/evolution.hpp"

#include "dispersim/nonlinear.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

namespace dispersim {

void RunConfig::validate() const {
  if (!(s > 3.0)) throw std::invalid_argument("config: s must exceed 3");
  if (!(epsilon >= 0.0)) throw std::invalid_argument("config: epsilon must be >= 0");
  if (!(dt > 0.0)) throw std::invalid_argument("config: dt must be positive");
  if (!(T > 0.0)) throw std::invalid_argument("config: T must be positive");
  if (dt > T) throw std::invalid_argument("config: dt must not exceed T");
  if (!(picard_tol > 0.0)) throw std::invalid_argument("config: picard_tol must be positive");
  if (picard_max_iters < 1) throw std::invalid_argument("config: picard_max_iters must be >= 1");
  if (quadrature_nodes < 2) throw std::invalid_argument("config: quadrature_nodes must be >= 2");
  if (snapshot_every < 0) throw std::invalid_argument("config: snapshot_every must be >= 0");
}

RunConfig RunConfig::from_preset(const ModelPreset &model) {
  RunConfig cfg;
  cfg.symbol = model.symbol;
  cfg.coefficients = model.coefficients;
  return cfg;
}

namespace {

std::vector<Complex> propagator_table(const Grid2D &grid, const DispersiveSymbol &sym,
                                      double eps, double t) {
  std::vector<Complex> table(grid.size());
  for (int j = 0; j < grid.n2(); ++j) {
    const double w2 = grid.omega2(j);
    for (int i = 0; i < grid.n1(); ++i) {
      const double w1 = grid.omega1(i);
      const Complex m = eval_evolution_multiplier(sym, {w1, w2});
      table[grid.index(i, j)] = std::exp(-t * m - t * eps * (w1 * w1 + w2 * w2));
    }
  }
  return table;
}

std::vector<double> sobolev_weights(const Grid2D &grid, double s) {
  std::vector<double> w(grid.size());
  const double area = grid.l1() * grid.l2();
  for (int j = 0; j < grid.n2(); ++j)
    for (int i = 0; i < grid.n1(); ++i) {
      const double w1 = grid.omega1(i), w2 = grid.omega2(j);
      w[grid.index(i, j)] = area * std::pow(1.0 + w1 * w1 + w2 * w2, s);
    }
  return w;
}

double weighted_distance(const std::vector<Complex> &a, const std::vector<Complex> &b,
                         const std::vector<double> &w) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += w[i] * std::norm(a[i] - b[i]);
  return std::sqrt(acc);
}

} // namespace

SpectralField linear_propagate(const SpectralField &u, double t, double eps,
                               const DispersiveSymbol &sym) {
  if (eps > 0.0 && t < 0.0)
    throw std::invalid_argument("linear_propagate: backward diffusion (t < 0 with eps > 0)");
  if (eps < 0.0) throw std::invalid_argument("linear_propagate: eps must be >= 0");
  return apply_multiplier(u, propagator_table(u.grid(), sym, eps, t));
}

SemigroupBound semigroup_bound_check(double t, double eps, double s,
                                     const Grid2D &grid) {
  (void)s; // the bound is the ratio <xi>^s / <xi>^{s-1}, independent of s
  if (!(t > 0.0) || !(eps > 0.0))
    throw std::invalid_argument("semigroup_bound_check: t and eps must be positive");
  double measured = 0.0;
  for (int j = 0; j < grid.n2(); ++j)
    for (int i = 0; i < grid.n1(); ++i) {
      const double r2 = grid.omega1(i) * grid.omega1(i) + grid.omega2(j) * grid.omega2(j);
      measured = std::max(measured, std::sqrt(1.0 + r2) * std::exp(-t * eps * r2));
    }
  const double analytic = 1.0 + 1.0 / std::sqrt(2.0 * t * eps * std::numbers::e);
  return {measured, analytic};
}

// ---------------------------------------------------------------------------

DuhamelStepper::DuhamelStepper(const Grid2D &grid, const RunConfig &cfg, double dt)
    : grid_(grid), cfg_(cfg), dt_(dt), weights_(sobolev_weights(grid, cfg.s)) {
  if (!(dt > 0.0)) throw std::invalid_argument("picard_step: dt must be positive");
  const int q = cfg.quadrature_nodes;
  if (q < 2) throw std::invalid_argument("picard_step: need at least 2 quadrature nodes");
  propagators_.reserve(q);
  for (int m = 0; m < q; ++m) {
    const double tau = m == q - 1 ? dt : dt * m / (q - 1);
    propagators_.push_back(propagator_table(grid, cfg.symbol, cfg.epsilon, tau));
  }
}

PicardResult DuhamelStepper::step(const SpectralField &u, double t_start) const {
  const int q = cfg_.quadrature_nodes;
  const double h = dt_ / (q - 1);
  const std::size_t n = grid_.size();
  const SpectralField c = u.to_spectral();
  const std::vector<Complex> &cu = c.values();
  const auto &weights = weights_;
  const double norm_u = std::sqrt([&] {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += weights[i] * std::norm(cu[i]);
    return acc;
  }());

  std::vector<std::vector<Complex>> free(q, std::vector<Complex>(n));
  for (int m = 0; m < q; ++m)
    for (std::size_t i = 0; i < n; ++i) free[m][i] = propagators_[m][i] * cu[i];

  PicardResult result{SpectralField::from_spectral(grid_, free[q - 1]), 0, 0.0, {}};
  if (cfg_.coefficients.all_zero()) {
    result.iterations = 1;
    result.iterate_diffs.push_back(0.0);
    return result;
  }

  std::vector<std::vector<Complex>> nodes = free;
  std::vector<std::vector<Complex>> forcing(q);
  forcing[0] = rhs(c, cfg_.coefficients).values();

  for (int it = 1; it <= cfg_.picard_max_iters; ++it) {
    for (int r = 1; r < q; ++r)
      forcing[r] = rhs(SpectralField::from_spectral(grid_, nodes[r]), cfg_.coefficients).values();

    double diff = 0.0;
    std::vector<Complex> next(n);
    for (int m = 1; m < q; ++m) {
      next = free[m];
      for (int r = 0; r <= m; ++r) {
        const double w = (r == 0 || r == m) ? 0.5 * h : h;
        const auto &prop = propagators_[m - r];
        const auto &f = forcing[r];
        for (std::size_t i = 0; i < n; ++i) next[i] += w * prop[i] * f[i];
      }
      diff = std::max(diff, weighted_distance(next, nodes[m], weights));
      nodes[m].swap(next);
    }

    const double rel = norm_u > 0.0 ? diff / norm_u : diff;
    result.iterate_diffs.push_back(rel);
    result.iterations = it;
    if (result.iterate_diffs.size() >= 2) {
      const double prev = result.iterate_diffs[result.iterate_diffs.size() - 2];
      result.contraction_ratio = prev > 0.0 ? rel / prev : 0.0;
    }

    if (!std::isfinite(diff) || rel > 1e8) {
      std::ostringstream msg;
      msg << "picard iteration diverged at t=" << t_start << " (dt=" << dt_
          << ", iteration " << it << ")";
      throw ConvergenceError(msg.str(), t_start, it);
    }
    if (diff <= cfg_.picard_tol * norm_u) {
      result.field = SpectralField::from_spectral(grid_, nodes[q - 1]);
      return result;
    }
  }
  std::ostringstream msg;
  msg << "picard iteration did not converge in " << cfg_.picard_max_iters
      << " iterations at t=" << t_start << " (dt=" << dt_ << ")";
  throw ConvergenceError(msg.str(), t_start, cfg_.picard_max_iters);
}

PicardResult picard_step(const SpectralField &u, double dt, const RunConfig &cfg) {
  return DuhamelStepper(u.grid(), cfg, dt).step(u);
}

// ---------------------------------------------------------------------------

Trajectory solve(const SpectralField &u0, const RunConfig &cfg) {
  cfg.validate();
  const int steps = std::max(1, static_cast<int>(std::ceil(cfg.T / cfg.dt - 1e-9)));
  const double dt = cfg.T / steps;
  const DuhamelStepper stepper(u0.grid(), cfg, dt);

  Trajectory traj;
  SpectralField u = u0.to_spectral();
  auto record = [&](double t, int iters, double ratio) {
    DiagnosticsRecord r;
    r.t = t;
    r.l2_norm = l2_norm(u);
    r.hs_norm = sobolev_norm(u, cfg.s);
    r.picard_iters = iters;
    r.contraction_ratio = ratio;
    traj.records.push_back(r);
  };
  record(0.0, 0, 0.0);
  traj.snapshots.push_back({0.0, u});

  for (int n = 1; n <= steps; ++n) {
    const double t0 = (n - 1) * dt;
    PicardResult res = stepper.step(u, t0);
    u = std::move(res.field);
    const double t = n == steps ? cfg.T : n * dt;
    record(t, res.iterations, res.contraction_ratio);
    if (n == steps || (cfg.snapshot_every > 0 && n % cfg.snapshot_every == 0))
      traj.snapshots.push_back({t, u});
  }
  return traj;
}

// ---------------------------------------------------------------------------

double ContinuationReport::uniform_bound_ratio() const {
  if (entries.empty() || entries.back().failed) return std::numeric_limits<double>::quiet_NaN();
  double sup = 0.0;
  for (const auto &e : entries)
    if (!e.failed) sup = std::max(sup, e.sup_hs);
  const double ref = entries.back().sup_hs;
  return ref > 0.0 ? sup / ref : std::numeric_limits<double>::quiet_NaN();
}

bool ContinuationReport::differences_strictly_decreasing() const {
  for (std::size_t i = 0; i < differences.size(); ++i) {
    if (!std::isfinite(differences[i])) return false;
    if (i > 0 && !(differences[i] < differences[i - 1])) return false;
  }
  return true;
}

ContinuationReport epsilon_continuation(const SpectralField &u0, const RunConfig &cfg,
                                        const std::vector<double> &ladder,
                                        int max_workers) {
  if (ladder.empty()) throw std::invalid_argument("epsilon_continuation: empty ladder");
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    const bool last = i + 1 == ladder.size();
    if (ladder[i] < 0.0 || (!last && ladder[i] == 0.0))
      throw std::invalid_argument("epsilon_continuation: ladder entries must be positive "
                                  "(only the last may be 0)");
    if (i > 0 && !(ladder[i] < ladder[i - 1]))
      throw std::invalid_argument("epsilon_continuation: ladder must be strictly decreasing");
  }

  ContinuationReport report;
  report.entries.resize(ladder.size());
  auto run_one = [&](std::size_t i) {
    ContinuationEntry &e = report.entries[i];
    e.epsilon = ladder[i];
    RunConfig c = cfg;
    c.epsilon = ladder[i];
    try {
      Trajectory traj = solve(u0, c);
      for (const auto &r : traj.records) e.sup_hs = std::max(e.sup_hs, r.hs_norm);
      e.last_good_time = traj.final_time();
      e.final_state = traj.final_state();
    } catch (const ConvergenceError &err) {
      e.failed = true;
      e.error = err.what();
      e.last_good_time = err.last_good_time();
    } catch (const std::exception &err) {
      e.failed = true;
      e.error = err.what();
    }
  };

  const std::size_t workers =
      std::clamp<std::size_t>(static_cast<std::size_t>(std::max(1, max_workers)), 1, ladder.size());
  if (workers == 1) {
    for (std::size_t i = 0; i < ladder.size(); ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < ladder.size(); i = next++) run_one(i);
      });
    for (auto &t : pool) t.join();
  }

  for (std::size_t i = 0; i + 1 < ladder.size(); ++i) {
    const auto &a = report.entries[i];
    const auto &b = report.entries[i + 1];
    report.differences.push_back(a.failed || b.failed
                                     ? std::numeric_limits<double>::quiet_NaN()
                                     : sobolev_norm(*a.final_state - *b.final_state, cfg.s));
  }
  return report;
}

} // namespace dispersim
