#include "dispersim/gauge.hpp"

#include "dispersim/nonlinear.hpp"
#include "fft.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace dispersim {

namespace {

void require_grid(const Grid2D &a, const Grid2D &b, const char *what) {
  if (!(a == b)) throw std::invalid_argument(std::string(what) + ": grid mismatch");
}

// r-th spectral derivative of a periodic sample vector.
std::vector<double> spectral_derivative(const std::vector<double> &f, double length, int r) {
  const std::size_t n = f.size();
  std::vector<Complex> c(f.begin(), f.end());
  detail::fft1d(c, detail::FftDirection::forward);
  for (std::size_t i = 0; i < n; ++i) {
    const long k = i < n / 2 ? static_cast<long>(i) : static_cast<long>(i) - static_cast<long>(n);
    if (r % 2 == 1 && i == n / 2) {
      c[i] = 0.0;
      continue;
    }
    const Complex iw(0.0, Grid2D::two_pi * static_cast<double>(k) / length);
    c[i] *= std::pow(iw, r) / static_cast<double>(n);
  }
  detail::fft1d(c, detail::FftDirection::backward);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = c[i].real();
  return out;
}

std::vector<Complex> reflect(const Grid2D &grid, const std::vector<Complex> &table) {
  std::vector<Complex> out(table.size());
  for (int j = 0; j < grid.n2(); ++j)
    for (int i = 0; i < grid.n1(); ++i)
      out[grid.index(i, j)] =
          table[grid.index((grid.n1() - i) % grid.n1(), (grid.n2() - j) % grid.n2())];
  return out;
}

std::vector<Complex> conj_all(std::vector<Complex> v) {
  for (auto &z : v) z = std::conj(z);
  return v;
}

void require_nontrapping(const DispersiveSymbol &sym, const char *what) {
  const double margin = nontrapping_margin(sym);
  if (!(margin > 1e-8)) {
    std::ostringstream msg;
    msg << what << ": trapping symbol (nontrapping margin " << margin << ")";
    throw TrappingError(msg.str());
  }
}

// exp(i w x + sign Phi(x) g(xi)) for every sample x on one axis and every mode.
std::vector<Complex> axis_table(const Grid2D &grid, int axis, const std::vector<double> &Phi,
                                const std::vector<double> &g, int sign) {
  const int nx = axis == 1 ? grid.n1() : grid.n2();
  const std::size_t size = grid.size();
  std::vector<Complex> out(static_cast<std::size_t>(nx) * size);
  for (int x = 0; x < nx; ++x) {
    const double pos = axis == 1 ? grid.x1(x) : grid.x2(x);
    for (int j = 0; j < grid.n2(); ++j)
      for (int i = 0; i < grid.n1(); ++i) {
        const std::size_t mode = grid.index(i, j);
        const double w = axis == 1 ? grid.omega1(i) : grid.omega2(j);
        out[static_cast<std::size_t>(x) * size + mode] =
            std::exp(Complex(sign * Phi[x] * g[mode], w * pos));
      }
  }
  return out;
}

// The cutoff removed every grid frequency although the profiles are nonzero:
// K = I trivially and says nothing about invertibility.
bool gauge_is_vacuous(const GaugeSymbolTable &t) {
  const auto nonzero = [](const std::vector<double> &v) {
    return std::any_of(v.begin(), v.end(), [](double x) { return x != 0.0; });
  };
  const bool has_profile = nonzero(t.Phi1) || nonzero(t.Phi2);
  const bool has_symbol = nonzero(t.g1) || nonzero(t.g2);
  return has_profile && !has_symbol;
}

double relative_residual(const SpectralField &v, const SpectralField &w) {
  const double nv = l2_norm(v);
  if (nv == 0.0) return 0.0;
  return l2_norm(w - v) / nv;
}

std::vector<Complex> random_coefficients(const Grid2D &grid, std::mt19937_64 &rng,
                                         const std::function<double(double, double)> &envelope) {
  std::normal_distribution<double> normal;
  std::vector<Complex> c(grid.size());
  for (int j = 0; j < grid.n2(); ++j)
    for (int i = 0; i < grid.n1(); ++i) {
      const double a = normal(rng), b = normal(rng);
      c[grid.index(i, j)] = Complex(a, b) * envelope(grid.omega1(i), grid.omega2(j));
    }
  return c;
}

// Smallest eigenvalue of (q + q*)/2 and the size of its entries.
std::pair<double, double> hermitian_min_eig(const std::array<Complex, 4> &e) {
  const double h11 = e[0].real(), h22 = e[3].real();
  const Complex h12 = 0.5 * (e[1] + std::conj(e[2]));
  const double mid = 0.5 * (h11 + h22), half = 0.5 * (h11 - h22);
  return {mid - std::sqrt(half * half + std::norm(h12)),
          std::abs(h11) + std::abs(h22) + std::abs(h12)};
}

} // namespace

double PhiProfile::mass() const {
  double acc = 0.0;
  for (double v : values) acc += v;
  return acc * spacing();
}

double default_sigma(double s) { return std::min(0.9, (s - 3.0) / 3.0); }

std::pair<PhiProfile, PhiProfile> phi_profiles(const SpectralField &u, double sigma, double t) {
  if (!(sigma > 0.0 && sigma < 1.0))
    throw std::invalid_argument("phi_profiles: sigma must lie in (0, 1)");
  const Grid2D &g = u.grid();
  const auto v2 = apply_multiplier(u, axis_bessel_multiplier(2, 0.5 + sigma)).to_physical();
  const auto v1 = apply_multiplier(u, axis_bessel_multiplier(1, 0.5 + sigma)).to_physical();

  PhiProfile phi1{1, std::vector<double>(g.n1(), 0.0), g.l1(), sigma, t};
  PhiProfile phi2{2, std::vector<double>(g.n2(), 0.0), g.l2(), sigma, t};
  for (int j = 0; j < g.n2(); ++j)
    for (int i = 0; i < g.n1(); ++i) {
      phi1.values[i] += std::norm(v2.values()[g.index(i, j)]) * g.dx2();
      phi2.values[j] += std::norm(v1.values()[g.index(i, j)]) * g.dx1();
    }
  return {std::move(phi1), std::move(phi2)};
}

double holder_check(const PhiProfile &profile, double order) {
  if (!(order >= 0.0)) throw std::invalid_argument("holder_check: order must be >= 0");
  const auto &f = profile.values;
  const std::size_t n = f.size();
  if (n == 0) return 0.0;
  const int top = static_cast<int>(std::floor(order));
  const double theta = order - top;

  double norm = 0.0;
  std::vector<double> d = f;
  for (int r = 0; r <= top; ++r) {
    d = r == 0 ? f : spectral_derivative(f, profile.length, r);
    double sup = 0.0;
    for (double v : d) sup = std::max(sup, std::abs(v));
    norm += sup;
  }
  if (theta > 0.0) {
    const double h = profile.spacing();
    double quotient = 0.0;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b) {
        const double gap = static_cast<double>(std::min(b - a, n - (b - a))) * h;
        quotient = std::max(quotient, std::abs(d[a] - d[b]) / std::pow(gap, theta));
      }
    norm += quotient;
  }
  return norm;
}

std::vector<double> cumulative_phi(const PhiProfile &profile) {
  const auto &f = profile.values;
  std::vector<double> Phi(f.size(), 0.0);
  const double h = profile.spacing();
  for (std::size_t i = 1; i < f.size(); ++i) Phi[i] = Phi[i - 1] + 0.5 * h * (f[i - 1] + f[i]);
  return Phi;
}

double domination_constant(const NonlinearCoefficients &c) {
  return 2.0 * std::abs(c.a0) + std::abs(c.a1) + std::abs(c.a2);
}

PhiProfile combined_profile(const PhiProfile &phi1, const PhiProfile &phi2, double c0) {
  if (phi1.values.size() != phi2.values.size() || phi1.length != phi2.length)
    throw std::invalid_argument("combined_profile: profiles must share samples and length");
  PhiProfile out = phi1;
  for (std::size_t i = 0; i < out.values.size(); ++i)
    out.values[i] = c0 * (phi1.values[i] + phi2.values[i]);
  return out;
}

// ---------------------------------------------------------------------------

std::array<std::vector<double>, 2> gauge_frequency_factors(const Grid2D &grid,
                                                           const DispersiveSymbol &sym,
                                                           double lambda) {
  if (!(lambda >= 1.0)) throw std::invalid_argument("gauge: lambda must be >= 1");
  require_nontrapping(sym, "gauge");
  std::array<std::vector<double>, 2> g{std::vector<double>(grid.size(), 0.0),
                                       std::vector<double>(grid.size(), 0.0)};
  for (int j = 0; j < grid.n2(); ++j)
    for (int i = 0; i < grid.n1(); ++i) {
      const Vec2 xi{grid.omega1(i), grid.omega2(j)};
      const double r = std::hypot(xi[0], xi[1]);
      const double chi = smooth_cutoff(r / lambda);
      if (chi == 0.0) continue;
      const Vec2 grad = sym.principal_gradient(xi);
      const double g2 = grad[0] * grad[0] + grad[1] * grad[1];
      const std::size_t m = grid.index(i, j);
      g[0][m] = grad[0] * r / g2 * chi;
      g[1][m] = grad[1] * r / g2 * chi;
    }
  return g;
}

GaugeOperator::GaugeOperator(GaugeSymbolTable table) : table_(std::move(table)) {
  const Grid2D &g = table_.grid;
  if (table_.Phi1.size() != static_cast<std::size_t>(g.n1()) ||
      table_.Phi2.size() != static_cast<std::size_t>(g.n2()))
    throw std::invalid_argument("gauge: Phi sample counts must match the grid");
  if (table_.g1.size() != g.size() || table_.g2.size() != g.size())
    throw std::invalid_argument("gauge: frequency factor size mismatch");
  e1_plus_ = axis_table(g, 1, table_.Phi1, table_.g1, +1);
  e2_plus_ = axis_table(g, 2, table_.Phi2, table_.g2, +1);
  e1_minus_ = axis_table(g, 1, table_.Phi1, table_.g1, -1);
  e2_minus_ = axis_table(g, 2, table_.Phi2, table_.g2, -1);
  for (const auto *tab : {&e1_plus_, &e2_plus_, &e1_minus_, &e2_minus_})
    for (const Complex &z : *tab)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw std::domain_error("gauge: exp(gamma) overflows; profiles too large");
}

SpectralField GaugeOperator::apply_sign(const SpectralField &u, int sign) const {
  const Grid2D &g = grid();
  require_grid(g, u.grid(), "gauge apply");
  const auto c = u.to_spectral();
  const auto &cv = c.values();
  const std::size_t size = g.size();
  const auto &e1 = sign > 0 ? e1_plus_ : e1_minus_;
  const auto &e2 = sign > 0 ? e2_plus_ : e2_minus_;

  std::vector<Complex> out(size);
  std::vector<Complex> w(size);
  for (int x1 = 0; x1 < g.n1(); ++x1) {
    const Complex *row1 = e1.data() + static_cast<std::size_t>(x1) * size;
    for (std::size_t m = 0; m < size; ++m) w[m] = row1[m] * cv[m];
    for (int x2 = 0; x2 < g.n2(); ++x2) {
      const Complex *row2 = e2.data() + static_cast<std::size_t>(x2) * size;
      Complex acc = 0.0;
      for (std::size_t m = 0; m < size; ++m) acc += row2[m] * w[m];
      out[g.index(x1, x2)] = acc;
    }
  }
  return SpectralField::from_physical(g, std::move(out));
}

SpectralField GaugeOperator::apply(const SpectralField &u) const { return apply_sign(u, +1); }

SpectralField GaugeOperator::apply_inverse(const SpectralField &u) const {
  return apply_sign(u, -1);
}

GaugeOperator build_gauge(const Grid2D &grid, std::vector<double> Phi1,
                          std::vector<double> Phi2, const DispersiveSymbol &sym,
                          double lambda) {
  auto g = gauge_frequency_factors(grid, sym, lambda);
  return GaugeOperator(GaugeSymbolTable{grid, std::move(Phi1), std::move(Phi2),
                                        std::move(g[0]), std::move(g[1]), lambda});
}

std::vector<SpectralField> gauge_test_fields(const Grid2D &grid, int count,
                                             std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("gauge_test_fields: count must be >= 1");
  std::mt19937_64 rng(seed);
  // Dyadic frequency shells so the maximum over the set tracks the operator
  // norm at every scale.
  const double top = std::min(grid.n1(), grid.n2()) / 2 - 2;
  std::vector<double> shells;
  for (double r = 2.0; r < top; r *= 2.0) shells.push_back(r);
  shells.push_back(top);
  // Gaussian window centred mid-domain; at the seam it is below 1e-10.
  const double c1 = 0.5 * grid.l1(), c2 = 0.5 * grid.l2();
  const double w1 = grid.l1() / 10.0, w2 = grid.l2() / 10.0;
  const double unit1 = Grid2D::two_pi / grid.l1(), unit2 = Grid2D::two_pi / grid.l2();
  std::vector<SpectralField> out;
  out.reserve(count);
  for (int n = 0; n < count; ++n) {
    const double r0 = shells[n % shells.size()];
    const double spread = std::max(1.0, 0.25 * r0);
    auto c = random_coefficients(grid, rng, [&](double o1, double o2) {
      const double d = std::hypot(o1 / unit1, o2 / unit2) - r0;
      return std::exp(-0.5 * d * d / (spread * spread));
    });
    auto p = SpectralField::from_spectral(grid, std::move(c)).to_physical();
    for (int j = 0; j < grid.n2(); ++j)
      for (int i = 0; i < grid.n1(); ++i) {
        const double a = (grid.x1(i) - c1) / w1, b = (grid.x2(j) - c2) / w2;
        p.values()[grid.index(i, j)] *= std::exp(-0.5 * (a * a + b * b));
      }
    const double norm = l2_norm(p);
    if (norm > 0.0) p *= Complex(1.0 / norm);
    out.push_back(std::move(p));
  }
  return out;
}

double kk_inverse_error(const GaugeOperator &K, const std::vector<SpectralField> &fields) {
  double err = 0.0;
  for (const auto &v : fields)
    err = std::max(err, relative_residual(v, K.apply(K.apply_inverse(v))));
  return err;
}

double kpk_inverse_error(const GaugeOperator &K, const std::vector<SpectralField> &fields) {
  double err = 0.0;
  for (const auto &v : fields)
    err = std::max(err, relative_residual(v, K.apply_inverse(K.apply(v))));
  return err;
}

LambdaCalibration calibrate_lambda(const std::function<GaugeOperator(double)> &builder,
                                   const std::vector<SpectralField> &fields, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("calibrate_lambda: tol must be positive");
  LambdaCalibration cal;
  double last_resolved = 0.0, last_resolved_error = 0.0;
  bool any_vacuous = false;
  for (double lambda = 1.0; lambda <= 256.0; lambda *= 2.0) {
    double err = std::numeric_limits<double>::infinity();
    bool vacuous = false;
    try {
      const GaugeOperator K = builder(lambda);
      err = kk_inverse_error(K, fields);
      vacuous = gauge_is_vacuous(K.table());
    } catch (const std::domain_error &) {
      // exp(gamma) overflowed at this lambda; try the next one.
    }
    cal.sweep.emplace_back(lambda, err);
    any_vacuous = any_vacuous || vacuous;
    if (!vacuous && std::isfinite(err)) {
      last_resolved = lambda;
      last_resolved_error = err;
    }
    if (err < tol && !vacuous) {
      cal.lambda = lambda;
      cal.error = err;
      return cal;
    }
  }
  std::ostringstream msg;
  msg << "calibrate_lambda: no lambda <= 256 gives ||KK'-I|| < " << tol << " (";
  if (last_resolved > 0.0)
    msg << "error at lambda " << last_resolved << ": " << last_resolved_error;
  else
    msg << "exp(gamma) overflowed at every resolved lambda";
  if (any_vacuous) msg << "; larger lambda cut off every grid frequency";
  msg << ")";
  throw CalibrationError(msg.str());
}

double gauged_norm(const SpectralField &u, double s, const GaugeOperator &K) {
  if (!(s > 3.0)) throw std::invalid_argument("gauged_norm: s must exceed 3");
  const Grid2D &g = u.grid();
  require_grid(g, K.grid(), "gauged_norm");
  const int top = static_cast<int>(std::floor(s));
  const double theta = s - top;
  const auto c = u.to_spectral();

  double total = 0.0;
  for (int a = 0; a <= top; ++a) {
    const int b = top - a;
    std::vector<Complex> table(g.size());
    for (int j = 0; j < g.n2(); ++j)
      for (int i = 0; i < g.n1(); ++i) {
        Complex m = 0.0;
        const bool drop = (a % 2 == 1 && g.is_nyquist1(i)) || (b % 2 == 1 && g.is_nyquist2(j));
        if (!drop) {
          const double w1 = g.omega1(i), w2 = g.omega2(j);
          m = std::pow(1.0 + w1 * w1 + w2 * w2, 0.5 * theta) *
              std::pow(Complex(0.0, w1), a) * std::pow(Complex(0.0, w2), b);
        }
        table[g.index(i, j)] = m;
      }
    const auto w = apply_multiplier(c, table);
    const double n1 = l2_norm(K.apply(w));
    const double n2 = l2_norm(K.apply(w.conj()));
    total += std::sqrt(n1 * n1 + n2 * n2);
  }
  return total + sobolev_norm(c, s - 1.0);
}

SnapshotGauge snapshot_gauge(const SpectralField &u, const NonlinearCoefficients &c,
                             double sigma, double t) {
  if (u.grid().n1() != u.grid().n2() || u.grid().l1() != u.grid().l2())
    throw std::invalid_argument("snapshot_gauge: the combined profile needs a square grid");
  SnapshotGauge sg;
  std::tie(sg.phi1, sg.phi2) = phi_profiles(u, sigma, t);
  sg.c0 = domination_constant(c);
  sg.phi = combined_profile(sg.phi1, sg.phi2, sg.c0);
  sg.Phi = cumulative_phi(sg.phi);
  return sg;
}

// ---------------------------------------------------------------------------

void MatrixSymbol::add(SeparableTerm term) {
  if (term.row < 0 || term.row > 1 || term.col < 0 || term.col > 1)
    throw std::out_of_range("matrix symbol: row/col must be 0 or 1");
  if (term.x_factor.size() != grid_.size() || term.xi_factor.size() != grid_.size())
    throw std::invalid_argument("matrix symbol: factor size mismatch");
  terms_.push_back(std::move(term));
}

MatrixSymbol &MatrixSymbol::operator+=(const MatrixSymbol &other) {
  require_grid(grid_, other.grid_, "matrix symbol +");
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  return *this;
}

MatrixSymbol operator+(MatrixSymbol lhs, const MatrixSymbol &rhs) {
  lhs += rhs;
  return lhs;
}

std::array<Complex, 4> MatrixSymbol::evaluate(std::size_t point, std::size_t mode) const {
  std::array<Complex, 4> q{};
  for (const auto &t : terms_) q[2 * t.row + t.col] += t.x_factor[point] * t.xi_factor[mode];
  return q;
}

std::array<SpectralField, 2> MatrixSymbol::apply(const std::array<SpectralField, 2> &U) const {
  require_grid(grid_, U[0].grid(), "matrix symbol apply");
  require_grid(grid_, U[1].grid(), "matrix symbol apply");
  std::array<SpectralField, 2> out{SpectralField::zeros(grid_, Representation::physical),
                                   SpectralField::zeros(grid_, Representation::physical)};
  for (const auto &t : terms_) {
    const auto v = apply_multiplier(U[t.col], t.xi_factor).to_physical();
    auto &dst = out[t.row].values();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += t.x_factor[i] * v.values()[i];
  }
  return out;
}

MatrixSymbol scalar_symbol(const Grid2D &grid, const std::vector<Complex> &xi_factor) {
  MatrixSymbol q(grid);
  const std::vector<Complex> ones(grid.size(), Complex(1.0));
  q.add({0, 0, ones, xi_factor});
  q.add({1, 1, ones, xi_factor});
  return q;
}

MatrixSymbol q0_symbol(const PhiProfile &phi_a, const PhiProfile &phi_b,
                       const DispersiveSymbol &sym, double lambda) {
  const int n1 = static_cast<int>(phi_a.values.size());
  const int n2 = static_cast<int>(phi_b.values.size());
  const Grid2D grid(n1, n2, phi_a.length, phi_b.length);
  if (!(lambda >= 1.0)) throw std::invalid_argument("q0_symbol: lambda must be >= 1");
  require_nontrapping(sym, "q0_symbol");
  for (const auto *p : {&phi_a, &phi_b})
    for (double v : p->values)
      if (!(v >= 0.0)) throw std::invalid_argument("q0_symbol: profile must be non-negative");

  std::vector<Complex> x1(grid.size()), x2(grid.size()), s1(grid.size()), s2(grid.size());
  for (int j = 0; j < n2; ++j)
    for (int i = 0; i < n1; ++i) {
      const std::size_t idx = grid.index(i, j);
      x1[idx] = phi_a.values[i];
      x2[idx] = phi_b.values[j];
      const Vec2 xi{grid.omega1(i), grid.omega2(j)};
      const double r = std::hypot(xi[0], xi[1]);
      const double chi = smooth_cutoff(r / lambda);
      if (chi == 0.0) continue;
      const Vec2 grad = sym.principal_gradient(xi);
      const double g2 = grad[0] * grad[0] + grad[1] * grad[1];
      s1[idx] = grad[0] * grad[0] * r / g2 * chi;
      s2[idx] = grad[1] * grad[1] * r / g2 * chi;
    }
  MatrixSymbol q(grid);
  for (int d = 0; d < 2; ++d) {
    q.add({d, d, x1, s1});
    q.add({d, d, x2, s2});
  }
  return q;
}

MatrixSymbol a_symbol(const SpectralField &u, const NonlinearCoefficients &c,
                      const DispersiveSymbol &sym) {
  const Grid2D &g = u.grid();
  const auto p = u.to_physical();
  std::vector<Complex> mod2(g.size()), sq(g.size()), sq_conj(g.size()), ones(g.size(), 1.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Complex z = p.values()[i];
    mod2[i] = std::norm(z);
    sq[i] = z * z;
    sq_conj[i] = std::conj(z * z);
  }

  const auto r0 = RieszSplit::make().r0.sample(g);
  std::vector<Complex> t1(g.size()), t2(g.size()), tp(g.size());
  const Complex minus_i(0.0, -1.0);
  for (int j = 0; j < g.n2(); ++j)
    for (int i = 0; i < g.n1(); ++i) {
      const std::size_t m = g.index(i, j);
      const double xi1 = g.is_nyquist1(i) ? 0.0 : g.omega1(i);
      t1[m] = minus_i * (c.a0 * r0[m] + c.a1) * xi1;
      t2[m] = minus_i * (c.a0 * r0[m] + c.a2) * xi1;
      tp[m] = Complex(0.0, sym.linear({g.omega1(i), g.omega2(j)}));
    }

  MatrixSymbol q(g);
  q.add({0, 0, mod2, t1});
  q.add({0, 0, ones, tp});
  q.add({0, 1, sq, t2});
  q.add({1, 0, sq_conj, conj_all(reflect(g, t2))});
  q.add({1, 1, mod2, conj_all(reflect(g, t1))});
  q.add({1, 1, ones, conj_all(reflect(g, tp))});
  return q;
}

double symbol_positivity_floor(const MatrixSymbol &q, double lambda) {
  const Grid2D &g = q.grid();
  double floor = std::numeric_limits<double>::infinity();
  for (int j = 0; j < g.n2(); ++j)
    for (int i = 0; i < g.n1(); ++i) {
      if (std::hypot(g.omega1(i), g.omega2(j)) < lambda) continue;
      const std::size_t mode = g.index(i, j);
      for (std::size_t x = 0; x < g.size(); ++x) {
        floor = std::min(floor, hermitian_min_eig(q.evaluate(x, mode)).first);
      }
    }
  return floor;
}

double garding_probe(const MatrixSymbol &q, double lambda, int trials, std::uint64_t seed,
                     double tol) {
  if (trials < 1) throw std::invalid_argument("garding_probe: trials must be >= 1");
  const Grid2D &g = q.grid();

  std::vector<std::array<double, 2>> offending;
  for (int j = 0; j < g.n2(); ++j)
    for (int i = 0; i < g.n1(); ++i) {
      if (std::hypot(g.omega1(i), g.omega2(j)) < lambda) continue;
      const std::size_t mode = g.index(i, j);
      for (std::size_t x = 0; x < g.size(); ++x) {
        const auto [eig, scale] = hermitian_min_eig(q.evaluate(x, mode));
        if (eig < -tol * (1.0 + scale)) {
          offending.push_back({g.omega1(i), g.omega2(j)});
          break;
        }
      }
    }
  if (!offending.empty()) {
    std::ostringstream msg;
    msg << "garding_probe: q + q* is not non-negative at " << offending.size()
        << " grid frequencies with |xi| >= " << lambda << ", e.g.";
    for (std::size_t k = 0; k < std::min<std::size_t>(offending.size(), 8); ++k)
      msg << " (" << offending[k][0] << ", " << offending[k][1] << ")";
    throw SymbolPositivityError(msg.str(), std::move(offending));
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double kmax = std::hypot(g.omega1(g.n1() / 2 - 1), g.omega2(g.n2() / 2 - 1));
  double best = std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < trials; ++trial) {
    std::array<SpectralField, 2> U{SpectralField::zeros(g), SpectralField::zeros(g)};
    for (auto &comp : U) {
      const int shape = trial % 4;
      const double width = 1.0 + unit(rng) * 0.5 * kmax;
      const Vec2 centre{(2.0 * unit(rng) - 1.0) * 0.5 * kmax, (2.0 * unit(rng) - 1.0) * 0.5 * kmax};
      auto envelope = [&](double w1, double w2) {
        const double r = std::hypot(w1, w2);
        switch (shape) {
        case 0: return 1.0;
        case 1: return std::exp(-0.5 * (r / width) * (r / width));
        case 2: return r / kmax;
        default: {
          const double d = std::hypot(w1 - centre[0], w2 - centre[1]);
          return std::exp(-0.5 * (d / (0.1 * width)) * (d / (0.1 * width)));
        }
        }
      };
      comp = SpectralField::from_spectral(g, random_coefficients(g, rng, envelope));
    }
    const double norm2 = std::pow(l2_norm(U[0]), 2) + std::pow(l2_norm(U[1]), 2);
    if (norm2 == 0.0) continue;
    const auto QU = q.apply(U);
    const double re = (inner(QU[0], U[0]) + inner(QU[1], U[1])).real();
    best = std::min(best, re / norm2);
  }
  return std::isfinite(best) ? best : 0.0;
}

} // namespace dispersim
