#include "dispersim/nonlinear.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dispersim {

namespace {

double bump_edge(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

double transition(double t) {
  const double a = bump_edge(t);
  const double b = bump_edge(1.0 - t);
  return a / (a + b);
}

Complex riesz_value(double w1, double w2) {
  return Complex(0.0, w1 / std::hypot(w1, w2));
}

// Padded intermediates shared between the four cubic terms.
struct PaddedState {
  Grid2D grid;
  std::vector<Complex> u;      // u on the fine grid
  std::vector<Complex> du;     // d1 u on the fine grid
  std::vector<Complex> mod2;   // |u|^2 on the fine grid
};

// Zeroes the Nyquist row and column so the retained band is symmetric under
// k -> -k and the cubic terms commute with conjugation.
SpectralField drop_nyquist(SpectralField c) {
  const Grid2D &g = c.grid();
  for (int j = 0; j < g.n2(); ++j)
    for (int i = 0; i < g.n1(); ++i)
      if (g.is_nyquist1(i) || g.is_nyquist2(j)) c.values()[g.index(i, j)] = 0.0;
  return c;
}

PaddedState pad_state(const SpectralField &u) {
  const SpectralField c = drop_nyquist(u.to_spectral());
  PaddedState st{c.grid(), padded_physical(c, 2),
                 padded_physical(apply_multiplier(c, derivative_multiplier(1)), 2), {}};
  st.mod2.resize(st.u.size());
  for (std::size_t i = 0; i < st.u.size(); ++i) st.mod2[i] = std::norm(st.u[i]);
  return st;
}

// R1 d1 |u|^2 on the fine grid. The symbol -xi1^2/|xi| is even and real,
// and |u|^2 is exactly representable on the fine grid.
std::vector<Complex> riesz_d1_mod2(const PaddedState &st) {
  const Grid2D fine = st.grid.refined(2);
  const Multiplier m{[](double w1, double w2) {
                       return Complex(-w1 * w1 / std::hypot(w1, w2));
                     },
                     Complex(0.0), false};
  auto field = apply_multiplier(SpectralField::from_physical(fine, st.mod2), m);
  return field.to_physical().values();
}

} // namespace

double smooth_cutoff(double r) { return transition(2.0 * r - 1.0); }

RieszSplit RieszSplit::make() {
  RieszSplit split;
  split.r0 = Multiplier{[](double w1, double w2) {
                          return riesz_value(w1, w2) * smooth_cutoff(std::hypot(w1, w2));
                        },
                        Complex(0.0), true};
  split.r_tilde = Multiplier{[](double w1, double w2) {
                               return riesz_value(w1, w2) *
                                      (1.0 - smooth_cutoff(std::hypot(w1, w2)));
                             },
                             Complex(0.0), true};
  return split;
}

Multiplier riesz_multiplier() {
  return Multiplier{riesz_value, Complex(0.0), true};
}

SpectralField riesz_r1(const SpectralField &u) {
  return apply_multiplier(u, riesz_multiplier());
}

SpectralField eval_f(int j, const SpectralField &u) {
  if (j < 0 || j > 3)
    throw std::out_of_range("eval_f: index must be in 0..3, got " + std::to_string(j));
  NonlinearCoefficients c;
  switch (j) {
  case 0: c.a0 = 1.0; break;
  case 1: c.a1 = 1.0; break;
  case 2: c.a2 = 1.0; break;
  default: c.a3 = 1.0; break;
  }
  return rhs(u, c);
}

SpectralField rhs(const SpectralField &u, const NonlinearCoefficients &c) {
  if (c.all_zero()) return SpectralField::zeros(u.grid());
  const PaddedState st = pad_state(u);
  std::vector<Complex> acc(st.u.size());
  if (c.a0 != 0.0) {
    const auto r = riesz_d1_mod2(st);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += c.a0 * st.u[i] * r[i];
  }
  for (std::size_t i = 0; i < acc.size(); ++i) {
    const Complex v = st.u[i];
    const Complex dv = st.du[i];
    const double m2 = st.mod2[i].real();
    acc[i] += c.a1 * m2 * dv + c.a2 * v * v * std::conj(dv) + c.a3 * m2 * v;
  }
  return drop_nyquist(truncate_padded(st.grid, std::move(acc), 2));
}

double product_estimate_probe(const SpectralField &u, const SpectralField &v,
                              double s) {
  if (!(s > 2.0)) throw std::invalid_argument("product_estimate_probe: need s > 2");
  const double nu = sobolev_norm(u, s - 1.0);
  const double nv = sobolev_norm(v, s - 1.0);
  if (nu == 0.0 || nv == 0.0)
    throw std::domain_error("product_estimate_probe: zero factor");
  return sobolev_norm(dealiased_product({u, v}), s - 1.0) / (nu * nv);
}

} // namespace dispersim
