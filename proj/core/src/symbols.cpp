#include "dispersim/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dispersim {

double DispersiveSymbol::principal(const Vec2 &xi) const {
  const auto [a, b] = xi;
  return p0[0] * a * a * a + p0[1] * a * a * b + p0[2] * a * b * b + p0[3] * b * b * b;
}

Vec2 DispersiveSymbol::principal_gradient(const Vec2 &xi) const {
  const auto [a, b] = xi;
  return {3.0 * p0[0] * a * a + 2.0 * p0[1] * a * b + p0[2] * b * b,
          p0[1] * a * a + 2.0 * p0[2] * a * b + 3.0 * p0[3] * b * b};
}

double DispersiveSymbol::quadratic(const Vec2 &xi) const {
  const auto [a, b] = xi;
  return p1[0] * a * a + p1[1] * a * b + p1[2] * b * b;
}

double DispersiveSymbol::linear(const Vec2 &xi) const {
  return p2[0] * xi[0] + p2[1] * xi[1];
}

std::complex<double> eval_evolution_multiplier(const DispersiveSymbol &sym,
                                               const Vec2 &xi) {
  // p0(i xi) = -i p0(xi), i p1(i xi) = -i p1(xi), p2(i xi) = i p2(xi).
  return {0.0, -sym.principal(xi) - sym.quadratic(xi) + sym.linear(xi) + sym.p3};
}

Multiplier evolution_multiplier(const DispersiveSymbol &sym) {
  return Multiplier{[sym](double w1, double w2) {
                      return eval_evolution_multiplier(sym, {w1, w2});
                    },
                    std::nullopt, false};
}

double nontrapping_margin(const DispersiveSymbol &sym, int samples) {
  if (samples < 360) throw std::invalid_argument("nontrapping_margin: need >= 360 samples");
  double margin = std::numeric_limits<double>::infinity();
  for (int k = 0; k < samples; ++k) {
    const double theta = Grid2D::two_pi * k / samples;
    const auto g = sym.principal_gradient({std::cos(theta), std::sin(theta)});
    margin = std::min(margin, std::hypot(g[0], g[1]));
  }
  return margin;
}

Vec2 classical_orbit(const Vec2 &x0, const Vec2 &xi0, double t,
                     const DispersiveSymbol &sym) {
  if (xi0[0] == 0.0 && xi0[1] == 0.0)
    throw std::invalid_argument("classical_orbit: xi0 must be nonzero");
  const auto g = sym.principal_gradient(xi0);
  return {x0[0] + t * g[0], x0[1] + t * g[1]};
}

ModelPreset preset(const std::string &name, std::span<const double> params) {
  using namespace std::complex_literals;
  if (name == "dysthe") {
    if (!params.empty()) throw std::invalid_argument("preset dysthe takes no parameters");
    // d_t - (1/16)(d1^3 - 6 d1 d2^2) + (i/8)(d1^2 - 2 d2^2) + (1/2) d1
    ModelPreset m;
    m.name = "dysthe";
    m.symbol.p0 = {-1.0 / 16.0, 0.0, 6.0 / 16.0, 0.0};
    m.symbol.p1 = {1.0 / 8.0, 0.0, -2.0 / 8.0};
    m.symbol.p2 = {0.5, 0.0};
    m.coefficients = {-0.5i, -1.5, 0.25, -0.5i};
    return m;
  }
  if (name == "hogan") {
    if (params.size() != 8)
      throw std::invalid_argument("preset hogan expects 8 parameters (b1..b5, mu1..mu3), got " +
                                  std::to_string(params.size()));
    const double b1 = params[0], b2 = params[1], b3 = params[2], b4 = params[3],
                 b5 = params[4], mu1 = params[5], mu2 = params[6], mu3 = params[7];
    // d_t - (b1 d1^3 + b2 d1 d2^2) + i(b3 d1^2 + b4 d2^2) + b5 d1
    ModelPreset m;
    m.name = "hogan";
    m.symbol.p0 = {-b1, 0.0, -b2, 0.0};
    m.symbol.p1 = {b3, 0.0, b4};
    m.symbol.p2 = {b5, 0.0};
    m.coefficients = {-0.5i, mu1, mu2, 1i * mu3};
    return m;
  }
  throw std::invalid_argument("unknown preset '" + name + "'");
}

ModelPreset time_reversed(const ModelPreset &model) {
  ModelPreset r = model;
  r.name = model.name + "-reversed";
  for (auto &c : r.symbol.p0) c = -c;
  for (auto &c : r.symbol.p2) c = -c;
  auto flip = [](std::complex<double> a) { return -std::conj(a); };
  r.coefficients = {flip(model.coefficients.a0), flip(model.coefficients.a1),
                    flip(model.coefficients.a2), flip(model.coefficients.a3)};
  return r;
}

} // namespace dispersim
