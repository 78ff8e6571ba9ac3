#pragma once

#include "dispersim/coefficients.hpp"
#include "dispersim/grid.hpp"

#include <array>
#include <optional>
#include <span>
#include <string>

namespace dispersim {

using Vec2 = std::array<double, 2>;

/// Third-order dispersive operator p(d) = p0(d) + i p1(d) + p2(d) + i p3
/// with p_j a real homogeneous polynomial of degree 3 - j.
///
/// Coefficient layout: p0 = {xi1^3, xi1^2 xi2, xi1 xi2^2, xi2^3},
/// p1 = {xi1^2, xi1 xi2, xi2^2}, p2 = {xi1, xi2}. The linear flow is
/// c_k(t) = exp(-t m(omega_k)) c_k(0) with m(xi) = p(i xi), obtained by
/// substituting d_j -> i xi_j.
struct DispersiveSymbol {
  std::array<double, 4> p0{};
  std::array<double, 3> p1{};
  std::array<double, 2> p2{};
  double p3 = 0.0;

  double principal(const Vec2 &xi) const;
  Vec2 principal_gradient(const Vec2 &xi) const;
  double quadratic(const Vec2 &xi) const;
  double linear(const Vec2 &xi) const;

  bool operator==(const DispersiveSymbol &) const = default;
};

/// m(xi) = p(i xi). Always pure imaginary.
std::complex<double> eval_evolution_multiplier(const DispersiveSymbol &sym,
                                               const Vec2 &xi);

/// The evolution multiplier as a grid multiplier.
Multiplier evolution_multiplier(const DispersiveSymbol &sym);

/// min |grad p0| over `samples` equally spaced points of the unit circle.
/// Positive iff the symbol is (numerically) nontrapping.
double nontrapping_margin(const DispersiveSymbol &sym, int samples = 1440);

/// x0 + t grad p0(xi0).
Vec2 classical_orbit(const Vec2 &x0, const Vec2 &xi0, double t,
                     const DispersiveSymbol &sym);

struct ModelPreset {
  std::string name;
  DispersiveSymbol symbol;
  NonlinearCoefficients coefficients;
};

/// "dysthe" (no parameters) or "hogan" with (b1..b5, mu1..mu3).
ModelPreset preset(const std::string &name,
                   std::span<const double> params = {});

/// Model solved by v(t) = conj(u(-t)) when u solves (sym, coeffs): p0 and
/// p2 change sign and a_j -> -conj(a_j).
ModelPreset time_reversed(const ModelPreset &model);

} // namespace dispersim
