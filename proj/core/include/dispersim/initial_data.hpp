#pragma once

#include "dispersim/grid.hpp"
#include "dispersim/symbols.hpp"

#include <cstdint>

namespace dispersim {

/// Periodization of A exp(-|x - c|^2 / (2 w^2)) exp(i xi0 . x), built from its
/// exact Fourier coefficients
///   c_k = A 2 pi w^2 / (l1 l2) exp(-w^2 |omega_k - xi0|^2 / 2) exp(-i (omega_k - xi0) . c).
/// Coefficients below 1e-18 of the peak are dropped. Samples are exact when the
/// packet fits on the grid.
SpectralField gaussian_packet(const Grid2D &grid, double amplitude, const Vec2 &center,
                              const Vec2 &carrier, double width);

/// A exp(i (omega_1(k1) x1 + omega_2(k2) x2)) for signed wavenumbers k1, k2.
SpectralField plane_wave(const Grid2D &grid, Complex amplitude, int k1, int k2);

/// Real periodic bump: a gaussian_packet with zero carrier and unit amplitude.
SpectralField smooth_window(const Grid2D &grid, const Vec2 &center, double width);

/// Random field with modes |k1|, |k2| <= kmax (integer wavenumbers) and
/// coefficient envelope <omega>^{-decay}, drawn in a fixed order from `seed`
/// so that the same function results on every grid with n > 2 kmax.
/// Scaled to unit L2 norm.
SpectralField random_bandlimited(const Grid2D &grid, int kmax, std::uint64_t seed,
                                 double decay = 0.0);

} // namespace dispersim
