#include "dispersim/initial_data.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace dispersim {

SpectralField gaussian_packet(const Grid2D &grid, double amplitude, const Vec2 &center,
                              const Vec2 &carrier, double width) {
  if (!(width > 0.0)) throw std::invalid_argument("gaussian_packet: width must be positive");
  const double scale = amplitude * Grid2D::two_pi * width * width / (grid.l1() * grid.l2());
  std::vector<Complex> c(grid.size());
  for (int j = 0; j < grid.n2(); ++j)
    for (int i = 0; i < grid.n1(); ++i) {
      const double d1 = grid.omega1(i) - carrier[0], d2 = grid.omega2(j) - carrier[1];
      const double e = 0.5 * width * width * (d1 * d1 + d2 * d2);
      if (e > 41.4) continue; // exp(-41.4) ~ 1e-18
      c[grid.index(i, j)] =
          scale * std::exp(-e) * std::exp(Complex(0.0, -(d1 * center[0] + d2 * center[1])));
    }
  return SpectralField::from_spectral(grid, std::move(c));
}

SpectralField plane_wave(const Grid2D &grid, Complex amplitude, int k1, int k2) {
  std::vector<Complex> c(grid.size());
  c[grid.mode_index(k1, k2)] = amplitude;
  return SpectralField::from_spectral(grid, std::move(c));
}

SpectralField smooth_window(const Grid2D &grid, const Vec2 &center, double width) {
  auto w = gaussian_packet(grid, 1.0, center, {0.0, 0.0}, width).to_physical();
  for (auto &z : w.values()) z = z.real();
  return w;
}

SpectralField random_bandlimited(const Grid2D &grid, int kmax, std::uint64_t seed,
                                 double decay) {
  if (kmax < 0) throw std::invalid_argument("random_bandlimited: kmax must be >= 0");
  if (2 * kmax >= grid.n1() || 2 * kmax >= grid.n2())
    throw std::invalid_argument("random_bandlimited: grid too coarse for kmax");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<Complex> c(grid.size());
  for (int k2 = -kmax; k2 <= kmax; ++k2)
    for (int k1 = -kmax; k1 <= kmax; ++k1) {
      const double re = unit(rng), im = unit(rng);
      const double w1 = Grid2D::two_pi * k1 / grid.l1(), w2 = Grid2D::two_pi * k2 / grid.l2();
      const double env = std::pow(1.0 + w1 * w1 + w2 * w2, -0.5 * decay);
      c[grid.mode_index(k1, k2)] = Complex(re, im) * env;
    }
  auto u = SpectralField::from_spectral(grid, std::move(c));
  const double norm = l2_norm(u);
  if (norm > 0.0) u *= Complex(1.0 / norm);
  return u;
}

} // namespace dispersim
