#pragma once

#include "dispersim/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace dispersim::testing {

inline constexpr double pi = std::numbers::pi;

inline Grid2D square_grid(int n, double side = 2.0 * pi) { return make_grid(n, n, side, side); }

/// Max pointwise |a - b| over physical samples.
inline double max_diff(const SpectralField &a, const SpectralField &b) {
  const auto pa = a.to_physical(), pb = b.to_physical();
  double m = 0.0;
  for (std::size_t i = 0; i < pa.values().size(); ++i)
    m = std::max(m, std::abs(pa.values()[i] - pb.values()[i]));
  return m;
}

/// Max pointwise |a|.
inline double max_abs(const SpectralField &a) {
  const auto p = a.to_physical();
  double m = 0.0;
  for (const auto &z : p.values()) m = std::max(m, std::abs(z));
  return m;
}

/// Physical white noise with uniform entries in the unit square.
inline SpectralField white_noise(const Grid2D &g, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<Complex> v(g.size());
  for (auto &z : v) z = {d(rng), d(rng)};
  return SpectralField::from_physical(g, std::move(v));
}

} // namespace dispersim::testing
