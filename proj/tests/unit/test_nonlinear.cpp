#include "dispersim/initial_data.hpp"
#include "dispersim/nonlinear.hpp"
#include "dispersim/symbols.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <map>

namespace dispersim {
namespace {

using namespace std::complex_literals;
using testing::pi;
using testing::square_grid;

// Sparse Fourier series on the 2 pi torus, used as an independent oracle.
using Modes = std::map<std::pair<int, int>, Complex>;

Modes multiply(const Modes &a, const Modes &b) {
  Modes out;
  for (const auto &[ka, ca] : a)
    for (const auto &[kb, cb] : b) out[{ka.first + kb.first, ka.second + kb.second}] += ca * cb;
  return out;
}

Modes conjugate(const Modes &a) {
  Modes out;
  for (const auto &[k, c] : a) out[{-k.first, -k.second}] = std::conj(c);
  return out;
}

Modes d1(const Modes &a) {
  Modes out;
  for (const auto &[k, c] : a) out[k] = Complex(0.0, k.first) * c;
  return out;
}

Modes riesz(const Modes &a) {
  Modes out;
  for (const auto &[k, c] : a) {
    const double r = std::hypot(k.first, k.second);
    out[k] = r == 0.0 ? Complex(0.0) : Complex(0.0, k.first / r) * c;
  }
  return out;
}

Modes oracle_f(int j, const Modes &u) {
  const Modes ub = conjugate(u);
  const Modes mod2 = multiply(u, ub);
  switch (j) {
  case 0: return multiply(u, riesz(d1(mod2)));
  case 1: return multiply(mod2, d1(u));
  case 2: return multiply(multiply(u, u), d1(ub));
  default: return multiply(mod2, u);
  }
}

SpectralField to_field(const Grid2D &g, const Modes &m) {
  std::vector<Complex> c(g.size());
  for (const auto &[k, v] : m) {
    if (std::abs(k.first) >= g.n1() / 2 || std::abs(k.second) >= g.n2() / 2)
      continue; // outside the symmetric band the solver keeps
    c[g.mode_index(k.first, k.second)] = v;
  }
  return SpectralField::from_spectral(g, std::move(c));
}

Modes random_modes(unsigned seed, int count, int kmax) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> k(-kmax, kmax);
  std::uniform_real_distribution<double> c(-1.0, 1.0);
  Modes m;
  for (int i = 0; i < count; ++i) m[{k(rng), k(rng)}] += Complex(c(rng), c(rng));
  return m;
}

TEST(Cutoff, PlateausAndMonotone) {
  for (double r : {0.0, 0.25, 0.5}) EXPECT_EQ(smooth_cutoff(r), 0.0);
  for (double r : {1.0, 1.5, 40.0}) EXPECT_EQ(smooth_cutoff(r), 1.0);
  double prev = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double v = smooth_cutoff(0.5 + 0.5 * i / 1000.0);
    EXPECT_GE(v, prev);
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
    prev = v;
  }
  EXPECT_NEAR(smooth_cutoff(0.75), 0.5, 1e-15);
}

TEST(Riesz, SplitSumsToFullMultiplier) {
  const auto g = make_grid(32, 16, 2 * pi, pi);
  const auto split = RieszSplit::make();
  const auto r0 = split.r0.sample(g), rt = split.r_tilde.sample(g),
             full = riesz_multiplier().sample(g);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(std::abs(r0[i] + rt[i] - full[i]), 0.0, 1e-15);
  EXPECT_EQ(full[0], Complex(0.0));
}

TEST(Riesz, SymmetryOnGrid) {
  const auto g = square_grid(16);
  const auto m = riesz_multiplier().sample(g);
  for (int j = 0; j < 16; ++j)
    for (int i = 0; i < 16; ++i) {
      const auto v = m[g.index(i, j)];
      const auto w = m[g.index((16 - i) % 16, (16 - j) % 16)];
      EXPECT_NEAR(std::abs(w - std::conj(v)), 0.0, 1e-15);
      EXPECT_NEAR(std::abs(w + v), 0.0, 1e-15);
    }
}

TEST(Riesz, Examples) {
  const auto g = square_grid(16);
  const auto e1 = plane_wave(g, 1.0, 1, 0);
  EXPECT_LE(testing::max_diff(riesz_r1(e1), 1i * e1), 1e-14);
  EXPECT_LE(testing::max_abs(riesz_r1(plane_wave(g, 1.0, 0, 1))), 1e-15);
  const auto s = SpectralField::sample(g, [](double x, double) { return std::sin(x); });
  const auto c = SpectralField::sample(g, [](double x, double) { return std::cos(x); });
  EXPECT_LE(testing::max_diff(riesz_r1(s), c), 1e-14);
}

TEST(Cubics, ConstantField) {
  const auto g = square_grid(8);
  const Complex c(0.3, -0.4);
  const auto u = plane_wave(g, c, 0, 0);
  for (int j = 0; j < 3; ++j) EXPECT_LE(testing::max_abs(eval_f(j, u)), 1e-15);
  EXPECT_LE(testing::max_diff(eval_f(3, u), plane_wave(g, std::norm(c) * c, 0, 0)), 1e-15);
}

TEST(Cubics, SingleMode) {
  const auto g = square_grid(16);
  const auto e = plane_wave(g, 1.0, 1, 0);
  EXPECT_LE(testing::max_abs(eval_f(0, e)), 1e-14);
  EXPECT_LE(testing::max_diff(eval_f(1, e), 1i * e), 1e-14);
  EXPECT_LE(testing::max_diff(eval_f(2, e), -1i * e), 1e-14);
  EXPECT_LE(testing::max_diff(eval_f(3, e), e), 1e-14);
}

TEST(Cubics, ConstantPlusMode) {
  const auto g = square_grid(16);
  const auto u = plane_wave(g, 1.0, 0, 0) + plane_wave(g, 1.0, 1, 0);
  const auto expected = SpectralField::sample(g, [](double x, double) {
    return -2.0 * std::cos(x) * (1.0 + std::exp(Complex(0.0, x)));
  });
  EXPECT_LE(testing::max_diff(eval_f(0, u), expected), 1e-13);
}

TEST(Cubics, MatchModeOracle) {
  const auto g = square_grid(16);
  for (unsigned seed = 1; seed <= 5; ++seed) {
    const auto modes = random_modes(seed, 5, 3);
    const auto u = to_field(g, modes);
    for (int j = 0; j < 4; ++j) {
      const auto expected = to_field(g, oracle_f(j, modes));
      EXPECT_LE(testing::max_diff(eval_f(j, u), expected), 1e-12) << "term " << j;
    }
  }
}

TEST(Cubics, IndexChecked) {
  const auto u = SpectralField::zeros(square_grid(8));
  EXPECT_THROW(eval_f(4, u), std::out_of_range);
  EXPECT_THROW(eval_f(-1, u), std::out_of_range);
}

TEST(Rhs, ZeroCoefficientsAndConstants) {
  const auto g = square_grid(16);
  const auto u = random_bandlimited(g, 3, 1);
  EXPECT_LE(testing::max_abs(rhs(u, NonlinearCoefficients{})), 0.0);
  const auto one = plane_wave(g, 1.0, 0, 0);
  EXPECT_LE(testing::max_diff(rhs(one, preset("dysthe").coefficients), plane_wave(g, -0.5i, 0, 0)),
            1e-15);
}

TEST(Rhs, EqualsWeightedSumOfTerms) {
  const auto g = square_grid(16);
  const auto u = random_bandlimited(g, 3, 2);
  const NonlinearCoefficients c{Complex(0.1, 0.2), Complex(-1.0, 0.5), Complex(0.3, 0.0),
                                Complex(0.0, 2.0)};
  auto sum = SpectralField::zeros(g);
  for (int j = 0; j < 4; ++j) sum += c[j] * eval_f(j, u);
  EXPECT_LE(testing::max_diff(rhs(u, c), sum), 1e-12);
}

TEST(Rhs, PhysicalCoefficientsConserveMass) {
  const std::vector<double> hogan_params{1, 1, 0.5, 0.5, 1, 0.7, -0.3, 2.0};
  for (const auto &model : {preset("dysthe"), preset("hogan", hogan_params)})
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto u = random_bandlimited(square_grid(32), 5, seed);
      const double scale = std::pow(sobolev_norm(u, 3.0), 3);
      EXPECT_LE(std::abs(inner(rhs(u, model.coefficients), u).real()), 1e-10 * scale);
    }
}

TEST(Rhs, SecondTermIntegratesByParts) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto u = random_bandlimited(square_grid(32), 6, seed);
    EXPECT_LE(std::abs(inner(eval_f(2, u), u).real()), 1e-10 * std::pow(sobolev_norm(u, 3.0), 3));
  }
}

TEST(ProductProbe, Constants) {
  const auto one = plane_wave(square_grid(16), 1.0, 0, 0);
  EXPECT_NEAR(product_estimate_probe(one, one, 3.0), 1.0 / (2 * pi), 1e-13);
  EXPECT_THROW(product_estimate_probe(one, SpectralField::zeros(one.grid()), 3.0), std::domain_error);
  EXPECT_THROW(product_estimate_probe(one, one, 2.0), std::invalid_argument);
}

TEST(ProductProbe, GridIndependentForRandomFields) {
  std::vector<double> worst;
  for (int n : {16, 32, 64}) {
    double w = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const auto g = square_grid(n);
      const int band = n / 4 - 1;
      w = std::max(w, product_estimate_probe(random_bandlimited(g, band, seed, 3.0),
                                             random_bandlimited(g, band, seed + 100, 3.0), 3.0));
    }
    worst.push_back(w);
  }
  const auto [lo, hi] = std::minmax_element(worst.begin(), worst.end());
  EXPECT_LE(*hi / *lo, 2.0);
}

TEST(Cubics, LipschitzQuotientIsGridIndependent) {
  // A fixed band-limited pair whose cubics fit every grid gives the same
  // quotient ||f(u) - f(v)||_{s-1} / ((||u||_s^2 + ||v||_s^2) ||u - v||_s).
  const double s = 3.5;
  std::vector<std::array<double, 4>> quotients;
  for (int n : {32, 64, 128}) {
    const auto g = square_grid(n);
    const auto u = random_bandlimited(g, 3, 1, s + 1);
    const auto v = u + 0.1 * random_bandlimited(g, 3, 51, s + 1);
    const double nu = sobolev_norm(u, s), nv = sobolev_norm(v, s), d = sobolev_norm(u - v, s);
    std::array<double, 4> q{};
    for (int j = 0; j < 4; ++j)
      q[j] = sobolev_norm(eval_f(j, u) - eval_f(j, v), s - 1) / ((nu * nu + nv * nv) * d);
    quotients.push_back(q);
  }
  for (int j = 0; j < 4; ++j) {
    EXPECT_GT(quotients[0][j], 0.0);
    for (const auto &q : quotients) EXPECT_NEAR(q[j], quotients[0][j], 1e-10 * quotients[0][j]);
  }
}

} // namespace
} // namespace dispersim
