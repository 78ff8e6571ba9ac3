#include "dispersim/gauge.hpp"
#include "dispersim/initial_data.hpp"
#include "dispersim/nonlinear.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

namespace dispersim {
namespace {

using namespace std::complex_literals;
using testing::pi;
using testing::square_grid;

const DispersiveSymbol &dysthe() {
  static const auto sym = preset("dysthe").symbol;
  return sym;
}

PhiProfile sampled_profile(int n, const std::function<double(double)> &f) {
  PhiProfile p;
  p.values.resize(n);
  for (int i = 0; i < n; ++i) p.values[i] = f(p.length * i / n);
  return p;
}

TEST(PhiProfiles, PlaneWaveIsFlat) {
  const auto g = square_grid(16);
  const Complex amp(0.3, 0.4);
  const double sigma = 0.25;
  const auto [phi1, phi2] = phi_profiles(plane_wave(g, amp, 1, 2), sigma);
  const double e1 = 2 * pi * std::norm(amp) * std::pow(1.0 + 4.0, 0.5 + sigma);
  const double e2 = 2 * pi * std::norm(amp) * std::pow(1.0 + 1.0, 0.5 + sigma);
  for (double v : phi1.values) EXPECT_NEAR(v, e1, 1e-13);
  for (double v : phi2.values) EXPECT_NEAR(v, e2, 1e-13);
  EXPECT_NEAR(phi1.mass(), 2 * pi * e1, 1e-12);
  EXPECT_EQ(phi1.axis, 1);
  EXPECT_EQ(phi2.axis, 2);
}

TEST(PhiProfiles, ZeroFieldAndSigmaRange) {
  const auto z = SpectralField::zeros(square_grid(8));
  const auto [phi1, phi2] = phi_profiles(z, 0.5);
  for (double v : phi1.values) EXPECT_EQ(v, 0.0);
  EXPECT_THROW(phi_profiles(z, 0.0), std::invalid_argument);
  EXPECT_THROW(phi_profiles(z, 1.0), std::invalid_argument);
  EXPECT_NEAR(default_sigma(3.5), 1.0 / 6.0, 1e-15);
  EXPECT_EQ(default_sigma(10.0), 0.9);
}

TEST(PhiProfiles, SeparableFieldMatchesProductFormula) {
  // u = a(x1) b(x2): phi_1 = |a(x1)|^2 ||<D2>^{1/2+sigma} b||^2.
  const auto g = square_grid(32);
  const double sigma = 0.3;
  const auto u = SpectralField::sample(g, [](double x, double y) {
    return (1.0 + 0.5 * std::cos(x)) * (std::sin(y) + 0.25 * std::cos(3 * y));
  });
  const double bnorm2 = pi * (std::pow(2.0, 0.5 + sigma) + 0.0625 * std::pow(10.0, 0.5 + sigma));
  const auto [phi1, phi2] = phi_profiles(u, sigma);
  for (int i = 0; i < g.n1(); ++i) {
    const double a = 1.0 + 0.5 * std::cos(g.x1(i));
    EXPECT_NEAR(phi1.values[i], a * a * bnorm2, 1e-12);
  }
}

TEST(Holder, ConstantProfile) {
  const auto p = sampled_profile(32, [](double) { return -2.5; });
  EXPECT_NEAR(holder_check(p, 0.5), 2.5, 1e-14);
  EXPECT_NEAR(holder_check(p, 1.5), 2.5, 1e-12);
}

TEST(Holder, StableUnderRefinement) {
  std::vector<double> values;
  for (int n : {64, 128, 256})
    values.push_back(holder_check(sampled_profile(n, [](double x) { return std::sin(x); }), 1.5));
  for (double v : values) EXPECT_NEAR(v / values.back(), 1.0, 0.05);
  // sup |sin| + sup |cos| plus a quotient that is at least |cos 0 - cos h| / h^{1/2}.
  EXPECT_GT(values.back(), 2.0);
}

TEST(Holder, SnapshotProfileStableOverGrids) {
  std::vector<double> values;
  for (int n : {32, 64, 128}) {
    const auto u = random_bandlimited(square_grid(n), 3, 4, 2.0);
    const auto sg = snapshot_gauge(u, preset("dysthe").coefficients, default_sigma(3.5));
    values.push_back(holder_check(sg.phi, 1.0 + 2.0 * sg.phi.sigma));
  }
  for (double v : values) EXPECT_NEAR(v / values.back(), 1.0, 0.05);
}

TEST(Cumulative, SimpleProfiles) {
  const auto zero = cumulative_phi(sampled_profile(16, [](double) { return 0.0; }));
  for (double v : zero) EXPECT_EQ(v, 0.0);
  const auto p = sampled_profile(16, [](double) { return 3.0; });
  const auto lin = cumulative_phi(p);
  EXPECT_EQ(lin.front(), 0.0);
  for (std::size_t i = 0; i < lin.size(); ++i) EXPECT_NEAR(lin[i], 3.0 * p.spacing() * i, 1e-13);
}

TEST(Cumulative, PositivePartOfSineMatchesTrapezoidClosedForm) {
  const int n = 256;
  const auto p = sampled_profile(n, [](double x) { return std::max(0.0, std::sin(x)); });
  const auto Phi = cumulative_phi(p);
  const double h = p.spacing();
  const double factor = 0.5 * h / std::tan(0.5 * h);
  for (int i = 0; i < n; ++i) {
    const double y = std::min(h * i, pi);
    EXPECT_NEAR(Phi[i], factor * (1.0 - std::cos(y)), 1e-12) << i;
    EXPECT_NEAR(Phi[i], 1.0 - std::cos(y), 2e-4); // quadrature error of order h^2
  }
}

TEST(Combined, SumsScaledProfiles) {
  const auto a = sampled_profile(8, [](double x) { return x; });
  const auto b = sampled_profile(8, [](double x) { return 1.0 + x * x; });
  const auto c = combined_profile(a, b, 2.0);
  for (int i = 0; i < 8; ++i) EXPECT_DOUBLE_EQ(c.values[i], 2.0 * (a.values[i] + b.values[i]));
  EXPECT_THROW(combined_profile(a, sampled_profile(16, [](double) { return 0.0; }), 1.0),
               std::invalid_argument);
  EXPECT_DOUBLE_EQ(domination_constant(preset("dysthe").coefficients), 2.75);
}

TEST(Gauge, ZeroProfileIsIdentity) {
  const auto g = square_grid(16);
  const auto K = build_gauge(g, std::vector<double>(16, 0.0), std::vector<double>(16, 0.0),
                             dysthe(), 2.0);
  const auto u = testing::white_noise(g, 1);
  EXPECT_LE(testing::max_diff(K.apply(u), u), 1e-12);
  EXPECT_LE(testing::max_diff(K.apply_inverse(u), u), 1e-12);
  EXPECT_LE(testing::max_abs(K.apply(SpectralField::zeros(g))), 0.0);
}

TEST(Gauge, LowFrequenciesPassUnchanged) {
  const auto g = square_grid(32);
  std::vector<double> Phi(32);
  for (int i = 0; i < 32; ++i) Phi[i] = 0.4 * i / 32.0;
  const double lambda = 8.0;
  const auto K = build_gauge(g, Phi, Phi, dysthe(), lambda);
  const auto u = random_bandlimited(g, 2, 3); // |xi| <= 2 sqrt 2 < lambda / 2
  EXPECT_LE(testing::max_diff(K.apply(u), u), 1e-12);
}

TEST(Gauge, SymbolTableValues) {
  const auto g = square_grid(16);
  const auto f = gauge_frequency_factors(g, dysthe(), 1.0);
  // At xi = (1, 0): grad p0 = (-3/16, 0), so g1 = -16/3, g2 = 0.
  const auto m = g.mode_index(1, 0);
  EXPECT_NEAR(f[0][m], -16.0 / 3.0, 1e-12);
  EXPECT_NEAR(f[1][m], 0.0, 1e-15);
  EXPECT_EQ(f[0][0], 0.0);
  EXPECT_THROW(gauge_frequency_factors(g, dysthe(), 0.5), std::invalid_argument);
}

TEST(Gauge, TrappingSymbolRejected) {
  DispersiveSymbol trap;
  trap.p0 = {1.0, 0.0, 0.0, 0.0};
  const auto g = square_grid(8);
  EXPECT_THROW(build_gauge(g, std::vector<double>(8), std::vector<double>(8), trap, 1.0),
               TrappingError);
}

TEST(Gauge, InverseErrorDecaysWithLambda) {
  const auto g = square_grid(32);
  const auto model = preset("dysthe");
  const auto u = gaussian_packet(g, 0.3, {pi, pi}, {2.0, 1.0}, 0.6);
  const auto sg = snapshot_gauge(u, model.coefficients, default_sigma(3.5));
  const auto fields = gauge_test_fields(g, 8, 3);
  const double e8 = kk_inverse_error(build_gauge(g, sg.Phi, sg.Phi, model.symbol, 8.0), fields);
  const double e16 = kk_inverse_error(build_gauge(g, sg.Phi, sg.Phi, model.symbol, 16.0), fields);
  EXPECT_GE(e8 / e16, 3.0);
  EXPECT_LE(e8 / e16, 20.0);
}

TEST(Gauge, TestFieldsAreNormalizedAndSeeded) {
  const auto g = square_grid(32);
  const auto a = gauge_test_fields(g, 5, 1), b = gauge_test_fields(g, 5, 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_NEAR(l2_norm(a[i]), 1.0, 1e-12);
    EXPECT_EQ(testing::max_diff(a[i], b[i]), 0.0);
  }
  EXPECT_THROW(gauge_test_fields(g, 0, 1), std::invalid_argument);
}

TEST(Calibration, ZeroProfilesNeedNoCutoff) {
  const auto g = square_grid(16);
  const auto fields = gauge_test_fields(g, 4, 1);
  const auto cal = calibrate_lambda(
      [&](double l) {
        return build_gauge(g, std::vector<double>(16), std::vector<double>(16), dysthe(), l);
      },
      fields);
  EXPECT_EQ(cal.lambda, 1.0);
  EXPECT_LE(cal.error, 1e-12);
}

TEST(Calibration, ModerateAndHugeProfiles) {
  const auto g = square_grid(32);
  const auto fields = gauge_test_fields(g, 6, 2);
  const auto sweep = [&](double scale) {
    std::vector<double> Phi(32);
    for (int i = 0; i < 32; ++i) Phi[i] = scale * (1.0 - std::cos(2 * pi * i / 32.0));
    return [&, Phi](double l) { return build_gauge(g, Phi, Phi, dysthe(), l); };
  };
  const auto cal = calibrate_lambda(sweep(0.5), fields);
  EXPECT_GT(cal.lambda, 1.0);
  EXPECT_LT(cal.error, 0.1);
  EXPECT_GE(cal.sweep.back().second, 0.0);
  EXPECT_THROW(calibrate_lambda(sweep(1e4), fields), CalibrationError);
}

TEST(GaugedNorm, IdentityGaugeFormula) {
  const auto g = square_grid(16);
  const auto K = build_gauge(g, std::vector<double>(16), std::vector<double>(16), dysthe(), 1.0);
  const Complex amp(0.6, -0.8);
  const auto u = plane_wave(g, amp, 1, 2);
  const double s = 3.5, k2 = 5.0;
  double expected = 2 * pi * std::pow(1.0 + k2, 1.25);
  for (int a = 0; a <= 3; ++a)
    expected += std::sqrt(2.0) * 2 * pi * std::pow(2.0, 3 - a) * std::pow(1.0 + k2, 0.25);
  EXPECT_NEAR(gauged_norm(u, s, K), expected, 1e-10 * expected);
  EXPECT_EQ(gauged_norm(SpectralField::zeros(g), s, K), 0.0);
  EXPECT_THROW(gauged_norm(u, 3.0, K), std::invalid_argument);
}

TEST(Q0, ZeroProfileAndDiagonalValues) {
  const int n = 16;
  const auto zero = sampled_profile(n, [](double) { return 0.0; });
  const auto one = sampled_profile(n, [](double) { return 1.0; });
  const auto qz = q0_symbol(zero, zero, dysthe(), 1.0);
  const Grid2D &g = qz.grid();
  for (std::size_t m = 0; m < g.size(); m += 7)
    for (const auto &e : qz.evaluate(3, m)) EXPECT_EQ(e, Complex(0.0));

  for (double lambda : {1.0, 1.5}) {
    const auto q = q0_symbol(one, one, dysthe(), lambda);
    const auto e = q.evaluate(5, g.mode_index(1, 0));
    const double expected = smooth_cutoff(1.0 / lambda);
    EXPECT_NEAR(e[0].real(), expected, 1e-14);
    EXPECT_NEAR(e[3].real(), expected, 1e-14);
    EXPECT_EQ(e[1], Complex(0.0));
  }
}

TEST(Q0, NonNegativeForNonNegativeProfile) {
  const auto phi = sampled_profile(16, [](double x) { return 1.0 + std::sin(x); });
  const auto q = q0_symbol(phi, phi, dysthe(), 2.0);
  EXPECT_GE(symbol_positivity_floor(q, 2.0), 0.0);
  auto bad = phi;
  bad.values[3] = -1.0;
  EXPECT_THROW(q0_symbol(bad, phi, dysthe(), 2.0), std::invalid_argument);
}

TEST(MatrixSymbols, ScalarSymbolQuantizesAsMultiplier) {
  const auto g = square_grid(16);
  std::vector<Complex> d1(g.size());
  for (int j = 0; j < 16; ++j)
    for (int i = 0; i < 16; ++i)
      d1[g.index(i, j)] = g.is_nyquist1(i) ? 0.0 : Complex(0.0, g.omega1(i));
  const auto q = scalar_symbol(g, d1);
  const auto u = random_bandlimited(g, 5, 2);
  const auto out = q.apply({u, u.conj()});
  EXPECT_LE(testing::max_diff(out[0], apply_multiplier(u, derivative_multiplier(1))), 1e-12);
  MatrixSymbol m(g);
  EXPECT_THROW(m.add({2, 0, std::vector<Complex>(g.size()), d1}), std::out_of_range);
  EXPECT_THROW(m.add({0, 0, std::vector<Complex>(3), d1}), std::invalid_argument);
}

TEST(MatrixSymbols, FirstOrderPartVanishesAtZeroData) {
  const auto g = square_grid(16);
  const auto model = preset("dysthe");
  const auto a = a_symbol(SpectralField::zeros(g), model.coefficients, model.symbol);
  const auto u = random_bandlimited(g, 4, 1);
  const auto out = a.apply({u, u.conj()});
  // Dysthe has p2 = xi1 / 2: q11 = i p2 acting as d1 / 2.
  const auto expected = Complex(0.5) * apply_multiplier(u, derivative_multiplier(1));
  EXPECT_LE(testing::max_diff(out[0], expected), 1e-12);
  EXPECT_LE(testing::max_diff(out[1], expected.conj()), 1e-12);
}

TEST(Garding, ScalarPositiveSymbol) {
  const auto g = square_grid(16);
  const double lambda = 2.0;
  std::vector<Complex> s(g.size());
  for (int j = 0; j < 16; ++j)
    for (int i = 0; i < 16; ++i) {
      const double r = std::hypot(g.omega1(i), g.omega2(j));
      s[g.index(i, j)] = r * smooth_cutoff(r / lambda);
    }
  EXPECT_GE(garding_probe(scalar_symbol(g, s), lambda, 8), -0.1);
  EXPECT_EQ(garding_probe(MatrixSymbol(g), lambda, 4), 0.0);
}

TEST(Garding, NegativeSymbolReportsFrequencies) {
  const auto g = square_grid(8);
  std::vector<Complex> s(g.size());
  for (int j = 0; j < 8; ++j)
    for (int i = 0; i < 8; ++i) s[g.index(i, j)] = -std::hypot(g.omega1(i), g.omega2(j));
  try {
    garding_probe(scalar_symbol(g, s), 1.0, 2);
    FAIL() << "expected SymbolPositivityError";
  } catch (const SymbolPositivityError &e) {
    EXPECT_EQ(e.offending().size(), g.size() - 1);
  }
}

} // namespace
} // namespace dispersim
