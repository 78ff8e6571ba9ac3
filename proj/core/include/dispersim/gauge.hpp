#pragma once

#include "dispersim/coefficients.hpp"
#include "dispersim/grid.hpp"
#include "dispersim/symbols.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace dispersim {

/// Line-integrated profile phi(y) >= 0 sampled on one axis.
struct PhiProfile {
  int axis = 1;
  std::vector<double> values;
  double length = Grid2D::two_pi;
  double sigma = 0.5;
  double t = 0.0;

  double spacing() const { return length / static_cast<double>(values.size()); }
  /// Riemann sum of the samples.
  double mass() const;
};

/// Largest admissible sigma for regularity s: min(0.9, (s-3)/3).
double default_sigma(double s);

/// phi_1(x1) = int |<D2>^{1/2+sigma} u|^2 dx2 and the symmetric phi_2(x2).
std::pair<PhiProfile, PhiProfile> phi_profiles(const SpectralField &u, double sigma,
                                               double t = 0.0);

/// Discrete B^{order} norm: sup of the first [order] spectral derivatives plus the
/// Holder quotient of the top derivative with exponent order - [order].
double holder_check(const PhiProfile &profile, double order);

/// Running trapezoid integral from the left edge, Phi(0) = 0.
std::vector<double> cumulative_phi(const PhiProfile &profile);

/// 2|a0| + |a1| + |a2|.
double domination_constant(const NonlinearCoefficients &c);

/// phi = c0 (phi_1 + phi_2) sampled on a common line. Requires equal sample
/// counts and lengths on both axes.
PhiProfile combined_profile(const PhiProfile &phi1, const PhiProfile &phi2, double c0);

class CalibrationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class TrappingError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// gamma(x, xi) = Phi1(x1) g1(xi) + Phi2(x2) g2(xi) on grid points and frequencies.
struct GaugeSymbolTable {
  Grid2D grid;
  std::vector<double> Phi1; // n1 samples
  std::vector<double> Phi2; // n2 samples
  std::vector<double> g1;   // FFT order
  std::vector<double> g2;
  double lambda = 1.0;

  double gamma(int i1, int i2, std::size_t mode) const {
    return Phi1[i1] * g1[mode] + Phi2[i2] * g2[mode];
  }
};

/// Frequency factors g_j(xi) = d_j p0(xi) |xi| |grad p0(xi)|^{-2} chi(|xi|/lambda).
std::array<std::vector<double>, 2> gauge_frequency_factors(const Grid2D &grid,
                                                           const DispersiveSymbol &sym,
                                                           double lambda);

/// Direct quantization of exp(+gamma) (K) and exp(-gamma) (K').
class GaugeOperator {
public:
  GaugeOperator(GaugeSymbolTable table);

  const GaugeSymbolTable &table() const { return table_; }
  const Grid2D &grid() const { return table_.grid; }
  double lambda() const { return table_.lambda; }

  /// K u; result is physical.
  SpectralField apply(const SpectralField &u) const;
  /// K' u; result is physical.
  SpectralField apply_inverse(const SpectralField &u) const;

private:
  SpectralField apply_sign(const SpectralField &u, int sign) const;

  GaugeSymbolTable table_;
  // Row tables exp(i w_a x_a + sign Phi_a(x_a) g_a(xi)), indexed [x * size + mode].
  std::vector<Complex> e1_plus_, e2_plus_, e1_minus_, e2_minus_;
};

GaugeOperator build_gauge(const Grid2D &grid, std::vector<double> Phi1,
                          std::vector<double> Phi2, const DispersiveSymbol &sym,
                          double lambda);

/// Random fields with annular spectra on dyadic shells (integer wavenumber
/// radii 2, 4, 8, ...), windowed away from the x = 0 seam, unit L2 norm.
std::vector<SpectralField> gauge_test_fields(const Grid2D &grid, int count,
                                             std::uint64_t seed);

/// max over fields of ||K K' v - v|| / ||v||.
double kk_inverse_error(const GaugeOperator &K, const std::vector<SpectralField> &fields);
/// max over fields of ||K' K v - v|| / ||v||.
double kpk_inverse_error(const GaugeOperator &K, const std::vector<SpectralField> &fields);

struct LambdaCalibration {
  double lambda = 1.0;
  double error = 0.0;
  std::vector<std::pair<double, double>> sweep; // (lambda, error) tried in order
};

/// Smallest lambda in {1, 2, 4, ..., 256} with kk_inverse_error < tol. A lambda
/// whose cutoff removes every grid frequency of nonzero profiles does not count.
LambdaCalibration calibrate_lambda(const std::function<GaugeOperator(double)> &builder,
                                   const std::vector<SpectralField> &fields,
                                   double tol = 0.1);

/// N(u) = sum_{|alpha|=[s]} ||K U_alpha|| + ||u||_{s-1}, U_alpha = (w, conj w),
/// w = <D>^{s-[s]} d^alpha u.
double gauged_norm(const SpectralField &u, double s, const GaugeOperator &K);

/// Everything needed to gauge a single snapshot.
struct SnapshotGauge {
  PhiProfile phi1, phi2, phi;
  std::vector<double> Phi;
  double c0 = 0.0;
};

/// Profiles and cumulative integral for u; phi = C0 (phi1 + phi2).
SnapshotGauge snapshot_gauge(const SpectralField &u, const NonlinearCoefficients &c,
                             double sigma, double t = 0.0);

// ---------------------------------------------------------------------------
// 2x2 matrix symbols

/// One entry contribution F(x) G(xi) at position (row, col).
struct SeparableTerm {
  int row = 0;
  int col = 0;
  std::vector<Complex> x_factor;  // physical samples
  std::vector<Complex> xi_factor; // FFT order
};

/// 2x2 symbol q(x, xi) written as a sum of separable terms. Quantized as
/// (Q U)_r = sum F(x) G(D) U_c, which is exact for separable symbols.
class MatrixSymbol {
public:
  explicit MatrixSymbol(Grid2D grid) : grid_(std::move(grid)) {}

  const Grid2D &grid() const { return grid_; }
  const std::vector<SeparableTerm> &terms() const { return terms_; }
  void add(SeparableTerm term);
  MatrixSymbol &operator+=(const MatrixSymbol &other);

  /// Entries (q11, q12, q21, q22) at a grid point and mode.
  std::array<Complex, 4> evaluate(std::size_t point, std::size_t mode) const;

  std::array<SpectralField, 2> apply(const std::array<SpectralField, 2> &U) const;

private:
  Grid2D grid_;
  std::vector<SeparableTerm> terms_;
};

MatrixSymbol operator+(MatrixSymbol lhs, const MatrixSymbol &rhs);

/// Scalar symbol s(xi) times the identity.
MatrixSymbol scalar_symbol(const Grid2D &grid, const std::vector<Complex> &xi_factor);

/// Q0 = sum_j phi(x_j) |d_j p0|^2 |xi| |grad p0|^{-2} chi(|xi|/lambda) times I.
/// phi_a is sampled on axis 1, phi_b on axis 2.
MatrixSymbol q0_symbol(const PhiProfile &phi_a, const PhiProfile &phi_b,
                       const DispersiveSymbol &sym, double lambda);

/// First-order part of the linearized system for U = (u, conj u).
MatrixSymbol a_symbol(const SpectralField &u, const NonlinearCoefficients &c,
                      const DispersiveSymbol &sym);

class SymbolPositivityError : public std::domain_error {
public:
  SymbolPositivityError(const std::string &what, std::vector<std::array<double, 2>> offending)
      : std::domain_error(what), offending_(std::move(offending)) {}
  const std::vector<std::array<double, 2>> &offending() const { return offending_; }

private:
  std::vector<std::array<double, 2>> offending_;
};

/// Smallest eigenvalue of the Hermitian part over grid points and |xi| >= lambda.
double symbol_positivity_floor(const MatrixSymbol &q, double lambda);

/// min over random U of Re(QU, U) / ||U||^2. Throws SymbolPositivityError when
/// the Hermitian part is negative somewhere with |xi| >= lambda.
double garding_probe(const MatrixSymbol &q, double lambda, int trials,
                     std::uint64_t seed = 7, double tol = 1e-10);

} // namespace dispersim
