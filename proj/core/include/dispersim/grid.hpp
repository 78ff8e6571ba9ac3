#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dispersim {

using Complex = std::complex<double>;

/// Uniform periodic grid on the torus [0,l1) x [0,l2).
///
/// Physical samples are stored row-major with axis 1 contiguous, i.e. the
/// sample at (x1_i, x2_j) lives at index j * n1 + i. Spectral coefficients
/// use the same layout in FFT order: storage index i along an axis holds the
/// wavenumber i for i < n/2 and i - n otherwise.
class Grid2D {
public:
  Grid2D(int n1, int n2, double l1, double l2);

  int n1() const { return n1_; }
  int n2() const { return n2_; }
  double l1() const { return l1_; }
  double l2() const { return l2_; }
  std::size_t size() const { return static_cast<std::size_t>(n1_) * n2_; }

  double dx1() const { return l1_ / n1_; }
  double dx2() const { return l2_ / n2_; }
  double x1(int i) const { return i * dx1(); }
  double x2(int j) const { return j * dx2(); }

  /// Signed wavenumber for storage index i on axis 1 (resp. 2).
  int k1(int i) const { return i < n1_ / 2 ? i : i - n1_; }
  int k2(int j) const { return j < n2_ / 2 ? j : j - n2_; }

  /// Dual frequency 2*pi*k/l for storage index i.
  double omega1(int i) const { return two_pi * k1(i) / l1_; }
  double omega2(int j) const { return two_pi * k2(j) / l2_; }

  bool is_nyquist1(int i) const { return i == n1_ / 2; }
  bool is_nyquist2(int j) const { return j == n2_ / 2; }

  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * n1_ + i;
  }

  /// Storage index for signed wavenumbers; throws if outside the grid.
  std::size_t mode_index(int k1, int k2) const;

  /// Frequencies along each axis in ascending order.
  std::vector<double> frequencies1() const;
  std::vector<double> frequencies2() const;

  /// Same shape with each axis length multiplied by `factor`.
  Grid2D refined(int factor) const;

  bool operator==(const Grid2D &other) const = default;

  static constexpr double two_pi = 6.283185307179586476925286766559;

private:
  int n1_;
  int n2_;
  double l1_;
  double l2_;
};

/// Validating constructor: n1, n2 even and >= 8, l1, l2 > 0.
Grid2D make_grid(int n1, int n2, double l1, double l2);

enum class Representation { physical, spectral };

/// Complex scalar field on a periodic grid.
///
/// Coefficients follow u(x) = sum_k c_k exp(i omega_k . x) with
/// c_k = (1/(n1 n2)) sum_j u(x_j) exp(-i omega_k . x_j).
class SpectralField {
public:
  SpectralField(Grid2D grid, std::vector<Complex> values, Representation rep);

  static SpectralField zeros(const Grid2D &grid,
                             Representation rep = Representation::spectral);
  static SpectralField from_physical(const Grid2D &grid,
                                     std::vector<Complex> values);
  static SpectralField from_spectral(const Grid2D &grid,
                                     std::vector<Complex> coefficients);
  /// Samples f(x1, x2) at the grid points.
  static SpectralField
  sample(const Grid2D &grid, const std::function<Complex(double, double)> &f);

  const Grid2D &grid() const { return grid_; }
  Representation representation() const { return rep_; }
  const std::vector<Complex> &values() const { return values_; }
  std::vector<Complex> &values() { return values_; }

  SpectralField to_spectral() const;
  SpectralField to_physical() const;

  /// Coefficient of the mode with signed wavenumbers (k1, k2).
  Complex coefficient(int k1, int k2) const;

  /// Pointwise complex conjugate of the physical samples.
  SpectralField conj() const;

  SpectralField &operator+=(const SpectralField &rhs);
  SpectralField &operator-=(const SpectralField &rhs);
  SpectralField &operator*=(Complex scale);

private:
  Grid2D grid_;
  std::vector<Complex> values_;
  Representation rep_;
};

SpectralField operator+(SpectralField lhs, const SpectralField &rhs);
SpectralField operator-(SpectralField lhs, const SpectralField &rhs);
SpectralField operator*(Complex scale, SpectralField u);

/// L2 inner product (u, v) = integral of u * conj(v) over the torus.
Complex inner(const SpectralField &u, const SpectralField &v);

/// sqrt(l1 l2 sum_k <omega_k>^{2s} |c_k|^2).
double sobolev_norm(const SpectralField &u, double s);
inline double l2_norm(const SpectralField &u) { return sobolev_norm(u, 0.0); }

/// Fourier multiplier xi -> m(xi) sampled on the grid's dual frequencies.
struct Multiplier {
  std::function<Complex(double, double)> symbol;
  /// Value used at xi = 0 in place of symbol(0, 0).
  std::optional<Complex> zero_mode;
  /// Odd symbols (m(-xi) = -m(xi)) have their Nyquist rows zeroed.
  bool odd = false;

  /// Tabulated values in FFT storage order. Throws on non-finite entries.
  std::vector<Complex> sample(const Grid2D &grid) const;

  static Multiplier identity();
};

SpectralField apply_multiplier(const SpectralField &u, const Multiplier &m);
/// Applies a pre-tabulated multiplier (FFT order, size grid.size()).
SpectralField apply_multiplier(const SpectralField &u,
                               std::span<const Complex> table);

/// Common multipliers.
Multiplier derivative_multiplier(int axis);
Multiplier bessel_multiplier(double s);              // <xi>^s
Multiplier axis_bessel_multiplier(int axis, double s); // <xi_axis>^s

/// Physical samples of u on the grid refined by `factor` (spectral
/// interpolation by zero padding).
std::vector<Complex> padded_physical(const SpectralField &u, int factor);
/// Inverse of padded_physical: transform the fine samples and keep the
/// coefficients that exist on `grid`.
SpectralField truncate_padded(const Grid2D &grid, std::vector<Complex> fine,
                              int factor);

/// Pointwise product of 2 or 3 fields, zero-padded to 2n per axis and
/// truncated back. Result is spectral.
SpectralField dealiased_product(std::span<const SpectralField> factors);
SpectralField dealiased_product(std::initializer_list<SpectralField> factors);

/// Resamples u onto another grid with the same lengths by truncating or
/// padding its coefficients.
SpectralField resample(const SpectralField &u, const Grid2D &target);

/// Binary snapshot: 32-byte header ("DSPF", version, n1, n2, l1, l2) then
/// n1*n2 physical samples as little-endian f64 (re, im) pairs.
inline constexpr std::uint32_t snapshot_version = 1;
void write_snapshot(std::ostream &os, const SpectralField &u);
SpectralField read_snapshot(std::istream &is);
void write_snapshot(const std::string &path, const SpectralField &u);
SpectralField read_snapshot(const std::string &path);

} // namespace dispersim
