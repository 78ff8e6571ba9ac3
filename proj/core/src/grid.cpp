#include "dispersim/grid.hpp"

#include "fft.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace dispersim {

using detail::FftDirection;
using detail::fft2d;

Grid2D::Grid2D(int n1, int n2, double l1, double l2)
    : n1_(n1), n2_(n2), l1_(l1), l2_(l2) {
  if (n1 < 8 || n2 < 8 || n1 % 2 != 0 || n2 % 2 != 0)
    throw std::invalid_argument("grid: sizes must be even and >= 8, got " +
                                std::to_string(n1) + "x" + std::to_string(n2));
  if (!(l1 > 0.0) || !(l2 > 0.0) || !std::isfinite(l1) || !std::isfinite(l2))
    throw std::invalid_argument("grid: side lengths must be positive");
}

Grid2D make_grid(int n1, int n2, double l1, double l2) {
  return Grid2D(n1, n2, l1, l2);
}

std::size_t Grid2D::mode_index(int k1, int k2) const {
  if (k1 < -n1_ / 2 || k1 >= n1_ / 2 || k2 < -n2_ / 2 || k2 >= n2_ / 2)
    throw std::out_of_range("grid: wavenumber outside the grid");
  const int i = k1 >= 0 ? k1 : k1 + n1_;
  const int j = k2 >= 0 ? k2 : k2 + n2_;
  return index(i, j);
}

namespace {

std::vector<double> ascending(int n, double l) {
  std::vector<double> out(n);
  for (int k = -n / 2; k < n / 2; ++k) out[k + n / 2] = Grid2D::two_pi * k / l;
  return out;
}

void require_same_grid(const Grid2D &a, const Grid2D &b, const char *what) {
  if (!(a == b)) throw std::invalid_argument(std::string(what) + ": grid mismatch");
}

} // namespace

std::vector<double> Grid2D::frequencies1() const { return ascending(n1_, l1_); }
std::vector<double> Grid2D::frequencies2() const { return ascending(n2_, l2_); }

Grid2D Grid2D::refined(int factor) const {
  return Grid2D(n1_ * factor, n2_ * factor, l1_, l2_);
}

// ---------------------------------------------------------------------------

SpectralField::SpectralField(Grid2D grid, std::vector<Complex> values,
                             Representation rep)
    : grid_(grid), values_(std::move(values)), rep_(rep) {
  if (values_.size() != grid_.size())
    throw std::invalid_argument("field: value count does not match grid");
}

SpectralField SpectralField::zeros(const Grid2D &grid, Representation rep) {
  return SpectralField(grid, std::vector<Complex>(grid.size()), rep);
}

SpectralField SpectralField::from_physical(const Grid2D &grid,
                                           std::vector<Complex> values) {
  return SpectralField(grid, std::move(values), Representation::physical);
}

SpectralField SpectralField::from_spectral(const Grid2D &grid,
                                           std::vector<Complex> coefficients) {
  return SpectralField(grid, std::move(coefficients), Representation::spectral);
}

SpectralField
SpectralField::sample(const Grid2D &grid,
                      const std::function<Complex(double, double)> &f) {
  std::vector<Complex> v(grid.size());
  for (int j = 0; j < grid.n2(); ++j)
    for (int i = 0; i < grid.n1(); ++i) v[grid.index(i, j)] = f(grid.x1(i), grid.x2(j));
  return from_physical(grid, std::move(v));
}

SpectralField SpectralField::to_spectral() const {
  if (rep_ == Representation::spectral) return *this;
  std::vector<Complex> c = values_;
  fft2d(c, grid_.n1(), grid_.n2(), FftDirection::forward);
  const double scale = 1.0 / static_cast<double>(grid_.size());
  for (auto &z : c) z *= scale;
  return from_spectral(grid_, std::move(c));
}

SpectralField SpectralField::to_physical() const {
  if (rep_ == Representation::physical) return *this;
  std::vector<Complex> v = values_;
  fft2d(v, grid_.n1(), grid_.n2(), FftDirection::backward);
  return from_physical(grid_, std::move(v));
}

Complex SpectralField::coefficient(int k1, int k2) const {
  const auto idx = grid_.mode_index(k1, k2);
  if (rep_ == Representation::spectral) return values_[idx];
  return to_spectral().values_[idx];
}

SpectralField SpectralField::conj() const {
  SpectralField p = to_physical();
  for (auto &z : p.values_) z = std::conj(z);
  return p;
}

SpectralField &SpectralField::operator+=(const SpectralField &rhs) {
  require_same_grid(grid_, rhs.grid_, "field +");
  const SpectralField r = rep_ == Representation::spectral ? rhs.to_spectral()
                                                           : rhs.to_physical();
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += r.values_[i];
  return *this;
}

SpectralField &SpectralField::operator-=(const SpectralField &rhs) {
  require_same_grid(grid_, rhs.grid_, "field -");
  const SpectralField r = rep_ == Representation::spectral ? rhs.to_spectral()
                                                           : rhs.to_physical();
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= r.values_[i];
  return *this;
}

SpectralField &SpectralField::operator*=(Complex scale) {
  for (auto &z : values_) z *= scale;
  return *this;
}

SpectralField operator+(SpectralField lhs, const SpectralField &rhs) {
  lhs += rhs;
  return lhs;
}

SpectralField operator-(SpectralField lhs, const SpectralField &rhs) {
  lhs -= rhs;
  return lhs;
}

SpectralField operator*(Complex scale, SpectralField u) {
  u *= scale;
  return u;
}

Complex inner(const SpectralField &u, const SpectralField &v) {
  require_same_grid(u.grid(), v.grid(), "inner");
  const auto cu = u.to_spectral();
  const auto cv = v.to_spectral();
  Complex acc = 0.0;
  for (std::size_t i = 0; i < cu.values().size(); ++i)
    acc += cu.values()[i] * std::conj(cv.values()[i]);
  return acc * (u.grid().l1() * u.grid().l2());
}

double sobolev_norm(const SpectralField &u, double s) {
  const auto c = u.to_spectral();
  const Grid2D &g = u.grid();
  double acc = 0.0;
  for (int j = 0; j < g.n2(); ++j) {
    const double w2 = g.omega2(j);
    for (int i = 0; i < g.n1(); ++i) {
      const double w1 = g.omega1(i);
      const double weight = s == 0.0 ? 1.0 : std::pow(1.0 + w1 * w1 + w2 * w2, s);
      acc += weight * std::norm(c.values()[g.index(i, j)]);
    }
  }
  return std::sqrt(g.l1() * g.l2() * acc);
}

// ---------------------------------------------------------------------------

std::vector<Complex> Multiplier::sample(const Grid2D &grid) const {
  std::vector<Complex> table(grid.size());
  for (int j = 0; j < grid.n2(); ++j) {
    for (int i = 0; i < grid.n1(); ++i) {
      Complex m;
      if (odd && (grid.is_nyquist1(i) || grid.is_nyquist2(j))) {
        m = 0.0;
      } else if (i == 0 && j == 0 && zero_mode) {
        m = *zero_mode;
      } else {
        m = symbol(grid.omega1(i), grid.omega2(j));
      }
      if (!std::isfinite(m.real()) || !std::isfinite(m.imag()))
        throw std::domain_error("multiplier: non-finite value at grid frequency (" +
                                std::to_string(grid.omega1(i)) + ", " +
                                std::to_string(grid.omega2(j)) + ")");
      table[grid.index(i, j)] = m;
    }
  }
  return table;
}

Multiplier Multiplier::identity() {
  return Multiplier{[](double, double) { return Complex(1.0); }, std::nullopt, false};
}

SpectralField apply_multiplier(const SpectralField &u, const Multiplier &m) {
  return apply_multiplier(u, m.sample(u.grid()));
}

SpectralField apply_multiplier(const SpectralField &u,
                               std::span<const Complex> table) {
  if (table.size() != u.grid().size())
    throw std::invalid_argument("apply_multiplier: grid mismatch");
  SpectralField c = u.to_spectral();
  for (std::size_t i = 0; i < table.size(); ++i) c.values()[i] *= table[i];
  return u.representation() == Representation::physical ? c.to_physical() : c;
}

Multiplier derivative_multiplier(int axis) {
  if (axis != 1 && axis != 2) throw std::invalid_argument("derivative: axis must be 1 or 2");
  if (axis == 1)
    return Multiplier{[](double w1, double) { return Complex(0.0, w1); }, std::nullopt, true};
  return Multiplier{[](double, double w2) { return Complex(0.0, w2); }, std::nullopt, true};
}

Multiplier bessel_multiplier(double s) {
  return Multiplier{[s](double w1, double w2) {
                      return Complex(std::pow(1.0 + w1 * w1 + w2 * w2, 0.5 * s));
                    },
                    std::nullopt, false};
}

Multiplier axis_bessel_multiplier(int axis, double s) {
  if (axis != 1 && axis != 2) throw std::invalid_argument("bessel: axis must be 1 or 2");
  return Multiplier{[axis, s](double w1, double w2) {
                      const double w = axis == 1 ? w1 : w2;
                      return Complex(std::pow(1.0 + w * w, 0.5 * s));
                    },
                    std::nullopt, false};
}

// ---------------------------------------------------------------------------

namespace {

// Copies coefficients between grids of different sizes, keeping every
// wavenumber representable on both.
void transfer_modes(const Grid2D &from, std::span<const Complex> src,
                    const Grid2D &to, std::span<Complex> dst) {
  const int h1 = std::min(from.n1(), to.n1()) / 2;
  const int h2 = std::min(from.n2(), to.n2()) / 2;
  for (int k2 = -h2; k2 < h2; ++k2)
    for (int k1 = -h1; k1 < h1; ++k1)
      dst[to.mode_index(k1, k2)] = src[from.mode_index(k1, k2)];
}

} // namespace

std::vector<Complex> padded_physical(const SpectralField &u, int factor) {
  const Grid2D fine = u.grid().refined(factor);
  const SpectralField c = u.to_spectral();
  std::vector<Complex> out(fine.size());
  transfer_modes(u.grid(), c.values(), fine, out);
  fft2d(out, fine.n1(), fine.n2(), FftDirection::backward);
  return out;
}

SpectralField truncate_padded(const Grid2D &grid, std::vector<Complex> fine,
                              int factor) {
  const Grid2D fg = grid.refined(factor);
  if (fine.size() != fg.size()) throw std::invalid_argument("truncate_padded: size mismatch");
  fft2d(fine, fg.n1(), fg.n2(), FftDirection::forward);
  const double scale = 1.0 / static_cast<double>(fg.size());
  std::vector<Complex> c(grid.size());
  transfer_modes(fg, fine, grid, c);
  for (auto &z : c) z *= scale;
  return SpectralField::from_spectral(grid, std::move(c));
}

SpectralField dealiased_product(std::span<const SpectralField> factors) {
  if (factors.size() < 2 || factors.size() > 3)
    throw std::invalid_argument("dealiased_product: expects 2 or 3 factors, got " +
                                std::to_string(factors.size()));
  const Grid2D &g = factors.front().grid();
  for (const auto &f : factors) require_same_grid(g, f.grid(), "dealiased_product");

  std::vector<Complex> acc = padded_physical(factors[0], 2);
  for (std::size_t n = 1; n < factors.size(); ++n) {
    const auto next = padded_physical(factors[n], 2);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] *= next[i];
  }
  return truncate_padded(g, std::move(acc), 2);
}

SpectralField dealiased_product(std::initializer_list<SpectralField> factors) {
  return dealiased_product(std::span<const SpectralField>(factors.begin(), factors.size()));
}

SpectralField resample(const SpectralField &u, const Grid2D &target) {
  if (std::abs(u.grid().l1() - target.l1()) > 1e-12 * target.l1() ||
      std::abs(u.grid().l2() - target.l2()) > 1e-12 * target.l2())
    throw std::invalid_argument("resample: torus lengths differ");
  const SpectralField c = u.to_spectral();
  std::vector<Complex> out(target.size());
  transfer_modes(u.grid(), c.values(), target, out);
  return SpectralField::from_spectral(target, std::move(out));
}

// ---------------------------------------------------------------------------

namespace {

template <typename T> void put_le(std::ostream &os, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  os.write(reinterpret_cast<const char *>(bytes), sizeof(T));
}

template <typename T> T get_le(std::istream &is) {
  unsigned char bytes[sizeof(T)];
  if (!is.read(reinterpret_cast<char *>(bytes), sizeof(T)))
    throw std::runtime_error("snapshot: truncated input");
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

} // namespace

void write_snapshot(std::ostream &os, const SpectralField &u) {
  const Grid2D &g = u.grid();
  os.write("DSPF", 4);
  put_le<std::uint32_t>(os, snapshot_version);
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(g.n1()));
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(g.n2()));
  put_le<double>(os, g.l1());
  put_le<double>(os, g.l2());
  const SpectralField p = u.to_physical();
  for (const Complex &z : p.values()) {
    put_le<double>(os, z.real());
    put_le<double>(os, z.imag());
  }
  if (!os) throw std::runtime_error("snapshot: write failed");
}

SpectralField read_snapshot(std::istream &is) {
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, "DSPF", 4) != 0)
    throw std::runtime_error("snapshot: bad magic");
  const auto version = get_le<std::uint32_t>(is);
  if (version != snapshot_version)
    throw std::runtime_error("snapshot: unsupported version " + std::to_string(version));
  const auto n1 = get_le<std::uint32_t>(is);
  const auto n2 = get_le<std::uint32_t>(is);
  const auto l1 = get_le<double>(is);
  const auto l2 = get_le<double>(is);
  const Grid2D g(static_cast<int>(n1), static_cast<int>(n2), l1, l2);
  std::vector<Complex> v(g.size());
  for (auto &z : v) {
    const double re = get_le<double>(is);
    const double im = get_le<double>(is);
    z = Complex(re, im);
  }
  return SpectralField::from_physical(g, std::move(v));
}

void write_snapshot(const std::string &path, const SpectralField &u) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("snapshot: cannot open " + path);
  write_snapshot(os, u);
}

SpectralField read_snapshot(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("snapshot: cannot open " + path);
  return read_snapshot(is);
}

} // namespace dispersim
