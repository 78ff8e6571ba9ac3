#pragma once

#include <complex>

namespace dispersim {

/// Couplings a0..a3 of the cubic right-hand side sum_j a_j f_j(u).
struct NonlinearCoefficients {
  std::complex<double> a0{};
  std::complex<double> a1{};
  std::complex<double> a2{};
  std::complex<double> a3{};

  /// True for the deep-water models: a0, a3 pure-imaginary, a1, a2 real.
  bool physical(double tol = 0.0) const {
    return std::abs(a0.real()) <= tol && std::abs(a3.real()) <= tol &&
           std::abs(a1.imag()) <= tol && std::abs(a2.imag()) <= tol;
  }

  std::complex<double> operator[](int j) const {
    switch (j) {
    case 0: return a0;
    case 1: return a1;
    case 2: return a2;
    default: return a3;
    }
  }

  bool all_zero() const {
    return a0 == 0.0 && a1 == 0.0 && a2 == 0.0 && a3 == 0.0;
  }
};

} // namespace dispersim
