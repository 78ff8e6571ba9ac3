#pragma once

#include "dispersim/coefficients.hpp"
#include "dispersim/grid.hpp"

namespace dispersim {

/// Smooth radial cutoff: 0 for r <= 1/2, 1 for r >= 1, monotone between.
double smooth_cutoff(double r);

/// R1 = d1 (-Delta)^{-1/2}, split as r0 (principal part, i xi1/|xi| chi(xi))
/// plus r_tilde (i xi1/|xi| (1 - chi(xi))). Zero mode and odd Nyquist rows
/// are set to 0 in all three.
struct RieszSplit {
  Multiplier r0;
  Multiplier r_tilde;
  static RieszSplit make();
};

Multiplier riesz_multiplier();

SpectralField riesz_r1(const SpectralField &u);

/// f0 = u R1 d1 |u|^2, f1 = |u|^2 d1 u, f2 = u^2 d1 conj(u), f3 = |u|^2 u.
/// Every cubic is evaluated on the 2x padded grid, so the retained modes are
/// exact. Input and output live on the symmetric band: Nyquist rows and
/// columns are ignored on input and zero on output, which keeps
/// f_j(conj u) = conj f_j(u) exact on the grid. Result is spectral.
SpectralField eval_f(int j, const SpectralField &u);

/// sum_j a_j f_j(u), sharing the padded intermediates between terms.
SpectralField rhs(const SpectralField &u, const NonlinearCoefficients &c);

/// ||uv||_{s-1} / (||u||_{s-1} ||v||_{s-1}).
double product_estimate_probe(const SpectralField &u, const SpectralField &v,
                              double s);

} // namespace dispersim
