#pragma once

#include "sparsewave/types.hpp"

namespace spw {

// Fully normalized associated Legendre values Pbar_{d,o}(cos theta) for fixed
// order o >= 0 and degrees d = o..degree_max, written to out[o..degree_max].
// Normalization is such that Y_{d,o}(theta,phi) = Pbar_{d,o}(cos theta) e^{i o phi}
// is orthonormal on the unit sphere; Condon-Shortley phase included.
void legendre_row(int degree_max, int order, double cos_theta, double sin_theta, double* out);

// Complex orthonormal spherical harmonic, any order sign.
cplx sph_harmonic(int degree, int order, double cos_theta, double phi);
cplx sph_harmonic(int degree, int order, const Vec3& unit_dir);

// Real orthonormal basis built from the complex one.
double real_sph_harmonic(int degree, int order, const Vec3& unit_dir);

// exp(iz) j_n(z). Stable on the closed upper half plane, including |Im z|
// far beyond the overflow range of sin/cos.
cplx scaled_sph_bessel_j(int n, cplx z);

// Plain j_n(z); requires |Im z| < 700 so the removal of the exp(iz) factor
// stays inside double range.
cplx sph_bessel_j(int n, cplx z);

// j_0..j_nmax in one pass (same restriction as sph_bessel_j).
void sph_bessel_j_array(int nmax, cplx z, cplx* out);

// Riccati-Hankel zeta_n(z) = z h^(1)_n(z), scaled by exp(-iz). Both the value
// and the z-derivative of zeta_n, each with the exp(iz) factor removed; the
// scaled forms are finite rational expressions in 1/z.
struct RiccatiHankel {
  cplx value;
  cplx derivative;
};
RiccatiHankel riccati_hankel_scaled(int n, cplx z);

double factorial(int n);

}  // namespace spw
