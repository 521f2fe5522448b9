#pragma once

#include <cstdint>

#include "sparsewave/potential.hpp"
#include "sparsewave/sphere.hpp"
#include "sparsewave/types.hpp"

namespace spw {

// WKB(theta) = exp[-(4 pi)^{-1} int e^{ik(|t| - <theta,t>)}/|t| V(t) dt] over all
// layers of pot. Symmetric layers integrate over (r, polar angle) with panel
// counts tied to |k| R; other layers use the grid and require it to resolve
// the shell phase.
SphericalField wkb_factor(const SparsePotential& pot, cplx k, const SphereGrid& grid);

// all-symmetric reduction: exp[-int V(r) (e^{2ikr}-1)/(2ik) dr] by 1-D quadrature
cplx wkb_factor_symmetric(const SparsePotential& pot, cplx k);
cplx wkb_exponent_symmetric(const SparsePotential& pot, cplx k);

// the (r, polar) product-quadrature exponent of one symmetric layer; used as
// the 3-D route where the grid cannot resolve |k| R
cplx wkb_exponent_axial(const LayerSpec& layer, cplx k);

// half-line comparison formula exp[-(i/2k) int_0^inf V(r) dr], real k != 0
cplx wkb_1d(const SparsePotential& pot, double k);

struct MomentStats {
    cplx mean;
    double mean_std_error = 0.0;
    double second_moment = 0.0;
    double second_moment_std_error = 0.0;
    int trials = 0;
};

// Monte-Carlo mean and second moment of the WKB exponent integral of one
// random-bump layer at a single observation direction.
MomentStats randomized_wkb_moment(const LayerSpec& layer, cplx k, const Vec3& theta, int trials,
                                  std::uint64_t seed);

// deterministic exponent integral of one bump (linearity makes the trial
// exponent the signed sum of these)
cplx bump_exponent_integral(const Bump& bump, cplx k, const Vec3& theta);

}  // namespace spw
