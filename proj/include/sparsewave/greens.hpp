#pragma once

#include <utility>
#include <vector>

#include "sparsewave/potential.hpp"
#include "sparsewave/sphere.hpp"
#include "sparsewave/types.hpp"

namespace spw {

// Source supported in the unit ball: radial profile g(r) on [0,1], optionally
// modulated by one spherical harmonic.
struct SourceSpec {
    RadialTable profile;
    int degree = 0;
    int order = 0;
    bool modulated = false;

    cplx evaluate(const Vec3& x) const;
    double l2_norm() const;
    bool radial() const { return !modulated; }
};

SourceSpec ball_source();
SourceSpec radial_source(RadialTable profile);
SourceSpec modulated_source(RadialTable profile, int degree, int order);

struct GreenSample {
    Vec3 x, y;
    cplx k;
    cplx value;      // G(x, y, k)
    cplx free_part;  // e^{ik|x-y|} / (4 pi |x-y|)
    cplx delta;      // value - free_part by construction
};

// A0(f,k,theta) = (4 pi)^{-1} int e^{-ik<theta,x>} f(x) dx, by ball quadrature
// over the grid directions. Grid degree must be >= 2 + ceil(|k|).
SphericalField free_amplitude(const SourceSpec& f, cplx k, const SphereGrid& grid);

// 1-D reduction for a radial source: int_0^1 g(r) j_0(kr) r^2 dr
cplx free_amplitude_radial(const SourceSpec& f, cplx k);

struct BornResult {
    SphericalField amplitude;
    double error_bar = 0.0;         // sup-norm of the last series increment
    int orders_used = 0;
    double contraction = 0.0;       // last ratio of consecutive increment norms
    std::vector<GreenSample> samples;
};

// Born series for the amplitude after <= 3 layers, plus Green-function samples
// at requested point pairs. Im k > 0 required.
BornResult born_solve(const SourceSpec& f, const SparsePotential& pot, cplx k, int order_cap,
                      double tol, const SphereGrid& grid,
                      const std::vector<std::pair<Vec3, Vec3>>& sample_pairs = {});

// sup over grid directions of |u(x) |x| e^{-ik|x|} - A(theta)| for each radius
std::vector<std::pair<double, double>> far_field_remainder(const SourceSpec& f,
                                                           const SparsePotential& pot, cplx k,
                                                           const SphereGrid& grid,
                                                           const std::vector<double>& radii);

// kappa(theta) = (4 pi)^{-1} int_shell v(u)/|u| e^{ik(|u| - <theta,u>)} du
SphericalField kappa(const LayerSpec& layer, cplx k, const SphereGrid& grid);

// symmetric reduction: int_R^{R+1} v(r) (e^{2ikr} - 1)/(2ik) dr
cplx kappa_symmetric(const LayerSpec& layer, cplx k);

struct BetaResult {
    SphericalField field;
    double error_bar = 0.0;  // magnitude of the last inner Born increment
};

// Second-order self-interaction of one layer through the free (or Born-corrected)
// Green function:
//   beta(theta) = (4pi)^{-1} iint e^{-ik<theta,u>} v(u) G(u,w) v(w) e^{ik|w|}/|w| du dw
BetaResult beta(const LayerSpec& layer, cplx k, const SphereGrid& grid, int born_order);

// overflow-safe nested 1-D route for symmetric layers
cplx beta_symmetric(const LayerSpec& layer, cplx k, int born_order);

// quadrature cells of one shell: product of radial Gauss nodes and grid directions
struct VolumeCell {
    Vec3 pos;
    double weight;
};
std::vector<VolumeCell> shell_cells(const LayerSpec& layer, const SphereGrid& grid, int radial_nodes = 8);

}  // namespace spw
