#pragma once

#include <functional>
#include <vector>

#include "sparsewave/types.hpp"

namespace spw {

// Product quadrature grid on the unit sphere: Gauss-Legendre rings in
// cos(theta) crossed with a uniform azimuth. Integrates products of
// spherical harmonics exactly up to combined degree 2L.
struct SphereGrid {
    int degree = 0;  // L
    std::vector<Vec3> nodes;     // ring-major, size n_rings * n_phi
    std::vector<double> weights;

    std::vector<double> cos_theta, sin_theta, ring_weight;  // per ring
    std::vector<double> phi;
    std::vector<cplx> phase;  // phase[r] = exp(2*pi*i*r/n_phi)
    int n_phi = 0;

    int n_rings() const { return static_cast<int>(cos_theta.size()); }
    int n_nodes() const { return static_cast<int>(nodes.size()); }
    int node_index(int ring, int j) const { return ring * n_phi + j; }
};

SphereGrid build_grid(int L);

// packed (degree m, order l) coefficient index, |l| <= m
inline int sh_index(int m, int l) { return m * m + m + l; }
inline int sh_count(int L) { return (L + 1) * (L + 1); }

std::vector<cplx> sh_analyze(const SphereGrid& grid, const std::vector<cplx>& values);
std::vector<cplx> sh_synthesize(const SphereGrid& grid, const std::vector<cplx>& coeffs);

struct SphericalField {
    const SphereGrid* grid = nullptr;
    std::vector<cplx> values;
    std::vector<cplx> coeffs;

    void analyze();     // values -> coeffs
    void synthesize();  // coeffs -> values
};

SphericalField field_from_function(const SphereGrid& grid, const std::function<cplx(const Vec3&)>& f);
SphericalField field_from_values(const SphereGrid& grid, std::vector<cplx> values);
SphericalField field_from_coeffs(const SphereGrid& grid, std::vector<cplx> coeffs);

cplx sphere_integral(const SphereGrid& grid, const std::vector<cplx>& values);
double sphere_l2_norm(const SphereGrid& grid, const std::vector<cplx>& values);
double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b);

// coefficient (m,l) -> -m(m+1) coefficient
SphericalField laplace_beltrami_apply(const SphericalField& f);

// exp[-B/(2ikt)] f: coefficient (m,l) multiplied by exp[m(m+1)/(2ikt)].
// Requires Im k >= 0 and t > 0.
SphericalField heat_flow(const SphericalField& f, double t, cplx k);

}  // namespace spw
