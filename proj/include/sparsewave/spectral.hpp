#pragma once

#include <cstddef>
#include <vector>

#include "sparsewave/greens.hpp"
#include "sparsewave/potential.hpp"
#include "sparsewave/sphere.hpp"
#include "sparsewave/types.hpp"

namespace spw {

// sigma'(E) = k/pi * ||A||^2_{L2(sphere)} at E = k^2, k real positive
double spectral_density(const SphericalField& A, double k);

// Isosceles triangle in the upper half plane: base I = [a, b] on the real
// axis, base angles pi/gamma1, apex on the perpendicular bisector.
struct TriangleDomain {
    double a = 0.5;
    double b = 2.0;
    double gamma1 = 10.0;
    cplx k0;  // probe point, strictly interior

    double base_angle() const { return PI / gamma1; }
    double height() const;
    double side_length() const;
    bool contains(cplx k) const;
};

// validates b > a > 0 and gamma1 > d_config, places the default probe on the
// symmetry axis at a third of the height
TriangleDomain make_triangle(double a, double b, double gamma1, double d_config = 9.0);

// Scans an interior lattice for the point maximizing min_theta |A0(k, theta)|.
// Throws ConvergenceError when the best value stays below the threshold.
cplx choose_probe(const SourceSpec& f, const TriangleDomain& T, const SphereGrid& grid,
                  double threshold = 1e-8);

// Harmonic measure of the triangle boundary seen from the probe, one value per
// boundary segment. Arc length runs from the corner (a, 0) rightward along the
// base, up the right side, and back along the left side.
struct HarmonicMeasure {
    std::vector<double> s;       // segment midpoint, arc-length coordinate
    std::vector<double> x, y;    // segment midpoint in the plane
    std::vector<int> edge;       // 0 base, 1 right side, 2 left side
    std::vector<double> length;
    std::vector<double> mass;    // normalized measure of the segment
    double raw_mass = 0;         // pre-normalization total, a discretization check

    std::size_t size() const { return mass.size(); }
    double density(std::size_t i) const { return mass[i] / length[i]; }
    std::vector<std::size_t> base_segments() const;
};

// Shortley-Weller finite differences on a square lattice of spacing h; the
// measure row comes from one adjoint solve of the discrete Laplacian.
HarmonicMeasure harmonic_measure_triangle(const TriangleDomain& T, double h);

// theta-averaged ln of the WKB comparison factor magnitude at real wavenumber
double log_wkb_magnitude(const SparsePotential& pot, double s);

// the two routes for the inner integral of the J1 display:
//   int sin(2s|u|)/(s|u|^2) V(u) du   over the shell volume
double j1_inner_3d(const LayerSpec& layer, double s, const SphereGrid& grid,
                   int radial_nodes = 8);
// its radial reduction 4 pi int v(r) sin(2sr)/s dr
double j1_inner_1d(const LayerSpec& layer, double s);

// int |V(u)| (1 + |u|^2)^{-1.5} du, the shape that bounds |J1|
double wkb_shape_integral(const SparsePotential& pot);

struct J1Result {
    double value = 0;     // int_I omega(s) avg_theta ln|WKB(s, theta)| ds
    double shape = 0;
    double fitted_C = 0;  // |value| / shape
};
J1Result entropy_J1(const SparsePotential& pot, const HarmonicMeasure& omega);

// reduced amplitude sampled on the triangle boundary with its measure weight
struct ProbeAmplitude {
    cplx k;
    double weight = 0;
    bool on_base = true;
    SphericalField reduced;
};

struct J2Result {
    double value = 0;          // base integral of avg_theta ln|reduced|
    double side_integral = 0;
    double center_min_abs = 0; // min_theta |reduced at the probe|
    double chain_lower = 0;    // mean-value route: center average minus side integral
    bool certificate_ok = true;
};

// The certificate fails (without throwing) when the reduced amplitude
// degenerates at the probe or a boundary sample; value is -inf in that case.
J2Result entropy_J2(const std::vector<ProbeAmplitude>& probes,
                    const SphericalField& reduced_at_k0, double vanish_tol = 1e-12);

struct EntropyReport {
    int n = 0;
    double J1 = 0, J2 = 0;
    double lhs = 0;  // int_I omega ln sigma'
    bool jensen_ok = false;
};

struct EntropySummary {
    std::vector<EntropyReport> reports;
    double min_lhs = 0;
    double threshold = 0;    // fixed floor the min is checked against
    bool uniform_ok = false;
    cplx k0;
    double measure_raw_mass = 0;
};

// Runs the chain for 0..n_max crossed layers of a symmetric potential with a
// radial source: real-k amplitudes come from the radial oracle, the measure
// from one finite-difference solve shared across n. grid_h = 0 picks
// (b - a)/400.
EntropySummary entropy_lower_bound(const SparsePotential& pot, const SourceSpec& f,
                                   const TriangleDomain& T, int n_max, double grid_h = 0);

}  // namespace spw
