#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "sparsewave/types.hpp"

namespace spw {

// Piecewise-linear radial profile given as (r, value) pairs with r increasing.
// Evaluates to 0 outside [r.front(), r.back()].
struct RadialTable {
    std::vector<double> r;
    std::vector<double> v;

    double operator()(double radius) const;
    double max_abs() const;
};

struct HarmonicComponent {
    int degree = 0;  // m
    int order = 0;   // l, -degree..degree
    RadialTable profile;
};

struct Bump {
    Vec3 center;
    double radius = 0.0;
    double amplitude = 0.0;  // magnitude; the sign is drawn per (seed, trial, bump)
};

enum class LayerKind { Constant, Radial, Harmonic, RandomBumps };

// One unit-thickness spherical shell {inner_radius < |x| < inner_radius + 1}.
struct LayerSpec {
    int index = 0;
    double inner_radius = 0.0;
    double bound = 0.0;  // certified sup of |v| over the shell
    LayerKind kind = LayerKind::Constant;

    double constant_value = 0.0;
    RadialTable radial;
    std::vector<HarmonicComponent> harmonics;
    std::vector<Bump> bumps;
    std::uint64_t seed = 0;

    double outer_radius() const { return inner_radius + 1.0; }
    bool symmetric() const { return kind == LayerKind::Constant || kind == LayerKind::Radial; }

    // trial selects the bump-sign realization; ignored for deterministic profiles
    double evaluate(const Vec3& x, int trial = 0) const;
    // symmetric layers only (throws otherwise)
    double radial_value(double radius) const;
};

LayerSpec make_constant_layer(int index, double inner_radius, double value);
LayerSpec make_radial_layer(int index, double inner_radius, RadialTable profile);
LayerSpec make_harmonic_layer(int index, double inner_radius, std::vector<HarmonicComponent> parts);
LayerSpec make_random_bump_layer(int index, double inner_radius, int count, double amplitude,
                                 double bump_radius, std::uint64_t seed);

// deterministic Rademacher sign for bump b of the given trial
double bump_sign(std::uint64_t seed, int trial, int bump);

struct SparsePotential {
    std::vector<LayerSpec> layers;

    // throws InvalidInput on ordering/disjointness/thickness violations
    void validate() const;
    double l2_norm() const;
    double evaluate(const Vec3& x, int trial = 0) const;
    bool symmetric() const;
};

// chi_{|x|>R} V at layer granularity: drops layers with outer radius <= R,
// keeps the rest intact (R is expected to fall in a gap)
SparsePotential truncated(const SparsePotential& pot, double R);

// first n layers
SparsePotential head(const SparsePotential& pot, int n);

struct SparsenessReport {
    // per adjacent pair (R_n, R_{n+1}); log_sigma[n] = ln sigma_n
    std::vector<double> log_sigma;
    std::vector<bool> doubling_ok;  // 2 R_n < R_{n+1}
    std::vector<bool> sigma_ok;     // sigma_n < e^{-n}
    std::vector<bool> ratio_ok;     // n R_n / sqrt(R_{n+1}) < e^{-2n}
    std::vector<bool> gap_ok;       // n < R_{n+1} - R_n
    bool alpha_schedule_ok = false; // R_{n+1} > e^{alpha R_n} for all pairs

    bool all_ok() const;
};

SparsenessReport validate_sparseness(const SparsePotential& pot, double alpha);

// same checks on ln R_n directly, for radii far beyond double range
SparsenessReport validate_sparseness_logs(const std::vector<double>& log_radii, double alpha);

struct L2Profile {
    std::vector<std::pair<int, double>> bounds;  // (n, v_n)
    double l2 = 0.0;
};

L2Profile layer_l2_profile(const SparsePotential& pot);

}  // namespace spw
