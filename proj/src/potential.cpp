#include "sparsewave/potential.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "sparsewave/special.hpp"

namespace spw {

double RadialTable::operator()(double radius) const {
    if (r.size() < 2 || radius < r.front() || radius > r.back()) return 0.0;
    auto it = std::upper_bound(r.begin(), r.end(), radius);
    if (it == r.begin()) return v.front();
    if (it == r.end()) return v.back();
    std::size_t hi = static_cast<std::size_t>(it - r.begin());
    std::size_t lo = hi - 1;
    double t = (radius - r[lo]) / (r[hi] - r[lo]);
    return v[lo] + t * (v[hi] - v[lo]);
}

double RadialTable::max_abs() const {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// compact-support bump shape, psi(0)=1, psi(1)=0
double bump_shape(double s) {
    if (s >= 1.0) return 0.0;
    double u = 1.0 - s * s;
    return u * u;
}

}  // namespace

double bump_sign(std::uint64_t seed, int trial, int bump) {
    std::uint64_t h = splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(trial) * 0x8c98cab1667ed515ULL +
                                                   static_cast<std::uint64_t>(bump)));
    return (h & 1u) ? 1.0 : -1.0;
}

double LayerSpec::evaluate(const Vec3& x, int trial) const {
    double radius = x.norm();
    if (radius <= inner_radius || radius >= outer_radius()) return 0.0;
    switch (kind) {
        case LayerKind::Constant:
            return constant_value;
        case LayerKind::Radial:
            return radial(radius);
        case LayerKind::Harmonic: {
            Vec3 dir = x * (1.0 / radius);
            double sum = 0.0;
            for (const auto& part : harmonics)
                sum += part.profile(radius) * real_sph_harmonic(part.degree, part.order, dir);
            return sum;
        }
        case LayerKind::RandomBumps: {
            double sum = 0.0;
            for (std::size_t b = 0; b < bumps.size(); ++b) {
                Vec3 d = x - bumps[b].center;
                double dist = d.norm();
                if (dist >= bumps[b].radius) continue;
                sum += bump_sign(seed, trial, static_cast<int>(b)) * bumps[b].amplitude *
                       bump_shape(dist / bumps[b].radius);
            }
            return sum;
        }
    }
    return 0.0;
}

double LayerSpec::radial_value(double radius) const {
    if (!symmetric()) throw InvalidInput("radial_value: layer is not spherically symmetric");
    if (radius <= inner_radius || radius >= outer_radius()) return 0.0;
    return kind == LayerKind::Constant ? constant_value : radial(radius);
}

LayerSpec make_constant_layer(int index, double inner_radius, double value) {
    LayerSpec s;
    s.index = index;
    s.inner_radius = inner_radius;
    s.kind = LayerKind::Constant;
    s.constant_value = value;
    s.bound = std::abs(value);
    return s;
}

LayerSpec make_radial_layer(int index, double inner_radius, RadialTable profile) {
    if (profile.r.size() != profile.v.size() || profile.r.size() < 2)
        throw InvalidInput("make_radial_layer: table needs matching (r, v) with at least 2 rows");
    if (profile.r.front() < inner_radius || profile.r.back() > inner_radius + 1.0)
        throw InvalidInput("make_radial_layer: table support leaves the unit shell");
    LayerSpec s;
    s.index = index;
    s.inner_radius = inner_radius;
    s.kind = LayerKind::Radial;
    s.bound = profile.max_abs();
    s.radial = std::move(profile);
    return s;
}

LayerSpec make_harmonic_layer(int index, double inner_radius, std::vector<HarmonicComponent> parts) {
    LayerSpec s;
    s.index = index;
    s.inner_radius = inner_radius;
    s.kind = LayerKind::Harmonic;
    // sup bound: sum of per-part sups; |Y_m^l| <= sqrt((2m+1)/(4pi))
    double b = 0.0;
    for (const auto& part : parts) {
        if (std::abs(part.order) > part.degree)
            throw InvalidInput("make_harmonic_layer: |order| exceeds degree");
        b += part.profile.max_abs() * std::sqrt((2.0 * part.degree + 1.0) / (4.0 * PI));
    }
    s.bound = b;
    s.harmonics = std::move(parts);
    return s;
}

LayerSpec make_random_bump_layer(int index, double inner_radius, int count, double amplitude,
                                 double bump_radius, std::uint64_t seed) {
    if (count < 1) throw InvalidInput("make_random_bump_layer: need at least one bump");
    if (bump_radius <= 0.0 || 2.0 * bump_radius >= 1.0)
        throw InvalidInput("make_random_bump_layer: bump radius must fit the unit shell");
    LayerSpec s;
    s.index = index;
    s.inner_radius = inner_radius;
    s.kind = LayerKind::RandomBumps;
    s.seed = seed;
    s.bound = std::abs(amplitude);

    // rejection-sample nonoverlapping centers inside the shell, pure function of the seed
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double rlo = inner_radius + bump_radius;
    double rhi = inner_radius + 1.0 - bump_radius;
    int attempts = 0;
    while (static_cast<int>(s.bumps.size()) < count) {
        if (++attempts > 100000)
            throw InvalidInput("make_random_bump_layer: could not place bumps without overlap");
        double rad = rlo + (rhi - rlo) * unif(rng);
        double ct = 2.0 * unif(rng) - 1.0;
        double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
        double phi = 2.0 * PI * unif(rng);
        Vec3 c{rad * st * std::cos(phi), rad * st * std::sin(phi), rad * ct};
        bool clear = true;
        for (const auto& b : s.bumps) {
            if ((c - b.center).norm() < 2.0 * bump_radius) {
                clear = false;
                break;
            }
        }
        if (clear) s.bumps.push_back({c, bump_radius, amplitude});
    }
    return s;
}

void SparsePotential::validate() const {
    for (std::size_t i = 0; i < layers.size(); ++i) {
        const auto& l = layers[i];
        if (l.inner_radius <= 0.0) throw InvalidInput("potential: layer inner radius must be positive");
        if (l.bound < 0.0) throw InvalidInput("potential: layer bound must be nonnegative");
        if (i > 0 && layers[i - 1].outer_radius() >= l.inner_radius)
            throw InvalidInput("potential: shells must be disjoint with increasing radii");
    }
}

double SparsePotential::l2_norm() const {
    double s = 0.0;
    for (const auto& l : layers) s += l.bound * l.bound;
    return std::sqrt(s);
}

double SparsePotential::evaluate(const Vec3& x, int trial) const {
    double radius = x.norm();
    for (const auto& l : layers) {
        if (radius <= l.inner_radius) break;  // layers ordered; nothing further can contain x
        if (radius < l.outer_radius()) return l.evaluate(x, trial);
    }
    return 0.0;
}

bool SparsePotential::symmetric() const {
    return std::all_of(layers.begin(), layers.end(), [](const LayerSpec& l) { return l.symmetric(); });
}

SparsePotential truncated(const SparsePotential& pot, double R) {
    SparsePotential out;
    for (const auto& l : pot.layers)
        if (l.outer_radius() > R) out.layers.push_back(l);
    return out;
}

SparsePotential head(const SparsePotential& pot, int n) {
    SparsePotential out;
    for (const auto& l : pot.layers)
        if (static_cast<int>(out.layers.size()) < n) out.layers.push_back(l);
    return out;
}

bool SparsenessReport::all_ok() const {
    auto every = [](const std::vector<bool>& f) { return std::all_of(f.begin(), f.end(), [](bool b) { return b; }); };
    return alpha_schedule_ok && every(doubling_ok) && every(sigma_ok) && every(ratio_ok) && every(gap_ok);
}

SparsenessReport validate_sparseness_logs(const std::vector<double>& log_radii, double alpha) {
    if (log_radii.size() < 2) throw InvalidInput("validate_sparseness: need at least 2 layers");
    for (std::size_t i = 1; i < log_radii.size(); ++i)
        if (log_radii[i] <= log_radii[i - 1])
            throw InvalidInput("validate_sparseness: radii must be strictly increasing");

    SparsenessReport rep;
    rep.alpha_schedule_ok = true;
    for (std::size_t i = 0; i + 1 < log_radii.size(); ++i) {
        double n = static_cast<double>(i);
        double la = log_radii[i], lb = log_radii[i + 1];
        double ra = std::exp(la);  // +inf beyond ~e^709; comparisons below then resolve to false
        double log_gap = lb + std::log1p(-std::exp(la - lb));

        rep.doubling_ok.push_back(std::log(2.0) + la < lb);
        rep.log_sigma.push_back(3.5 * la + (ra - log_gap));
        rep.sigma_ok.push_back(rep.log_sigma.back() < -n);
        rep.ratio_ok.push_back(i == 0 || std::log(n) + la - 0.5 * lb < -2.0 * n);
        rep.gap_ok.push_back(i == 0 || log_gap > std::log(n));
        if (!(lb > alpha * ra)) rep.alpha_schedule_ok = false;
    }
    return rep;
}

SparsenessReport validate_sparseness(const SparsePotential& pot, double alpha) {
    if (alpha <= 1.0) throw InvalidInput("validate_sparseness: alpha must exceed 1");
    if (pot.layers.size() < 2) throw InvalidInput("validate_sparseness: need at least 2 layers");
    std::vector<double> lr;
    for (const auto& l : pot.layers) {
        if (l.inner_radius <= 0.0) throw InvalidInput("validate_sparseness: radii must be positive");
        lr.push_back(std::log(l.inner_radius));
    }
    return validate_sparseness_logs(lr, alpha);
}

L2Profile layer_l2_profile(const SparsePotential& pot) {
    L2Profile p;
    double s = 0.0;
    for (const auto& l : pot.layers) {
        p.bounds.emplace_back(l.index, l.bound);
        s += l.bound * l.bound;
    }
    p.l2 = std::sqrt(s);
    return p;
}

}  // namespace spw
