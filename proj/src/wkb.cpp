#include "sparsewave/wkb.hpp"

#include <cmath>

#include "sparsewave/greens.hpp"
#include "sparsewave/quadrature.hpp"

namespace spw {

namespace {

std::vector<double> layer_breaks(const LayerSpec& layer) {
    if (layer.kind == LayerKind::Radial) return layer.radial.r;
    return {layer.inner_radius, layer.outer_radius()};
}

// (e^{2ikr} - 1)/(2ik), with the k -> 0 limit r
cplx symmetric_integrand(cplx k, double r) {
    if (std::abs(k) < 1e-9) return r;
    cplx two_ik = 2.0 * I * k;
    return (std::exp(two_ik * r) - 1.0) / two_ik;
}

// exp(ik r (1 - <theta, uhat>)) via 1 - c = |theta - uhat|^2 / 2
cplx shell_phase(cplx k, const Vec3& theta, const Vec3& u) {
    double r = u.norm();
    Vec3 d = theta - u * (1.0 / r);
    return std::exp(I * k * (r * 0.5 * dot(d, d)));
}

const SphereGrid& bump_grid() {
    static SphereGrid g = build_grid(8);
    return g;
}

}  // namespace

cplx wkb_exponent_axial(const LayerSpec& layer, cplx k) {
    if (!layer.symmetric()) throw InvalidInput("wkb_exponent_axial: layer is not spherically symmetric");
    GaussRule radial = gauss_segments(12, layer_breaks(layer));
    cplx total = 0.0;
    for (std::size_t i = 0; i < radial.x.size(); ++i) {
        double r = radial.x[i];
        double v = layer.radial_value(r);
        if (v == 0.0) continue;
        // inner integral over the polar cosine, paneled so each panel sees
        // a bounded stretch of the e^{ikr(1-c)} phase
        int panels = 1 + static_cast<int>(std::ceil(2.0 * std::abs(k) * r / 3.0));
        cplx inner = 0.0;
        double width = 2.0 / panels;
        for (int p = 0; p < panels; ++p) {
            GaussRule gc = gauss_on(8, -1.0 + p * width, -1.0 + (p + 1) * width);
            for (std::size_t j = 0; j < gc.x.size(); ++j)
                inner += gc.w[j] * std::exp(I * k * (r * (1.0 - gc.x[j])));
        }
        total += radial.w[i] * v * r * 0.5 * inner;
    }
    return total;
}

cplx wkb_exponent_symmetric(const SparsePotential& pot, cplx k) {
    if (k.imag() < 0.0) throw InvalidInput("wkb exponent: Im k must be nonnegative");
    cplx total = 0.0;
    for (const auto& layer : pot.layers) {
        if (!layer.symmetric())
            throw InvalidInput("wkb_factor_symmetric: non-symmetric layer present");
        GaussRule rule = gauss_segments(std::max(48, 8 + static_cast<int>(std::ceil(2.0 * std::abs(k)))),
                                        layer_breaks(layer));
        for (std::size_t i = 0; i < rule.x.size(); ++i)
            total += rule.w[i] * layer.radial_value(rule.x[i]) * symmetric_integrand(k, rule.x[i]);
    }
    return total;
}

cplx wkb_factor_symmetric(const SparsePotential& pot, cplx k) {
    return std::exp(-wkb_exponent_symmetric(pot, k));
}

SphericalField wkb_factor(const SparsePotential& pot, cplx k, const SphereGrid& grid) {
    if (k.imag() < 0.0) throw InvalidInput("wkb_factor: Im k must be nonnegative");

    std::vector<cplx> exponent(grid.nodes.size(), 0.0);
    for (const auto& layer : pot.layers) {
        if (layer.symmetric()) {
            cplx e = wkb_exponent_axial(layer, k);
            for (auto& x : exponent) x += e;
            continue;
        }
        int required = 2 + static_cast<int>(std::ceil(std::abs(k) * layer.outer_radius()));
        if (grid.degree < required)
            throw ResolutionError("wkb_factor: grid cannot resolve the shell phase", required);
        auto cells = shell_cells(layer, grid);
        for (const auto& c : cells) {
            double v = layer.evaluate(c.pos);
            if (v == 0.0) continue;
            cplx w = c.weight * v / (4.0 * PI * c.pos.norm());
            for (std::size_t t = 0; t < grid.nodes.size(); ++t)
                exponent[t] += w * shell_phase(k, grid.nodes[t], c.pos);
        }
    }

    std::vector<cplx> values(grid.nodes.size());
    for (std::size_t t = 0; t < grid.nodes.size(); ++t) values[t] = std::exp(-exponent[t]);
    return field_from_values(grid, std::move(values));
}

cplx wkb_1d(const SparsePotential& pot, double k) {
    if (k == 0.0) throw InvalidInput("wkb_1d: k must be nonzero");
    double integral = 0.0;
    for (const auto& layer : pot.layers) {
        if (!layer.symmetric()) throw InvalidInput("wkb_1d: non-symmetric layer present");
        GaussRule rule = gauss_segments(16, layer_breaks(layer));
        for (std::size_t i = 0; i < rule.x.size(); ++i)
            integral += rule.w[i] * layer.radial_value(rule.x[i]);
    }
    return std::exp(-I * integral / (2.0 * k));
}

cplx bump_exponent_integral(const Bump& bump, cplx k, const Vec3& theta) {
    const SphereGrid& g = bump_grid();
    GaussRule radial = gauss_on(10, 0.0, bump.radius);
    cplx total = 0.0;
    for (std::size_t i = 0; i < radial.x.size(); ++i) {
        double s = radial.x[i];
        double u = 1.0 - (s / bump.radius) * (s / bump.radius);
        double shape = u * u;
        double wr = radial.w[i] * s * s * bump.amplitude * shape;
        for (std::size_t a = 0; a < g.nodes.size(); ++a) {
            Vec3 t = bump.center + g.nodes[a] * s;
            total += wr * g.weights[a] * shell_phase(k, theta, t) / t.norm();
        }
    }
    return total / (4.0 * PI);
}

MomentStats randomized_wkb_moment(const LayerSpec& layer, cplx k, const Vec3& theta, int trials,
                                  std::uint64_t seed) {
    if (layer.kind != LayerKind::RandomBumps)
        throw InvalidInput("randomized_wkb_moment: layer must be a random-bump ensemble");
    if (trials < 100) throw InvalidInput("randomized_wkb_moment: need at least 100 trials");

    std::vector<cplx> per_bump;
    per_bump.reserve(layer.bumps.size());
    for (const auto& b : layer.bumps) per_bump.push_back(bump_exponent_integral(b, k, theta));

    cplx sum = 0.0;
    double sum_re2 = 0.0, sum_im2 = 0.0, sum_abs2 = 0.0, sum_abs4 = 0.0;
    for (int t = 0; t < trials; ++t) {
        cplx x = 0.0;
        for (std::size_t b = 0; b < per_bump.size(); ++b)
            x += bump_sign(seed, t, static_cast<int>(b)) * per_bump[b];
        sum += x;
        sum_re2 += x.real() * x.real();
        sum_im2 += x.imag() * x.imag();
        double a2 = std::norm(x);
        sum_abs2 += a2;
        sum_abs4 += a2 * a2;
    }

    MomentStats st;
    st.trials = trials;
    double T = trials;
    st.mean = sum / T;
    double var_re = sum_re2 / T - st.mean.real() * st.mean.real();
    double var_im = sum_im2 / T - st.mean.imag() * st.mean.imag();
    st.mean_std_error = std::sqrt(std::max(0.0, var_re + var_im) / T);
    st.second_moment = sum_abs2 / T;
    double var_abs2 = sum_abs4 / T - st.second_moment * st.second_moment;
    st.second_moment_std_error = std::sqrt(std::max(0.0, var_abs2) / T);
    return st;
}

}  // namespace spw
