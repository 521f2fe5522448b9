#include "sparsewave/greens.hpp"

#include <algorithm>
#include <cmath>

#include "sparsewave/quadrature.hpp"
#include "sparsewave/special.hpp"

namespace spw {

namespace {

// quadrature of the layer's radial direction; enough nodes for the e^{2ikr}
// oscillation across the unit shell at desk-scale k
GaussRule layer_radial_rule(const LayerSpec& layer, cplx k, int nodes) {
    std::vector<double> breaks;
    if (layer.kind == LayerKind::Radial)
        breaks = layer.radial.r;
    else
        breaks = {layer.inner_radius, layer.outer_radius()};
    int n = std::max(nodes, 8 + static_cast<int>(std::ceil(2.0 * std::abs(k))));
    return gauss_segments(n, breaks);
}

GaussRule source_radial_rule(const SourceSpec& f, cplx k) {
    std::vector<double> breaks = f.profile.r;
    if (breaks.size() < 2) breaks = {0.0, 1.0};
    int n = std::max(16, 8 + static_cast<int>(std::ceil(2.0 * std::abs(k))));
    return gauss_segments(n, breaks);
}

cplx free_kernel(const Vec3& a, const Vec3& b, cplx k) {
    double d = (a - b).norm();
    return std::exp(I * k * d) / (4.0 * PI * d);
}

// phase exp(ik(|u| - <theta,u>)); 1 - <theta,uhat> = |theta - uhat|^2 / 2
// avoids the forward-direction cancellation
cplx outgoing_phase(cplx k, const Vec3& theta, const Vec3& u) {
    double r = u.norm();
    Vec3 d = theta - u * (1.0 / r);
    return std::exp(I * k * (r * 0.5 * dot(d, d)));
}

struct CellSet {
    std::vector<VolumeCell> cells;
    std::vector<double> v;  // potential value at each cell
};

CellSet potential_cells(const SparsePotential& pot, const SphereGrid& grid, int trial) {
    CellSet cs;
    for (const auto& layer : pot.layers) {
        auto cells = shell_cells(layer, grid);
        for (const auto& c : cells) {
            cs.cells.push_back(c);
            cs.v.push_back(layer.evaluate(c.pos, trial));
        }
    }
    return cs;
}

// cell-averaged kernel for the self-pair: 1/|x-u| averaged over the ball of
// equal volume, = 3/(2 rho)
cplx self_kernel(double cell_volume) {
    double rho = std::cbrt(3.0 * cell_volume / (4.0 * PI));
    return cplx(3.0 / (2.0 * rho) / (4.0 * PI), 0.0);
}

}  // namespace

std::vector<VolumeCell> shell_cells(const LayerSpec& layer, const SphereGrid& grid, int radial_nodes) {
    std::vector<double> breaks;
    if (layer.kind == LayerKind::Radial)
        breaks = layer.radial.r;
    else
        breaks = {layer.inner_radius, layer.outer_radius()};
    GaussRule rule = gauss_segments(radial_nodes, breaks);

    std::vector<VolumeCell> cells;
    cells.reserve(rule.x.size() * grid.nodes.size());
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
        double r = rule.x[i];
        double wr = rule.w[i] * r * r;
        for (std::size_t a = 0; a < grid.nodes.size(); ++a)
            cells.push_back({grid.nodes[a] * r, wr * grid.weights[a]});
    }
    return cells;
}

cplx SourceSpec::evaluate(const Vec3& x) const {
    double r = x.norm();
    double g = (r <= profile.r.back() && r >= profile.r.front()) ? profile(r) : 0.0;
    if (g == 0.0) return 0.0;
    if (!modulated) return g;
    if (r == 0.0) return 0.0;
    return g * sph_harmonic(degree, order, x * (1.0 / r));
}

double SourceSpec::l2_norm() const {
    GaussRule rule = gauss_segments(16, profile.r.size() >= 2 ? profile.r : std::vector<double>{0.0, 1.0});
    double s = 0.0;
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
        double g = profile(rule.x[i]);
        s += rule.w[i] * g * g * rule.x[i] * rule.x[i];
    }
    return std::sqrt(modulated ? s : 4.0 * PI * s);
}

SourceSpec ball_source() {
    SourceSpec f;
    f.profile.r = {0.0, 1.0};
    f.profile.v = {1.0, 1.0};
    return f;
}

SourceSpec radial_source(RadialTable profile) {
    SourceSpec f;
    f.profile = std::move(profile);
    if (f.profile.r.empty() || f.profile.r.front() < 0.0 || f.profile.r.back() > 1.0)
        throw InvalidInput("radial_source: profile must live on [0,1]");
    return f;
}

SourceSpec modulated_source(RadialTable profile, int degree, int order) {
    SourceSpec f = radial_source(std::move(profile));
    if (std::abs(order) > degree) throw InvalidInput("modulated_source: |order| exceeds degree");
    f.degree = degree;
    f.order = order;
    f.modulated = true;
    return f;
}

SphericalField free_amplitude(const SourceSpec& f, cplx k, const SphereGrid& grid) {
    if (f.l2_norm() == 0.0) throw InvalidInput("free_amplitude: source is identically zero");
    if (k.imag() < 0.0) throw InvalidInput("free_amplitude: k must lie in the closed upper half-plane");
    int required = 2 + static_cast<int>(std::ceil(std::abs(k)));
    if (grid.degree < required)
        throw ResolutionError("free_amplitude: grid degree below the plane-wave resolution heuristic",
                              required);

    GaussRule rule = source_radial_rule(f, k);
    std::vector<cplx> values(grid.nodes.size(), 0.0);
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
        double r = rule.x[i];
        double wr = rule.w[i] * r * r;
        for (std::size_t a = 0; a < grid.nodes.size(); ++a) {
            cplx fv = f.evaluate(grid.nodes[a] * r);
            if (fv == 0.0) continue;
            cplx contrib = wr * grid.weights[a] * fv / (4.0 * PI);
            for (std::size_t t = 0; t < grid.nodes.size(); ++t) {
                double c = dot(grid.nodes[t], grid.nodes[a]);
                values[t] += contrib * std::exp(-I * k * (r * c));
            }
        }
    }
    return field_from_values(grid, std::move(values));
}

cplx free_amplitude_radial(const SourceSpec& f, cplx k) {
    if (!f.radial()) throw InvalidInput("free_amplitude_radial: source must be radial");
    if (f.l2_norm() == 0.0) throw InvalidInput("free_amplitude_radial: source is identically zero");
    GaussRule rule = source_radial_rule(f, k);
    cplx s = 0.0;
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
        double r = rule.x[i];
        s += rule.w[i] * f.profile(r) * sph_bessel_j(0, k * r) * r * r;
    }
    return s;
}

BornResult born_solve(const SourceSpec& f, const SparsePotential& pot, cplx k, int order_cap,
                      double tol, const SphereGrid& grid,
                      const std::vector<std::pair<Vec3, Vec3>>& sample_pairs) {
    if (pot.layers.size() > 3) throw InvalidInput("born_solve: at most 3 layers supported");
    if (!(k.imag() > 0.0)) throw InvalidInput("born_solve: Im k must be positive");
    for (const auto& l : pot.layers)
        if (l.outer_radius() > 1e3) throw InvalidInput("born_solve: layer radii must stay below 1e3");

    GaussRule src_rule = source_radial_rule(f, k);
    std::vector<VolumeCell> src;
    std::vector<cplx> fval;
    for (std::size_t i = 0; i < src_rule.x.size(); ++i) {
        double r = src_rule.x[i];
        if (r == 0.0) continue;
        for (std::size_t a = 0; a < grid.nodes.size(); ++a) {
            Vec3 p = grid.nodes[a] * r;
            src.push_back({p, src_rule.w[i] * r * r * grid.weights[a]});
            fval.push_back(f.evaluate(p));
        }
    }

    CellSet cs = potential_cells(pot, grid, 0);
    std::size_t N = cs.cells.size();

    // zeroth amplitude increment: the free amplitude on the grid directions
    std::vector<cplx> amp(grid.nodes.size(), 0.0);
    for (std::size_t t = 0; t < grid.nodes.size(); ++t) {
        cplx s = 0.0;
        for (std::size_t j = 0; j < src.size(); ++j)
            s += src[j].weight * fval[j] * std::exp(-I * k * dot(grid.nodes[t], src[j].pos));
        amp[t] = s / (4.0 * PI);
    }

    BornResult out;
    out.orders_used = 0;

    std::vector<cplx> u_inc(N, 0.0);
    if (N > 0) {
        // u0 = G0 f on the potential cells
        for (std::size_t i = 0; i < N; ++i) {
            cplx s = 0.0;
            for (std::size_t j = 0; j < src.size(); ++j)
                s += src[j].weight * fval[j] * free_kernel(cs.cells[i].pos, src[j].pos, k);
            u_inc[i] = s;
        }

        double prev_norm = 0.0;
        int growing = 0;
        for (int order = 1; order <= order_cap; ++order) {
            std::vector<cplx> a_inc(grid.nodes.size(), 0.0);
            for (std::size_t i = 0; i < N; ++i) {
                cplx w = cs.cells[i].weight * cs.v[i] * u_inc[i];
                if (w == 0.0) continue;
                for (std::size_t t = 0; t < grid.nodes.size(); ++t)
                    a_inc[t] -= w * std::exp(-I * k * dot(grid.nodes[t], cs.cells[i].pos));
            }
            double inc_norm = 0.0;
            for (std::size_t t = 0; t < grid.nodes.size(); ++t) {
                a_inc[t] /= 4.0 * PI;
                amp[t] += a_inc[t];
                inc_norm = std::max(inc_norm, std::abs(a_inc[t]));
            }
            out.orders_used = order;
            out.error_bar = inc_norm;
            if (order > 1) {
                out.contraction = prev_norm > 0.0 ? inc_norm / prev_norm : 0.0;
                growing = inc_norm > prev_norm ? growing + 1 : 0;
                if (growing >= 3)
                    throw ConvergenceError("born_solve: increments grew for 3 consecutive orders",
                                           out.contraction);
            }
            prev_norm = inc_norm;
            if (inc_norm < tol || order == order_cap) break;

            // next field increment u_{j+1} = -G0 (V u_j)
            std::vector<cplx> next(N, 0.0);
            for (std::size_t i = 0; i < N; ++i) {
                cplx s = 0.0;
                for (std::size_t j = 0; j < N; ++j) {
                    cplx w = cs.cells[j].weight * cs.v[j] * u_inc[j];
                    if (w == 0.0) continue;
                    s += w * (i == j ? self_kernel(cs.cells[j].weight)
                                     : free_kernel(cs.cells[i].pos, cs.cells[j].pos, k));
                }
                next[i] = -s;
            }
            u_inc.swap(next);
        }
    }

    out.amplitude = field_from_values(grid, std::move(amp));

    for (const auto& pair : sample_pairs) {
        GreenSample smp;
        smp.x = pair.first;
        smp.y = pair.second;
        smp.k = k;
        smp.free_part = free_kernel(smp.x, smp.y, k);
        cplx delta = 0.0;
        if (N > 0) {
            std::vector<cplx> gchain(N);
            for (std::size_t i = 0; i < N; ++i) gchain[i] = free_kernel(cs.cells[i].pos, smp.y, k);
            for (int order = 1; order <= std::max(1, out.orders_used); ++order) {
                for (std::size_t i = 0; i < N; ++i)
                    delta -= cs.cells[i].weight * cs.v[i] * gchain[i] *
                             free_kernel(smp.x, cs.cells[i].pos, k);
                if (order == std::max(1, out.orders_used)) break;
                std::vector<cplx> next(N, 0.0);
                for (std::size_t i = 0; i < N; ++i) {
                    cplx s = 0.0;
                    for (std::size_t j = 0; j < N; ++j) {
                        cplx w = cs.cells[j].weight * cs.v[j] * gchain[j];
                        if (w == 0.0) continue;
                        s += w * (i == j ? self_kernel(cs.cells[j].weight)
                                         : free_kernel(cs.cells[i].pos, cs.cells[j].pos, k));
                    }
                    next[i] = -s;
                }
                gchain.swap(next);
            }
        }
        smp.delta = delta;
        smp.value = smp.free_part + smp.delta;
        out.samples.push_back(smp);
    }
    return out;
}

std::vector<std::pair<double, double>> far_field_remainder(const SourceSpec& f,
                                                           const SparsePotential& pot, cplx k,
                                                           const SphereGrid& grid,
                                                           const std::vector<double>& radii) {
    double outer = pot.layers.empty() ? 1.0 : pot.layers.back().outer_radius();
    for (double r : radii)
        if (r <= outer)
            throw InvalidInput("far_field_remainder: radii must lie beyond the outermost shell");

    BornResult born = born_solve(f, pot, k, 12, 1e-12, grid);

    // final total field on the potential cells (recomputed series, same truncation)
    CellSet cs = potential_cells(pot, grid, 0);
    std::size_t N = cs.cells.size();
    GaussRule src_rule = source_radial_rule(f, k);
    std::vector<VolumeCell> src;
    std::vector<cplx> fval;
    for (std::size_t i = 0; i < src_rule.x.size(); ++i) {
        double r = src_rule.x[i];
        if (r == 0.0) continue;
        for (std::size_t a = 0; a < grid.nodes.size(); ++a) {
            Vec3 p = grid.nodes[a] * r;
            src.push_back({p, src_rule.w[i] * r * r * grid.weights[a]});
            fval.push_back(f.evaluate(p));
        }
    }
    std::vector<cplx> u_inc(N, 0.0), u_total(N, 0.0);
    for (std::size_t i = 0; i < N; ++i) {
        cplx s = 0.0;
        for (std::size_t j = 0; j < src.size(); ++j)
            s += src[j].weight * fval[j] * free_kernel(cs.cells[i].pos, src[j].pos, k);
        u_inc[i] = u_total[i] = s;
    }
    for (int order = 1; order < born.orders_used; ++order) {
        std::vector<cplx> next(N, 0.0);
        for (std::size_t i = 0; i < N; ++i) {
            cplx s = 0.0;
            for (std::size_t j = 0; j < N; ++j) {
                cplx w = cs.cells[j].weight * cs.v[j] * u_inc[j];
                if (w == 0.0) continue;
                s += w * (i == j ? self_kernel(cs.cells[j].weight)
                                 : free_kernel(cs.cells[i].pos, cs.cells[j].pos, k));
            }
            next[i] = -s;
        }
        u_inc.swap(next);
        for (std::size_t i = 0; i < N; ++i) u_total[i] += u_inc[i];
    }

    std::vector<std::pair<double, double>> out;
    for (double rad : radii) {
        double sup = 0.0;
        for (std::size_t t = 0; t < grid.nodes.size(); ++t) {
            Vec3 x = grid.nodes[t] * rad;
            cplx u = 0.0;
            for (std::size_t j = 0; j < src.size(); ++j)
                u += src[j].weight * fval[j] * free_kernel(x, src[j].pos, k);
            for (std::size_t i = 0; i < N; ++i)
                u -= cs.cells[i].weight * cs.v[i] * u_total[i] * free_kernel(x, cs.cells[i].pos, k);
            cplx rho = u * rad * std::exp(-I * k * rad) - born.amplitude.values[t];
            sup = std::max(sup, std::abs(rho));
        }
        out.emplace_back(rad, sup);
    }
    return out;
}

SphericalField kappa(const LayerSpec& layer, cplx k, const SphereGrid& grid) {
    if (!(k.imag() > 0.0)) throw InvalidInput("kappa: Im k must be positive");

    if (layer.symmetric()) {
        cplx value = kappa_symmetric(layer, k);
        return field_from_values(grid, std::vector<cplx>(grid.nodes.size(), value));
    }

    int required = 2 + static_cast<int>(std::ceil(std::abs(k) * layer.outer_radius()));
    if (grid.degree < required)
        throw ResolutionError("kappa: grid cannot resolve the shell phase", required);

    auto cells = shell_cells(layer, grid);
    std::vector<cplx> values(grid.nodes.size(), 0.0);
    for (const auto& c : cells) {
        double v = layer.evaluate(c.pos);
        if (v == 0.0) continue;
        double r = c.pos.norm();
        cplx w = c.weight * v / (4.0 * PI * r);
        for (std::size_t t = 0; t < grid.nodes.size(); ++t)
            values[t] += w * outgoing_phase(k, grid.nodes[t], c.pos);
    }
    return field_from_values(grid, std::move(values));
}

cplx kappa_symmetric(const LayerSpec& layer, cplx k) {
    if (!layer.symmetric()) throw InvalidInput("kappa_symmetric: layer is not spherically symmetric");
    GaussRule rule = layer_radial_rule(layer, k, 48);
    cplx s = 0.0;
    cplx two_ik = 2.0 * I * k;
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
        double r = rule.x[i];
        s += rule.w[i] * layer.radial_value(r) * (std::exp(two_ik * r) - 1.0) / two_ik;
    }
    return s;
}

cplx beta_symmetric(const LayerSpec& layer, cplx k, int born_order) {
    if (!layer.symmetric()) throw InvalidInput("beta_symmetric: layer is not spherically symmetric");
    if (!(k.imag() > 0.0)) throw InvalidInput("beta_symmetric: Im k must be positive");

    GaussRule rule = layer_radial_rule(layer, k, 48);
    std::size_t n = rule.x.size();
    cplx two_ik = 2.0 * I * k;

    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = layer.radial_value(rule.x[i]);

    // Psi~(r): the inner Green integral with the e^{ikr} factor pulled out, so
    // every exponent keeps a nonnegative imaginary multiple of k
    std::vector<cplx> psi(n);
    for (std::size_t i = 0; i < n; ++i) {
        double r = rule.x[i];
        cplx s = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            double sj = rule.x[j];
            cplx kern = std::exp(two_ik * sj) - std::exp(two_ik * std::max(0.0, sj - r));
            s += rule.w[j] * v[j] * kern;
        }
        psi[i] = s / (two_ik * r);
    }

    auto accumulate = [&](const std::vector<cplx>& p) {
        cplx b = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double r = rule.x[i];
            b += rule.w[i] * v[i] * p[i] * (std::exp(two_ik * r) - 1.0) * r / two_ik;
        }
        return b;
    };

    cplx total = accumulate(psi);
    double prev = std::abs(total);
    int growing = 0;
    for (int order = 1; order <= born_order; ++order) {
        std::vector<cplx> next(n);
        for (std::size_t i = 0; i < n; ++i) {
            double r = rule.x[i];
            cplx s = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                double sj = rule.x[j];
                cplx kern = std::exp(two_ik * sj) - std::exp(two_ik * std::max(0.0, sj - r));
                s += rule.w[j] * v[j] * psi[j] * kern * sj;
            }
            next[i] = -s / (two_ik * r);
        }
        psi.swap(next);
        cplx inc = accumulate(psi);
        total += inc;
        double mag = std::abs(inc);
        growing = mag > prev ? growing + 1 : 0;
        if (growing >= 3)
            throw ConvergenceError("beta_symmetric: inner Born series diverging", mag / prev);
        prev = mag;
    }
    return total;
}

BetaResult beta(const LayerSpec& layer, cplx k, const SphereGrid& grid, int born_order) {
    if (!(k.imag() > 0.0)) throw InvalidInput("beta: Im k must be positive");

    BetaResult out;
    if (layer.symmetric()) {
        // the nested 1-D route is exact for symmetric layers and free of the
        // angular resolution constraint
        cplx lead = beta_symmetric(layer, k, born_order);
        cplx prev_order = born_order > 0 ? beta_symmetric(layer, k, born_order - 1) : lead;
        out.field = field_from_values(grid, std::vector<cplx>(grid.nodes.size(), lead));
        out.error_bar = std::abs(lead - prev_order);
        return out;
    }

    int required = 2 + static_cast<int>(std::ceil(std::abs(k) * layer.outer_radius()));
    if (grid.degree < required)
        throw ResolutionError("beta: grid cannot resolve the shell phase", required);

    auto cells = shell_cells(layer, grid);
    std::size_t N = cells.size();
    std::vector<double> v(N);
    for (std::size_t i = 0; i < N; ++i) v[i] = layer.evaluate(cells[i].pos);

    // Phi(u) = int G(u,w) v(w) e^{ik|w|}/|w| dw, Born-corrected in place
    std::vector<cplx> phi(N, 0.0);
    for (std::size_t i = 0; i < N; ++i) {
        cplx s = 0.0;
        for (std::size_t j = 0; j < N; ++j) {
            if (v[j] == 0.0) continue;
            double rj = cells[j].pos.norm();
            cplx inc = cells[j].weight * v[j] * std::exp(I * k * rj) / rj;
            s += inc * (i == j ? self_kernel(cells[j].weight)
                               : free_kernel(cells[i].pos, cells[j].pos, k));
        }
        phi[i] = s;
    }

    auto angular = [&](const std::vector<cplx>& p) {
        std::vector<cplx> values(grid.nodes.size(), 0.0);
        for (std::size_t i = 0; i < N; ++i) {
            if (v[i] == 0.0 || p[i] == 0.0) continue;
            cplx w = cells[i].weight * v[i] * p[i] / (4.0 * PI);
            for (std::size_t t = 0; t < grid.nodes.size(); ++t)
                values[t] += w * std::exp(-I * k * dot(grid.nodes[t], cells[i].pos));
        }
        return values;
    };

    std::vector<cplx> total = angular(phi);
    double prev = 0.0;
    for (const auto& c : total) prev = std::max(prev, std::abs(c));
    int growing = 0;
    for (int order = 1; order <= born_order; ++order) {
        std::vector<cplx> next(N, 0.0);
        for (std::size_t i = 0; i < N; ++i) {
            cplx s = 0.0;
            for (std::size_t j = 0; j < N; ++j) {
                if (v[j] == 0.0) continue;
                cplx w = cells[j].weight * v[j] * phi[j];
                s += w * (i == j ? self_kernel(cells[j].weight)
                                 : free_kernel(cells[i].pos, cells[j].pos, k));
            }
            next[i] = -s;
        }
        phi.swap(next);
        std::vector<cplx> inc = angular(phi);
        double mag = 0.0;
        for (std::size_t t = 0; t < total.size(); ++t) {
            total[t] += inc[t];
            mag = std::max(mag, std::abs(inc[t]));
        }
        out.error_bar = mag;
        growing = mag > prev ? growing + 1 : 0;
        if (growing >= 3) throw ConvergenceError("beta: inner Born series diverging", mag / prev);
        prev = mag;
    }

    out.field = field_from_values(grid, std::move(total));
    return out;
}

}  // namespace spw
