#include "sparsewave/sphere.hpp"

#include <cmath>

#include "sparsewave/quadrature.hpp"
#include "sparsewave/special.hpp"

namespace spw {

SphereGrid build_grid(int L) {
    if (L < 4 || L > 256) throw InvalidInput("build_grid: degree must lie in [4, 256]");
    SphereGrid g;
    g.degree = L;
    g.n_phi = 2 * L + 1;

    const GaussRule& rule = gauss_legendre(L + 1);
    g.cos_theta = rule.x;
    g.ring_weight = rule.w;
    g.sin_theta.resize(rule.x.size());
    for (std::size_t i = 0; i < rule.x.size(); ++i)
        g.sin_theta[i] = std::sqrt(std::max(0.0, 1.0 - rule.x[i] * rule.x[i]));

    g.phi.resize(g.n_phi);
    g.phase.resize(g.n_phi);
    for (int j = 0; j < g.n_phi; ++j) {
        g.phi[j] = 2.0 * PI * j / g.n_phi;
        g.phase[j] = std::exp(I * g.phi[j]);
    }

    double wphi = 2.0 * PI / g.n_phi;
    g.nodes.reserve(static_cast<std::size_t>(g.n_rings()) * g.n_phi);
    g.weights.reserve(g.nodes.capacity());
    for (int i = 0; i < g.n_rings(); ++i) {
        double ct = g.cos_theta[i], st = g.sin_theta[i];
        for (int j = 0; j < g.n_phi; ++j) {
            g.nodes.push_back({st * std::cos(g.phi[j]), st * std::sin(g.phi[j]), ct});
            g.weights.push_back(g.ring_weight[i] * wphi);
        }
    }
    return g;
}

namespace {

int degree_of_coeff_count(std::size_t count) {
    int L = static_cast<int>(std::lround(std::sqrt(static_cast<double>(count)))) - 1;
    if (sh_count(L) != static_cast<int>(count))
        throw InvalidInput("coefficient vector length is not a full (L+1)^2 block");
    return L;
}

}  // namespace

std::vector<cplx> sh_analyze(const SphereGrid& g, const std::vector<cplx>& values) {
    if (values.size() != g.nodes.size()) throw InvalidInput("sh_analyze: value count does not match grid");
    int L = g.degree;
    int nrings = g.n_rings();
    double wphi = 2.0 * PI / g.n_phi;

    // ring Fourier sums F[i][L+l] = (2pi/n_phi) sum_j f(i,j) exp(-i l phi_j)
    std::vector<cplx> F(static_cast<std::size_t>(nrings) * (2 * L + 1));
    for (int i = 0; i < nrings; ++i) {
        const cplx* row = &values[static_cast<std::size_t>(i) * g.n_phi];
        for (int l = -L; l <= L; ++l) {
            cplx s = 0.0;
            for (int j = 0; j < g.n_phi; ++j) {
                int idx = static_cast<int>((static_cast<long long>(l + g.n_phi) * j) % g.n_phi);
                s += row[j] * std::conj(g.phase[idx]);
            }
            F[static_cast<std::size_t>(i) * (2 * L + 1) + (L + l)] = wphi * s;
        }
    }

    std::vector<cplx> coeffs(sh_count(L), 0.0);
    std::vector<double> leg(L + 1);
    for (int i = 0; i < nrings; ++i) {
        const cplx* Fi = &F[static_cast<std::size_t>(i) * (2 * L + 1)];
        for (int l = 0; l <= L; ++l) {
            legendre_row(L, l, g.cos_theta[i], g.sin_theta[i], leg.data());
            double parity = (l % 2 == 0) ? 1.0 : -1.0;
            for (int m = l; m <= L; ++m) {
                coeffs[sh_index(m, l)] += g.ring_weight[i] * leg[m] * Fi[L + l];
                if (l > 0) coeffs[sh_index(m, -l)] += g.ring_weight[i] * parity * leg[m] * Fi[L - l];
            }
        }
    }
    return coeffs;
}

std::vector<cplx> sh_synthesize(const SphereGrid& g, const std::vector<cplx>& coeffs) {
    int Lc = degree_of_coeff_count(coeffs.size());
    int L = g.degree;
    if (Lc > L)
        throw ResolutionError("sh_synthesize: coefficients exceed the grid band limit", Lc);

    int nrings = g.n_rings();
    // G[i][Lc+l] = sum_m coeff(m,l) Pbar_{m,|l|}(ct_i) (with the negative-order parity)
    std::vector<cplx> G(static_cast<std::size_t>(nrings) * (2 * Lc + 1), 0.0);
    std::vector<double> leg(Lc + 1);
    for (int i = 0; i < nrings; ++i) {
        cplx* Gi = &G[static_cast<std::size_t>(i) * (2 * Lc + 1)];
        for (int l = 0; l <= Lc; ++l) {
            legendre_row(Lc, l, g.cos_theta[i], g.sin_theta[i], leg.data());
            double parity = (l % 2 == 0) ? 1.0 : -1.0;
            for (int m = l; m <= Lc; ++m) {
                Gi[Lc + l] += coeffs[sh_index(m, l)] * leg[m];
                if (l > 0) Gi[Lc - l] += coeffs[sh_index(m, -l)] * parity * leg[m];
            }
        }
    }

    std::vector<cplx> values(g.nodes.size());
    for (int i = 0; i < nrings; ++i) {
        const cplx* Gi = &G[static_cast<std::size_t>(i) * (2 * Lc + 1)];
        for (int j = 0; j < g.n_phi; ++j) {
            cplx s = 0.0;
            for (int l = -Lc; l <= Lc; ++l) {
                int idx = static_cast<int>((static_cast<long long>(l + g.n_phi) * j) % g.n_phi);
                s += Gi[Lc + l] * g.phase[idx];
            }
            values[g.node_index(i, j)] = s;
        }
    }
    return values;
}

void SphericalField::analyze() { coeffs = sh_analyze(*grid, values); }
void SphericalField::synthesize() { values = sh_synthesize(*grid, coeffs); }

SphericalField field_from_function(const SphereGrid& grid, const std::function<cplx(const Vec3&)>& f) {
    SphericalField out;
    out.grid = &grid;
    out.values.reserve(grid.nodes.size());
    for (const auto& n : grid.nodes) out.values.push_back(f(n));
    out.analyze();
    return out;
}

SphericalField field_from_values(const SphereGrid& grid, std::vector<cplx> values) {
    SphericalField out;
    out.grid = &grid;
    out.values = std::move(values);
    out.analyze();
    return out;
}

SphericalField field_from_coeffs(const SphereGrid& grid, std::vector<cplx> coeffs) {
    SphericalField out;
    out.grid = &grid;
    out.coeffs = std::move(coeffs);
    out.coeffs.resize(sh_count(grid.degree), 0.0);
    out.synthesize();
    return out;
}

cplx sphere_integral(const SphereGrid& grid, const std::vector<cplx>& values) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) s += grid.weights[i] * values[i];
    return s;
}

double sphere_l2_norm(const SphereGrid& grid, const std::vector<cplx>& values) {
    double s = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) s += grid.weights[i] * std::norm(values[i]);
    return std::sqrt(s);
}

double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

SphericalField laplace_beltrami_apply(const SphericalField& f) {
    SphericalField out;
    out.grid = f.grid;
    out.coeffs = f.coeffs;
    int L = f.grid->degree;
    for (int m = 0; m <= L; ++m)
        for (int l = -m; l <= m; ++l) out.coeffs[sh_index(m, l)] *= -static_cast<double>(m) * (m + 1);
    out.synthesize();
    return out;
}

SphericalField heat_flow(const SphericalField& f, double t, cplx k) {
    if (k.imag() < 0.0) throw InvalidInput("heat_flow: Im k must be nonnegative");
    if (!(t > 0.0)) throw InvalidInput("heat_flow: t must be positive");
    SphericalField out;
    out.grid = f.grid;
    out.coeffs = f.coeffs;
    int L = f.grid->degree;
    for (int m = 0; m <= L; ++m) {
        cplx factor = std::exp(static_cast<double>(m) * (m + 1) / (2.0 * I * k * t));
        for (int l = -m; l <= m; ++l) out.coeffs[sh_index(m, l)] *= factor;
    }
    out.synthesize();
    return out;
}

}  // namespace spw
