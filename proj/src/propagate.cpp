#include "sparsewave/propagate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sparsewave/ode.hpp"
#include "sparsewave/quadrature.hpp"
#include "sparsewave/special.hpp"
#include "sparsewave/wkb.hpp"

namespace spw {

namespace {

const cplx MINUS_I_POW[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};

// degree of the packed coefficient index (indices m^2 .. m^2+2m share degree m)
int degree_of(int idx) {
  return static_cast<int>(std::floor(std::sqrt(idx + 0.5)));
}

SphericalField with_coeffs(const SphericalField& f) {
  SphericalField g = f;
  if (g.coeffs.empty()) g.analyze();
  return g;
}

SphericalField with_values(const SphericalField& f) {
  SphericalField g = f;
  if (g.values.empty()) g.synthesize();
  return g;
}

double logsumexp2(double a, double b) {
  const double hi = std::max(a, b);
  if (!std::isfinite(hi)) return hi;
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

// free-flow factor on degree m for a step ds in s = 1/t
cplx free_step_factor(int m, double ds, cplx k) {
  return std::exp(static_cast<double>(m) * (m + 1) * ds / (2.0 * I * k));
}

double radial_at(const SparsePotential& pot, double t) {
  double v = 0;
  for (const auto& layer : pot.layers) {
    if (t > layer.inner_radius && t < layer.outer_radius()) v += layer.radial_value(t);
  }
  return v;
}

bool inside_some_layer(const SparsePotential& pot, double t) {
  for (const auto& layer : pot.layers)
    if (t > layer.inner_radius && t < layer.outer_radius()) return true;
  return false;
}

}  // namespace

cplx o_t_eigenvalue(int m, double t, cplx k) {
  if (m < 0 || t <= 0) throw InvalidInput("o_t_eigenvalue: need m >= 0 and t > 0");
  return t * MINUS_I_POW[m % 4] * scaled_sph_bessel_j(m, k * t);
}

SphericalField o_t_apply(const SphericalField& f, double t, cplx k) {
  SphericalField g = with_coeffs(f);
  const int L = g.grid->degree;
  for (int m = 0; m <= L; ++m) {
    const cplx lam = o_t_eigenvalue(m, t, k);
    for (int l = -m; l <= m; ++l) g.coeffs[sh_index(m, l)] *= lam;
  }
  g.synthesize();
  return g;
}

SphericalField o_t_apply_quadrature(const SphericalField& f, double t, cplx k) {
  SphericalField g = with_values(f);
  const SphereGrid& grid = *g.grid;
  const int required = 2 + static_cast<int>(std::ceil(std::abs(k) * t));
  if (grid.degree < required)
    throw ResolutionError("o_t_apply_quadrature: grid degree below the kernel band", required);

  std::vector<cplx> out(grid.n_nodes());
  const cplx ikt = I * k * t;
  for (int i = 0; i < grid.n_nodes(); ++i) {
    cplx acc = 0;
    for (int j = 0; j < grid.n_nodes(); ++j) {
      acc += grid.weights[j] * std::exp(ikt * (1.0 - dot(grid.nodes[i], grid.nodes[j]))) *
             g.values[j];
    }
    out[i] = t / (4 * PI) * acc;
  }
  SphericalField res = field_from_values(grid, std::move(out));
  res.analyze();
  return res;
}

double parametrix_residual(int m, double t, cplx k) {
  if (t < 1) throw InvalidInput("parametrix_residual: defined for t >= 1");
  if (m == 0) {
    // -2ik lambda_0 - 1 = -e^{2ikt} exactly; forming the difference in
    // floating point would lose the residual under the leading 1
    return std::abs(std::exp(2.0 * I * k * t));
  }
  const cplx exact = -2.0 * I * k * o_t_eigenvalue(m, t, k);
  const cplx model = std::exp(static_cast<double>(m) * (m + 1) / (2.0 * I * k * t));
  return std::abs(exact - model);
}

SphericalField layer_transfer(const SphericalField& f, const LayerSpec& layer, cplx k) {
  if (k.imag() <= 0) throw InvalidInput("layer_transfer: requires Im k > 0");
  SphericalField g = with_values(with_coeffs(f));
  const SphereGrid& grid = *g.grid;
  const int L = grid.degree;

  const int n_t = std::max(8, 8 + static_cast<int>(std::ceil(2 * std::abs(k))));
  GaussRule rule = gauss_on(n_t, layer.inner_radius, layer.outer_radius());

  std::vector<cplx> acc(sh_count(L), 0.0);
  std::vector<cplx> qf(grid.n_nodes());
  for (std::size_t i = 0; i < rule.x.size(); ++i) {
    const double t = rule.x[i];
    for (int j = 0; j < grid.n_nodes(); ++j)
      qf[j] = layer.evaluate(grid.nodes[j] * t) * g.values[j];
    std::vector<cplx> c = sh_analyze(grid, qf);
    for (int m = 0; m <= L; ++m) {
      const cplx lam = rule.w[i] * o_t_eigenvalue(m, t, k);
      for (int l = -m; l <= m; ++l) acc[sh_index(m, l)] += lam * c[sh_index(m, l)];
    }
  }
  std::vector<cplx> out(sh_count(L));
  for (int idx = 0; idx < sh_count(L); ++idx) out[idx] = g.coeffs[idx] - acc[idx];
  SphericalField res = field_from_coeffs(grid, std::move(out));
  res.synthesize();
  return res;
}

double eta_budget_log(int n, double eps, double v_next, double R_prev, double R_next, double C,
                      double d) {
  if (n < 0 || eps <= 0 || v_next < 0 || R_prev <= 0 || R_next <= R_prev || C <= 0)
    throw InvalidInput("eta_budget: bad parameters");
  if (v_next == 0) return -std::numeric_limits<double>::infinity();
  const double eps8 = std::pow(eps, -8.0);
  const double osc = n * R_prev / std::sqrt(R_next) +
                     std::pow(R_prev, 3.0) * std::exp(std::min(700.0, 2 * eps * (R_prev - R_next)));
  const double log_main = C * eps8 * std::sqrt(static_cast<double>(n)) + std::log(osc);
  const double log_sigma = 3.5 * std::log(R_prev) + R_prev - std::log(R_next - R_prev);
  return std::log(C) - d * std::log(eps) + std::log(v_next) + logsumexp2(log_main, log_sigma);
}

double eta_budget(int n, double eps, double v_next, double R_prev, double R_next, double C,
                  double d) {
  return std::exp(eta_budget_log(n, eps, v_next, R_prev, R_next, C, d));
}

std::pair<double, double> apriori_envelope(int n, double eps, double v_l2, double A0_sup,
                                           double A0_grad_sup, double R_next, double C) {
  if (n < 0 || eps <= 0 || v_l2 < 0 || C <= 0) throw InvalidInput("apriori_envelope: bad parameters");
  const double growth = std::exp(C * std::pow(eps, -8.0) * v_l2 * std::sqrt(static_cast<double>(n)));
  return {A0_sup * growth, (A0_grad_sup + C * v_l2 * R_next) * growth};
}

std::vector<AmplitudeRecord> propagate_recursion(const SourceSpec& f, const SparsePotential& pot,
                                                 cplx k, const SphereGrid& grid,
                                                 const RecursionOptions& opt) {
  if (k.imag() <= 0) throw InvalidInput("propagate_recursion: requires Im k > 0");
  pot.validate();

  SphericalField A0 = free_amplitude(f, k, grid);
  double A0_sup = 0, A0_grad_sup = 0;
  for (const cplx& v : A0.values) A0_sup = std::max(A0_sup, std::abs(v));
  for (int idx = 0; idx < sh_count(grid.degree); ++idx) {
    const int m = degree_of(idx);
    if (m == 0) continue;
    A0_grad_sup += std::abs(A0.coeffs[idx]) *
                   std::sqrt(m * (m + 1.0) * (2 * m + 1.0) / (4 * PI));
  }
  const double v_l2 = pot.l2_norm();
  const int N = static_cast<int>(pot.layers.size());

  std::vector<AmplitudeRecord> records;
  records.reserve(N + 1);
  SphericalField cur = A0;
  for (int n = 0; n <= N; ++n) {
    AmplitudeRecord rec;
    rec.layer = n;
    rec.A = cur;
    rec.wkb = with_values(wkb_factor(head(pot, n), k, grid));

    std::vector<cplx> red(cur.values.size());
    for (std::size_t i = 0; i < red.size(); ++i) red[i] = cur.values[i] / rec.wkb.values[i];
    rec.reduced = field_from_values(grid, std::move(red));
    rec.reduced.analyze();
    rec.nu = max_abs_diff(rec.reduced.values, A0.values);

    const double R_next = n < N ? pot.layers[n].inner_radius
                                : (N > 0 ? pot.layers[N - 1].outer_radius() : 1.0);
    const auto [g, gp] = apriori_envelope(n, opt.eps, v_l2, A0_sup, A0_grad_sup, R_next,
                                          opt.envelope_C);
    rec.envelope_g = g;
    rec.envelope_gprime = gp;
    double sup = 0;
    for (const cplx& v : cur.values) sup = std::max(sup, std::abs(v));
    rec.envelope_ok = sup <= g;

    if (n < N) {
      const LayerSpec& layer = pot.layers[n];
      rec.kappa = kappa(layer, k, grid);
      BetaResult br = beta(layer, k, grid, opt.born_order);
      rec.beta = br.field;
      const double R_prev = n == 0 ? 1.0 : pot.layers[n - 1].inner_radius;
      rec.eta_bound = eta_budget(n, opt.eps, layer.bound, R_prev, layer.inner_radius, opt.eta_C,
                                 opt.eta_d);

      std::vector<cplx> next(cur.values.size());
      for (std::size_t i = 0; i < next.size(); ++i)
        next[i] = cur.values[i] * (1.0 - rec.kappa.values[i] + rec.beta.values[i]);
      records.push_back(std::move(rec));
      cur = field_from_values(grid, std::move(next));
      cur.analyze();
    } else {
      records.push_back(std::move(rec));
    }
  }
  return records;
}

SphericalField evolution_solve(const SphericalField& f, const SparsePotential& pot, cplx k,
                               double tau, double t_end, const EvolutionOptions& opt) {
  if (tau <= 0) throw InvalidInput("evolution_solve: requires tau > 0");
  if (!(t_end > tau)) throw InvalidInput("evolution_solve: requires t_end > tau");
  if (std::abs(k) == 0.0 || k.imag() < 0)
    throw InvalidInput("evolution_solve: requires k != 0 with Im k >= 0");

  SphericalField g = with_coeffs(f);
  const SphereGrid& grid = *g.grid;
  const int L = grid.degree;
  const int nc = sh_count(L);
  std::vector<cplx> c = g.coeffs;

  // breakpoints in s = 1/t, ascending from s = 1/t_end toward 1/tau
  const double s_lo = std::isinf(t_end) ? 0.0 : 1.0 / t_end;
  const double s_hi = 1.0 / tau;
  std::vector<double> s_pts{s_lo, s_hi};
  for (const auto& layer : pot.layers) {
    for (double b : {layer.inner_radius, layer.outer_radius()}) {
      if (b > tau && b < t_end) s_pts.push_back(1.0 / b);
    }
  }
  std::sort(s_pts.begin(), s_pts.end());
  s_pts.erase(std::unique(s_pts.begin(), s_pts.end()), s_pts.end());

  const bool symmetric = pot.symmetric();
  std::vector<int> degree(nc);
  for (int idx = 0; idx < nc; ++idx) degree[idx] = degree_of(idx);

  const cplx half_ik = 1.0 / (2.0 * I * k);

  OdeRhs rhs_symmetric = [&](double s, const std::vector<cplx>& y, std::vector<cplx>& dy) {
    const double v = s > 0 ? radial_at(pot, 1.0 / s) : 0.0;
    const double vt2 = v != 0 ? v / (s * s) : 0.0;
    for (int idx = 0; idx < nc; ++idx) {
      const double mm = degree[idx] * (degree[idx] + 1.0);
      dy[idx] = half_ik * (mm + vt2) * y[idx];
    }
  };
  OdeRhs rhs_general = [&](double s, const std::vector<cplx>& y, std::vector<cplx>& dy) {
    const double t = 1.0 / s;
    std::vector<cplx> vals = sh_synthesize(grid, y);
    for (int j = 0; j < grid.n_nodes(); ++j) vals[j] *= pot.evaluate(grid.nodes[j] * t);
    std::vector<cplx> vc = sh_analyze(grid, vals);
    const double t2 = t * t;
    for (int idx = 0; idx < nc; ++idx) {
      const double mm = degree[idx] * (degree[idx] + 1.0);
      dy[idx] = half_ik * (mm * y[idx] + t2 * vc[idx]);
    }
  };

  for (std::size_t seg = 0; seg + 1 < s_pts.size(); ++seg) {
    const double s1 = s_pts[seg], s2 = s_pts[seg + 1];
    const bool free_seg = s1 == 0 || !inside_some_layer(pot, 2.0 / (s1 + s2));
    if (free_seg && opt.exact_free_steps) {
      for (int idx = 0; idx < nc; ++idx) c[idx] *= free_step_factor(degree[idx], s2 - s1, k);
    } else if (free_seg || symmetric) {
      rk45_integrate(rhs_symmetric, s1, s2, c, opt.rel_tol);
    } else {
      rk45_integrate(rhs_general, s1, s2, c, opt.rel_tol);
    }
  }

  SphericalField res = field_from_coeffs(grid, std::move(c));
  res.synthesize();
  return res;
}

double duhamel_linear_check(const LayerSpec& layer, cplx k, const SphericalField& f) {
  if (k.imag() <= 0) throw InvalidInput("duhamel_linear_check: requires Im k > 0");
  SphericalField g = with_values(with_coeffs(f));
  const SphereGrid& grid = *g.grid;
  const int L = grid.degree;
  const int nc = sh_count(L);
  const double a = layer.inner_radius, b = layer.outer_radius();

  GaussRule rule = gauss_on(8, a, b);
  std::vector<cplx> iter_acc(nc, 0.0), duh_acc(nc, 0.0);
  std::vector<cplx> qf(grid.n_nodes());
  for (std::size_t i = 0; i < rule.x.size(); ++i) {
    const double t = rule.x[i];
    const double w = rule.w[i];

    for (int j = 0; j < grid.n_nodes(); ++j)
      qf[j] = layer.evaluate(grid.nodes[j] * t) * g.values[j];
    std::vector<cplx> c = sh_analyze(grid, qf);
    for (int idx = 0; idx < nc; ++idx)
      iter_acc[idx] += w * o_t_eigenvalue(degree_of(idx), t, k) * c[idx];

    // U0(t, b) f, multiply by q_t, then U0(a, t)
    std::vector<cplx> inner = g.coeffs;
    for (int idx = 0; idx < nc; ++idx)
      inner[idx] *= free_step_factor(degree_of(idx), 1.0 / t - 1.0 / b, k);
    std::vector<cplx> vals = sh_synthesize(grid, inner);
    for (int j = 0; j < grid.n_nodes(); ++j) vals[j] *= layer.evaluate(grid.nodes[j] * t);
    std::vector<cplx> outer = sh_analyze(grid, vals);
    for (int idx = 0; idx < nc; ++idx)
      outer[idx] *= free_step_factor(degree_of(idx), 1.0 / a - 1.0 / t, k);
    for (int idx = 0; idx < nc; ++idx) duh_acc[idx] += w * outer[idx];
  }

  const cplx half_ik = 1.0 / (2.0 * I * k);
  std::vector<cplx> diff(nc);
  for (int idx = 0; idx < nc; ++idx) diff[idx] = -iter_acc[idx] - half_ik * duh_acc[idx];
  std::vector<cplx> vals = sh_synthesize(grid, diff);
  double sup = 0;
  for (const cplx& v : vals) sup = std::max(sup, std::abs(v));
  return sup;
}

}  // namespace spw
