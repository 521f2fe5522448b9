#pragma once

#include <utility>
#include <vector>

#include "sparsewave/greens.hpp"
#include "sparsewave/potential.hpp"
#include "sparsewave/sphere.hpp"
#include "sparsewave/types.hpp"

namespace spw {

// Eigenvalue of the sphere operator at radius t on the degree-m subspace:
//   t * (-i)^m * e^{ikt} j_m(kt).
// Stable for Im k >= 0 at any t (the scaled Bessel routine absorbs e^{ikt}).
cplx o_t_eigenvalue(int m, double t, cplx k);

// Apply the sphere operator through its diagonalization: coefficient (m,l)
// is multiplied by o_t_eigenvalue(m, t, k).
SphericalField o_t_apply(const SphericalField& f, double t, cplx k);

// Same operator evaluated as the double node sum
//   (O_t f)(theta) = t/(4pi) * sum_s w_s e^{ikt(1 - <theta, s>)} f(s),
// kept as an independent route. Throws ResolutionError when the grid degree
// is below 2 + ceil(|k| t).
SphericalField o_t_apply_quadrature(const SphericalField& f, double t, cplx k);

// sup over m-degree coefficients of |(-2ik) o_t_eigenvalue - e^{m(m+1)/(2ikt)}|,
// the defect of the heat-flow parametrix at radius t. Requires t >= 1.
double parametrix_residual(int m, double t, cplx k);

// One-layer transfer f -> f - int_R^{R+1} O_t (q_t f) dt with the radial
// integral on a Gauss rule and O_t applied diagonally. Requires Im k > 0.
SphericalField layer_transfer(const SphericalField& f, const LayerSpec& layer, cplx k);

// Budget of the (est-res)-shaped remainder for crossing the layer of bound
// v_next at radius R_next, previous layer at R_prev (pass 1 for the first
// crossing):
//   C eps^-d v_next [ e^{C eps^-8 sqrt(n)} ( n R_prev / sqrt(R_next)
//                     + R_prev^3 e^{2 eps (R_prev - R_next)} ) + sigma ]
// with sigma = R_prev^3.5 e^{R_prev} / (R_next - R_prev), exponentials
// clamped to stay finite.
double eta_budget(int n, double eps, double v_next, double R_prev, double R_next,
                  double C, double d);

// ln of the same budget, computed in log space so sparse-scale sigma terms
// stay representable even when the budget itself overflows a double.
double eta_budget_log(int n, double eps, double v_next, double R_prev, double R_next,
                      double C, double d);

// A-priori sup bounds carried alongside the recursion:
//   g_n  = A0_sup * exp(C eps^-8 ||v||_2 sqrt(n))
//   g'_n = (A0_grad_sup + C ||v||_2 R_next) * exp(C eps^-8 ||v||_2 sqrt(n))
std::pair<double, double> apriori_envelope(int n, double eps, double v_l2, double A0_sup,
                                           double A0_grad_sup, double R_next, double C);

struct AmplitudeRecord {
    int layer = 0;            // number of layers already crossed
    SphericalField A;
    SphericalField wkb;       // multiplicative comparison factor for the crossed layers
    SphericalField reduced;   // A / wkb, pointwise
    SphericalField kappa;     // linear response of the next layer (empty on the last record)
    SphericalField beta;      // quadratic-and-up response (empty on the last record)
    double eta_bound = 0;     // budget for the neglected remainder of the next crossing
    double envelope_g = 0;
    double envelope_gprime = 0;
    double nu = 0;            // sup |reduced - A_free|
    bool envelope_ok = true;  // sup |A| <= envelope_g
};

struct RecursionOptions {
    double eps = 0.3;      // Im k used in the budget shape (not forced to Im k of the run)
    double eta_C = 1.0;
    double eta_d = 2.0;
    double envelope_C = 1.0;
    int born_order = 2;
};

// Crosses the layers in order, A_{n+1} = A_n (1 - kappa_n + beta_n), and
// returns one record per amplitude A_0 .. A_N. eta_bound stays a reported
// budget; it never feeds back into the amplitudes. Requires Im k > 0.
std::vector<AmplitudeRecord> propagate_recursion(const SourceSpec& f, const SparsePotential& pot,
                                                 cplx k, const SphereGrid& grid,
                                                 const RecursionOptions& opt = {});

struct EvolutionOptions {
    double rel_tol = 1e-10;
    // Cross potential-free gaps with the closed-form degree-m factors instead
    // of stepping through them. Turn off to force the integrator everywhere.
    bool exact_free_steps = true;
};

// Solves dU/dt = (2ik)^-1 [B/t^2 - V(t)] U backwards from the data U(t_end)=f
// down to tau, on the coefficient vector. t_end may be +infinity. Internally
// integrates in s = 1/t, which turns the free flow into a constant-coefficient
// system and keeps the infinite horizon finite. Symmetric potentials decouple
// per degree; otherwise the potential couples coefficients through one
// synthesize/analyze round trip per evaluation.
SphericalField evolution_solve(const SphericalField& f, const SparsePotential& pot, cplx k,
                               double tau, double t_end, const EvolutionOptions& opt = {});

// Compares the V-linear term of the layer iteration, -int O_t (q_t f) dt,
// against the Duhamel term (2ik)^-1 int U0(R,t) q_t U0(t,R+1) f dt across one
// layer. Returns the sup-norm discrepancy on the grid nodes.
double duhamel_linear_check(const LayerSpec& layer, cplx k, const SphericalField& f);

}  // namespace spw
