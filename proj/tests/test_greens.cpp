#include <cmath>

#include "doctest.h"
#include "sparsewave/greens.hpp"
#include "sparsewave/sphere.hpp"

using namespace spw;

namespace {

cplx ball_closed_form(cplx k) { return (std::sin(k) - k * std::cos(k)) / (k * k * k); }

// antiderivative route for a constant shell:
//   int_R^{R+1} v (e^{2ikr} - 1)/(2ik) dr
//     = v [ (e^{2ik(R+1)} - e^{2ikR}) / (2ik)^2 - 1/(2ik) ]
cplx constant_kappa_oracle(double R, double v, cplx k) {
  const cplx tik = 2.0 * I * k;
  return v * ((std::exp(tik * (R + 1)) - std::exp(tik * R)) / (tik * tik) - 1.0 / tik);
}

double sup_abs(const SphericalField& f) {
  double m = 0;
  for (const cplx& v : f.values) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

TEST_CASE("ball amplitude matches the closed form on both routes") {
  SphereGrid grid = build_grid(8);
  SourceSpec ball = ball_source();
  for (cplx k : {cplx(0.5, 0.0), cplx(1.3, 0.4), cplx(2.0, 1.0), cplx(0.8, 0.05)}) {
    const cplx expect = ball_closed_form(k);
    CHECK(std::abs(free_amplitude_radial(ball, k) - expect) < 1e-10 * std::abs(expect));

    SphericalField A = free_amplitude(ball, k, grid);
    for (const cplx& v : A.values) CHECK(std::abs(v - expect) < 1e-9 * std::abs(expect));
  }
}

TEST_CASE("radial profile reduces to the 1-d bessel integral") {
  // frozen 30-digit value of int_0^1 (1-r) j_0(kr) r^2 dr at k = 1.3+0.4i
  SourceSpec f = radial_source({{0.0, 1.0}, {1.0, 0.0}});
  const cplx expect(0.075023602632114685249, -0.0053176610641364809849);
  CHECK(std::abs(free_amplitude_radial(f, cplx(1.3, 0.4)) - expect) < 1e-13);

  SphereGrid grid = build_grid(8);
  SphericalField A = free_amplitude(f, cplx(1.3, 0.4), grid);
  for (const cplx& v : A.values) CHECK(std::abs(v - expect) < 1e-9);
}

TEST_CASE("modulated source produces a single harmonic amplitude") {
  // tent profile, degree 2 order 1; frozen int_0^1 g(r) j_2(kr) r^2 dr
  SourceSpec f = modulated_source({{0.0, 0.5, 1.0}, {0.0, 0.5, 0.0}}, 2, 1);
  const cplx k(1.1, 0.2);
  const cplx integral(0.0024209379132505389109, 0.00086284435429403374512);
  const cplx expect_coeff = std::pow(-I, 2) * integral;  // (-i)^m factor

  SphereGrid grid = build_grid(8);
  SphericalField A = free_amplitude(f, k, grid);
  for (int m = 0; m <= 8; ++m)
    for (int l = -m; l <= m; ++l) {
      const cplx c = A.coeffs[sh_index(m, l)];
      if (m == 2 && l == 1)
        CHECK(std::abs(c - expect_coeff) < 1e-10);
      else
        CHECK(std::abs(c) < 1e-10);
    }
}

TEST_CASE("amplitude quadrature reports the needed resolution") {
  SourceSpec ball = ball_source();
  SphereGrid coarse = build_grid(4);
  try {
    free_amplitude(ball, cplx(9.0, 0.2), coarse);
    FAIL("expected a resolution failure");
  } catch (const ResolutionError& e) {
    // |9 + 0.2i| rounds up to 10
    CHECK(e.required_degree == 2 + 10);
  }
}

TEST_CASE("kappa symmetric matches the antiderivative oracle") {
  for (double R : {2.0, 15.0}) {
    LayerSpec layer = make_constant_layer(0, R, 0.3);
    for (cplx k : {cplx(1.0, 0.3), cplx(0.6, 0.0)}) {
      CHECK(std::abs(kappa_symmetric(layer, k) - constant_kappa_oracle(R, 0.3, k)) < 1e-12);
    }
  }
}

TEST_CASE("kappa grid route agrees with the symmetric reduction") {
  LayerSpec layer = make_constant_layer(0, 2.0, 0.2);
  const cplx k(1.0, 0.3);
  SphereGrid grid = build_grid(10);  // needs 2 + ceil(|k| * 3)
  SphericalField kap = kappa(layer, k, grid);
  const cplx expect = kappa_symmetric(layer, k);
  for (const cplx& v : kap.values) CHECK(std::abs(v - expect) < 2e-7);
}

TEST_CASE("kappa is exactly linear in the layer strength") {
  LayerSpec layer = make_constant_layer(0, 6.0, 0.4);
  LayerSpec half = make_constant_layer(0, 6.0, 0.2);
  const cplx k(1.2, 0.5);
  CHECK(std::abs(kappa_symmetric(layer, k) - 2.0 * kappa_symmetric(half, k)) < 1e-14);

  SphereGrid grid = build_grid(12);
  SphericalField a = kappa(layer, k, grid);
  SphericalField b = kappa(half, k, grid);
  for (int i = 0; i < grid.n_nodes(); ++i)
    CHECK(std::abs(a.values[i] - 2.0 * b.values[i]) < 1e-12);
}

TEST_CASE("beta scales quadratically in the layer strength") {
  const cplx k(1.0, 0.3);
  auto beta_of = [&](double v) {
    LayerSpec layer = make_constant_layer(0, 4.0, v);
    return beta_symmetric(layer, k, 2);
  };
  const cplx b2 = beta_of(1e-2) / 1e-4;
  const cplx b3 = beta_of(1e-3) / 1e-6;
  CHECK(std::abs(b2 - b3) < 0.02 * std::abs(b3));
  CHECK(std::abs(b3) > 0);
}

TEST_CASE("beta grid route agrees with the symmetric nested route") {
  LayerSpec layer = make_constant_layer(0, 2.0, 0.15);
  const cplx k(1.0, 0.4);
  SphereGrid grid = build_grid(10);
  BetaResult grid_route = beta(layer, k, grid, 2);
  const cplx expect = beta_symmetric(layer, k, 2);
  // the self-interaction kernel is resolved to quadrature accuracy only
  for (const cplx& v : grid_route.field.values)
    CHECK(std::abs(v - expect) < 0.05 * std::abs(expect) + 1e-8);
}

TEST_CASE("born series contracts for a weak thin layer") {
  SparsePotential pot;
  pot.layers = {make_constant_layer(0, 2.0, 0.05)};
  SphereGrid grid = build_grid(10);
  const cplx k(1.0, 0.4);
  BornResult r = born_solve(ball_source(), pot, k, 8, 1e-10, grid);
  CHECK(r.contraction < 0.5);
  CHECK(r.error_bar < 1e-8);

  // first-order structure: A ~ A0 (1 - kappa) for weak coupling
  SphericalField A0 = free_amplitude(ball_source(), k, grid);
  const cplx kap = kappa_symmetric(pot.layers[0], k);
  double worst = 0;
  for (int i = 0; i < grid.n_nodes(); ++i)
    worst = std::max(worst,
                     std::abs(r.amplitude.values[i] - A0.values[i] * (1.0 - kap)));
  CHECK(worst < 5e-4 * sup_abs(A0));
}

TEST_CASE("far field remainder shrinks with the sampling radius") {
  SparsePotential pot;
  pot.layers = {make_constant_layer(0, 2.0, 0.1)};
  SphereGrid grid = build_grid(8);
  const cplx k(1.0, 0.5);
  auto rem = far_field_remainder(ball_source(), pot, k, grid, {50.0, 100.0, 200.0});
  REQUIRE(rem.size() == 3);
  CHECK(rem[0].second > rem[1].second);
  CHECK(rem[1].second > rem[2].second);
}
