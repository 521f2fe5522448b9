#include <cmath>

#include "doctest.h"
#include "sparsewave/greens.hpp"
#include "sparsewave/sphere.hpp"
#include "sparsewave/wkb.hpp"

using namespace spw;

namespace {

cplx constant_exponent_oracle(double R, double v, cplx k) {
  const cplx tik = 2.0 * I * k;
  return v * ((std::exp(tik * (R + 1)) - std::exp(tik * R)) / (tik * tik) - 1.0 / tik);
}

}  // namespace

TEST_CASE("symmetric exponent matches the antiderivative oracle") {
  SparsePotential pot;
  pot.layers = {make_constant_layer(0, 3.0, 0.2), make_constant_layer(1, 9.0, 0.1)};
  for (cplx k : {cplx(1.0, 0.3), cplx(0.7, 0.0), cplx(2.0, 1.0)}) {
    const cplx expect =
        constant_exponent_oracle(3.0, 0.2, k) + constant_exponent_oracle(9.0, 0.1, k);
    CHECK(std::abs(wkb_exponent_symmetric(pot, k) - expect) < 1e-12);
    CHECK(std::abs(wkb_factor_symmetric(pot, k) - std::exp(-expect)) < 1e-12);
  }
}

TEST_CASE("axial route agrees with the radial reduction per layer") {
  for (double R : {2.0, 20.0, 60.0}) {
    LayerSpec layer = make_constant_layer(0, R, 0.15);
    SparsePotential single;
    single.layers = {layer};
    for (cplx k : {cplx(1.0, 0.3), cplx(1.5, 0.1)}) {
      CHECK(std::abs(wkb_exponent_axial(layer, k) - wkb_exponent_symmetric(single, k)) < 1e-9);
    }
  }
}

TEST_CASE("grid factor is direction independent for symmetric shells") {
  SparsePotential pot;
  pot.layers = {make_constant_layer(0, 20.0, 0.2)};
  SphereGrid grid = build_grid(10);
  const cplx k(1.0, 0.3);
  SphericalField w = wkb_factor(pot, k, grid);
  const cplx expect = wkb_factor_symmetric(pot, k);
  for (const cplx& v : w.values) CHECK(std::abs(v - expect) < 1e-9);
}

TEST_CASE("half line comparison formula for constant shells") {
  SparsePotential pot;
  pot.layers = {make_constant_layer(0, 5.0, 0.4)};
  const double k = 1.3;
  // exp(-(i/2k) int V) with int V = 0.4 over a unit-thickness shell
  const cplx expect = std::exp(-I * 0.4 / (2.0 * k));
  CHECK(std::abs(wkb_1d(pot, k) - expect) < 1e-13);
  CHECK_THROWS_AS(wkb_1d(pot, 0.0), InvalidInput);
}

TEST_CASE("bump exponent integral is linear in the bump amplitude") {
  Bump b;
  b.center = {20.3, 0.2, 0.4};
  b.radius = 0.15;
  b.amplitude = 0.25;
  Bump half = b;
  half.amplitude = 0.125;
  const cplx k(1.0, 0.3);
  const Vec3 theta{0.0, 0.0, 1.0};
  CHECK(std::abs(bump_exponent_integral(b, k, theta) -
                 2.0 * bump_exponent_integral(half, k, theta)) < 1e-14);
}

TEST_CASE("randomized moments are deterministic in the seed") {
  LayerSpec layer = make_random_bump_layer(0, 20.0, 25, 0.2, 0.15, 99);
  const cplx k(1.0, 0.3);
  const Vec3 theta{0.0, 0.0, 1.0};
  MomentStats a = randomized_wkb_moment(layer, k, theta, 400, 5);
  MomentStats b = randomized_wkb_moment(layer, k, theta, 400, 5);
  CHECK(a.mean == b.mean);
  CHECK(a.second_moment == b.second_moment);
  MomentStats c = randomized_wkb_moment(layer, k, theta, 400, 6);
  CHECK(a.mean != c.mean);
}

TEST_CASE("sign symmetry pushes the mean toward zero") {
  LayerSpec layer = make_random_bump_layer(0, 20.0, 30, 0.2, 0.15, 42);
  const cplx k(1.0, 0.3);
  const Vec3 theta{0.0, 0.0, 1.0};
  MomentStats s = randomized_wkb_moment(layer, k, theta, 2000, 17);
  CHECK(std::abs(s.mean) < 4.0 * s.mean_std_error + 1e-12);
  CHECK(s.trials == 2000);
}

TEST_CASE("second moment matches the per-bump decomposition") {
  // independent signs: E |sum eps_i a_i|^2 = sum |a_i|^2
  LayerSpec layer = make_random_bump_layer(0, 20.0, 30, 0.2, 0.15, 314);
  const cplx k(1.0, 0.3);
  const Vec3 theta{0.3, 0.0, std::sqrt(1.0 - 0.09)};
  double expect = 0;
  for (const Bump& b : layer.bumps) expect += std::norm(bump_exponent_integral(b, k, theta));
  MomentStats s = randomized_wkb_moment(layer, k, theta, 4000, 2);
  CHECK(std::abs(s.second_moment - expect) < 4.0 * s.second_moment_std_error + 1e-12);
}
