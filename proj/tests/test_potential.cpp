#include <cmath>
#include <set>

#include "doctest.h"
#include "sparsewave/potential.hpp"

using namespace spw;

TEST_CASE("radial table interpolates linearly and vanishes outside") {
  RadialTable t{{1.0, 2.0, 4.0}, {0.0, 2.0, 1.0}};
  CHECK(t(0.5) == 0.0);
  CHECK(t(5.0) == 0.0);
  CHECK(t(1.5) == doctest::Approx(1.0));
  CHECK(t(3.0) == doctest::Approx(1.5));
  CHECK(t.max_abs() == doctest::Approx(2.0));
}

TEST_CASE("constant layer evaluates inside its shell only") {
  LayerSpec layer = make_constant_layer(0, 10.0, 0.3);
  CHECK(layer.bound == doctest::Approx(0.3));
  CHECK(layer.evaluate({10.5, 0, 0}) == doctest::Approx(0.3));
  CHECK(layer.evaluate({0, 0, -10.7}) == doctest::Approx(0.3));
  CHECK(layer.evaluate({9.9, 0, 0}) == 0.0);
  CHECK(layer.evaluate({11.2, 0, 0}) == 0.0);
  CHECK(layer.radial_value(10.25) == doctest::Approx(0.3));
  CHECK(layer.symmetric());
}

TEST_CASE("radial layer uses its profile relative to the shell") {
  RadialTable prof{{5.0, 5.5, 6.0}, {0.0, 0.4, 0.0}};
  LayerSpec layer = make_radial_layer(1, 5.0, prof);
  CHECK(layer.radial_value(5.5) == doctest::Approx(0.4));
  CHECK(layer.radial_value(5.25) == doctest::Approx(0.2));
  CHECK(layer.evaluate({0, 5.5, 0}) == doctest::Approx(0.4));
}

TEST_CASE("harmonic layer is not symmetric and modulates by angle") {
  RadialTable prof{{8.0, 8.5, 9.0}, {0.2, 0.2, 0.2}};
  LayerSpec layer = make_harmonic_layer(0, 8.0, {{2, 0, prof}});
  CHECK_FALSE(layer.symmetric());
  // degree-2 order-0 modulation: sign differs between pole and equator
  double pole = layer.evaluate({0, 0, 8.5});
  double equator = layer.evaluate({8.5, 0, 0});
  CHECK(pole * equator < 0);
  CHECK_THROWS_AS(layer.radial_value(8.5), InvalidInput);
}

TEST_CASE("random bumps stay inside the shell and redraw signs per trial") {
  LayerSpec layer = make_random_bump_layer(0, 30.0, 40, 0.25, 0.2, 77);
  REQUIRE(layer.bumps.size() == 40);
  for (const Bump& b : layer.bumps) {
    const double r = b.center.norm();
    CHECK(r - b.radius >= 30.0);
    CHECK(r + b.radius <= 31.0);
    CHECK(b.amplitude == doctest::Approx(0.25));
  }
  // same seed reproduces placement
  LayerSpec again = make_random_bump_layer(0, 30.0, 40, 0.25, 0.2, 77);
  for (std::size_t i = 0; i < 40; ++i) {
    CHECK(layer.bumps[i].center.x == again.bumps[i].center.x);
    CHECK(layer.bumps[i].center.z == again.bumps[i].center.z);
  }
  // signs are deterministic in (seed, trial, bump) and not all equal
  std::set<double> signs;
  for (int b = 0; b < 40; ++b) {
    double s = bump_sign(77, 3, b);
    CHECK(bump_sign(77, 3, b) == s);
    CHECK(std::abs(s) == 1.0);
    signs.insert(s);
  }
  CHECK(signs.size() == 2);
}

TEST_CASE("potential validation enforces ordering and disjointness") {
  SparsePotential good;
  good.layers = {make_constant_layer(0, 5.0, 0.1), make_constant_layer(1, 12.0, 0.1)};
  CHECK_NOTHROW(good.validate());

  SparsePotential overlap;
  overlap.layers = {make_constant_layer(0, 5.0, 0.1), make_constant_layer(1, 5.5, 0.1)};
  CHECK_THROWS_AS(overlap.validate(), InvalidInput);

  SparsePotential unordered;
  unordered.layers = {make_constant_layer(0, 12.0, 0.1), make_constant_layer(1, 5.0, 0.1)};
  CHECK_THROWS_AS(unordered.validate(), InvalidInput);
}

TEST_CASE("l2 norm aggregates the layer bound sequence") {
  SparsePotential pot;
  pot.layers = {make_constant_layer(0, 5.0, 0.2)};
  CHECK(pot.l2_norm() == doctest::Approx(0.2).epsilon(1e-12));

  pot.layers.push_back(make_constant_layer(1, 20.0, 0.1));
  CHECK(pot.l2_norm() == doctest::Approx(std::sqrt(0.2 * 0.2 + 0.1 * 0.1)).epsilon(1e-12));
}

TEST_CASE("truncation drops inner layers at layer granularity") {
  SparsePotential pot;
  pot.layers = {make_constant_layer(0, 5.0, 0.3), make_constant_layer(1, 20.0, 0.2),
                make_constant_layer(2, 50.0, 0.1)};
  SparsePotential cut = truncated(pot, 10.0);
  REQUIRE(cut.layers.size() == 2);
  CHECK(cut.layers[0].inner_radius == 20.0);

  SparsePotential first2 = head(pot, 2);
  REQUIRE(first2.layers.size() == 2);
  CHECK(first2.layers[1].inner_radius == 20.0);
  CHECK(head(pot, 0).layers.empty());
  CHECK(head(pot, 9).layers.size() == 3);
}

TEST_CASE("sparseness checks accept a fast schedule and flag a slow one") {
  // ln R = 20, ln R' = 1.6 e^{20}: doubling, sigma, ratio, gap hold, and the
  // schedule clears alpha R_0 = 1.5 e^{20} strictly
  SparsenessReport ok = validate_sparseness_logs({20.0, 1.6 * std::exp(20.0)}, 1.5);
  CHECK(ok.all_ok());
  REQUIRE(ok.log_sigma.size() == 1);
  // ln sigma_0 = 3.5 ln R_0 + R_0 - ln(R_1 - R_0) with R_0 = e^{20}
  const double R0 = std::exp(20.0);
  const double lnR1 = 1.6 * R0;
  // R_1 - R_0 = R_1 (1 - R_0/R_1); the correction is below double resolution
  CHECK(ok.log_sigma[0] == doctest::Approx(3.5 * 20.0 + R0 - lnR1).epsilon(1e-12));

  SparsenessReport slow = validate_sparseness_logs({20.0, 20.5}, 1.5);
  CHECK_FALSE(slow.all_ok());
  CHECK_FALSE(slow.doubling_ok[0]);

  // direct-radii route agrees with the log route where both apply
  SparsePotential pot;
  pot.layers = {make_constant_layer(0, 20.0, 0.1), make_constant_layer(1, 120.0, 0.1)};
  SparsenessReport direct = validate_sparseness(pot, 1.5);
  SparsenessReport logs = validate_sparseness_logs({std::log(20.0), std::log(120.0)}, 1.5);
  CHECK(direct.doubling_ok[0] == logs.doubling_ok[0]);
  CHECK(direct.sigma_ok[0] == logs.sigma_ok[0]);
  CHECK(direct.ratio_ok[0] == logs.ratio_ok[0]);
  CHECK(direct.gap_ok[0] == logs.gap_ok[0]);
  CHECK(direct.log_sigma[0] == doctest::Approx(logs.log_sigma[0]).epsilon(1e-10));
}

TEST_CASE("layer l2 profile lists per-layer bounds") {
  SparsePotential pot;
  pot.layers = {make_constant_layer(0, 5.0, 0.3), make_constant_layer(1, 20.0, 0.1)};
  L2Profile prof = layer_l2_profile(pot);
  REQUIRE(prof.bounds.size() == 2);
  CHECK(prof.bounds[0].second == doctest::Approx(0.3));
  CHECK(prof.bounds[1].second == doctest::Approx(0.1));
  CHECK(prof.l2 == doctest::Approx(std::sqrt(0.3 * 0.3 + 0.1 * 0.1)).epsilon(1e-14));
}
