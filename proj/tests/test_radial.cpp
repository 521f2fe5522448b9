#include <cmath>
#include <random>

#include "doctest.h"
#include "sparsewave/greens.hpp"
#include "sparsewave/ode.hpp"
#include "sparsewave/radial.hpp"
#include "sparsewave/special.hpp"

using namespace spw;

namespace {

cplx ball_closed_form(cplx k) { return (std::sin(k) - k * std::cos(k)) / (k * k * k); }

}  // namespace

TEST_CASE("free radial solution reproduces the outgoing closed form") {
  SparsePotential empty;
  const cplx k(1.0, 0.3);
  const double r_max = 25.0;
  for (int m : {0, 1, 3}) {
    RadialSolution sol = solve_radial(empty, m, k, r_max, 2.0);
    REQUIRE(sol.r.size() > 10);
    CHECK(sol.r.front() < sol.r.back());  // ascending
    for (std::size_t i = 0; i < sol.r.size(); i += sol.r.size() / 7) {
      const double r = sol.r[i];
      // u(r) = zeta_m(kr) e^{-ik r_max}; compare through the scaled form
      const cplx expect = riccati_hankel_scaled(m, k * r).value * std::exp(I * k * (r - r_max));
      CHECK(std::abs(sol.u[i] - expect) < 1e-7 * std::abs(expect));
    }
  }
}

TEST_CASE("radial solution requires clearance past the shells") {
  SparsePotential pot;
  pot.layers = {make_constant_layer(0, 20.0, 0.1)};
  CHECK_THROWS_AS(solve_radial(pot, 0, cplx(1.0, 0.3), 22.0), InvalidInput);
  CHECK_THROWS_AS(solve_radial(pot, -1, cplx(1.0, 0.3), 40.0), InvalidInput);
  CHECK_THROWS_AS(solve_radial(pot, 0, cplx(0.0, 0.0), 40.0), InvalidInput);
}

TEST_CASE("amplitude oracle reduces to the free closed form") {
  SparsePotential empty;
  for (cplx k : {cplx(1.0, 0.3), cplx(0.7, 0.0), cplx(1.9, 0.8)}) {
    const cplx got = radial_amplitude_oracle(ball_source(), empty, k);
    CHECK(std::abs(got - ball_closed_form(k)) < 1e-8 * std::abs(ball_closed_form(k)));
  }
}

TEST_CASE("amplitude oracle first-order response matches the linear term") {
  SparsePotential pot;
  pot.layers = {make_constant_layer(0, 3.0, 1e-3)};
  const cplx k(1.0, 0.3);
  const cplx A0 = radial_amplitude_oracle(ball_source(), SparsePotential{}, k);
  const cplx A1 = radial_amplitude_oracle(ball_source(), pot, k);
  const cplx kap = kappa_symmetric(pot.layers[0], k);
  CHECK(std::abs(A1 / A0 - (1.0 - kap)) < 1e-5);
}

TEST_CASE("amplitude oracle rejects misuse") {
  CHECK_THROWS_AS(radial_amplitude_oracle(ball_source(), SparsePotential{}, cplx(1.0, -0.2)),
                  InvalidInput);
  SourceSpec mod = modulated_source({{0.0, 1.0}, {1.0, 1.0}}, 2, 0);
  CHECK_THROWS_AS(radial_amplitude_oracle(mod, SparsePotential{}, cplx(1.0, 0.3)), InvalidInput);
}

TEST_CASE("prufer decay factor closed form and limits") {
  const double E = 1.0, r0 = 10.0;
  CHECK(prufer_decay_factor(0, E, r0, 50.0) == doctest::Approx(1.0));
  const double f = prufer_decay_factor(3, E, r0, 20.0);
  CHECK(f == doctest::Approx(std::exp(-12.0 * (20.0 - 10.0) / (20.0 * 10.0))).epsilon(1e-13));
  CHECK(prufer_decay_factor(3, E, r0, 30.0) < f);
  // bounded below by the r -> infinity limit
  CHECK(prufer_decay_factor(3, E, r0, 1e9) >
        0.999 * std::exp(-12.0 / (std::sqrt(E) * r0)));
}

TEST_CASE("m=0 energy density is conserved across gaps") {
  // -f'' = E f on a potential-free stretch: Q = f^2 + f'^2/E is constant
  const double E = 1.7;
  std::vector<cplx> y{0.6, -0.9};
  OdeRhs rhs = [&](double, const std::vector<cplx>& w, std::vector<cplx>& dw) {
    dw[0] = w[1];
    dw[1] = -E * w[0];
  };
  const double Q0 = std::norm(y[0]) + std::norm(y[1]) / E;
  rk45_integrate(rhs, 10.0, 45.0, y, 1e-12);
  const double Q1 = std::norm(y[0]) + std::norm(y[1]) / E;
  CHECK(std::abs(Q1 - Q0) < 1e-10 * Q0);
  CHECK(prufer_gap_bound(0, E, 10.0, 45.0, 0.6, -0.9) == doctest::Approx(Q0).epsilon(1e-13));
}

TEST_CASE("prufer gap bound holds along randomized integrations") {
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int m = 1 + int(u(rng) * 9.99);
    const double E = 0.25 + 3.75 * u(rng);
    const double r0 = 5.0 + 25.0 * u(rng);
    const double gap = 1.0 + 19.0 * u(rng);
    const double f0 = 2.0 * u(rng) - 1.0, g0 = 2.0 * u(rng) - 1.0;
    if (std::abs(f0) + std::abs(g0) < 0.1) continue;

    std::vector<cplx> y{f0, g0};
    OdeRhs rhs = [&](double r, const std::vector<cplx>& w, std::vector<cplx>& dw) {
      dw[0] = w[1];
      dw[1] = (m * (m + 1.0) / (r * r) - E) * w[0];
    };
    double r = r0;
    for (int step = 0; step < 4; ++step) {
      const double next = r0 + gap * (step + 1) / 4.0;
      rk45_integrate(rhs, r, next, y, 1e-10);
      r = next;
      const double Q = std::norm(y[0]) + std::norm(y[1]) / E;
      const double bound = prufer_gap_bound(m, E, r0, r, f0, g0);
      CHECK(Q >= bound * (1.0 - 1e-8));
    }
  }
}

TEST_CASE("channel data tails are suffix sums") {
  ChannelData cd = make_channel_data(1.0, 30.0, 2, {3.0, 2.0, 1.0, 0.5});
  REQUIRE(cd.tail.size() == 4);
  CHECK(cd.tail[0] == doctest::Approx(6.5));
  CHECK(cd.tail[2] == doctest::Approx(1.5));
  CHECK(cd.tails_consistent());
  CHECK(tail_split_lower_bound(6.5, 1.0, 30.0, 1000) ==
        doctest::Approx(6.5 - 900.0 / 1000.0).epsilon(1e-14));
  CHECK_THROWS_AS(tail_split_lower_bound(1.0, 1.0, 1.0, 0), InvalidInput);
}

TEST_CASE("absence margins are positive and increasing on the fast schedule") {
  GapSchedule sched;  // log_R0 = 120, beta = 1.4, count = 5
  for (double E : {0.5, 4.0})
    for (double gamma : {0.5, 2.0}) {
      AbsenceVerdict v = eigenvalue_absence_check(E, gamma, sched);
      CHECK(v.contradiction_all);
      CHECK(v.margins_increasing);
      REQUIRE(v.certificates.size() == 5);
      for (const auto& cert : v.certificates) CHECK(cert.margin.sign == 1);
    }
}

TEST_CASE("required gap grows with the channel weight gamma") {
  GapSchedule sched;
  AbsenceVerdict lo = eigenvalue_absence_check(1.0, 0.5, sched);
  AbsenceVerdict hi = eigenvalue_absence_check(1.0, 2.0, sched);
  CHECK(SignedLogTower::compare(lo.certificates[0].log_min_gap,
                                hi.certificates[0].log_min_gap) < 0);
}

TEST_CASE("margins respond monotonically to the starting radius") {
  GapSchedule base, shifted;
  shifted.log_R0 = base.log_R0 + std::log(10.0);
  AbsenceVerdict a = eigenvalue_absence_check(1.0, 1.0, base);
  AbsenceVerdict b = eigenvalue_absence_check(1.0, 1.0, shifted);
  for (int n = 0; n < base.count; ++n)
    CHECK(SignedLogTower::compare(a.certificates[n].margin, b.certificates[n].margin) < 0);
}

TEST_CASE("absence check validates its inputs") {
  GapSchedule sched;
  CHECK_THROWS_AS(eigenvalue_absence_check(-1.0, 1.0, sched), InvalidInput);
  CHECK_THROWS_AS(eigenvalue_absence_check(1.0, 0.0, sched), InvalidInput);
  GapSchedule slow;
  slow.beta = 1.2;
  CHECK_THROWS_AS(eigenvalue_absence_check(1.0, 1.0, slow), InvalidInput);
}
