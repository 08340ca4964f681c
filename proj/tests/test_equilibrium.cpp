#include <doctest.h>

#include <cmath>

#include "cgas/equilibrium.hpp"
#include "cgas/potential.hpp"
#include "cgas/quadrature.hpp"

using namespace cgas;

// Radial closed forms for Q = r^(2b):
//   droplet radius R = b^(-1/(2b)),
//   Frostman constant  gamma  = -2 log R + 1/b,
//   Robin energy     gamma(Q) = -log R + 3/(4b),
//   boundary laplacian   c0   = b^2 R^(2b-2).

TEST_CASE("radial solve reproduces the ginibre closed forms") {
  EquilibriumResult eq = solve_radial(make_ginibre()).eq;
  CHECK(eq.droplet.is_disc());
  CHECK(eq.droplet.disc_radius() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(eq.frostman_gamma == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(eq.robin_gamma_q == doctest::Approx(0.75).epsilon(1e-6));
  CHECK(eq.c0 == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(eq.a0 > 0);

  // sigma integrates to one; rim cells may carry partial-coverage weight, but
  // cells a full diagonal beyond the rim must carry none
  double mass = 0, outside = 0;
  for (int i = 0; i < eq.grid.cells(); ++i) {
    mass += eq.sigma_weights[i];
    if (eq.cell_delta[i] > 1.5 * eq.grid.hx) outside += eq.sigma_weights[i];
  }
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(outside == 0.0);
}

TEST_CASE("radial solve: power(2) closed forms") {
  double b = 2.0;
  double R = std::pow(b, -1.0 / (2 * b));
  EquilibriumResult eq = solve_radial(make_power(b)).eq;
  CHECK(eq.droplet.disc_radius() == doctest::Approx(R).epsilon(1e-9));
  CHECK(eq.frostman_gamma ==
        doctest::Approx(-2 * std::log(R) + 1 / b).epsilon(1e-6));
  CHECK(eq.robin_gamma_q ==
        doctest::Approx(-std::log(R) + 3 / (4 * b)).epsilon(1e-6));
  CHECK(eq.c0 ==
        doctest::Approx(b * b * std::pow(R, 2 * b - 2)).epsilon(1e-9));
}

TEST_CASE("effective potential: zero on the droplet, growing outside") {
  EquilibriumResult eq = solve_radial(make_ginibre()).eq;
  CHECK(effective_potential(eq, {0.3, 0.4}) == 0.0);
  double q1 = effective_potential(eq, {1.3, 0});
  double q2 = effective_potential(eq, {1.9, 0});
  CHECK(q1 > 0);
  CHECK(q2 > q1);
  // far field: Q - 2 log|z| - gamma
  complexd far{40.0, -5.0};
  CHECK(effective_potential(eq, far) ==
        doctest::Approx(std::norm(far) - 2 * std::log(std::abs(far)) - 1.0)
            .epsilon(1e-6));
}

TEST_CASE("exterior floor scan matches the continuum pilot constants") {
  EquilibriumResult eq = solve_radial(make_ginibre()).eq;
  QuadraticFloor fl = quadratic_floor_scan(eq, 0.9);
  CHECK(fl.violations == 0);
  CHECK(std::abs(fl.a0 - 0.133630) <= 0.01);
  CHECK(std::abs(fl.delta0 - 0.385328) <= 0.03);
  CHECK(eq.a0 == doctest::Approx(fl.a0));
}

TEST_CASE("grid solver on ginibre converges to the radial answer") {
  EquilibriumResult eq =
      solve_grid(make_ginibre(), GridDomain{Box::centered(2.0), 96});
  double haus = 0;
  for (complexd bpt : eq.droplet.boundary_samples(256))
    haus = std::max(haus, std::abs(std::abs(bpt) - 1.0));
  CHECK(haus <= 2 * eq.grid.hx);
  CHECK(std::abs(eq.frostman_gamma - 1.0) <= 0.02);
  CHECK(std::abs(eq.robin_gamma_q - 0.75) <= 0.02);
  CHECK(std::abs(eq.c0 - 1.0) <= 0.05);

  double mass = 0;
  for (double w : eq.sigma_weights) {
    CHECK(w >= 0.0);
    mass += w;
  }
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(eq.frostman_residual <= eq.field_tol);
}

TEST_CASE("grid energy agrees with the radial Robin constant") {
  EquilibriumResult eq = solve_radial(make_ginibre()).eq;
  std::vector<double> q(eq.grid.cells());
  for (int j = 0; j < eq.grid.ny; ++j)
    for (int i = 0; i < eq.grid.nx; ++i)
      q[eq.grid.index(i, j)] = eq.potential->value(eq.grid.center(i, j));
  CHECK(std::abs(grid_energy(eq.grid, eq.sigma_weights, q) - 0.75) <= 5e-3);
  CHECK_THROWS(grid_energy(eq.grid, {0.5, 0.5}, q));
}

TEST_CASE("cell self-energy factor: independent quadrature route") {
  // E log|X - Y| over the unit square via the triangular difference density,
  // with the inner integral in closed form:
  //   E = 4 int_0^1 (1-u) * inner(u) du,
  //   inner(u) = (1/2) int_0^1 (1-v) log(u^2+v^2) dv.
  auto inner = [](double u) {
    double u2 = u * u;
    double i1 = std::log1p(u2) - 2.0 + 2.0 * u * std::atan(1.0 / u);
    double i2 = 0.5 * ((u2 + 1) * std::log1p(u2) - 1.0) - u2 * std::log(u);
    return 0.5 * (i1 - i2);
  };
  double e = adaptive_simpson([&](double u) { return 4 * (1 - u) * inner(u); },
                              1e-9, 1.0, 1e-13);
  CHECK(std::exp(e) ==
        doctest::Approx(kCellSelfEnergyFactor).epsilon(1e-8));
}

TEST_CASE("boundary laplacian and exterior rate accessors") {
  EquilibriumResult eq = solve_radial(make_ginibre()).eq;
  CHECK(boundary_min_laplacian(eq) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(exterior_rate(eq, 1.5) > 0);
}
