#include <doctest.h>

#include <cmath>

#include "cgas/potential.hpp"
#include "cgas/rng.hpp"

using namespace cgas;

TEST_CASE("ginibre field values and laplacian") {
  auto p = make_ginibre();
  CHECK(p->value({1, 1}) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(p->laplacian({0.3, -0.7}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(p->has_radial_profile());
  CHECK(p->radial_value(1.5) == doctest::Approx(2.25));
  CHECK(p->radial_derivative(1.5) == doctest::Approx(3.0));
  CHECK(p->growth_exponent() > 1.0);
}

TEST_CASE("power field: value, radial profile, quarter-laplacian") {
  auto p = make_power(1.5);
  // Q = r^3: quarter-laplacian = (1/4)(Q'' + Q'/r) = (9/4) r
  CHECK(p->value({0, 2}) == doctest::Approx(8.0).epsilon(1e-14));
  CHECK(p->laplacian({0.8, 0}) == doctest::Approx(2.25 * 0.8).epsilon(1e-12));
  CHECK(p->radial_derivative(0.5) == doctest::Approx(3 * 0.25).epsilon(1e-12));
  CHECK_NOTHROW(make_power(0.4));  // any b > 0 is a valid field ...
  CHECK_THROWS(make_power(0.0));   // ... but the exponent must be positive
}

TEST_CASE("elliptic field constants") {
  auto p = make_elliptic(0.5);
  // Q = (|z|^2 - tau Re z^2)/(1 - tau^2); lap = 1/(1-tau^2)
  CHECK(p->value({1, 0}) == doctest::Approx((1.0 - 0.5) / 0.75));
  CHECK(p->value({0, 1}) == doctest::Approx(1.5 / 0.75));
  CHECK(p->laplacian({0.2, 0.1}) == doctest::Approx(4.0 / 3.0));
  CHECK_FALSE(p->has_radial_profile());
  CHECK_THROWS(make_elliptic(1.0));
  CHECK_THROWS(make_elliptic(-0.2));
}

TEST_CASE("builtin dispatch") {
  CHECK(make_builtin("ginibre")->name() == "ginibre");
  CHECK(make_builtin("power", 2.0)->value({1, 0}) == doctest::Approx(1.0));
  CHECK(make_builtin("elliptic", 0.0)->laplacian({0, 0}) ==
        doctest::Approx(1.0));
  CHECK_THROWS(make_builtin("hexagonal"));
}

TEST_CASE("finite-difference stencil matches analytic laplacian") {
  Rng rng(42);
  for (auto p : {make_ginibre(), make_power(2.0), make_elliptic(0.3)}) {
    for (int i = 0; i < 40; ++i) {
      complexd z{rng.uniform(0.1, 1.9), rng.uniform(0.1, 1.9)};
      CHECK(std::abs(p->laplacian(z) - fd_quarter_laplacian(*p, z)) <= 1e-5);
    }
  }
}

TEST_CASE("perturbation: q + u/n identity and sup-norm control") {
  auto base = make_ginibre();
  Perturbation u = make_perturbation("sinusoidal", 0.3);
  CHECK(u.sup_norm == doctest::Approx(0.3));
  auto q = perturb(base, u, 8, Box::centered(3.0));
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    complexd z{rng.uniform(-2.5, 2.5), rng.uniform(-2.5, 2.5)};
    CHECK(q->value(z) - base->value(z) ==
          doctest::Approx(u.u(z) / 8.0).epsilon(1e-14));
    CHECK(std::abs(u.u(z)) <= 0.3 + 1e-12);
  }
  // an understated sup norm is rejected at construction
  Perturbation lie = u;
  lie.sup_norm = 0.1;
  CHECK_THROWS(perturb(base, lie, 8, Box::centered(3.0)));
}

TEST_CASE("perturbed laplacian tracks the analytic lap of u") {
  auto base = make_ginibre();
  for (const char* kind : {"constant", "sinusoidal", "gaussian_bump"}) {
    Perturbation u = make_perturbation(kind, 0.2, complexd{0.4, -0.1}, 0.8);
    auto q = perturb(base, u, 16, Box::centered(3.0));
    Rng rng(7);
    for (int i = 0; i < 30; ++i) {
      complexd z{rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)};
      CHECK(std::abs(q->laplacian(z) - fd_quarter_laplacian(*q, z)) <= 2e-5);
    }
  }
  CHECK_THROWS(make_perturbation("sawtooth", 0.1));
}

TEST_CASE("growth margin and droplet scale") {
  auto gin = make_ginibre();
  CHECK(estimate_droplet_scale(*gin) == doctest::Approx(1.0).epsilon(1e-9));
  // power(2): r * 4 r^3 = 2  =>  R = 2^{-1/4}
  CHECK(estimate_droplet_scale(*make_power(2.0)) ==
        doctest::Approx(std::pow(2.0, -0.25)).epsilon(1e-9));
  // Q/(2 log r) at r = 5 is 25/(2 log 5) = 7.767; margin grows with r
  double m = growth_margin(*gin, {5.0});
  CHECK(m == doctest::Approx(25.0 / (2 * std::log(5.0))).epsilon(1e-12));
  CHECK(growth_margin_default(*gin) > 1.0);
  CHECK(growth_margin_default(*make_power(0.8)) > 1.0);
}
