#include <doctest.h>

#include <cmath>

#include "cgas/energy.hpp"
#include "cgas/lagrange.hpp"
#include "cgas/potential.hpp"
#include "cgas/rng.hpp"
#include "cgas/sampler.hpp"

using namespace cgas;

TEST_CASE("pairwise interaction energy hand values") {
  // discrete energy = mean pair interaction + field average:
  //   (1/(n(n-1))) sum_{j != k} log 1/|z_j - z_k| + (1/n) sum Q
  auto p = make_ginibre();
  Configuration unit{{0, 0}, {1, 0}};
  CHECK(energy_discrete(unit, *p) == doctest::Approx(0.5).epsilon(1e-14));
  Configuration halved{{0, 0}, {0.5, 0}};
  CHECK(energy_discrete(halved, *p) ==
        doctest::Approx(std::log(2.0) + 0.125).epsilon(1e-14));
  Configuration clash{{0.2, 0.1}, {0.2, 0.1}};
  CHECK(std::isinf(energy_discrete(clash, *p)));
  Configuration lonely{{0, 0}};
  CHECK_THROWS(energy_discrete(lonely, *p));
}

TEST_CASE("hamiltonian decomposes into interaction and field parts") {
  Rng rng(6);
  auto p = make_power(1.5);
  for (int t = 0; t < 50; ++t) {
    int n = 2 + (int)rng.uniform_int(5);
    Configuration cfg(n);
    for (auto& z : cfg) z = {rng.normal(), rng.normal()};
    double qs = 0;
    for (complexd z : cfg) qs += p->value(z);
    // H_n = n(n-1) I_sharp + sum Q; the field enters I_sharp with weight 1/n
    double recon = (double)n * (n - 1) * energy_discrete(cfg, *p) + qs;
    CHECK(hamiltonian(cfg, *p, n) ==
          doctest::Approx(recon).epsilon(1e-12));
  }
}

TEST_CASE("partition function brute force: symbolic ginibre oracles") {
  auto p = make_ginibre();
  // Z_1(beta) = 1/beta
  CHECK(log_partition_bruteforce(*p, 2.0, 1) ==
        doctest::Approx(-std::log(2.0)).epsilon(1e-10));
  // Z_2(1) = 1/4, Z_2(2) = 1/32 (Gaussian moment expansion)
  CHECK(log_partition_bruteforce(*p, 1.0, 2) ==
        doctest::Approx(std::log(0.25)).epsilon(1e-8));
  CHECK(log_partition_bruteforce(*p, 2.0, 2) ==
        doctest::Approx(std::log(1.0 / 32.0)).epsilon(1e-8));
  // Z_3(1) = 4/243 (determinantal product n! h0 h1 h2)
  CHECK(log_partition_bruteforce(*p, 1.0, 3) ==
        doctest::Approx(std::log(4.0 / 243.0)).epsilon(1e-7));
  CHECK_THROWS(log_partition_bruteforce(*p, 1.0, 4));
}

TEST_CASE("partition brute force on a non-gaussian radial field") {
  // power(2), n = 2, beta = 1: cross-checked against the determinantal
  // product 2! h0 h1 with h_k = Gamma((k+1)/2)/(2 n^((k+1)/2)) for Q = r^4
  auto p = make_power(2.0);
  double h0 = std::tgamma(0.5) / (2.0 * std::pow(2.0, 0.5));
  double h1 = std::tgamma(1.0) / (2.0 * std::pow(2.0, 1.0));
  CHECK(log_partition_bruteforce(*p, 1.0, 2) ==
        doctest::Approx(std::log(2.0 * h0 * h1)).epsilon(1e-7));
}

TEST_CASE("entropy inequality: ginibre closed-form right-hand side") {
  auto p = make_ginibre();
  // at n = 2 the bound's right side evaluates to -beta * 5/8
  CHECK(entropy_bound_rhs(*p, 1.0, 2) ==
        doctest::Approx(-0.625).epsilon(1e-9));
  CHECK(entropy_bound_rhs(*p, 2.0, 2) ==
        doctest::Approx(-1.25).epsilon(1e-9));

  for (double beta : {1.0, 2.0}) {
    EntropyCheck c = entropy_bound_check(*p, beta, 2);
    CHECK(c.pass);
    CHECK(c.lhs == doctest::Approx(c.log_zn / 4.0));
    CHECK(c.lhs >= c.rhs);
  }
  EntropyCheck c3 = entropy_bound_check(*p, 1.0, 3);
  CHECK(c3.pass);
}

TEST_CASE("weighted lagrange basis: node values and a closed-form point") {
  auto p = make_ginibre();
  Configuration cfg{{0, 0}, {2, 0}};
  // exact 1 at its own node, exact 0 at the other node
  CHECK(eval_lagrange(cfg, 0, {0, 0}, *p, 1.0) == 1.0);
  CHECK(eval_lagrange(cfg, 0, {2, 0}, *p, 1.0) == 0.0);
  // ell_0(1) = ((1-2)/(0-2)) e^{-(Q(1)-Q(0))} -> |ell|^2 = e^{-2}/4
  CHECK(eval_lagrange(cfg, 0, {1, 0}, *p, 1.0) ==
        doctest::Approx(0.25 * std::exp(-2.0)).epsilon(1e-13));
  // beta = 1.5 raises the same modulus to the 3rd power
  CHECK(eval_lagrange(cfg, 0, {1, 0}, *p, 1.5) ==
        doctest::Approx(std::pow(0.25 * std::exp(-2.0), 1.5)).epsilon(1e-12));
}

TEST_CASE("region quadrature: areas and a polynomial moment") {
  // integral of |z|^2 over the unit disc in dA units = 1/2
  RegionRule disc = make_region_rule(Region::disc({0, 0}, 1.0), 24, 48);
  double area = 0, m2 = 0;
  for (std::size_t i = 0; i < disc.pts.size(); ++i) {
    area += disc.w[i];
    m2 += disc.w[i] * std::norm(disc.pts[i]);
  }
  CHECK(area == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(m2 == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(disc.area_da == doctest::Approx(1.0));

  RegionRule rect =
      make_region_rule(Region::rectangle({0, 1, 0, 2}), 16, 16);
  double ra = 0;
  for (double w : rect.w) ra += w;
  CHECK(ra == doctest::Approx(2.0 / kPi).epsilon(1e-12));
}

TEST_CASE("lagrange functional: interpolation-normalization identity") {
  // int_W |ell_j|^{2 beta} with cfg and W chosen so the refinement ladder
  // must converge; value cross-checked between rule sizes
  auto p = make_ginibre();
  Configuration cfg{{0.2, 0.1}, {-0.4, 0.3}, {0.5, -0.5}};
  Region W = Region::disc({0.0, 0.0}, 0.6);
  double coarse =
      lagrange_functional(cfg, 1, make_region_rule(W, 24, 48), *p, 1.5);
  double fine =
      lagrange_functional(cfg, 1, make_region_rule(W, 48, 96), *p, 1.5);
  CHECK(coarse == doctest::Approx(fine).epsilon(1e-8));
  CHECK_NOTHROW(lagrange_functional(cfg, 1, W, *p, 1.5));
}
