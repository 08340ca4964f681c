#include <doctest.h>

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>

#include "cgas/determinantal.hpp"
#include "cgas/potential.hpp"
#include "cgas/rng.hpp"
#include "cgas/stats.hpp"

using namespace cgas;

TEST_CASE("ginibre monomial norms match the gamma closed form") {
  // h_k = gamma(k+1) / n^(k+1)
  for (int n : {4, 16, 64}) {
    auto ens = RadialEnsemble::build(make_ginibre(), n);
    for (int k = 0; k < n; ++k)
      CHECK(std::abs(ens.log_norm(k) -
                     (std::lgamma(k + 1.0) - (k + 1.0) * std::log((double)n)))
            <= 1e-10);
  }
}

TEST_CASE("factor cdf equals the regularized incomplete gamma") {
  // ginibre factor k: P(r_k <= r) = P(k+1, n r^2)
  auto ens = RadialEnsemble::build(make_ginibre(), 12);
  for (int k : {0, 3, 11})
    for (double r : {0.2, 0.5, 0.9, 1.2})
      CHECK(ens.factor_cdf(k, r) ==
            doctest::Approx(boost::math::gamma_p(k + 1.0, 12.0 * r * r))
                .epsilon(1e-9));
}

TEST_CASE("one-point function: center value and normalization") {
  // R_n(0) = 1/h_0: n for ginibre, 2 sqrt(n/pi) for Q = r^4
  for (int n : {8, 64}) {
    auto gin = RadialEnsemble::build(make_ginibre(), n);
    CHECK(gin.one_point({0, 0}) == doctest::Approx((double)n).epsilon(1e-9));
    CHECK(gin.normalization_quadrature() ==
          doctest::Approx((double)n).epsilon(1e-8));

    auto pw = RadialEnsemble::build(make_power(2.0), n);
    CHECK(pw.one_point({0, 0}) ==
          doctest::Approx(2.0 * std::sqrt(n / kPi)).epsilon(1e-9));
    CHECK(pw.normalization_quadrature() ==
          doctest::Approx((double)n).epsilon(1e-8));
  }
}

TEST_CASE("n = 1 ginibre: max radius is a Gaussian modulus") {
  auto ens = RadialEnsemble::build(make_ginibre(), 1);
  for (double r : {0.3, 0.8, 1.5})
    CHECK(ens.radius_cdf(r) ==
          doctest::Approx(1.0 - std::exp(-r * r)).epsilon(1e-9));
}

TEST_CASE("radius cdf inversion roundtrip") {
  auto ens = RadialEnsemble::build(make_ginibre(), 32);
  for (double p : {0.05, 0.5, 0.95}) {
    double r = ens.radius_cdf_inverse(p);
    CHECK(ens.radius_cdf(r) == doctest::Approx(p).epsilon(1e-8));
  }
  CHECK_THROWS(ens.radius_cdf_inverse(0.0));
}

TEST_CASE("factor sampling matches the gamma-law moments") {
  // ginibre: r_k^2 ~ Gamma(k+1, 1/n), so E r_k^2 = (k+1)/n, Var = (k+1)/n^2
  int n = 8;
  auto ens = RadialEnsemble::build(make_ginibre(), n);
  Rng rng(97);
  const int draws = 4000;
  std::vector<double> acc(n, 0);
  for (int d = 0; d < draws; ++d) {
    auto radii = ens.sample_radii(rng);
    for (int k = 0; k < n; ++k) acc[k] += radii[k] * radii[k];
  }
  for (int k = 0; k < n; ++k) {
    double mean = acc[k] / draws;
    double se = std::sqrt((k + 1.0) / (n * n) / draws);
    CHECK(std::abs(mean - (k + 1.0) / n) <= 5 * se);
  }
}

TEST_CASE("inverse-cdf sampler agrees with the cdf (per-factor KS)") {
  auto ens = RadialEnsemble::build(make_power(2.0), 6);
  Rng rng(5);
  std::vector<double> r3;
  for (int d = 0; d < 2000; ++d) r3.push_back(ens.sample_radii(rng)[3]);
  double ks = ks_statistic(r3, [&](double r) { return ens.factor_cdf(3, r); });
  CHECK(ks <= 1.63 / std::sqrt(2000.0));  // 1% KS critical value
}

TEST_CASE("gumbel rescaling constants") {
  // shift / ((1/2 sqrt(c0)) sqrt(log n / n)) at n = 10^6 (unit disc, c0 = 1)
  GumbelConstants gc = make_gumbel_constants(1000000, 1.0, 1.0);
  double denom = 0.5 * std::sqrt(std::log(1e6) / 1e6);
  CHECK(gc.shift / denom == doctest::Approx(0.8227).epsilon(3e-4));
  CHECK(gc.scale * gc.shift == doctest::Approx(gc.gamma_n).epsilon(1e-12));

  // the same ratio drifts toward 1 on a log-log schedule
  auto ratio = [](double n) {
    double g = std::log(n / (2 * kPi)) - std::log(std::log(n));
    return std::sqrt(g / (4 * n)) / (0.5 * std::sqrt(std::log(n) / n));
  };
  double expect[] = {0.8227, 0.9019, 0.9456, 0.9699};
  double ns[] = {1e6, 1e12, 1e24, 1e48};
  double prev = 0;
  for (int i = 0; i < 4; ++i) {
    CHECK(ratio(ns[i]) == doctest::Approx(expect[i]).epsilon(3e-4));
    CHECK(ratio(ns[i]) > prev);
    prev = ratio(ns[i]);
  }
  CHECK_THROWS(make_gumbel_constants(2, 1.0, 1.0));
}

TEST_CASE("weighted polynomial evaluation") {
  // f(z) = z e^{-n|z|^2/2} at z = 2, n = 2: log|f| = log 2 - 4
  std::vector<complexd> c{{0, 0}, {1, 0}};
  auto p = make_ginibre();
  CHECK(weighted_poly_log_abs(c, *p, 2, {2, 0}) ==
        doctest::Approx(std::log(2.0) - 4.0).epsilon(1e-12));
  CHECK(weighted_poly_eval(c, *p, 2, {2, 0}) ==
        doctest::Approx(2.0 * std::exp(-4.0)).epsilon(1e-12));
  // degree > n-1 is rejected
  std::vector<complexd> c3{{1, 0}, {1, 0}, {1, 0}};
  CHECK_THROWS(weighted_poly_log_abs(c3, *p, 2, {0.5, 0}));
}
