#include <doctest.h>

#include <cmath>

#include "cgas/analysis.hpp"
#include "cgas/determinantal.hpp"
#include "cgas/equilibrium.hpp"
#include "cgas/potential.hpp"
#include "cgas/rng.hpp"
#include "cgas/sampler.hpp"
#include "cgas/stats.hpp"

using namespace cgas;

namespace {
const EquilibriumResult& gin_eq() {
  static EquilibriumResult eq = solve_radial(make_ginibre()).eq;
  return eq;
}
}  // namespace

TEST_CASE("summary statistics hand values") {
  std::vector<double> v{3, 1, 4, 1, 5};
  CHECK(mean_of(v) == doctest::Approx(2.8));
  CHECK(median_copy(v) == doctest::Approx(3.0));
  std::vector<double> even{1, 2, 3, 10};
  CHECK(median_copy(even) == doctest::Approx(2.5));
  std::vector<double> w{2, 4, 4, 4, 5, 5, 7, 9};
  CHECK(variance_of(w) == doctest::Approx(32.0 / 7.0));
}

TEST_CASE("wilson interval") {
  Wilson w = wilson_interval(5, 10);
  CHECK(w.p_hat == doctest::Approx(0.5));
  CHECK(w.lo == doctest::Approx(0.2366).epsilon(2e-3));
  CHECK(w.hi == doctest::Approx(0.7634).epsilon(2e-3));
  Wilson none = wilson_interval(0, 50);
  CHECK(none.lo == 0.0);
  CHECK(none.hi < 0.12);
  Wilson all = wilson_interval(50, 50);
  CHECK(all.hi == 1.0);
  CHECK(all.lo > 0.9);
}

TEST_CASE("blocked standard error on iid data") {
  Rng rng(8);
  std::vector<double> x(100000);
  for (auto& v : x) v = rng.normal();
  double se = blocked_standard_error(x);
  double iid = 1.0 / std::sqrt((double)x.size());
  CHECK(se > 0.7 * iid);
  CHECK(se < 1.4 * iid);
}

TEST_CASE("ks statistic: exact grid value and null behavior") {
  std::vector<double> grid;
  for (int i = 1; i <= 9; ++i) grid.push_back(0.1 * i);
  CHECK(ks_statistic(grid, [](double x) { return x; }) ==
        doctest::Approx(0.1).epsilon(1e-12));

  Rng rng(9);
  std::vector<double> u(5000);
  for (auto& v : u) v = rng.uniform();
  CHECK(ks_statistic(u, [](double x) { return std::min(1.0, x); }) <=
        1.63 / std::sqrt(5000.0));
}

TEST_CASE("split-chain psrf") {
  Rng rng(10);
  std::vector<std::vector<double>> same(4, std::vector<double>(4000));
  for (auto& c : same)
    for (auto& v : c) v = rng.normal();
  CHECK(split_chain_psrf(same) == doctest::Approx(1.0).epsilon(0.02));

  auto shifted = same;
  for (auto& v : shifted[0]) v += 3.0;
  CHECK(split_chain_psrf(shifted) > 1.2);
}

TEST_CASE("dn tail report: thresholds, counts, bound comparison") {
  SampleBatch b;
  b.n = 64;
  b.beta = 1.0;
  // synthetic exceedances: 100 samples at 0, 100 slightly above the t=1 bar
  std::vector<double> tg{0.0, 1.0};
  double thr1 = std::sqrt((std::log(64.0) + 1.0) / (0.9 * 64.0));
  for (int i = 0; i < 100; ++i) b.d_n.push_back(0.0);
  for (int i = 0; i < 100; ++i) b.d_n.push_back(thr1 + 1e-6);
  TailReport rep = dn_tail(b, gin_eq(), 0.9, 0.0, tg);
  REQUIRE(rep.rows.size() == 2);
  CHECK(rep.rows[0].threshold ==
        doctest::Approx(std::sqrt(std::log(64.0) / (0.9 * 64.0))));
  CHECK(rep.rows[1].p_hat == doctest::Approx(0.5));
  CHECK(rep.rows[1].bound == doctest::Approx(std::exp(-2.0)));
  // exceedance probability 0.5 >> e^{-2}: the lower confidence limit flags it
  CHECK_FALSE(rep.rows[1].pass);
  CHECK(rep.rows[0].pass);  // p_hat 0.5 <= bound 1 at t = 0

  CHECK_THROWS(dn_tail(b, gin_eq(), 1.5, 0.0, tg));  // c >= c0
  std::vector<double> bad{1.0, 0.5};
  CHECK_THROWS(dn_tail(b, gin_eq(), 0.9, 0.0, bad));
}

TEST_CASE("localization scaling recovers a planted rho") {
  std::vector<SampleBatch> batches;
  for (int n : {64, 256, 1024}) {
    SampleBatch b;
    b.n = n;
    b.beta = 2.0;
    double rho = 0.4;
    double scale = rho * std::sqrt(std::log((double)n) / (2.0 * n));
    for (int i = 0; i < 1500; ++i)
      b.d_n.push_back(scale * (0.95 + 0.1 * i / 1500.0));  // median ~ scale
    batches.push_back(std::move(b));
  }
  ScalingReport rep = localization_scaling(batches, 1.0);
  REQUIRE(rep.rows.size() == 3);
  for (const auto& r : rep.rows) CHECK(std::abs(r.rho - 0.4) <= 0.01);
  CHECK(rep.a_ref == doctest::Approx(1.1));
  CHECK(rep.below_a_at_largest);

  batches.pop_back();
  CHECK_THROWS(localization_scaling(batches, 1.0));  // needs >= 3 sizes
}

TEST_CASE("large-r tail: admissible radii and bound arithmetic") {
  SampleBatch b;
  b.n = 32;
  b.beta = 2.0;
  for (int i = 0; i < 500; ++i) b.d_n.push_back(0.05);
  std::vector<double> rg{1.5};
  LargeRReport rep = large_r_tail(b, gin_eq(), rg, 0.9);
  REQUIRE(rep.rows.size() == 1);
  CHECK(rep.rows[0].exceed == 0);
  CHECK(rep.rows[0].pass);
  CHECK(rep.rows[0].k_r > 0);
  // radii below r0 = sqrt(a0/c) are rejected
  std::vector<double> small{0.1};
  CHECK_THROWS(large_r_tail(b, gin_eq(), small, 0.9));
}

TEST_CASE("one-point histogram and radial profile normalization") {
  ChainParams par;
  par.n = 16;
  par.beta = 1.0;
  par.sweeps = 2000;
  par.burn_in = 500;
  par.thinning = 10;
  par.seed = 15;
  par.store_points = true;
  SampleBatch b = run_chain(par, make_ginibre(), gin_eq());

  GridSpec g = GridSpec::make(Box::centered(1.6), 8);  // h = 0.4 >= 2/sqrt(16)
  OnePointField f = one_point_histogram(b, g);
  CHECK(f.bin_spacing_ratio >= 1.6);
  double mass = 0;
  for (double v : f.values) mass += v * g.cell_area_da();
  CHECK(mass == doctest::Approx(16.0).epsilon(1e-9));
  CHECK(f.total_mass == doctest::Approx(mass));

  auto prof = radial_one_point_profile(b, 2.0, 16);
  long count = 0;
  for (const auto& row : prof) count += row.count;
  CHECK(count == (long)b.points.size() * 16);
}

TEST_CASE("empirical measure test against its own equilibrium") {
  // i.i.d. sigma draws stand in for a perfectly mixed chain
  SampleBatch b;
  b.n = 64;
  b.beta = 1.0;
  Rng rng(21);
  for (int s = 0; s < 400; ++s) {
    Configuration cfg(64);
    for (auto& z : cfg) z = sample_equilibrium_point(gin_eq(), rng);
    b.points.push_back(cfg);
  }
  ConvergenceReport rep =
      empirical_measure_test(b, gin_eq(), builtin_test_functions(gin_eq()));
  REQUIRE(rep.rows.size() >= 3);
  for (const auto& r : rep.rows) {
    INFO(r.name);
    CHECK(r.pass);
  }
}

TEST_CASE("decay fit on exact kernel data") {
  auto ens = RadialEnsemble::build(make_ginibre(), 128);
  auto pts = decay_points_exact(ens, std::sqrt(0.02), std::sqrt(0.08), 25);
  REQUIRE(pts.size() == 25);
  CHECK(pts.front().first == doctest::Approx(0.02).epsilon(1e-9));
  CHECK(pts.back().first == doctest::Approx(0.08).epsilon(1e-9));
  DecayFit fit = decay_fit(pts, 1.0, 128, 1.0);
  CHECK(fit.c_hat == doctest::Approx(1.906).epsilon(0.02));
  CHECK(fit.verdict);
  CHECK(fit.residual_rms < 0.5);
}

TEST_CASE("interpolation identities at small n (streamed smoke run)") {
  ChainParams par;
  par.n = 2;
  par.beta = 1.5;
  par.sweeps = 60000;
  par.burn_in = 2000;
  par.thinning = 1;
  par.seed = 31;
  Region U = Region::disc({0.35, 0.0}, 0.45);
  Region W = Region::disc({-0.25, 0.15}, 0.5);
  IdentityCheck one =
      interpolation_identity_single(par, make_ginibre(), &gin_eq(), U, W);
  CHECK(one.samples > 50000);
  CHECK(one.lhs > 0);
  CHECK(one.pass);

  par.n = 3;
  par.sweeps = 40000;
  IdentityCheck two = interpolation_identity_pair(
      par, make_ginibre(), &gin_eq(), U, Region::disc({-0.4, -0.2}, 0.4), W,
      Region::disc({0.1, 0.45}, 0.45));
  CHECK(two.samples > 30000);
  CHECK(two.pass);
}
