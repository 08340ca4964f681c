#include <doctest.h>

#include <cmath>

#include "cgas/equilibrium.hpp"
#include "cgas/potential.hpp"
#include "cgas/rng.hpp"
#include "cgas/sampler.hpp"

using namespace cgas;

namespace {
const EquilibriumResult& gin_eq() {
  static EquilibriumResult eq = solve_radial(make_ginibre()).eq;
  return eq;
}
}  // namespace

TEST_CASE("hamiltonian hand values") {
  auto p = make_ginibre();
  Configuration cfg{{0, 0}, {1, 0}};
  CHECK(hamiltonian(cfg, *p, 2) == doctest::Approx(2.0).epsilon(1e-14));
  Configuration cfg2{{0, 0}, {0.5, 0}};
  CHECK(hamiltonian(cfg2, *p, 2) ==
        doctest::Approx(2 * std::log(2.0) + 0.5).epsilon(1e-14));
  Configuration coincident{{0.3, 0}, {0.3, 0}};
  CHECK(std::isinf(hamiltonian(coincident, *p, 2)));
}

TEST_CASE("incremental move delta equals the energy difference") {
  ChainParams par;
  par.n = 10;
  par.beta = 1.0;
  par.seed = 19;
  ChainState chain(par, make_ginibre(), &gin_eq());
  Rng rng(4);
  for (int t = 0; t < 50; ++t) {
    Configuration cfg = chain.config();
    int j = (int)rng.uniform_int(10);
    complexd znew{cfg[j].real() + 0.2 * rng.normal(),
                  cfg[j].imag() + 0.2 * rng.normal()};
    Configuration moved = cfg;
    moved[j] = znew;
    double expected = hamiltonian(moved, *make_ginibre(), par.n) -
                      hamiltonian(cfg, *make_ginibre(), par.n);
    CHECK(chain.move_delta(j, znew) ==
          doctest::Approx(expected).epsilon(1e-9));
    chain.sweep();
  }
}

TEST_CASE("energy cache stays consistent across many sweeps") {
  ChainParams par;
  par.n = 16;
  par.beta = 2.0;
  par.seed = 5;
  ChainState chain(par, make_power(2.0), nullptr);
  for (int s = 0; s < 300; ++s) chain.sweep();
  CHECK_NOTHROW(chain.check_consistency());
  double cached = chain.total_energy();
  CHECK(cached == doctest::Approx(chain.recompute_energy()).epsilon(1e-10));
}

TEST_CASE("identical seeds give bit-identical batches") {
  ChainParams par;
  par.n = 8;
  par.beta = 1.5;
  par.sweeps = 400;
  par.burn_in = 100;
  par.thinning = 4;
  par.seed = 2024;
  par.store_points = true;
  SampleBatch a = run_chain(par, make_ginibre(), gin_eq());
  SampleBatch b = run_chain(par, make_ginibre(), gin_eq());
  CHECK(a.d_n == b.d_n);
  CHECK(a.energy == b.energy);
  CHECK(a.max_radius == b.max_radius);
  CHECK(a.points == b.points);

  // a different stream decorrelates while keeping the seed
  par.stream = 1;
  SampleBatch c = run_chain(par, make_ginibre(), gin_eq());
  CHECK(a.d_n != c.d_n);
}

TEST_CASE("batch bookkeeping: counts, acceptance window, d_n recompute") {
  ChainParams par;
  par.n = 12;
  par.beta = 1.0;
  par.sweeps = 1000;
  par.burn_in = 300;
  par.thinning = 10;
  par.seed = 77;
  par.store_points = true;
  SampleBatch b = run_chain(par, make_ginibre(), gin_eq());
  CHECK(b.d_n.size() == 100);
  CHECK(b.points.size() == 100);
  CHECK(b.acceptance_rate > 0.2);
  CHECK(b.acceptance_rate < 0.6);
  CHECK_FALSE(b.acceptance_warning);

  for (std::size_t s = 0; s < b.points.size(); ++s) {
    double dn = 0, mr = 0;
    for (complexd z : b.points[s]) {
      dn = std::max(dn, gin_eq().droplet.distance(z));
      mr = std::max(mr, std::abs(z));
    }
    CHECK(b.d_n[s] == doctest::Approx(dn).epsilon(1e-14));
    CHECK(b.max_radius[s] == doctest::Approx(mr).epsilon(1e-14));
  }
}

TEST_CASE("untuned oversized steps trip the acceptance warning") {
  ChainParams par;
  par.n = 8;
  par.beta = 2.0;
  par.sweeps = 300;
  par.burn_in = 50;
  par.seed = 3;
  par.tune_step = false;
  par.step_scale = 60.0;
  SampleBatch b = run_chain(par, make_ginibre(), gin_eq());
  CHECK(b.acceptance_rate < 0.1);
  CHECK(b.acceptance_warning);
}

TEST_CASE("equilibrium point sampler hits the droplet statistics") {
  Rng rng(123);
  double m2 = 0;
  const int draws = 20000;
  for (int i = 0; i < draws; ++i) {
    complexd z = sample_equilibrium_point(gin_eq(), rng);
    CHECK(std::abs(z) <= 1.0 + 2 * gin_eq().grid.hx);
    m2 += std::norm(z);
  }
  // E|z|^2 under the ginibre equilibrium is 1/2
  CHECK(std::abs(m2 / draws - 0.5) <= 0.01);
}
