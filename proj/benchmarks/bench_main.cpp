// Hot-path microbenchmarks: the FFT grid kernel, the incremental Metropolis
// sweep, ensemble construction, and the geometry queries that sit inside the
// analysis inner loops.

#include <benchmark/benchmark.h>

#include "cgas/determinantal.hpp"
#include "cgas/equilibrium.hpp"
#include "cgas/potential.hpp"
#include "cgas/rng.hpp"
#include "cgas/sampler.hpp"

using namespace cgas;

namespace {

const EquilibriumResult& ginibre_eq() {
  static EquilibriumResult eq = solve_radial(make_ginibre()).eq;
  return eq;
}

void BM_GridEnergy(benchmark::State& state) {
  int res = (int)state.range(0);
  GridSpec g = GridSpec::make(Box::centered(2.0), res);
  std::vector<double> w(g.cells()), q(g.cells());
  Rng rng(7);
  double tot = 0;
  for (auto& x : w) tot += (x = rng.uniform());
  for (auto& x : w) x /= tot;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      q[g.index(i, j)] = std::norm(g.center(i, j));
  for (auto _ : state) benchmark::DoNotOptimize(grid_energy(g, w, q));
  state.SetComplexityN(res);
}
BENCHMARK(BM_GridEnergy)->Arg(64)->Arg(128)->Arg(256);

void BM_MetropolisSweep(benchmark::State& state) {
  ChainParams par;
  par.n = (int)state.range(0);
  par.beta = 2.0;
  par.seed = 11;
  ChainState chain(par, make_ginibre(), &ginibre_eq());
  for (auto _ : state) chain.sweep();
  state.SetItemsProcessed(state.iterations() * par.n);
}
BENCHMARK(BM_MetropolisSweep)->Arg(16)->Arg(64)->Arg(256);

void BM_EnsembleBuild(benchmark::State& state) {
  int n = (int)state.range(0);
  for (auto _ : state)
    benchmark::DoNotOptimize(RadialEnsemble::build(make_ginibre(), n));
}
BENCHMARK(BM_EnsembleBuild)->Arg(64)->Arg(256);

void BM_RadiusSample(benchmark::State& state) {
  auto ens = RadialEnsemble::build(make_ginibre(), (int)state.range(0));
  Rng rng(3);
  for (auto _ : state) benchmark::DoNotOptimize(ens.sample_radii(rng));
}
BENCHMARK(BM_RadiusSample)->Arg(64)->Arg(256);

void BM_DropletDistance(benchmark::State& state) {
  const auto& eq = ginibre_eq();
  Rng rng(5);
  for (auto _ : state) {
    complexd z{4.0 * rng.uniform() - 2.0, 4.0 * rng.uniform() - 2.0};
    benchmark::DoNotOptimize(eq.droplet.distance(z));
  }
}
BENCHMARK(BM_DropletDistance);

void BM_EffectivePotential(benchmark::State& state) {
  const auto& eq = ginibre_eq();
  Rng rng(6);
  for (auto _ : state) {
    complexd z{4.0 * rng.uniform() - 2.0, 4.0 * rng.uniform() - 2.0};
    benchmark::DoNotOptimize(effective_potential(eq, z));
  }
}
BENCHMARK(BM_EffectivePotential);

}  // namespace

BENCHMARK_MAIN();
