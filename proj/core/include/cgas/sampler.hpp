#pragma once
// Metropolis sampling of the Gibbs density ~ e^(-beta H_n) with O(n)
// incremental energy updates, plus per-configuration observables. H_n sums
// log 1/|z_j - z_k| over ordered pairs and carries the field as n * sum Q.

#include "cgas/equilibrium.hpp"
#include "cgas/potential.hpp"
#include "cgas/rng.hpp"
#include "cgas/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace cgas {

using Configuration = std::vector<complexd>;

// +infinity on coincident points or infinite Q; n_field is the field
// multiplier in front of sum Q (equal to the particle count by convention)
double hamiltonian(const Configuration& cfg, const Potential& p, int n_field);

struct ChainParams {
  int n = 16;
  double beta = 1.0;
  long sweeps = 1000;    // post-burn-in sweeps; one sweep = n proposals
  long burn_in = 200;
  int thinning = 1;      // record every thinning-th sweep
  std::uint64_t seed = 1;
  std::uint64_t stream = 0;  // chain index (independent RNG stream)
  double step_scale = 1.0;   // proposal std = step_scale / sqrt(n)
  bool tune_step = true;     // adapt toward 30% acceptance during burn-in only
  bool store_points = false;
  double box_halfwidth = 0;  // sampling box; 0 = auto (2x equilibrium box)
  int consistency_every = 64;  // from-scratch energy recheck cadence (sweeps)
};

class ChainState {
 public:
  // eq may be null: initial points then fall back to a deterministic spiral
  // instead of i.i.d. equilibrium draws
  ChainState(const ChainParams& params, PotentialPtr p,
             const EquilibriumResult* eq);

  // O(n) energy difference for moving particle j to z_new; +inf on collision
  double move_delta(int j, complexd z_new) const;
  void sweep();  // n random-particle Gaussian proposals

  const Configuration& config() const { return pos_; }
  double total_energy() const { return energy_; }
  double beta() const { return par_.beta; }
  double step_scale() const { return step_; }
  void freeze_tuning() { tuning_ = false; }
  double acceptance_rate() const {
    return proposed_ ? (double)accepted_ / (double)proposed_ : 0.0;
  }
  void reset_counters() { accepted_ = proposed_ = 0; }

  // from-scratch recompute; throws if the cache drifted beyond 1e-9 relative
  void check_consistency();

  double recompute_energy() const;
  const std::vector<double>& interaction_sums() const { return sums_; }

 private:
  void rebuild_caches();
  void init_points(const EquilibriumResult* eq);

  ChainParams par_;
  PotentialPtr p_;
  Rng rng_;
  Configuration pos_;
  std::vector<double> sums_;  // s_j = sum_{i != j} log|z_j - z_i|
  mutable std::vector<double> scratch_;
  double energy_ = 0;
  double step_ = 0;
  bool tuning_ = true;
  long accepted_ = 0, proposed_ = 0;
  long tune_accepted_ = 0, tune_proposed_ = 0;
  long sweeps_done_ = 0;
  double box_hw_ = 0;
};

struct SampleBatch {
  // metadata sufficient to reproduce the batch bit-exactly
  int n = 0;
  double beta = 0;
  std::string potential_id;
  std::uint64_t seed = 0, stream = 0;
  long sweeps = 0, burn_in = 0;
  int thinning = 1;
  double step_scale_final = 0;
  double acceptance_rate = 0;
  bool acceptance_warning = false;  // rate outside [0.1, 0.7]

  std::vector<double> d_n;         // droplet-to-farthest-particle distance
  std::vector<double> energy;
  std::vector<double> max_radius;
  std::vector<Configuration> points;  // only when store_points
};

SampleBatch run_chain(const ChainParams& params, PotentialPtr p,
                      const EquilibriumResult& eq);

// i.i.d. draw from the equilibrium measure (inverse-CDF radial profile, or
// cell sampling on the grid weights otherwise)
complexd sample_equilibrium_point(const EquilibriumResult& eq, Rng& rng);

}  // namespace cgas
