#include "cgas/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cgas {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

double hamiltonian(const Configuration& cfg, const Potential& p, int n_field) {
  const std::size_t n = cfg.size();
  double pair_sum = 0;  // sum over unordered pairs of log|z_j - z_k|
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = j + 1; k < n; ++k) {
      double d2 = std::norm(cfg[j] - cfg[k]);
      if (d2 == 0) return kInf;
      pair_sum += 0.5 * std::log(d2);
    }
  double field = 0;
  for (complexd z : cfg) {
    double q = p.value(z);
    if (!std::isfinite(q)) return kInf;
    field += q;
  }
  // ordered pairs count each unordered pair twice
  return -2.0 * pair_sum + (double)n_field * field;
}

complexd sample_equilibrium_point(const EquilibriumResult& eq, Rng& rng) {
  const Potential& p = *eq.potential;
  if (p.has_radial_profile() && eq.droplet.is_disc()) {
    // radial mass function m(r) = r Q'(r)/2 on [0, R]; invert by bisection
    double R = eq.droplet.disc_radius();
    double u = rng.uniform();
    double lo = 0, hi = R;
    for (int it = 0; it < 60; ++it) {
      double mid = 0.5 * (lo + hi);
      double m = 0.5 * mid * p.radial_derivative(mid);
      (m < u ? lo : hi) = mid;
    }
    double r = 0.5 * (lo + hi);
    double th = rng.uniform(0.0, 2.0 * kPi);
    return r * complexd{std::cos(th), std::sin(th)};
  }
  // discrete draw over cell weights, uniform jitter within the cell
  const GridSpec& g = eq.grid;
  double u = rng.uniform();
  double acc = 0;
  int chosen = g.cells() - 1;
  for (int id = 0; id < g.cells(); ++id) {
    acc += eq.sigma_weights[id];
    if (u <= acc) {
      chosen = id;
      break;
    }
  }
  int i = chosen % g.nx, j = chosen / g.nx;
  complexd c = g.center(i, j);
  return {c.real() + (rng.uniform() - 0.5) * g.hx,
          c.imag() + (rng.uniform() - 0.5) * g.hy};
}

ChainState::ChainState(const ChainParams& params, PotentialPtr p,
                       const EquilibriumResult* eq)
    : par_(params),
      p_(std::move(p)),
      rng_(params.seed, params.stream),
      scratch_(params.n) {
  if (par_.n < 1) throw std::invalid_argument("chain requires n >= 1");
  if (!(par_.beta >= 0)) throw std::invalid_argument("beta must be >= 0");
  step_ = par_.step_scale / std::sqrt((double)par_.n);
  tuning_ = par_.tune_step;
  box_hw_ = par_.box_halfwidth;
  if (box_hw_ <= 0) {
    if (eq)
      box_hw_ = 2.0 * std::max({std::abs(eq->grid.box.xlo),
                                std::abs(eq->grid.box.xhi),
                                std::abs(eq->grid.box.ylo),
                                std::abs(eq->grid.box.yhi)});
    else
      box_hw_ = 16.0;
  }
  init_points(eq);
  rebuild_caches();
}

void ChainState::init_points(const EquilibriumResult* eq) {
  pos_.resize(par_.n);
  if (eq) {
    for (int j = 0; j < par_.n; ++j)
      pos_[j] = sample_equilibrium_point(*eq, rng_);
    // collisions have probability zero but a cell draw can tie; nudge
    std::sort(pos_.begin(), pos_.end(), [](complexd a, complexd b) {
      return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    for (int j = 1; j < par_.n; ++j)
      if (pos_[j] == pos_[j - 1]) pos_[j] += complexd{1e-12 * j, 1e-12};
  } else {
    // deterministic spiral near the origin
    for (int j = 0; j < par_.n; ++j) {
      double r = 0.1 + 0.4 * j / std::max(1, par_.n - 1);
      double th = 2.399963 * j;  // golden-angle spacing
      pos_[j] = r * complexd{std::cos(th), std::sin(th)};
    }
  }
}

void ChainState::rebuild_caches() {
  const int n = par_.n;
  sums_.assign(n, 0.0);
  for (int j = 0; j < n; ++j)
    for (int i = j + 1; i < n; ++i) {
      double l = 0.5 * std::log(std::norm(pos_[j] - pos_[i]));
      sums_[j] += l;
      sums_[i] += l;
    }
  double field = 0;
  for (complexd z : pos_) field += p_->value(z);
  double pair_sum = 0;
  for (double s : sums_) pair_sum += s;
  energy_ = -pair_sum + (double)n * field;
}

double ChainState::recompute_energy() const {
  return hamiltonian(pos_, *p_, par_.n);
}

double ChainState::move_delta(int j, complexd z_new) const {
  const int n = par_.n;
  double t = 0;
  for (int i = 0; i < n; ++i) {
    if (i == j) {
      scratch_[i] = 0;
      continue;
    }
    double d2 = std::norm(z_new - pos_[i]);
    if (d2 == 0) return kInf;
    scratch_[i] = 0.5 * std::log(d2);
    t += scratch_[i];
  }
  double dq = p_->value(z_new) - p_->value(pos_[j]);
  if (!std::isfinite(dq)) return kInf;
  return -2.0 * (t - sums_[j]) + (double)n * dq;
}

void ChainState::sweep() {
  const int n = par_.n;
  for (int m = 0; m < n; ++m) {
    int j = n == 1 ? 0 : (int)rng_.uniform_int((std::uint32_t)n);
    complexd z_new = pos_[j] + step_ * complexd{rng_.normal(), rng_.normal()};
    ++proposed_;
    ++tune_proposed_;
    if (std::abs(z_new.real()) > box_hw_ || std::abs(z_new.imag()) > box_hw_)
      continue;  // outside the sampling box
    double delta = move_delta(j, z_new);
    bool accept =
        delta <= 0 ||
        (std::isfinite(delta) && rng_.uniform() <= std::exp(-par_.beta * delta));
    if (!accept) continue;
    ++accepted_;
    ++tune_accepted_;
    // scratch_ holds log|z_new - z_i| from move_delta
    double t_new = 0;
    for (int i = 0; i < n; ++i) {
      if (i == j) continue;
      double l_old = 0.5 * std::log(std::norm(pos_[j] - pos_[i]));
      sums_[i] += scratch_[i] - l_old;
      t_new += scratch_[i];
    }
    sums_[j] = t_new;
    pos_[j] = z_new;
    energy_ += delta;
  }
  ++sweeps_done_;

  if (tuning_ && tune_proposed_ >= 50 * n) {
    double rate = (double)tune_accepted_ / (double)tune_proposed_;
    if (rate > 0.35)
      step_ *= 1.15;
    else if (rate < 0.25)
      step_ *= 0.85;
    step_ = std::clamp(step_, 1e-6, 1e3);
    tune_accepted_ = tune_proposed_ = 0;
  }
  if (par_.consistency_every > 0 &&
      sweeps_done_ % par_.consistency_every == 0)
    check_consistency();
}

void ChainState::check_consistency() {
  double fresh = recompute_energy();
  if (std::isfinite(fresh) &&
      std::abs(fresh - energy_) > 1e-9 * (1.0 + std::abs(fresh)))
    throw std::logic_error("chain energy cache drifted past tolerance");
  // refresh to stop roundoff drift from accumulating over long runs
  rebuild_caches();
}

SampleBatch run_chain(const ChainParams& params, PotentialPtr p,
                      const EquilibriumResult& eq) {
  ChainState chain(params, p, &eq);
  for (long s = 0; s < params.burn_in; ++s) chain.sweep();
  chain.freeze_tuning();
  chain.reset_counters();

  SampleBatch batch;
  batch.n = params.n;
  batch.beta = params.beta;
  batch.potential_id = p->name();
  batch.seed = params.seed;
  batch.stream = params.stream;
  batch.sweeps = params.sweeps;
  batch.burn_in = params.burn_in;
  batch.thinning = std::max(1, params.thinning);
  batch.step_scale_final = chain.step_scale() * std::sqrt((double)params.n);

  long retained = params.sweeps / batch.thinning;
  batch.d_n.reserve(retained);
  batch.energy.reserve(retained);
  batch.max_radius.reserve(retained);
  if (params.store_points) batch.points.reserve(retained);

  for (long s = 1; s <= params.sweeps; ++s) {
    chain.sweep();
    if (s % batch.thinning) continue;
    const Configuration& cfg = chain.config();
    double dn = 0, mr = 0;
    for (complexd z : cfg) {
      dn = std::max(dn, eq.droplet.distance(z));
      mr = std::max(mr, std::abs(z));
    }
    batch.d_n.push_back(dn);
    batch.max_radius.push_back(mr);
    batch.energy.push_back(chain.total_energy());
    if (params.store_points) batch.points.push_back(cfg);
  }
  batch.acceptance_rate = chain.acceptance_rate();
  batch.acceptance_warning =
      batch.acceptance_rate < 0.1 || batch.acceptance_rate > 0.7;
  return batch;
}

}  // namespace cgas
