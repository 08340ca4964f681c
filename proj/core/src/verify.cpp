#include "cgas/verify.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <limits>
#include <sstream>

#include "cgas/analysis.hpp"
#include "cgas/artifacts.hpp"
#include "cgas/config.hpp"
#include "cgas/determinantal.hpp"
#include "cgas/energy.hpp"
#include "cgas/lagrange.hpp"
#include "cgas/potential.hpp"
#include "cgas/rng.hpp"
#include "cgas/sampler.hpp"

namespace cgas {

namespace {

std::string fmtd(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::vector<complexd> random_coeffs(Rng& rng, int n) {
  std::vector<complexd> c(n);
  for (auto& x : c) x = {rng.normal(), rng.normal()};
  return c;
}

// centroid and radius scale of the droplet boundary
struct Hull {
  complexd ctr{0, 0};
  double scale = 0;
  std::vector<complexd> base;  // boundary anchors
};

Hull hull_of(const EquilibriumResult& eq) {
  Hull h;
  h.base = eq.droplet.boundary_samples(64);
  for (complexd b : h.base) h.ctr += b;
  h.ctr /= (double)h.base.size();
  for (complexd b : h.base) h.scale = std::max(h.scale, std::abs(b - h.ctr));
  return h;
}

}  // namespace

PropertyResult check_max_principle(const EquilibriumResult& eq, int n,
                                   int trials, std::uint64_t seed) {
  PropertyResult res{"weighted_poly_max_principle", false, ""};
  const Potential& p = *eq.potential;
  Rng rng(seed, 777);

  // droplet evaluation set: subsampled cells plus a dense boundary ring
  std::vector<complexd> inside;
  const GridSpec& g = eq.grid;
  long mask_cells = 0;
  for (auto m : eq.droplet_mask) mask_cells += m;
  int stride = std::max<long>(1, mask_cells / 4096);
  long c = 0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      if (eq.droplet_mask[g.index(i, j)] && (c++ % stride) == 0)
        inside.push_back(g.center(i, j));
  for (complexd b : eq.droplet.boundary_samples(1024)) inside.push_back(b);

  Hull h = hull_of(eq);
  std::vector<std::pair<complexd, double>> ring;
  for (double frac : {0.04, 0.08, 0.15, 0.3, 0.6, 1.0})
    for (complexd b : h.base) {
      complexd dir = (b - h.ctr) / std::abs(b - h.ctr);
      complexd z = b + frac * h.scale * dir;
      ring.emplace_back(z, effective_potential(eq, z));
    }

  int violations = 0;
  double worst = -std::numeric_limits<double>::infinity();
  const double tol = std::log1p(1e-6);
  for (int t = 0; t < trials; ++t) {
    auto coeffs = random_coeffs(rng, n);
    double max_s = -std::numeric_limits<double>::infinity();
    for (complexd z : inside)
      max_s = std::max(max_s, weighted_poly_log_abs(coeffs, p, n, z));
    for (const auto& [z, qeff] : ring) {
      double lhs = weighted_poly_log_abs(coeffs, p, n, z) + 0.5 * n * qeff;
      worst = std::max(worst, lhs - max_s);
      if (lhs > max_s + tol) ++violations;
    }
  }
  res.pass = violations == 0;
  res.detail = "trials=" + std::to_string(trials) +
               " ring_points=" + std::to_string(ring.size()) +
               " violations=" + std::to_string(violations) +
               " worst_log_margin=" + fmtd(worst);
  return res;
}

PropertyResult check_pointwise_bound(const EquilibriumResult& eq, int n,
                                     int trials, std::uint64_t seed) {
  PropertyResult res{"weighted_poly_pointwise_bound", false, ""};
  const Potential& p = *eq.potential;
  Rng rng(seed, 778);
  const GridSpec& g = eq.grid;
  Hull h = hull_of(eq);
  const double rn = 1.0 / std::sqrt((double)n);
  const double collar = 0.15 * h.scale;

  // s beats lap Q on the closed neighbourhood that the discs can touch
  double s = 0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      int id = g.index(i, j);
      if (eq.cell_delta[id] <= collar + rn + g.hx)
        s = std::max(s, p.laplacian(g.center(i, j)));
    }
  s += 0.01;

  const double betas[] = {0.5, 1.0, 2.0};
  int violations = 0, refined = 0;
  auto integral_log = [&](const std::vector<complexd>& coeffs, complexd z0,
                          double beta, int n1, int n2) {
    RegionRule rule = make_region_rule(Region::disc(z0, rn), n1, n2);
    double m = weighted_poly_log_abs(coeffs, p, n, z0);
    if (!std::isfinite(m)) m = 0;
    double acc = 0;
    for (std::size_t k = 0; k < rule.pts.size(); ++k) {
      double lf = weighted_poly_log_abs(coeffs, p, n, rule.pts[k]);
      acc += rule.w[k] * std::exp(2.0 * beta * (lf - m));
    }
    return std::log(acc) + 2.0 * beta * m;
  };

  for (int t = 0; t < trials; ++t) {
    auto coeffs = random_coeffs(rng, n);
    std::vector<complexd> probes{h.ctr};
    for (double u : {-0.6, -0.2, 0.0, 0.5}) {
      complexd b = h.base[rng.uniform_int((std::uint32_t)h.base.size())];
      complexd dir = (b - h.ctr) / std::abs(b - h.ctr);
      probes.push_back(b + u * collar * dir);
    }
    for (complexd z0 : probes)
      for (double beta : betas) {
        double lhs = 2.0 * beta * weighted_poly_log_abs(coeffs, p, n, z0);
        double rhs1 = std::log((double)n) + s * beta +
                      integral_log(coeffs, z0, beta, 12, 24);
        bool ok1 = lhs <= rhs1 + 1e-10;
        double rhs2 = std::log((double)n) + s * beta +
                      integral_log(coeffs, z0, beta, 24, 48);
        bool ok2 = lhs <= rhs2 + 1e-10;
        bool ok = ok2;
        if (ok1 != ok2) {  // refine until the verdict is stable
          ++refined;
          double rhs3 = std::log((double)n) + s * beta +
                        integral_log(coeffs, z0, beta, 48, 96);
          ok = lhs <= rhs3 + 1e-10;
        }
        if (!ok) ++violations;
      }
  }
  res.pass = violations == 0;
  res.detail = "trials=" + std::to_string(trials) + " s=" + fmtd(s) +
               " violations=" + std::to_string(violations) +
               " refined=" + std::to_string(refined);
  return res;
}

namespace {

PropertyResult named(const std::string& name, bool pass,
                     const std::string& detail) {
  return {name, pass, detail};
}

PropertyResult guard(const std::string& name,
                     const std::function<PropertyResult()>& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    return {name, false, std::string("exception: ") + e.what()};
  }
}

}  // namespace

VerifySummary run_verify_suite(int threads, std::uint64_t seed) {
  (void)threads;
  VerifySummary sum;
  auto add = [&](PropertyResult r) { sum.results.push_back(std::move(r)); };

  // --- potential layer -------------------------------------------------------
  add(guard("perturbation_identity", [&] {
    auto base = make_ginibre();
    auto pert = make_perturbation("sinusoidal", 0.4);
    auto q = perturb(base, pert, 16, Box::centered(3.0));
    Rng rng(seed, 1);
    double worst = 0;
    for (int i = 0; i < 200; ++i) {
      complexd z{4.0 * rng.uniform() - 2.0, 4.0 * rng.uniform() - 2.0};
      worst = std::max(
          worst, std::abs(q->value(z) - base->value(z) - pert.u(z) / 16.0));
    }
    return named("perturbation_identity", worst <= 1e-12,
                 "max|dq - u/n|=" + fmtd(worst));
  }));

  add(guard("laplacian_stencil_agreement", [&] {
    Rng rng(seed, 2);
    double worst = 0;
    for (PotentialPtr p :
         {make_ginibre(), make_power(2.0), make_elliptic(0.5)}) {
      for (int i = 0; i < 50; ++i) {
        complexd z{1.8 * rng.uniform() + 0.05, 1.8 * rng.uniform() + 0.05};
        worst = std::max(
            worst, std::abs(p->laplacian(z) - fd_quarter_laplacian(*p, z)));
      }
    }
    return named("laplacian_stencil_agreement", worst <= 1e-5,
                 "max|lap - stencil|=" + fmtd(worst));
  }));

  // --- equilibrium -----------------------------------------------------------
  EquilibriumResult eq_gin = solve_radial(make_ginibre()).eq;
  add(guard("radial_constants_closed_form", [&] {
    double e1 = std::abs(eq_gin.droplet.disc_radius() - 1.0);
    double e2 = std::abs(eq_gin.c0 - 1.0);
    double e3 = std::abs(eq_gin.frostman_gamma - 1.0);
    double e4 = std::abs(eq_gin.robin_gamma_q - 0.75);
    bool ok = e1 <= 0.02 && e2 <= 0.02 && e3 <= 0.01 && e4 <= 0.01;
    return named("radial_constants_closed_form", ok,
                 "R_err=" + fmtd(e1) + " c0_err=" + fmtd(e2) +
                     " gamma_err=" + fmtd(e3) + " robin_err=" + fmtd(e4));
  }));

  add(guard("exterior_floor_all_builtins", [&] {
    long total = 0;
    std::string parts;
    EquilibriumResult eq_pow = solve_radial(make_power(2.0)).eq;
    EquilibriumResult eq_ell = solve_grid(
        make_elliptic(0.5), GridDomain{Box::centered(2.2), 128}, {});
    for (const EquilibriumResult* eq : {&eq_gin, &eq_pow, &eq_ell}) {
      QuadraticFloor fl = quadratic_floor_scan(*eq, 0.9 * eq->c0);
      total += fl.violations;
      parts += (parts.empty() ? "" : ",") + std::to_string(fl.violations);
    }
    return named("exterior_floor_all_builtins", total == 0,
                 "violations=[" + parts + "]");
  }));

  add(guard("grid_matches_radial_ginibre", [&] {
    EquilibriumResult eq = solve_grid(
        make_ginibre(), GridDomain{Box::centered(2.0), 128}, {});
    double dgeo = 0;
    for (complexd b : eq.droplet.boundary_samples(512))
      dgeo = std::max(dgeo, std::abs(std::abs(b) - 1.0));
    bool ok = dgeo <= 2.0 * eq.grid.hx &&
              std::abs(eq.frostman_gamma - 1.0) <= 0.02 &&
              std::abs(eq.robin_gamma_q - 0.75) <= 0.02 &&
              std::abs(eq.c0 - 1.0) <= 0.05;
    return named("grid_matches_radial_ginibre", ok,
                 "hausdorff=" + fmtd(dgeo) + " gamma=" +
                     fmtd(eq.frostman_gamma) + " robin=" +
                     fmtd(eq.robin_gamma_q) + " c0=" + fmtd(eq.c0));
  }));

  add(guard("grid_energy_consistency", [&] {
    const GridSpec& g = eq_gin.grid;
    std::vector<double> q(g.cells());
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        q[g.index(i, j)] = eq_gin.potential->value(g.center(i, j));
    double e = grid_energy(g, eq_gin.sigma_weights, q);
    double err = std::abs(e - eq_gin.robin_gamma_q);
    return named("grid_energy_consistency", err <= 5e-3,
                 "discrete=" + fmtd(e) + " robin=" +
                     fmtd(eq_gin.robin_gamma_q) + " err=" + fmtd(err));
  }));

  // --- determinantal ---------------------------------------------------------
  add(guard("kernel_normalization", [&] {
    double worst = 0;
    for (int n : {8, 64}) {
      auto ens = RadialEnsemble::build(make_ginibre(), n);
      worst = std::max(worst, std::abs(ens.normalization_quadrature() - n));
    }
    return named("kernel_normalization", worst <= 1e-6,
                 "max|int R_n - n|=" + fmtd(worst));
  }));

  add(guard("monomial_norms_gamma_closed_form", [&] {
    auto ens = RadialEnsemble::build(make_ginibre(), 16);
    double worst = 0;
    for (int k = 0; k < 16; ++k)
      worst = std::max(worst, std::abs(ens.log_norm(k) - (std::lgamma(k + 1.0)
                                       - (k + 1.0) * std::log(16.0))));
    return named("monomial_norms_gamma_closed_form", worst <= 1e-8,
                 "max lgamma err=" + fmtd(worst));
  }));

  add(guard("norms_log_convex", [&] {
    auto ens = RadialEnsemble::build(make_power(2.0), 32);
    double worst = 0;
    for (int k = 1; k + 1 < 32; ++k)
      worst = std::min(worst, ens.log_norm(k + 1) + ens.log_norm(k - 1) -
                                  2.0 * ens.log_norm(k));
    return named("norms_log_convex", worst >= -1e-12,
                 "min second difference=" + fmtd(worst));
  }));

  add(guard("radius_cdf_monotone", [&] {
    auto ens = RadialEnsemble::build(make_ginibre(), 32);
    double prev = -1;
    bool mono = true;
    for (int i = 0; i <= 200; ++i) {
      double v = ens.radius_cdf(ens.r_cut() * i / 200.0);
      mono = mono && v >= prev - 1e-14 && v >= 0 && v <= 1;
      prev = v;
    }
    mono = mono && ens.radius_cdf(0) == 0 && prev >= 1.0 - 1e-6;
    return named("radius_cdf_monotone", mono, "tail=" + fmtd(prev));
  }));

  // --- weighted polynomial lemmas -------------------------------------------
  add(guard("weighted_poly_max_principle",
            [&] { return check_max_principle(eq_gin, 32, 100, seed); }));
  add(guard("weighted_poly_pointwise_bound",
            [&] { return check_pointwise_bound(eq_gin, 64, 100, seed); }));

  // --- sampler ----------------------------------------------------------------
  add(guard("chain_determinism", [&] {
    ChainParams par;
    par.n = 8;
    par.beta = 1.5;
    par.sweeps = 200;
    par.burn_in = 50;
    par.thinning = 2;
    par.seed = seed;
    SampleBatch a = run_chain(par, make_ginibre(), eq_gin);
    SampleBatch b = run_chain(par, make_ginibre(), eq_gin);
    bool same = a.d_n == b.d_n && a.energy == b.energy &&
                a.max_radius == b.max_radius;
    return named("chain_determinism", same,
                 same ? "bit-identical" : "divergent replicate");
  }));

  add(guard("incremental_energy_identity", [&] {
    ChainParams par;
    par.n = 12;
    par.beta = 2.0;
    par.seed = seed;
    ChainState chain(par, make_ginibre(), &eq_gin);
    Rng rng(seed, 3);
    double worst = 0;
    for (int i = 0; i < 100; ++i) {
      Configuration cfg = chain.config();
      int j = (int)rng.uniform_int(12);
      complexd z{cfg[j].real() + 0.1 * rng.normal(),
                 cfg[j].imag() + 0.1 * rng.normal()};
      double h0 = hamiltonian(cfg, *eq_gin.potential, par.n);
      Configuration moved = cfg;
      moved[j] = z;
      double h1 = hamiltonian(moved, *eq_gin.potential, par.n);
      double delta = chain.move_delta(j, z);
      worst = std::max(worst,
                       std::abs(delta - (h1 - h0)) / std::max(1.0, std::abs(h1 - h0)));
      chain.sweep();
    }
    chain.check_consistency();
    return named("incremental_energy_identity", worst <= 1e-9,
                 "max rel err=" + fmtd(worst));
  }));

  // --- analysis / energy -------------------------------------------------------
  add(guard("hamiltonian_energy_identity", [&] {
    Rng rng(seed, 4);
    auto p = make_ginibre();
    double worst = 0;
    for (int t = 0; t < 100; ++t) {
      int n = 2 + (int)rng.uniform_int(6);
      Configuration cfg(n);
      for (auto& z : cfg) z = {rng.normal(), rng.normal()};
      double h = hamiltonian(cfg, *p, n);
      double qs = 0;
      for (complexd z : cfg) qs += p->value(z);
      // H_n = n(n-1) I_sharp + sum Q (the 1/n field average sits in I_sharp)
      double recon = (double)n * (n - 1) * energy_discrete(cfg, *p) + qs;
      worst = std::max(worst, std::abs(h - recon) / std::max(1.0, std::abs(h)));
    }
    return named("hamiltonian_energy_identity", worst <= 1e-10,
                 "max rel err=" + fmtd(worst));
  }));

  add(guard("decay_fit_recovers_generator", [&] {
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i < 30; ++i) {
      double d2 = 1e-4 + i * 2e-4;
      pts.emplace_back(d2, 2.0 * 1.0 * 64 * d2 + 0.37);
    }
    DecayFit fit = decay_fit(pts, 1.0, 64, 1.0);
    bool ok = std::abs(fit.c_hat - 2.0) <= 1e-12 && fit.verdict;
    std::vector<std::pair<double, double>> flat;
    for (int i = 0; i < 10; ++i) flat.emplace_back(i * 1e-3, 5.0);
    DecayFit f2 = decay_fit(flat, 1.0, 64, 1.0);
    ok = ok && std::abs(f2.slope) <= 1e-12 && !f2.verdict;
    return named("decay_fit_recovers_generator", ok,
                 "c_hat=" + fmtd(fit.c_hat));
  }));

  add(guard("snapshot_roundtrip", [&] {
    Rng rng(seed, 5);
    std::vector<Configuration> frames(3, Configuration(7));
    for (auto& f : frames)
      for (auto& z : f) z = {rng.normal(), rng.normal()};
    auto path = (std::filesystem::temp_directory_path() /
                 "cgas_verify_snapshot.bin").string();
    write_snapshot(path, frames);
    auto back = read_snapshot(path);
    std::filesystem::remove(path);
    bool same = back == frames;
    return named("snapshot_roundtrip", same,
                 same ? "bit-identical" : "mismatch");
  }));

  add(guard("config_env_override", [&] {
    ConfigTable t = parse_config_text("[sampler]\nsweeps = 10\n", "inline");
    ::setenv("CGAS_SAMPLER_SWEEPS", "25", 1);
    apply_env_overrides(t);
    ::unsetenv("CGAS_SAMPLER_SWEEPS");
    bool ok = t.get_int("sampler.sweeps") == 25;
    return named("config_env_override", ok, "sweeps=" +
                 std::to_string(t.get_int("sampler.sweeps")));
  }));

  return sum;
}

}  // namespace cgas
