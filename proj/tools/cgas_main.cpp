// cgas: experiment driver for the Coulomb-gas toolkit.
//
//   equilibrium  solve the measure, emit fields.csv + equilibrium.json
//   sample       Metropolis chains, emit chain CSVs (+ snapshots) + batches.json
//   exact        determinantal channel: norms/radius-law/kernel-profile/gumbel
//   analyze      tail reports, scaling, convergence, decay fit, identities
//   verify       cross-module property suite; exit 0 iff everything passes
//
// Every artifact is written atomically and listed (path, FNV-1a checksum,
// seconds) in manifest.json, which is merged across stages that share an
// output directory.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cgas/analysis.hpp"
#include "cgas/artifacts.hpp"
#include "cgas/config.hpp"
#include "cgas/determinantal.hpp"
#include "cgas/energy.hpp"
#include "cgas/equilibrium.hpp"
#include "cgas/potential.hpp"
#include "cgas/rng.hpp"
#include "cgas/sampler.hpp"
#include "cgas/stats.hpp"
#include "cgas/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace cgas;

namespace {

double now_seconds() {
  using namespace std::chrono;
  return duration<double>(steady_clock::now().time_since_epoch()).count();
}

// manifest-tracked writer; merges with a previous manifest for the same config
class ArtifactWriter {
 public:
  ArtifactWriter(std::string dir, std::string digest) : dir_(std::move(dir)) {
    man_.config_digest = std::move(digest);
    fs::path prev = fs::path(dir_) / "manifest.json";
    if (fs::exists(prev)) {
      try {
        json j = json::parse(std::ifstream(prev));
        if (j.value("config_hash", "") == man_.config_digest)
          for (const auto& e : j.at("artifacts"))
            man_.add(e.at("path"), e.at("checksum"), e.at("seconds"));
      } catch (const std::exception&) {
        // stale or foreign manifest: start fresh
      }
    }
  }

  template <class Fn>
  void emit(const std::string& rel, Fn&& build) {
    double t0 = now_seconds();
    std::string content = build();
    write_file_atomic((fs::path(dir_) / rel).string(), content);
    record(rel, hex64(fnv1a(content)), now_seconds() - t0);
  }

  void emit_snapshot(const std::string& rel,
                     const std::vector<Configuration>& frames) {
    double t0 = now_seconds();
    std::string path = (fs::path(dir_) / rel).string();
    write_snapshot(path, frames);
    std::ifstream in(path, std::ios::binary);
    std::ostringstream raw;
    raw << in.rdbuf();
    record(rel, hex64(fnv1a(raw.str())), now_seconds() - t0);
  }

  void finish() {
    write_file_atomic((fs::path(dir_) / "manifest.json").string(),
                      man_.to_json());
  }

  const std::string& dir() const { return dir_; }

 private:
  void record(const std::string& rel, const std::string& sum, double secs) {
    for (auto& e : man_.entries)
      if (e.path == rel) {  // re-emitted artifact: replace in place
        e.checksum = sum;
        e.seconds = secs;
        return;
      }
    man_.add(rel, sum, secs);
  }

  std::string dir_;
  RunManifest man_;
};

struct Stage {
  ExperimentConfig cfg;
  ConfigTable table;
  PotentialPtr base;
  int threads = 1;
};

PotentialPtr potential_for_n(const Stage& st, int n) {
  if (st.cfg.potential.perturbation.empty()) return st.base;
  Perturbation u = make_perturbation(st.cfg.potential.perturbation,
                                     st.cfg.potential.perturbation_amplitude);
  double hw = st.cfg.grid.box_halfwidth > 0
                  ? st.cfg.grid.box_halfwidth
                  : 2.0 * estimate_droplet_scale(*st.base);
  return perturb(st.base, u, n, Box::centered(hw));
}

EquilibriumResult solve_configured(const Stage& st) {
  if (st.base->has_radial_profile())
    return solve_radial(st.base, st.cfg.grid.resolution,
                        st.cfg.grid.box_halfwidth)
        .eq;
  double hw = st.cfg.grid.box_halfwidth > 0
                  ? st.cfg.grid.box_halfwidth
                  : 2.0 * estimate_droplet_scale(*st.base);
  GridSolveOptions opts;
  opts.threads = (unsigned)std::max(1, st.threads);
  return solve_grid(st.base, GridDomain{Box::centered(hw),
                                        st.cfg.grid.resolution}, opts);
}

void enforce_tail_level(const ExperimentConfig& cfg,
                        const EquilibriumResult& eq) {
  if (!(cfg.analysis.c < eq.c0)) {
    std::ostringstream msg;
    msg << "config field analysis.c: must lie below the boundary Laplacian "
           "minimum c0 = "
        << eq.c0 << " of this potential, got " << cfg.analysis.c;
    throw std::runtime_error(msg.str());
  }
}

void report_regime(const SamplerChoice& s) {
  for (std::size_t i = 0; i < s.n_grid.size(); ++i) {
    long n = s.n_grid[i];
    double b = s.beta_for(i);
    double regime = b * (double)n / std::log(std::max<double>(n, 3));
    std::cout << "regime beta*n/log(n): n=" << n << " beta=" << b << " -> "
              << regime << (regime < 10 ? "  (low: bound is weak here)" : "")
              << "\n";
  }
}

std::string batch_stem(long n, double beta, long chain) {
  std::ostringstream os;
  os << "chain_n" << n << "_b" << beta << "_c" << chain;
  return os.str();
}

double gumbel_cdf(double x) { return std::exp(-std::exp(-x)); }

// ---- subcommands -------------------------------------------------------------

int cmd_equilibrium(const Stage& st) {
  EquilibriumResult eq = solve_configured(st);
  enforce_tail_level(st.cfg, eq);
  ArtifactWriter aw(st.cfg.out_dir, config_hash(st.table));
  aw.emit("fields.csv", [&] { return fields_csv(eq); });
  aw.emit("equilibrium.json", [&] { return equilibrium_json(eq); });
  aw.finish();
  std::cout << "equilibrium: gamma=" << eq.frostman_gamma
            << " robin=" << eq.robin_gamma_q << " c0=" << eq.c0
            << " a0=" << eq.a0 << " iters=" << eq.iterations << "\n";
  return 0;
}

int cmd_sample(const Stage& st) {
  EquilibriumResult eq = solve_configured(st);
  enforce_tail_level(st.cfg, eq);
  const SamplerChoice& s = st.cfg.sampler;
  report_regime(s);
  ArtifactWriter aw(st.cfg.out_dir, config_hash(st.table));

  json index;
  index["seed"] = s.seed;
  index["stream_rule"] = "stream = chain_index + n_index * chains";
  index["batches"] = json::array();

  std::uint64_t stream = 0;
  for (std::size_t i = 0; i < s.n_grid.size(); ++i) {
    long n = s.n_grid[i];
    for (long k = 0; k < s.chains; ++k, ++stream) {
      ChainParams par;
      par.n = (int)n;
      par.beta = s.beta_for(i);
      par.sweeps = s.sweeps;
      par.burn_in = s.burn_in;
      par.thinning = s.thinning;
      par.seed = s.seed;
      par.stream = stream;
      par.step_scale = s.step_scale;
      par.store_points = s.store_points;
      SampleBatch b = run_chain(par, potential_for_n(st, (int)n), eq);

      std::string stem = batch_stem(n, par.beta, k);
      aw.emit(stem + ".csv", [&] { return chain_csv(b); });
      json entry;
      entry["file"] = stem + ".csv";
      entry["n"] = n;
      entry["beta"] = par.beta;
      entry["seed"] = par.seed;
      entry["stream"] = par.stream;
      entry["sweeps"] = par.sweeps;
      entry["burn_in"] = par.burn_in;
      entry["thinning"] = par.thinning;
      entry["acceptance_rate"] = b.acceptance_rate;
      entry["step_scale_final"] = b.step_scale_final;
      if (s.store_points) {
        aw.emit_snapshot(stem + ".bin", b.points);
        entry["snapshot"] = stem + ".bin";
      }
      index["batches"].push_back(entry);
      std::cout << stem << ": acceptance=" << b.acceptance_rate
                << (b.acceptance_warning ? "  [outside 0.2-0.6]" : "") << "\n";
    }
  }
  aw.emit("batches.json", [&] { return index.dump(2) + "\n"; });
  aw.finish();
  return 0;
}

int cmd_exact(const Stage& st) {
  if (!st.base->has_radial_profile())
    throw std::runtime_error(
        "the exact channel needs a radially symmetric potential (ginibre or "
        "power); got " + st.cfg.potential.name);
  EquilibriumResult eq = solve_radial(st.base).eq;
  ArtifactWriter aw(st.cfg.out_dir, config_hash(st.table));

  for (std::size_t i = 0; i < st.cfg.exact.n_grid.size(); ++i) {
    long n = st.cfg.exact.n_grid[i];
    RadialEnsemble ens = RadialEnsemble::build(st.base, (int)n);
    std::string tag = "_n" + std::to_string(n);
    aw.emit("norms" + tag + ".csv", [&] { return norms_csv(ens); });
    aw.emit("radius_law" + tag + ".csv",
            [&] { return radius_law_csv(ens, 512); });
    aw.emit("kernel_profile" + tag + ".csv", [&] {
      return kernel_profile_csv(ens, eq.c0, 1.0, ens.r_cut(), 512);
    });

    Rng rng(st.cfg.sampler.seed, 1000 + i);
    std::vector<double> dn((std::size_t)st.cfg.exact.draws);
    for (auto& d : dn) {
      auto radii = ens.sample_radii(rng);
      d = *std::max_element(radii.begin(), radii.end()) -
          ens.droplet_radius();
    }
    try {
      GumbelConstants gc =
          make_gumbel_constants((int)n, ens.droplet_radius(), eq.c0);
      std::vector<double> omega = gumbel_transform(dn, gc);
      double ks = ks_statistic(omega, gumbel_cdf);
      aw.emit("gumbel" + tag + ".csv", [&] { return gumbel_csv(omega, ks); });
      std::cout << "exact n=" << n << ": KS(omega, gumbel)=" << ks << "\n";
    } catch (const std::invalid_argument& e) {
      // gamma_n <= 0 at small n: the rescaled law is undefined there
      std::cout << "exact n=" << n << ": skipping gumbel artifact (" << e.what()
                << ")\n";
    }
  }

  aw.finish();
  return 0;
}

SampleBatch load_batch(const fs::path& dir, const json& entry) {
  SampleBatch b;
  b.n = entry.at("n").get<int>();
  b.beta = entry.at("beta").get<double>();
  b.seed = entry.at("seed").get<std::uint64_t>();
  b.stream = entry.at("stream").get<std::uint64_t>();
  b.sweeps = entry.at("sweeps").get<long>();
  b.burn_in = entry.at("burn_in").get<long>();
  b.thinning = entry.at("thinning").get<long>();
  b.acceptance_rate = entry.at("acceptance_rate").get<double>();
  b.step_scale_final = entry.at("step_scale_final").get<double>();

  fs::path csv = dir / entry.at("file").get<std::string>();
  std::ifstream in(csv);
  if (!in)
    throw std::runtime_error("missing chain artifact " + csv.string() +
                             "; rerun the `sample` subcommand");
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    double idx, dn, en, acc;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &idx, &dn, &en, &acc) ==
        4) {
      b.d_n.push_back(dn);
      b.energy.push_back(en);
    }
  }
  if (entry.contains("snapshot"))
    b.points = read_snapshot((dir / entry.at("snapshot").get<std::string>())
                                 .string());
  return b;
}

int cmd_analyze(const Stage& st, std::uint64_t seed) {
  EquilibriumResult eq = solve_configured(st);
  enforce_tail_level(st.cfg, eq);
  const AnalysisChoice& an = st.cfg.analysis;
  fs::path dir(st.cfg.out_dir);
  fs::path idx = dir / "batches.json";
  if (!fs::exists(idx)) {
    std::cerr << "cgas analyze: no sampling artifacts in '" << dir.string()
              << "' (batches.json not found); run the `sample` subcommand "
                 "first\n";
    return 3;
  }
  json index = json::parse(std::ifstream(idx));
  ArtifactWriter aw(st.cfg.out_dir, config_hash(st.table));

  std::vector<SampleBatch> batches;
  for (const auto& e : index.at("batches"))
    batches.push_back(load_batch(dir, e));
  if (batches.empty()) {
    std::cerr << "cgas analyze: batches.json lists no chains; rerun "
                 "`sample`\n";
    return 3;
  }

  // reconstructed exceedance radii only make sense for a disc droplet
  bool disc = eq.droplet.is_disc();
  double R = disc ? eq.droplet.disc_radius() : 0;

  for (std::size_t i = 0; i < batches.size(); ++i) {
    SampleBatch& b = batches[i];
    if (disc && b.max_radius.empty())
      for (double dn : b.d_n) b.max_radius.push_back(R + std::max(0.0, dn));
    const json& e = index.at("batches")[i];
    std::string stem = e.at("file").get<std::string>();
    stem = stem.substr(0, stem.size() - 4);
    TailReport rep = dn_tail(b, eq, an.c, an.mu, an.t_grid);
    // canonical single-batch report plus one tagged file per chain
    if (i == 0)
      aw.emit("tail_report.csv", [&] { return tail_report_csv(rep); });
    aw.emit("tail_" + stem.substr(6) + ".csv",
            [&] { return tail_report_csv(rep); });
    if (!rep.note.empty())
      std::cout << stem << ": " << rep.note << "\n";
  }

  // localization scaling across n (needs >= 3 sizes)
  {
    std::vector<long> ns;
    for (const auto& b : batches)
      if (std::find(ns.begin(), ns.end(), b.n) == ns.end())
        ns.push_back(b.n);
    if (ns.size() >= 3) {
      ScalingReport rep = localization_scaling(batches, eq.c0);
      double sharp = 0.5 / std::sqrt(eq.c0);
      std::ostringstream csv;
      csv << "n,median_dn,rho,sharp_rho\n";
      for (const auto& r : rep.rows)
        csv << r.n << ',' << r.median_dn << ',' << r.rho << ',' << sharp
            << "\n";
      std::string content = csv.str();
      aw.emit("scaling.csv", [&] { return content; });
      std::cout << "scaling trend: " << rep.trend << " (sharp rho = " << sharp
                << ")\n";
    }
  }

  for (const auto& b : batches)
    if (!b.points.empty()) {
      ConvergenceReport rep =
          empirical_measure_test(b, eq, builtin_test_functions(eq));
      aw.emit("convergence.csv", [&] { return convergence_csv(rep); });
      std::ostringstream prof;
      prof << "r_lo,r_hi,value,count\n";
      for (const auto& row : radial_one_point_profile(
               b, 1.5 * estimate_droplet_scale(*st.base),
               (int)an.histogram_bins))
        prof << row.r_lo << ',' << row.r_hi << ',' << row.value << ','
             << row.count << "\n";
      std::string content = prof.str();
      aw.emit("radial_profile.csv", [&] { return content; });
      break;
    }

  if (st.base->has_radial_profile()) {
    RadialEnsemble ens = RadialEnsemble::build(st.base, 128);
    // the fit window is specified in delta^2 units
    auto pts = decay_points_exact(ens, std::sqrt(an.decay_window_lo),
                                  std::sqrt(an.decay_window_hi), 25);
    DecayFit fit = decay_fit(pts, 1.0, 128, eq.c0);
    aw.emit("decay_fit.json", [&] { return decay_fit_json(fit); });
    std::cout << "exterior decay: c_hat=" << fit.c_hat << " (2*c0 = "
              << 2 * eq.c0 << ")\n";
  }

  // interpolation identities at tiny n (Monte Carlo, streamed)
  {
    ChainParams par;
    par.n = 2;
    par.beta = 1.5;
    par.sweeps = std::min<long>(st.cfg.sampler.sweeps, 200000);
    par.burn_in = st.cfg.sampler.burn_in;
    par.thinning = 1;
    par.seed = seed;
    par.stream = 9001;
    Region U = Region::disc({0.35, 0.0}, 0.45);
    Region W = Region::disc({-0.25, 0.15}, 0.5);
    std::vector<IdentityCheck> ids;
    ids.push_back(interpolation_identity_single(par, st.base, &eq, U, W));
    par.n = 3;
    par.stream = 9002;
    ids.push_back(interpolation_identity_pair(
        par, st.base, &eq, U, Region::disc({-0.4, -0.2}, 0.4), W,
        Region::disc({0.1, 0.45}, 0.45)));
    for (std::size_t i = 0; i < ids.size(); ++i)
      std::cout << "identity " << (i == 0 ? "single" : "pair")
                << ": diff=" << ids[i].diff << " se=" << ids[i].se
                << (ids[i].pass ? "  ok" : "  OUTSIDE 3 s.e.") << "\n";

    // brute-force partition-function checks only exist for tiny n
    std::vector<EntropyCheck> checks;
    for (auto [beta, n] : {std::pair<double, int>{1, 2}, {2, 2}, {1, 3}})
      checks.push_back(entropy_bound_check(*st.base, beta, n));
    for (const auto& c : checks)
      std::cout << "entropy n=" << c.n << " beta=" << c.beta
                << ": lhs=" << c.lhs << " rhs=" << c.rhs
                << (c.pass ? "  ok" : "  VIOLATED") << "\n";
    aw.emit("energy.json", [&] { return energy_json(checks, ids); });
  }

  aw.finish();
  return 0;
}

int cmd_verify(const Stage& st, std::uint64_t seed) {
  VerifySummary sum = run_verify_suite(st.threads, seed);
  ArtifactWriter aw(st.cfg.out_dir, config_hash(st.table));
  json j;
  j["results"] = json::array();
  for (const auto& r : sum.results) {
    std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << "  (" << r.detail
              << ")\n";
    j["results"].push_back(
        {{"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
  }
  j["all_pass"] = sum.all_pass();
  aw.emit("verify.json", [&] { return j.dump(2) + "\n"; });
  aw.finish();
  std::cout << (sum.all_pass() ? "verify: all properties hold\n"
                               : "verify: FAILURES present\n");
  return sum.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"planar Coulomb-gas simulation toolkit"};
  app.require_subcommand(1);

  std::string config_path, out_override;
  int threads = 1;
  std::uint64_t seed_override = 0;
  bool have_seed = false;

  std::vector<CLI::App*> subs;
  for (const char* name :
       {"equilibrium", "sample", "exact", "analyze", "verify"}) {
    CLI::App* s = app.add_subcommand(name);
    s->add_option("--config", config_path, "experiment config file")
        ->required();
    s->add_option("--threads", threads, "worker thread cap");
    s->add_option("--seed", seed_override, "override sampler.seed")
        ->each([&](const std::string&) { have_seed = true; });
    s->add_option("--out", out_override, "override output directory");
    subs.push_back(s);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    Stage st;
    ConfigTable table = parse_config_file(config_path);
    apply_env_overrides(table);
    st.cfg = load_experiment(table);
    st.table = table;
    st.threads = std::max(1, threads);
    if (have_seed) st.cfg.sampler.seed = seed_override;
    if (!out_override.empty()) st.cfg.out_dir = out_override;
    st.base = make_builtin(st.cfg.potential.name, st.cfg.potential.param);

    std::uint64_t seed = st.cfg.sampler.seed;
    if (subs[0]->parsed()) return cmd_equilibrium(st);
    if (subs[1]->parsed()) return cmd_sample(st);
    if (subs[2]->parsed()) return cmd_exact(st);
    if (subs[3]->parsed()) return cmd_analyze(st, seed);
    return cmd_verify(st, seed);
  } catch (const std::exception& e) {
    std::cerr << "cgas: error: " << e.what() << "\n";
    return 2;
  }
}
