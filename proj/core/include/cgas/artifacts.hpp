#pragma once
// Artifact persistence: CSV/JSON emitters with pinned column orders, atomic
// file writes, FNV-1a checksums, binary configuration snapshots ("CGAS1"),
// and the run manifest.

#include <cstdint>
#include <string>
#include <vector>

#include "cgas/analysis.hpp"
#include "cgas/config.hpp"
#include "cgas/determinantal.hpp"
#include "cgas/energy.hpp"
#include "cgas/equilibrium.hpp"
#include "cgas/sampler.hpp"

namespace cgas {

// temp file in the same directory + rename, so readers never see a partial
// artifact; creates parent directories on demand
void write_file_atomic(const std::string& path, const std::string& content);

std::uint64_t fnv1a(const void* data, std::size_t len);
std::uint64_t fnv1a(const std::string& s);
std::string hex64(std::uint64_t v);

// canonical hash over sorted key=value lines
std::string config_hash(const ConfigTable& table);

struct RunManifest {
  std::string config_digest;
  std::string version = "0.1.0";
  struct Entry {
    std::string path;
    std::string checksum;
    double seconds = 0;
  };
  std::vector<Entry> entries;

  void add(const std::string& path, const std::string& checksum,
           double seconds);
  std::string to_json() const;
};

// ---- CSV emitters (column orders are part of the external contract) --------

// x,y,sigma,q_check,q_eff,droplet
std::string fields_csv(const EquilibriumResult& eq);
// index,d_n,energy,acceptance_rate
std::string chain_csv(const SampleBatch& batch);
// t,threshold,p_hat,ci_lo,ci_hi,bound,pass
std::string tail_report_csv(const TailReport& rep);
// r,r_n,exterior_bound   (bound: n^2 exp(-c beta n delta^2) at c = 0.9 c0)
std::string kernel_profile_csv(const RadialEnsemble& ens, double c0,
                               double beta, double r_max, int npts);
// r,cdf
std::string radius_law_csv(const RadialEnsemble& ens, int npts);
// index,omega,ks_statistic
std::string gumbel_csv(const std::vector<double>& omegas, double ks);
// k,log_h
std::string norms_csv(const RadialEnsemble& ens);
// name,sample_mean,sigma_f,abs_err,se,pass
std::string convergence_csv(const ConvergenceReport& rep);

// ---- JSON emitters -----------------------------------------------------------

std::string equilibrium_json(const EquilibriumResult& eq);
std::string decay_fit_json(const DecayFit& fit);
std::string energy_json(const std::vector<EntropyCheck>& checks,
                        const std::vector<IdentityCheck>& identities);

// ---- binary snapshots --------------------------------------------------------
// layout: "CGAS1" magic, one version byte (=1), u64le frame count, u64le
// points per frame, then frames of little-endian f64 (x,y) pairs

void write_snapshot(const std::string& path,
                    const std::vector<Configuration>& frames);
std::vector<Configuration> read_snapshot(const std::string& path);

}  // namespace cgas
