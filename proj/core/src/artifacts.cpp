#include "cgas/artifacts.hpp"

#include <bit>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace cgas {

namespace {

// shortest round-trip decimal, '.' separator, locale-independent
std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void append_u64le(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back((char)((v >> (8 * i)) & 0xff));
}

void append_f64le(std::string& out, double d) {
  append_u64le(out, std::bit_cast<std::uint64_t>(d));
}

std::uint64_t read_u64le(const std::string& s, std::size_t off) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i)
    v |= (std::uint64_t)(unsigned char)s[off + i] << (8 * i);
  return v;
}

}  // namespace

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out.write(content.data(), (std::streamsize)content.size());
    if (!out) throw std::runtime_error("short write: " + path);
  }
  if (std::rename(tmp.c_str(), target.c_str()) != 0)
    throw std::runtime_error("atomic rename failed: " + path);
}

std::uint64_t fnv1a(const void* data, std::size_t len) {
  const auto* p = (const unsigned char*)data;
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t fnv1a(const std::string& s) { return fnv1a(s.data(), s.size()); }

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", (unsigned long long)v);
  return buf;
}

std::string config_hash(const ConfigTable& table) {
  std::string canon;
  for (const auto& [k, v] : table.kv) canon += k + "=" + v + "\n";
  return hex64(fnv1a(canon));
}

void RunManifest::add(const std::string& path, const std::string& checksum,
                      double seconds) {
  entries.push_back({path, checksum, seconds});
}

std::string RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["config_hash"] = config_digest;
  j["version"] = version;
  j["artifacts"] = nlohmann::ordered_json::array();
  for (const auto& e : entries) {
    nlohmann::ordered_json a;
    a["path"] = e.path;
    a["checksum"] = e.checksum;
    a["seconds"] = e.seconds;
    j["artifacts"].push_back(a);
  }
  return j.dump(2) + "\n";
}

std::string fields_csv(const EquilibriumResult& eq) {
  const GridSpec& g = eq.grid;
  std::string out = "x,y,sigma,q_check,q_eff,droplet\n";
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      int id = g.index(i, j);
      complexd z = g.center(i, j);
      out += fmt(z.real());
      out += ',';
      out += fmt(z.imag());
      out += ',';
      out += fmt(eq.sigma_weights[id]);
      out += ',';
      out += fmt(eq.q_check[id]);
      out += ',';
      out += fmt(eq.q_eff[id]);
      out += ',';
      out += eq.droplet_mask[id] ? '1' : '0';
      out += '\n';
    }
  return out;
}

std::string chain_csv(const SampleBatch& batch) {
  std::string out = "index,d_n,energy,acceptance_rate\n";
  for (std::size_t i = 0; i < batch.d_n.size(); ++i) {
    out += std::to_string(i);
    out += ',';
    out += fmt(batch.d_n[i]);
    out += ',';
    out += fmt(batch.energy[i]);
    out += ',';
    out += fmt(batch.acceptance_rate);
    out += '\n';
  }
  return out;
}

std::string tail_report_csv(const TailReport& rep) {
  std::string out = "t,threshold,p_hat,ci_lo,ci_hi,bound,pass\n";
  for (const auto& r : rep.rows) {
    out += fmt(r.t) + "," + fmt(r.threshold) + "," + fmt(r.p_hat) + "," +
           fmt(r.ci_lo) + "," + fmt(r.ci_hi) + "," + fmt(r.bound) + "," +
           (r.pass ? "1" : "0") + "\n";
  }
  return out;
}

std::string kernel_profile_csv(const RadialEnsemble& ens, double c0,
                               double beta, double r_max, int npts) {
  std::string out = "r,r_n,exterior_bound\n";
  double R = ens.droplet_radius();
  double n = (double)ens.n();
  for (int i = 0; i < npts; ++i) {
    double r = r_max * (i + 0.5) / npts;
    double delta = std::max(0.0, r - R);
    double bound = n * n * std::exp(-0.9 * c0 * beta * n * delta * delta);
    out += fmt(r) + "," + fmt(ens.one_point({r, 0.0})) + "," + fmt(bound) +
           "\n";
  }
  return out;
}

std::string radius_law_csv(const RadialEnsemble& ens, int npts) {
  std::string out = "r,cdf\n";
  double hi = ens.r_cut();
  for (int i = 0; i <= npts; ++i) {
    double r = hi * i / npts;
    out += fmt(r) + "," + fmt(ens.radius_cdf(r)) + "\n";
  }
  return out;
}

std::string gumbel_csv(const std::vector<double>& omegas, double ks) {
  std::string out = "index,omega,ks_statistic\n";
  for (std::size_t i = 0; i < omegas.size(); ++i)
    out += std::to_string(i) + "," + fmt(omegas[i]) + "," + fmt(ks) + "\n";
  return out;
}

std::string norms_csv(const RadialEnsemble& ens) {
  std::string out = "k,log_h\n";
  for (int k = 0; k < ens.n(); ++k)
    out += std::to_string(k) + "," + fmt(ens.log_norm(k)) + "\n";
  return out;
}

std::string convergence_csv(const ConvergenceReport& rep) {
  std::string out = "name,sample_mean,sigma_f,abs_err,se,pass\n";
  for (const auto& r : rep.rows)
    out += r.name + "," + fmt(r.sample_mean) + "," + fmt(r.sigma_f) + "," +
           fmt(r.abs_err) + "," + fmt(r.se) + "," + (r.pass ? "1" : "0") +
           "\n";
  return out;
}

std::string equilibrium_json(const EquilibriumResult& eq) {
  nlohmann::ordered_json j;
  j["potential"] = eq.potential ? eq.potential->name() : "unknown";
  j["grid"] = {{"nx", eq.grid.nx},
               {"ny", eq.grid.ny},
               {"xlo", eq.grid.box.xlo},
               {"xhi", eq.grid.box.xhi},
               {"ylo", eq.grid.box.ylo},
               {"yhi", eq.grid.box.yhi}};
  j["frostman_gamma"] = eq.frostman_gamma;
  j["robin_gamma_q"] = eq.robin_gamma_q;
  j["c0"] = eq.c0;
  j["a0"] = eq.a0;
  j["a0_delta0"] = eq.a0_delta0;
  j["iterations"] = eq.iterations;
  j["frostman_residual"] = eq.frostman_residual;
  j["field_tol"] = eq.field_tol;
  j["boundary"] = nlohmann::ordered_json::array();
  for (const auto& comp : eq.droplet.boundary()) {
    nlohmann::ordered_json poly = nlohmann::ordered_json::array();
    for (complexd z : comp) poly.push_back({z.real(), z.imag()});
    j["boundary"].push_back(poly);
  }
  return j.dump(2) + "\n";
}

std::string decay_fit_json(const DecayFit& fit) {
  nlohmann::ordered_json j;
  j["slope"] = fit.slope;
  j["intercept"] = fit.intercept;
  j["c_hat"] = fit.c_hat;
  j["residual_rms"] = fit.residual_rms;
  j["window_delta_sq"] = {fit.window_lo_sq, fit.window_hi_sq};
  j["points"] = fit.points;
  j["verdict"] = fit.verdict;
  return j.dump(2) + "\n";
}

std::string energy_json(const std::vector<EntropyCheck>& checks,
                        const std::vector<IdentityCheck>& identities) {
  nlohmann::ordered_json j;
  j["entropy_bound"] = nlohmann::ordered_json::array();
  for (const auto& c : checks) {
    nlohmann::ordered_json e;
    e["n"] = c.n;
    e["beta"] = c.beta;
    e["log_zn"] = c.log_zn;
    e["lhs"] = c.lhs;
    e["rhs"] = c.rhs;
    e["pass"] = c.pass;
    j["entropy_bound"].push_back(e);
  }
  j["interpolation_identities"] = nlohmann::ordered_json::array();
  for (const auto& c : identities) {
    nlohmann::ordered_json e;
    e["lhs"] = c.lhs;
    e["rhs"] = c.rhs;
    e["diff"] = c.diff;
    e["se"] = c.se;
    e["samples"] = c.samples;
    e["pass"] = c.pass;
    j["interpolation_identities"].push_back(e);
  }
  return j.dump(2) + "\n";
}

void write_snapshot(const std::string& path,
                    const std::vector<Configuration>& frames) {
  std::string out = "CGAS1";
  out.push_back((char)1);
  append_u64le(out, frames.size());
  append_u64le(out, frames.empty() ? 0 : frames.front().size());
  for (const auto& f : frames) {
    if (!frames.empty() && f.size() != frames.front().size())
      throw std::invalid_argument("snapshot frames must share a point count");
    for (complexd z : f) {
      append_f64le(out, z.real());
      append_f64le(out, z.imag());
    }
  }
  write_file_atomic(path, out);
}

std::vector<Configuration> read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open snapshot: " + path);
  std::string data((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  if (data.size() < 22 || data.compare(0, 5, "CGAS1") != 0)
    throw std::runtime_error("bad snapshot magic: " + path);
  if (data[5] != 1)
    throw std::runtime_error("unsupported snapshot version: " + path);
  std::uint64_t nframes = read_u64le(data, 6);
  std::uint64_t npts = read_u64le(data, 14);
  std::size_t need = 22 + nframes * npts * 16;
  if (data.size() != need)
    throw std::runtime_error("snapshot truncated or oversized: " + path);
  std::vector<Configuration> frames(nframes, Configuration(npts));
  std::size_t off = 22;
  for (auto& f : frames)
    for (auto& z : f) {
      z = {std::bit_cast<double>(read_u64le(data, off)),
           std::bit_cast<double>(read_u64le(data, off + 8))};
      off += 16;
    }
  return frames;
}

}  // namespace cgas
