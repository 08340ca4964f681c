#include "cgas/config.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

extern "C" char** environ;

namespace cgas {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

[[noreturn]] void field_error(const std::string& key, const std::string& what,
                              const std::string& got) {
  throw std::runtime_error("config field " + key + ": " + what + ", got '" +
                           got + "'");
}

[[noreturn]] void missing(const std::string& key) {
  throw std::runtime_error("config field " + key + ": required but missing");
}

double to_double(const std::string& key, const std::string& raw) {
  errno = 0;
  char* end = nullptr;
  double v = std::strtod(raw.c_str(), &end);
  if (errno || end == raw.c_str() || *end != '\0')
    field_error(key, "expected number", raw);
  return v;
}

long to_long(const std::string& key, const std::string& raw) {
  errno = 0;
  char* end = nullptr;
  long v = std::strtol(raw.c_str(), &end, 10);
  if (errno || end == raw.c_str() || *end != '\0')
    field_error(key, "expected integer", raw);
  return v;
}

}  // namespace

std::string ConfigTable::get_string(const std::string& key) const {
  auto it = kv.find(key);
  if (it == kv.end()) missing(key);
  return it->second;
}

std::string ConfigTable::get_string_or(const std::string& key,
                                       const std::string& def) const {
  auto it = kv.find(key);
  return it == kv.end() ? def : it->second;
}

long ConfigTable::get_int(const std::string& key) const {
  return to_long(key, get_string(key));
}

long ConfigTable::get_int_or(const std::string& key, long def) const {
  auto it = kv.find(key);
  return it == kv.end() ? def : to_long(key, it->second);
}

double ConfigTable::get_double(const std::string& key) const {
  return to_double(key, get_string(key));
}

double ConfigTable::get_double_or(const std::string& key, double def) const {
  auto it = kv.find(key);
  return it == kv.end() ? def : to_double(key, it->second);
}

bool ConfigTable::get_bool_or(const std::string& key, bool def) const {
  auto it = kv.find(key);
  if (it == kv.end()) return def;
  std::string v = lower(trim(it->second));
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  field_error(key, "expected boolean", it->second);
}

std::vector<double> ConfigTable::get_list(const std::string& key) const {
  std::string raw = trim(get_string(key));
  if (!raw.empty() && raw.front() == '[') {
    if (raw.back() != ']') field_error(key, "expected closing ']'", raw);
    raw = raw.substr(1, raw.size() - 2);
  }
  std::vector<double> out;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) field_error(key, "empty list element", raw);
    out.push_back(to_double(key, item));
  }
  if (out.empty()) field_error(key, "expected nonempty list", raw);
  return out;
}

std::vector<double> ConfigTable::get_list_or(
    const std::string& key, const std::vector<double>& def) const {
  return kv.count(key) ? get_list(key) : def;
}

ConfigTable parse_config_text(const std::string& text,
                              const std::string& source_name) {
  ConfigTable table;
  table.source = source_name;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t cut = line.find_first_of("#;");
    if (cut != std::string::npos) line = line.substr(0, cut);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::runtime_error(source_name + ":" + std::to_string(lineno) +
                                 ": unterminated section header");
      section = lower(trim(line.substr(1, line.size() - 2)));
      if (section.empty())
        throw std::runtime_error(source_name + ":" + std::to_string(lineno) +
                                 ": empty section name");
      continue;
    }
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(source_name + ":" + std::to_string(lineno) +
                               ": expected 'key = value'");
    std::string key = lower(trim(line.substr(0, eq)));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
      value = value.substr(1, value.size() - 2);
    if (key.empty())
      throw std::runtime_error(source_name + ":" + std::to_string(lineno) +
                               ": empty key");
    table.kv[section.empty() ? key : section + "." + key] = value;
  }
  return table;
}

ConfigTable parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

void apply_env_overrides(ConfigTable& table) {
  for (char** e = environ; e && *e; ++e) {
    std::string entry(*e);
    if (entry.rfind("CGAS_", 0) != 0) continue;
    std::size_t eq = entry.find('=');
    if (eq == std::string::npos) continue;
    std::string name = entry.substr(5, eq - 5);
    std::string value = entry.substr(eq + 1);
    std::size_t split = name.find('_');
    if (split == std::string::npos || split == 0) continue;
    std::string key =
        lower(name.substr(0, split)) + "." + lower(name.substr(split + 1));
    table.kv[key] = value;
  }
}

namespace {

std::vector<long> to_long_list(const ConfigTable& t, const std::string& key,
                               const std::vector<long>& def) {
  if (!t.has(key)) return def;
  std::vector<long> out;
  for (double v : t.get_list(key)) {
    long l = (long)v;
    if ((double)l != v) field_error(key, "expected integer list element",
                                    t.get_string(key));
    out.push_back(l);
  }
  return out;
}

}  // namespace

ExperimentConfig load_experiment(const ConfigTable& t) {
  ExperimentConfig cfg;

  cfg.potential.name = lower(t.get_string_or("potential.name", "ginibre"));
  if (cfg.potential.name == "ginibre") {
    cfg.potential.param = t.get_double_or("potential.param", 0.0);
  } else if (cfg.potential.name == "power") {
    cfg.potential.param = t.get_double("potential.param");
    if (!(cfg.potential.param > 0.5))
      field_error("potential.param", "power exponent must exceed 0.5",
                  t.get_string("potential.param"));
  } else if (cfg.potential.name == "elliptic") {
    cfg.potential.param = t.get_double("potential.param");
    if (!(std::abs(cfg.potential.param) < 1))
      field_error("potential.param", "eccentricity must satisfy |tau| < 1",
                  t.get_string("potential.param"));
  } else {
    field_error("potential.name", "expected ginibre|power|elliptic",
                cfg.potential.name);
  }
  cfg.potential.perturbation = lower(t.get_string_or("potential.perturbation", ""));
  if (!cfg.potential.perturbation.empty()) {
    static const char* known[] = {"constant", "sinusoidal", "gaussian_bump"};
    bool ok = false;
    for (const char* k : known) ok = ok || cfg.potential.perturbation == k;
    if (!ok)
      field_error("potential.perturbation",
                  "expected constant|sinusoidal|gaussian_bump",
                  cfg.potential.perturbation);
    cfg.potential.perturbation_amplitude =
        t.get_double("potential.perturbation_amplitude");
  }

  cfg.grid.resolution = (int)t.get_int_or("grid.resolution", 256);
  if (cfg.grid.resolution < 16)
    field_error("grid.resolution", "expected >= 16",
                t.get_string("grid.resolution"));
  cfg.grid.box_halfwidth = t.get_double_or("grid.box_halfwidth", 0.0);
  if (cfg.grid.box_halfwidth < 0)
    field_error("grid.box_halfwidth", "expected >= 0",
                t.get_string("grid.box_halfwidth"));

  cfg.sampler.n_grid = to_long_list(t, "sampler.n_grid", {32});
  for (long n : cfg.sampler.n_grid)
    if (n < 2)
      field_error("sampler.n_grid", "particle counts must be >= 2",
                  t.get_string_or("sampler.n_grid", "32"));
  cfg.sampler.beta = t.get_list_or("sampler.beta", {1.0});
  if (cfg.sampler.beta.size() != 1 &&
      cfg.sampler.beta.size() != cfg.sampler.n_grid.size())
    field_error("sampler.beta", "expected one beta or one per n",
                t.get_string_or("sampler.beta", "1.0"));
  for (double b : cfg.sampler.beta)
    if (!(b > 0))
      field_error("sampler.beta", "expected beta > 0",
                  t.get_string_or("sampler.beta", "1.0"));
  cfg.sampler.sweeps = t.get_int_or("sampler.sweeps", 20000);
  cfg.sampler.burn_in = t.get_int_or("sampler.burn_in", 2000);
  cfg.sampler.thinning = t.get_int_or("sampler.thinning", 10);
  if (cfg.sampler.sweeps <= 0 || cfg.sampler.burn_in < 0 ||
      cfg.sampler.thinning <= 0)
    throw std::runtime_error(
        "config field sampler.sweeps/burn_in/thinning: expected positive "
        "sweeps and thinning, nonnegative burn-in");
  cfg.sampler.seed = (std::uint64_t)t.get_int_or("sampler.seed", 1);
  cfg.sampler.chains = t.get_int_or("sampler.chains", 1);
  if (cfg.sampler.chains < 1)
    field_error("sampler.chains", "expected >= 1",
                t.get_string_or("sampler.chains", "1"));
  cfg.sampler.step_scale = t.get_double_or("sampler.step_scale", 1.0);
  if (!(cfg.sampler.step_scale > 0))
    field_error("sampler.step_scale", "expected > 0",
                t.get_string_or("sampler.step_scale", "1.0"));
  cfg.sampler.store_points = t.get_bool_or("sampler.store_points", false);

  cfg.exact.n_grid = to_long_list(t, "exact.n_grid", {64, 256, 1024});
  for (long n : cfg.exact.n_grid)
    if (n < 1)
      field_error("exact.n_grid", "particle counts must be >= 1",
                  t.get_string_or("exact.n_grid", ""));
  cfg.exact.draws = t.get_int_or("exact.draws", 20000);
  if (cfg.exact.draws < 1)
    field_error("exact.draws", "expected >= 1",
                t.get_string_or("exact.draws", "20000"));

  cfg.analysis.c = t.get_double_or("analysis.c", 0.9);
  if (!(cfg.analysis.c > 0))
    field_error("analysis.c", "expected > 0",
                t.get_string_or("analysis.c", "0.9"));
  cfg.analysis.mu = t.get_double_or("analysis.mu", 0.0);
  if (cfg.analysis.mu < 0)
    field_error("analysis.mu", "expected >= 0",
                t.get_string_or("analysis.mu", "0"));
  cfg.analysis.t_grid =
      t.get_list_or("analysis.t_grid", {0.0, 0.5, 1.0, 1.5, 2.0, 3.0});
  for (std::size_t i = 1; i < cfg.analysis.t_grid.size(); ++i)
    if (!(cfg.analysis.t_grid[i] > cfg.analysis.t_grid[i - 1]))
      field_error("analysis.t_grid", "expected strictly increasing",
                  t.get_string_or("analysis.t_grid", ""));
  cfg.analysis.r_grid = t.get_list_or("analysis.r_grid", {0.5});
  cfg.analysis.decay_window_lo =
      t.get_double_or("analysis.decay_window_lo", 0.02);
  cfg.analysis.decay_window_hi =
      t.get_double_or("analysis.decay_window_hi", 0.08);
  if (!(0 < cfg.analysis.decay_window_lo &&
        cfg.analysis.decay_window_lo < cfg.analysis.decay_window_hi))
    throw std::runtime_error(
        "config field analysis.decay_window_lo/hi: expected 0 < lo < hi");
  cfg.analysis.histogram_bins = t.get_int_or("analysis.histogram_bins", 64);
  if (cfg.analysis.histogram_bins < 4)
    field_error("analysis.histogram_bins", "expected >= 4",
                t.get_string_or("analysis.histogram_bins", "64"));

  cfg.out_dir = t.get_string_or("output.dir", "out");
  return cfg;
}

}  // namespace cgas
