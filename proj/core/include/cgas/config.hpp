#pragma once
// Experiment configuration: a single key-table text file
//
//   [sampler]
//   sweeps = 20000          # comments with '#' or ';'
//   n_grid = [32, 64]
//
// flattened to "section.key" entries, with CGAS_SECTION_KEY environment
// variables taking precedence.  Typed getters fail with the full field path.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace cgas {

struct ConfigTable {
  std::map<std::string, std::string> kv;  // "section.key" -> raw value
  std::string source;

  bool has(const std::string& key) const { return kv.count(key) != 0; }

  // required-field getters; the *_or variants supply defaults
  std::string get_string(const std::string& key) const;
  std::string get_string_or(const std::string& key,
                            const std::string& def) const;
  long get_int(const std::string& key) const;
  long get_int_or(const std::string& key, long def) const;
  double get_double(const std::string& key) const;
  double get_double_or(const std::string& key, double def) const;
  bool get_bool_or(const std::string& key, bool def) const;
  std::vector<double> get_list(const std::string& key) const;
  std::vector<double> get_list_or(const std::string& key,
                                  const std::vector<double>& def) const;
};

// throws std::runtime_error with file:line on malformed input
ConfigTable parse_config_text(const std::string& text,
                              const std::string& source_name);
ConfigTable parse_config_file(const std::string& path);

// CGAS_<SECTION>_<KEY> (key lowercased, first '_' splits section from key)
void apply_env_overrides(ConfigTable& table);

// ---- validated experiment schema -------------------------------------------

struct PotentialChoice {
  std::string name = "ginibre";  // ginibre | power | elliptic
  double param = 0;              // exponent b, or eccentricity tau
  std::string perturbation;      // empty | constant | sinusoidal | gaussian_bump
  double perturbation_amplitude = 0;
};

struct GridChoice {
  int resolution = 256;
  double box_halfwidth = 0;  // 0 = derived from the droplet scale
};

struct SamplerChoice {
  std::vector<long> n_grid{32};
  std::vector<double> beta{1.0};  // size 1 (shared) or size of n_grid
  long sweeps = 20000;
  long burn_in = 2000;
  long thinning = 10;
  std::uint64_t seed = 1;
  long chains = 1;
  double step_scale = 1.0;
  bool store_points = false;

  double beta_for(std::size_t i) const {
    return beta.size() == 1 ? beta[0] : beta[i];
  }
};

struct ExactChoice {
  std::vector<long> n_grid{64, 256, 1024};
  long draws = 20000;
};

struct AnalysisChoice {
  double c = 0.9;
  double mu = 0.0;
  std::vector<double> t_grid{0.0, 0.5, 1.0, 1.5, 2.0, 3.0};
  std::vector<double> r_grid{0.5};
  double decay_window_lo = 0.02;
  double decay_window_hi = 0.08;
  long histogram_bins = 64;
};

struct ExperimentConfig {
  PotentialChoice potential;
  GridChoice grid;
  SamplerChoice sampler;
  ExactChoice exact;
  AnalysisChoice analysis;
  std::string out_dir = "out";
};

// schema validation with field-path error messages
ExperimentConfig load_experiment(const ConfigTable& table);

}  // namespace cgas
