#include <doctest.h>

#include <bit>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cgas/artifacts.hpp"
#include "cgas/config.hpp"
#include "cgas/equilibrium.hpp"
#include "cgas/potential.hpp"

using namespace cgas;
namespace fs = std::filesystem;

static const char* kSample = R"(
# experiment header comment
[potential]
name = "ginibre"

[sampler]
n_grid = [16, 32]
beta = [1.0, 2.0]
sweeps = 500          ; trailing comment
burn_in = 50
store_points = true

[analysis]
t_grid = [0, 1, 2]
)";

TEST_CASE("key-table parsing: sections, arrays, comments, types") {
  ConfigTable t = parse_config_text(kSample, "inline");
  CHECK(t.get_string("potential.name") == "ginibre");
  CHECK(t.get_int("sampler.sweeps") == 500);
  CHECK(t.get_bool_or("sampler.store_points", false));
  CHECK(t.get_list("sampler.n_grid") == std::vector<double>{16, 32});
  CHECK(t.get_double_or("analysis.c", 0.9) == 0.9);
  CHECK_FALSE(t.has("sampler.thinning"));
}

TEST_CASE("parse and getter errors carry the field path") {
  CHECK_THROWS_WITH_AS(parse_config_text("ok = 1\njunk line\n", "x"),
                       doctest::Contains("x:2"), std::runtime_error);
  CHECK_THROWS_WITH_AS(parse_config_text("[s]\nnovalue\n", "y"),
                       doctest::Contains("y:2"), std::runtime_error);
  ConfigTable t = parse_config_text("[s]\nk = notanumber\n", "z");
  CHECK_THROWS_WITH_AS(t.get_int("s.k"), doctest::Contains("config field s.k"),
                       std::runtime_error);
  CHECK_THROWS_WITH_AS(t.get_double("s.missing"),
                       doctest::Contains("s.missing"), std::runtime_error);
}

TEST_CASE("environment overrides take precedence") {
  ConfigTable t = parse_config_text("[sampler]\nsweeps = 10\n", "inline");
  ::setenv("CGAS_SAMPLER_SWEEPS", "77", 1);
  ::setenv("CGAS_ANALYSIS_C", "0.8", 1);
  apply_env_overrides(t);
  ::unsetenv("CGAS_SAMPLER_SWEEPS");
  ::unsetenv("CGAS_ANALYSIS_C");
  CHECK(t.get_int("sampler.sweeps") == 77);
  CHECK(t.get_double("analysis.c") == 0.8);
}

TEST_CASE("experiment schema: defaults and validation") {
  ExperimentConfig cfg = load_experiment(parse_config_text(kSample, "inline"));
  CHECK(cfg.potential.name == "ginibre");
  CHECK(cfg.sampler.n_grid == std::vector<long>{16, 32});
  CHECK(cfg.sampler.beta_for(1) == 2.0);
  CHECK(cfg.sampler.thinning == 10);  // default
  CHECK(cfg.exact.draws == 20000);    // default
  CHECK(cfg.out_dir == "out");

  // beta table must be scalar or match n_grid
  ConfigTable bad = parse_config_text(
      "[sampler]\nn_grid = [8, 16]\nbeta = [1, 2, 3]\n", "inline");
  CHECK_THROWS_WITH_AS(load_experiment(bad), doctest::Contains("sampler.beta"),
                       std::runtime_error);
  ConfigTable tg = parse_config_text("[analysis]\nt_grid = [1, 1]\n", "inline");
  CHECK_THROWS_WITH_AS(load_experiment(tg),
                       doctest::Contains("analysis.t_grid"),
                       std::runtime_error);
  ConfigTable pw = parse_config_text(
      "[potential]\nname = \"power\"\nb = 0.3\n", "inline");
  CHECK_THROWS(load_experiment(pw));
}

TEST_CASE("config hash: order-independent, value-sensitive") {
  ConfigTable a = parse_config_text("[s]\nx = 1\ny = 2\n", "a");
  ConfigTable b = parse_config_text("[s]\ny = 2\nx = 1\n", "b");
  CHECK(config_hash(a) == config_hash(b));
  ConfigTable c = parse_config_text("[s]\nx = 1\ny = 3\n", "c");
  CHECK(config_hash(a) != config_hash(c));
}

TEST_CASE("fnv-1a reference vectors") {
  CHECK(fnv1a(std::string{}) == 0xcbf29ce484222325ull);
  CHECK(fnv1a(std::string{"a"}) == 0xaf63dc4c8601ec8cull);
  CHECK(hex64(0xabcdef0123456789ull) == "abcdef0123456789");
}

TEST_CASE("atomic writes create directories and leave no temp files") {
  fs::path dir = fs::temp_directory_path() / "cgas_test_atomic";
  fs::remove_all(dir);
  std::string target = (dir / "nested" / "file.csv").string();
  write_file_atomic(target, "payload\n");
  std::ifstream in(target);
  std::string line;
  std::getline(in, line);
  CHECK(line == "payload");
  int files = 0;
  for (auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) ++files;
  CHECK(files == 1);  // the temp file was renamed, not abandoned
  fs::remove_all(dir);
}

TEST_CASE("csv headers are pinned") {
  EquilibriumResult eq = solve_radial(make_ginibre(), 32).eq;
  std::string f = fields_csv(eq);
  CHECK(f.rfind("x,y,sigma,q_check,q_eff,droplet\n", 0) == 0);

  SampleBatch b;
  b.n = 2;
  b.beta = 1;
  b.acceptance_rate = 0.5;
  b.d_n = {0.125, 0.0625};
  b.energy = {1.5, 2.5};
  std::string c = chain_csv(b);
  CHECK(c.rfind("index,d_n,energy,acceptance_rate\n", 0) == 0);
  CHECK(c.find("0,0.125,1.5,0.5") != std::string::npos);
}

TEST_CASE("seventeen-digit csv roundtrip is exact") {
  SampleBatch b;
  b.n = 2;
  b.beta = 1;
  b.acceptance_rate = 1.0 / 3.0;
  b.d_n = {0.1, 2.0 / 3.0};
  b.energy = {std::nextafter(1.0, 2.0), -1e-17};
  std::string csv = chain_csv(b);
  std::istringstream is(csv);
  std::string line;
  std::getline(is, line);  // header
  for (int i = 0; i < 2; ++i) {
    std::getline(is, line);
    double idx, dn, en, ac;
    REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &idx, &dn, &en,
                        &ac) == 4);
    CHECK(dn == b.d_n[i]);
    CHECK(en == b.energy[i]);
    CHECK(ac == b.acceptance_rate);
  }
}

TEST_CASE("snapshot binary layout") {
  std::vector<Configuration> frames{{{1.5, -2.25}, {0.0, 3.5}}};
  fs::path path = fs::temp_directory_path() / "cgas_test_snap.bin";
  write_snapshot(path.string(), frames);

  std::ifstream in(path, std::ios::binary);
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  REQUIRE(bytes.size() == 5 + 1 + 8 + 8 + 2 * 16);
  CHECK(bytes.compare(0, 5, "CGAS1") == 0);
  CHECK(bytes[5] == 1);
  auto u64at = [&](std::size_t off) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | (unsigned char)bytes[off + i];
    return v;
  };
  CHECK(u64at(6) == 1);   // frames
  CHECK(u64at(14) == 2);  // points per frame
  CHECK(std::bit_cast<double>(u64at(22)) == 1.5);
  CHECK(std::bit_cast<double>(u64at(30)) == -2.25);

  CHECK(read_snapshot(path.string()) == frames);

  // truncated payload is rejected
  std::ofstream(path, std::ios::binary) << bytes.substr(0, bytes.size() - 3);
  CHECK_THROWS(read_snapshot(path.string()));
  fs::remove(path);
}

TEST_CASE("run manifest json") {
  RunManifest man;
  man.config_digest = "deadbeef";
  man.add("a.csv", "0123", 0.25);
  man.add("b.bin", "4567", 1.5);
  nlohmann::json j = nlohmann::json::parse(man.to_json());
  CHECK(j.at("config_hash") == "deadbeef");
  CHECK(j.at("version") == "0.1.0");
  REQUIRE(j.at("artifacts").size() == 2);
  CHECK(j["artifacts"][0]["path"] == "a.csv");
  CHECK(j["artifacts"][1]["seconds"] == 1.5);
}
