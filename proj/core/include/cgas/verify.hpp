#pragma once
// Cross-module property suite behind the `verify` subcommand, plus the
// weighted-polynomial harnesses (maximum principle and pointwise-L^{2beta}
// moment bound) reused by the acceptance tests.

#include <cstdint>
#include <string>
#include <vector>

#include "cgas/equilibrium.hpp"

namespace cgas {

struct PropertyResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct VerifySummary {
  std::vector<PropertyResult> results;
  bool all_pass() const {
    for (const auto& r : results)
      if (!r.pass) return false;
    return true;
  }
};

// max over an exterior ring of |f| e^{+n q_eff/2} must not exceed
// (1 + 1e-6) max_S |f| for any of `trials` random coefficient vectors
PropertyResult check_max_principle(const EquilibriumResult& eq, int n,
                                   int trials, std::uint64_t seed);

// |f(z0)|^{2b} <= n e^{sb} int_{D(z0, 1/sqrt n)} |f|^{2b} dA with
// s = (max lap Q over a closed droplet neighbourhood) + 0.01, b in
// {0.5, 1, 2}; disc quadrature is refined until the verdict is stable
PropertyResult check_pointwise_bound(const EquilibriumResult& eq, int n,
                                     int trials, std::uint64_t seed);

// the full default suite (exit-0 contract of `verify`)
VerifySummary run_verify_suite(int threads = 1, std::uint64_t seed = 1);

}  // namespace cgas
