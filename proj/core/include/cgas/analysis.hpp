#pragma once
// Turns sample batches and exact radial ensembles into verdicts: tail bounds
// for D_n, localization scaling across n, exterior decay-rate fits,
// empirical-measure convergence, and interpolation-kernel identities.

#include <string>
#include <utility>
#include <vector>

#include "cgas/determinantal.hpp"
#include "cgas/equilibrium.hpp"
#include "cgas/sampler.hpp"
#include "cgas/stats.hpp"

namespace cgas {

// ---- D_n tail vs the e^{-2t} envelope ------------------------------------

struct TailRow {
  double t = 0, threshold = 0, p_hat = 0, ci_lo = 0, ci_hi = 0, bound = 0;
  bool pass = true;
};

struct TailReport {
  int n = 0;
  double beta = 0, c = 0, mu = 0;
  std::vector<TailRow> rows;
  bool truncated = false;  // grid cut where expected bound count < 5
  std::string note;
};

// thresholds sqrt((log n + mu + t)/(c beta n)); requires c < eq.c0.
// pass per row: Wilson lower limit does not exceed e^{-2t}.
TailReport dn_tail(const SampleBatch& batch, const EquilibriumResult& eq,
                   double c, double mu, const std::vector<double>& t_grid);

// ---- localization scaling across an n-grid --------------------------------

struct ScalingRow {
  int n = 0;
  double beta = 0, median_dn = 0, rho = 0;  // rho = median/sqrt(log n/(bn))
};

struct ScalingReport {
  std::vector<ScalingRow> rows;
  double a_ref = 0;  // 1.1/sqrt(c0)
  bool below_a_at_largest = false;
  std::string trend;  // "increasing" / "decreasing" / "mixed"
};

// batches must cover >= 3 distinct n, each with >= 1000 D_n samples
ScalingReport localization_scaling(const std::vector<SampleBatch>& batches,
                                   double c0);

// ---- fixed-distance tail vs e^{-k(r) beta n} ------------------------------

struct LargeRRow {
  double r = 0, k_r = 0, bound = 0;
  long exceed = 0;
  double p_hat = 0, ci_lo = 0;
  bool pass = true;
};

struct LargeRReport {
  double r0 = 0;  // smallest admissible r: c*r0^2 >= a0
  std::vector<LargeRRow> rows;
};

// rejects any r below r0 = sqrt(a0/c)
LargeRReport large_r_tail(const SampleBatch& batch,
                          const EquilibriumResult& eq,
                          const std::vector<double>& r_grid, double c);

// ---- empirical one-point field ---------------------------------------------

struct OnePointField {
  GridSpec grid;
  int n = 0;
  long samples = 0;
  double bin_spacing_ratio = 0;  // h / (1/sqrt(n)); metadata, should be >= 2
  std::vector<double> values;    // counts / (samples * cell area in dA units)
  double total_mass = 0;         // sum values * cell_area_da
};

// requires stored points
OnePointField one_point_histogram(const SampleBatch& batch,
                                  const GridSpec& grid);

struct RadialProfileRow {
  double r_lo = 0, r_hi = 0, value = 0;
  long count = 0;
};

// annular version of the histogram (value = counts/(samples * annulus dA))
std::vector<RadialProfileRow> radial_one_point_profile(
    const SampleBatch& batch, double r_max, int nbins);

// ---- exterior decay fit -----------------------------------------------------

struct DecayFit {
  double slope = 0, intercept = 0;
  double c_hat = 0;  // slope/(beta n)
  double residual_rms = 0;
  double window_lo_sq = 0, window_hi_sq = 0;
  int points = 0;
  bool verdict = false;  // c_hat >= 0.9 * (2 c0)
};

// least squares on (delta^2, -log R) pairs; throws on nonpositive R inputs
DecayFit decay_fit(const std::vector<std::pair<double, double>>& pairs,
                   double beta, int n, double c0);

// builds (delta^2, -log R_n(R + delta)) pairs from an exact radial ensemble,
// uniformly spaced in delta^2 over [delta_lo^2, delta_hi^2]
std::vector<std::pair<double, double>> decay_points_exact(
    const RadialEnsemble& ens, double delta_lo, double delta_hi, int npts);

// ---- empirical measure convergence -----------------------------------------

struct TestFunction {
  std::string name;
  std::function<double(complexd)> f;
};

// bounded continuous built-ins: constant, clipped coordinate moments, a
// Gaussian bump, and an antisymmetric moment
std::vector<TestFunction> builtin_test_functions(const EquilibriumResult& eq);

struct ConvergenceRow {
  std::string name;
  double sample_mean = 0, sigma_f = 0, abs_err = 0, se = 0;
  bool pass = true;  // abs_err <= max(0.05, 3 se)
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
};

// sigma(f) by grid quadrature against eq.sigma_weights; requires stored points
ConvergenceReport empirical_measure_test(const SampleBatch& batch,
                                         const EquilibriumResult& eq,
                                         const std::vector<TestFunction>& fs);

// ---- interpolation-kernel Monte Carlo identities ----------------------------

struct IdentityCheck {
  double lhs = 0, rhs = 0, diff = 0, se = 0;
  long samples = 0;
  bool pass = false;  // |diff| <= 3 se (paired, blocked s.e.)
};

// E[1_U(zeta_j) Y_{j,W}] = |U| P(zeta_j in W).  Runs its own chain and
// streams samples (no configuration storage), so million-sample runs fit in
// a few MB.  The heavy quadrature fires only on samples with zeta_j in U.
IdentityCheck interpolation_identity_single(const ChainParams& par,
                                            PotentialPtr p,
                                            const EquilibriumResult* eq,
                                            const Region& U, const Region& W,
                                            int j = 0);

// Two-index version at slots (0,1):
//   E[1_{U1}(z0) 1_{U2}(z1) Y'] = |U1||U2| P(z0 in W1, z1 in W2)
// where Y' nests the two interpolation integrals with the second Lagrange
// factor evaluated on the configuration whose slot 0 was already moved to
// the first integration variable (the form under which the swap identity
// closes exactly; the naive same-configuration product is not an identity).
IdentityCheck interpolation_identity_pair(const ChainParams& par,
                                          PotentialPtr p,
                                          const EquilibriumResult* eq,
                                          const Region& U1, const Region& U2,
                                          const Region& W1, const Region& W2);

}  // namespace cgas
