#pragma once
// Small statistics helpers shared by the analysis suite: Wilson score
// intervals for tail probabilities, blocked standard errors for correlated
// chains, KS distance against a reference CDF, split-chain PSRF.

#include <functional>
#include <vector>

namespace cgas {

struct Wilson {
  double p_hat = 0, lo = 0, hi = 0;
};

// 95% by default (z = Phi^{-1}(0.975))
Wilson wilson_interval(long successes, long trials,
                       double z = 1.959963984540054);

double mean_of(const std::vector<double>& xs);
double median_copy(std::vector<double> xs);
double variance_of(const std::vector<double>& xs);  // unbiased

// standard error of the global mean from block means; drops the remainder
double blocked_standard_error(const std::vector<double>& series,
                              int blocks = 100);

// sup-distance between the empirical CDF of samples and cdf
double ks_statistic(std::vector<double> samples,
                    const std::function<double(double)>& cdf);

// Gelman-Rubin with each chain split in half; returns +inf when degenerate
double split_chain_psrf(const std::vector<std::vector<double>>& chains);

}  // namespace cgas
