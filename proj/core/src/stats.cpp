#include "cgas/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cgas {

Wilson wilson_interval(long successes, long trials, double z) {
  if (trials <= 0 || successes < 0 || successes > trials)
    throw std::invalid_argument("wilson_interval: bad counts");
  double n = (double)trials, p = (double)successes / n, z2 = z * z;
  double denom = 1.0 + z2 / n;
  double center = (p + z2 / (2 * n)) / denom;
  double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / denom;
  // the boundary cases collapse exactly; don't leave rounding residue there
  double lo = successes == 0 ? 0.0 : std::max(0.0, center - half);
  double hi = successes == trials ? 1.0 : std::min(1.0, center + half);
  return {p, lo, hi};
}

double mean_of(const std::vector<double>& xs) {
  if (xs.empty()) throw std::invalid_argument("mean of empty series");
  double s = 0;
  for (double x : xs) s += x;
  return s / (double)xs.size();
}

double median_copy(std::vector<double> xs) {
  if (xs.empty()) throw std::invalid_argument("median of empty series");
  std::size_t m = xs.size() / 2;
  std::nth_element(xs.begin(), xs.begin() + m, xs.end());
  double hi = xs[m];
  if (xs.size() % 2) return hi;
  std::nth_element(xs.begin(), xs.begin() + m - 1, xs.begin() + m);
  return 0.5 * (hi + xs[m - 1]);
}

double variance_of(const std::vector<double>& xs) {
  if (xs.size() < 2) throw std::invalid_argument("variance needs >= 2 points");
  double mu = mean_of(xs), s = 0;
  for (double x : xs) s += (x - mu) * (x - mu);
  return s / (double)(xs.size() - 1);
}

double blocked_standard_error(const std::vector<double>& series, int blocks) {
  if (blocks < 2) throw std::invalid_argument("need >= 2 blocks");
  std::size_t len = series.size() / blocks;
  if (len == 0) throw std::invalid_argument("series shorter than block count");
  std::vector<double> bm(blocks);
  for (int b = 0; b < blocks; ++b) {
    double s = 0;
    for (std::size_t i = 0; i < len; ++i) s += series[b * len + i];
    bm[b] = s / (double)len;
  }
  return std::sqrt(variance_of(bm) / (double)blocks);
}

double ks_statistic(std::vector<double> samples,
                    const std::function<double(double)>& cdf) {
  if (samples.empty()) throw std::invalid_argument("ks: empty sample");
  std::sort(samples.begin(), samples.end());
  double n = (double)samples.size(), d = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    double f = cdf(samples[i]);
    d = std::max(d, std::max(f - (double)i / n, (double)(i + 1) / n - f));
  }
  return d;
}

double split_chain_psrf(const std::vector<std::vector<double>>& chains) {
  std::vector<std::vector<double>> halves;
  std::size_t min_len = std::numeric_limits<std::size_t>::max();
  for (const auto& c : chains) min_len = std::min(min_len, c.size());
  if (chains.empty() || min_len < 4)
    throw std::invalid_argument("psrf: chains too short");
  std::size_t half = min_len / 2;
  for (const auto& c : chains) {
    halves.emplace_back(c.begin(), c.begin() + half);
    halves.emplace_back(c.begin() + half, c.begin() + 2 * half);
  }
  std::size_t m = halves.size(), L = half;
  std::vector<double> means(m);
  double W = 0;
  for (std::size_t s = 0; s < m; ++s) {
    means[s] = mean_of(halves[s]);
    W += variance_of(halves[s]);
  }
  W /= (double)m;
  double B_over_n = variance_of(means);
  if (W <= 0)
    return B_over_n <= 0 ? 1.0 : std::numeric_limits<double>::infinity();
  double var_plus = ((double)(L - 1) / (double)L) * W + B_over_n;
  return std::sqrt(var_plus / W);
}

}  // namespace cgas
