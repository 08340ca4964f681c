#include "cgas/determinantal.hpp"

#include "cgas/equilibrium.hpp"
#include "cgas/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cgas {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr int kPanelNodes = 24;
constexpr int kRefineNodes = 48;
constexpr int kSeedLevels = 33;

}  // namespace

double RadialEnsemble::log_integrand(int k, double r) const {
  if (r <= 0) return kNegInf;
  return std::log(2.0) + (2.0 * k + 1.0) * std::log(r) -
         n_ * p_->radial_value(r);
}

double RadialEnsemble::log_panel_partial(int k, double a, double x,
                                         int nodes) const {
  if (x <= a) return kNegInf;
  const GaussLegendre& gl = gl_rule(nodes);
  double c = 0.5 * (a + x), s = 0.5 * (x - a);
  double hi = kNegInf;
  // two passes: max shift, then the stable sum
  std::vector<double> terms(gl.x.size());
  for (std::size_t i = 0; i < gl.x.size(); ++i) {
    terms[i] = std::log(gl.w[i] * s) + log_integrand(k, c + s * gl.x[i]);
    hi = std::max(hi, terms[i]);
  }
  if (hi == kNegInf) return kNegInf;
  double acc = 0;
  for (double t : terms) acc += std::exp(t - hi);
  return hi + std::log(acc);
}

RadialEnsemble RadialEnsemble::build(PotentialPtr p, int n) {
  if (!p->has_radial_profile())
    throw std::invalid_argument("ensemble build requires a radial potential");
  if (n < 1) throw std::invalid_argument("ensemble build requires n >= 1");

  RadialEnsemble e;
  e.p_ = p;
  e.n_ = n;
  e.radius_ = radial_droplet_radius(*p);
  e.c0_ = p->laplacian({e.radius_, 0});

  // cut radius: the top-degree integrand peaks where r Q'(r) = (2n-1)/n;
  // extend past the largest peak until the integrand drops e^-45 below it
  auto peak_radius = [&](int k) {
    double target = (2.0 * k + 1.0) / n;
    double lo = 1e-9, hi = e.radius_ * 2 + 1.0;
    while (hi * p->radial_derivative(hi) < target && hi < 1e9) hi *= 2;
    for (int it = 0; it < 100; ++it) {
      double mid = 0.5 * (lo + hi);
      (mid * p->radial_derivative(mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };
  const int ktop = n - 1;
  double rpk = peak_radius(ktop);
  double lpk = e.log_integrand(ktop, rpk);
  double rcut = rpk;
  while (e.log_integrand(ktop, rcut) > lpk - 45.0 && rcut < 1e9) rcut *= 1.125;

  const int P = std::max(160, 4 * (int)std::ceil(std::sqrt((double)n)));
  e.edges_.resize(P + 1);
  for (int i = 0; i <= P; ++i) e.edges_[i] = rcut * i / P;

  e.panel_log_.assign((std::size_t)n * P, kNegInf);
  e.cum_log_.assign((std::size_t)n * (P + 1), kNegInf);
  e.log_h_.assign(n, kNegInf);
  for (int k = 0; k < n; ++k) {
    double cum = kNegInf;
    e.cum_log_[(std::size_t)k * (P + 1)] = kNegInf;
    for (int pn = 0; pn < P; ++pn) {
      double v =
          e.log_panel_partial(k, e.edges_[pn], e.edges_[pn + 1], kPanelNodes);
      e.panel_log_[(std::size_t)k * P + pn] = v;
      cum = log_add(cum, v);
      e.cum_log_[(std::size_t)k * (P + 1) + pn + 1] = cum;
    }
    e.log_h_[k] = cum;
  }

  // refinement certificate on a degree subsample (full pass at small n)
  int stride = std::max(1, n / 16);
  for (int k = 0; k < n; k += stride) {
    double cum = kNegInf;
    for (int pn = 0; pn < P; ++pn)
      cum = log_add(cum, e.log_panel_partial(k, e.edges_[pn], e.edges_[pn + 1],
                                             kRefineNodes));
    if (std::abs(cum - e.log_h_[k]) > 1e-8)
      throw std::runtime_error(
          "norm quadrature failed the refinement certificate");
  }

  // quantile seed table per degree (Newton starting points for sampling)
  e.levels_.resize(kSeedLevels);
  for (int t = 0; t < kSeedLevels; ++t)
    e.levels_[t] = (t + 0.5) / kSeedLevels;
  e.seed_radius_.assign((std::size_t)n * kSeedLevels, 0.0);
  for (int k = 0; k < n; ++k) {
    for (int t = 0; t < kSeedLevels; ++t) {
      double u = e.levels_[t];
      double log_target = std::log(u) + e.log_h_[k];
      const double* cum = &e.cum_log_[(std::size_t)k * (P + 1)];
      int pn = int(std::upper_bound(cum, cum + P + 1, log_target) - cum) - 1;
      pn = std::clamp(pn, 0, P - 1);
      double lo = e.edges_[pn], hi = e.edges_[pn + 1];
      for (int it = 0; it < 40; ++it) {
        double mid = 0.5 * (lo + hi);
        double lm = log_add(cum[pn], e.log_panel_partial(k, e.edges_[pn], mid,
                                                         kPanelNodes));
        (lm < log_target ? lo : hi) = mid;
      }
      e.seed_radius_[(std::size_t)k * kSeedLevels + t] = 0.5 * (lo + hi);
    }
  }
  return e;
}

double RadialEnsemble::log_one_point(complexd z) const {
  double r = std::abs(z);
  double nq = n_ * p_->value(z);
  if (r == 0.0) return -nq - log_h_[0];
  double lr2 = 2.0 * std::log(r);
  double hi = kNegInf;
  for (int k = 0; k < n_; ++k) hi = std::max(hi, k * lr2 - log_h_[k]);
  double acc = 0;
  for (int k = 0; k < n_; ++k) acc += std::exp(k * lr2 - log_h_[k] - hi);
  return hi + std::log(acc) - nq;
}

double RadialEnsemble::one_point(complexd z) const {
  return std::exp(log_one_point(z));
}

int RadialEnsemble::locate_panel(double r) const {
  int pn = int(std::upper_bound(edges_.begin(), edges_.end(), r) -
               edges_.begin()) -
           1;
  return std::clamp(pn, 0, (int)edges_.size() - 2);
}

double RadialEnsemble::factor_cdf(int k, double r) const {
  if (r <= 0) return 0.0;
  if (r >= edges_.back()) return 1.0;
  const int P = (int)edges_.size() - 1;
  int pn = locate_panel(r);
  const double* cum = &cum_log_[(std::size_t)k * (P + 1)];
  double lnum =
      log_add(cum[pn], log_panel_partial(k, edges_[pn], r, kPanelNodes));
  return std::min(1.0, std::exp(lnum - log_h_[k]));
}

double RadialEnsemble::radius_cdf(double r) const {
  if (r <= 0) return 0.0;
  double lsum = 0;
  for (int k = 0; k < n_; ++k) {
    double f = factor_cdf(k, r);
    if (f <= 0) return 0.0;
    lsum += std::log(f);
  }
  return std::exp(lsum);
}

double RadialEnsemble::radius_cdf_inverse(double prob) const {
  if (!(prob > 0 && prob < 1))
    throw std::invalid_argument("quantile level must lie in (0,1)");
  double lo = 0, hi = edges_.back();
  for (int it = 0; it < 100; ++it) {
    double mid = 0.5 * (lo + hi);
    (radius_cdf(mid) < prob ? lo : hi) = mid;
    if (hi - lo < 1e-12) break;
  }
  return 0.5 * (lo + hi);
}

double RadialEnsemble::sample_factor_radius(int k, double u) const {
  const int P = (int)edges_.size() - 1;
  const double* cum = &cum_log_[(std::size_t)k * (P + 1)];
  double log_target = std::log(u) + log_h_[k];
  int pn = int(std::upper_bound(cum, cum + P + 1, log_target) - cum) - 1;
  pn = std::clamp(pn, 0, P - 1);
  double lo = edges_[pn], hi = edges_[pn + 1];

  // Newton seeded from the quantile table, bisection whenever the step
  // leaves the bracket; F and the integrand share the panel machinery
  double x;
  {
    int t = std::clamp((int)(u * kSeedLevels), 0, kSeedLevels - 1);
    x = seed_radius_[(std::size_t)k * kSeedLevels + t];
    x = std::clamp(x, lo, hi);
  }
  for (int it = 0; it < 200; ++it) {
    double lF =
        log_add(cum[pn], log_panel_partial(k, edges_[pn], x, kPanelNodes));
    double g = std::exp(lF - log_h_[k]) - u;
    if (g > 0)
      hi = x;
    else
      lo = x;
    if (hi - lo < 1e-10) break;
    double lf = log_integrand(k, x) - log_h_[k];
    double step = -g / std::exp(lf);
    double xn = x + step;
    if (!(xn > lo && xn < hi) || !std::isfinite(xn)) xn = 0.5 * (lo + hi);
    if (std::abs(xn - x) < 1e-11) {
      x = xn;
      break;
    }
    x = xn;
  }
  return std::clamp(x, lo, hi);
}

std::vector<double> RadialEnsemble::sample_radii(Rng& rng) const {
  std::vector<double> out(n_);
  for (int k = 0; k < n_; ++k) out[k] = sample_factor_radius(k, rng.uniform());
  return out;
}

double RadialEnsemble::normalization_quadrature() const {
  // int R_n dA = int_0^rcut R_n(r) 2 r dr, on the shared panel grid
  const GaussLegendre& gl = gl_rule(kPanelNodes);
  double total = 0;
  for (std::size_t pn = 0; pn + 1 < edges_.size(); ++pn) {
    double a = edges_[pn], b = edges_[pn + 1];
    double c = 0.5 * (a + b), s = 0.5 * (b - a);
    double acc = 0;
    for (std::size_t i = 0; i < gl.x.size(); ++i) {
      double r = c + s * gl.x[i];
      acc += gl.w[i] * one_point({r, 0.0}) * 2.0 * r;
    }
    total += acc * s;
  }
  return total;
}

GumbelConstants make_gumbel_constants(int n, double droplet_radius,
                                      double c0) {
  if (n < 3) throw std::invalid_argument("rescaling constants require n >= 3");
  GumbelConstants gc;
  gc.n = n;
  gc.gamma_n = std::log(n / (2.0 * kPi)) - std::log(std::log((double)n)) +
               std::log(droplet_radius * droplet_radius * c0);
  if (!(gc.gamma_n > 0))
    throw std::invalid_argument(
        "rescaling constant gamma_n is not positive at this n");
  gc.shift = std::sqrt(gc.gamma_n / (4.0 * n * c0));
  gc.scale = std::sqrt(4.0 * n * gc.gamma_n * c0);
  return gc;
}

std::vector<double> gumbel_transform(const std::vector<double>& d_n_samples,
                                     const GumbelConstants& gc) {
  std::vector<double> out;
  out.reserve(d_n_samples.size());
  for (double d : d_n_samples) out.push_back(gc.scale * (d - gc.shift));
  return out;
}

double weighted_poly_log_abs(const std::vector<complexd>& coeffs,
                             const Potential& p, int n, complexd z) {
  if ((int)coeffs.size() > n)
    throw std::invalid_argument("polynomial degree must stay below n");
  complexd acc{0, 0};
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
    acc = acc * z + *it;
  double a = std::abs(acc);
  if (a == 0) return kNegInf;
  return std::log(a) - 0.5 * n * p.value(z);
}

double weighted_poly_eval(const std::vector<complexd>& coeffs,
                          const Potential& p, int n, complexd z) {
  return std::exp(weighted_poly_log_abs(coeffs, p, n, z));
}

}  // namespace cgas
