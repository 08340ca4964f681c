#include "cgas/quadrature.hpp"

#include "cgas/types.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>

namespace cgas {

GaussLegendre::GaussLegendre(int npts) {
  if (npts < 1) throw std::invalid_argument("GaussLegendre: npts < 1");
  x.resize(npts);
  w.resize(npts);
  const int m = (npts + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Newton from the Chebyshev-like initial guess; converges in ~5 steps
    double z = std::cos(kPi * (i + 0.75) / (npts + 0.5));
    double pp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 0; k < npts; ++k) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k + 1.0) * z * p1 - k * p2) / (k + 1.0);
      }
      pp = npts * (z * p0 - p1) / (z * z - 1.0);
      double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = -z;
    x[npts - 1 - i] = z;
    w[i] = w[npts - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
  }
}

const GaussLegendre& gl_rule(int npts) {
  static std::map<int, GaussLegendre> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(npts);
  if (it == cache.end()) it = cache.emplace(npts, GaussLegendre(npts)).first;
  return it->second;
}

namespace {

double simpson_rec(const std::function<double(double)>& f, double a, double b,
                   double fa, double fm, double fb, double whole, double tol,
                   int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double abs_tol, int max_depth) {
  double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(f, a, b, fa, fm, fb, whole, abs_tol, max_depth);
}

double log_add(double log_a, double log_b) {
  if (log_a == -std::numeric_limits<double>::infinity()) return log_b;
  if (log_b == -std::numeric_limits<double>::infinity()) return log_a;
  double hi = log_a > log_b ? log_a : log_b;
  double lo = log_a > log_b ? log_b : log_a;
  return hi + std::log1p(std::exp(lo - hi));
}

double log_sum_exp(const std::vector<double>& log_terms) {
  double hi = -std::numeric_limits<double>::infinity();
  for (double t : log_terms)
    if (t > hi) hi = t;
  if (hi == -std::numeric_limits<double>::infinity()) return hi;
  double acc = 0;
  for (double t : log_terms) acc += std::exp(t - hi);
  return hi + std::log(acc);
}

}  // namespace cgas
