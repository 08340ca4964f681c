#pragma once
// 1D quadrature: cached Gauss-Legendre rules, composite panels, adaptive
// Simpson for integrands of unknown scale, and log-space panel sums used by
// the radial ensemble builder.

#include <functional>
#include <vector>

namespace cgas {

struct GaussLegendre {
  std::vector<double> x, w;  // nodes / weights on [-1, 1]
  explicit GaussLegendre(int npts);

  template <class F>
  double integrate(F&& f, double a, double b) const {
    double c = 0.5 * (a + b), s = 0.5 * (b - a), acc = 0;
    for (std::size_t i = 0; i < x.size(); ++i) acc += w[i] * f(c + s * x[i]);
    return acc * s;
  }
};

// process-lifetime cache, keyed by point count
const GaussLegendre& gl_rule(int npts);

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double abs_tol, int max_depth = 48);

// log(sum_i exp(log_terms_i)), max-shifted; -inf for an empty/all -inf input
double log_sum_exp(const std::vector<double>& log_terms);
double log_add(double log_a, double log_b);

}  // namespace cgas
