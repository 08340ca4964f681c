#include "cgas/lagrange.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "cgas/quadrature.hpp"

namespace cgas {

double lagrange_log_pow(const Configuration& cfg, int j, complexd z,
                        const Potential& p, double beta) {
  const int n = (int)cfg.size();
  if (j < 0 || j >= n) throw std::out_of_range("lagrange: node index");
  double s = 0;
  for (int i = 0; i < n; ++i) {
    if (i == j) continue;
    double num = std::norm(z - cfg[i]);
    double den = std::norm(cfg[j] - cfg[i]);
    if (den == 0)
      throw std::invalid_argument("lagrange: coincident configuration nodes");
    if (num == 0) return -std::numeric_limits<double>::infinity();
    s += 0.5 * (std::log(num) - std::log(den));
  }
  double qz = p.value(z);
  if (!std::isfinite(qz)) return -std::numeric_limits<double>::infinity();
  s -= 0.5 * n * (qz - p.value(cfg[j]));
  return 2.0 * beta * s;
}

double eval_lagrange(const Configuration& cfg, int j, complexd z,
                     const Potential& p, double beta) {
  if (z == cfg[j]) return 1.0;
  double lg = lagrange_log_pow(cfg, j, z, p, beta);
  return std::isfinite(lg) ? std::exp(lg) : 0.0;
}

RegionRule make_region_rule(const Region& region, int n1, int n2) {
  if (n1 < 2 || n2 < 4) throw std::invalid_argument("region rule too coarse");
  RegionRule rule;
  if (region.kind == Region::Kind::disc) {
    // int_W f dA = (1/pi) int_0^rho r int_0^{2pi} f dtheta dr
    const auto& gl = gl_rule(n1);
    rule.pts.reserve((std::size_t)n1 * n2);
    rule.w.reserve((std::size_t)n1 * n2);
    for (int a = 0; a < n1; ++a) {
      double r = 0.5 * region.radius * (gl.x[a] + 1.0);
      double wr = 0.5 * region.radius * gl.w[a] * r * (2.0 / n2);
      for (int b = 0; b < n2; ++b) {
        double th = 2.0 * kPi * (b + 0.5) / n2;
        rule.pts.push_back(region.center +
                           complexd{r * std::cos(th), r * std::sin(th)});
        rule.w.push_back(wr);
      }
    }
  } else {
    const auto& gx = gl_rule(n1);
    const auto& gy = gl_rule(n2);
    double cx = 0.5 * (region.rect.xlo + region.rect.xhi);
    double cy = 0.5 * (region.rect.ylo + region.rect.yhi);
    double sx = 0.5 * (region.rect.xhi - region.rect.xlo);
    double sy = 0.5 * (region.rect.yhi - region.rect.ylo);
    for (int a = 0; a < n1; ++a)
      for (int b = 0; b < n2; ++b) {
        rule.pts.push_back(
            complexd{cx + sx * gx.x[a], cy + sy * gy.x[b]});
        rule.w.push_back(gx.w[a] * gy.w[b] * sx * sy / kPi);
      }
  }
  for (double w : rule.w) rule.area_da += w;
  return rule;
}

double lagrange_functional(const Configuration& cfg, int j,
                           const RegionRule& rule, const Potential& p,
                           double beta) {
  double s = 0;
  for (std::size_t k = 0; k < rule.pts.size(); ++k)
    s += rule.w[k] * eval_lagrange(cfg, j, rule.pts[k], p, beta);
  return s;
}

double lagrange_functional(const Configuration& cfg, int j,
                           const Region& region, const Potential& p,
                           double beta, double tol) {
  RegionRule coarse = make_region_rule(region, 32, 64);
  RegionRule fine = make_region_rule(region, 64, 128);
  double a = lagrange_functional(cfg, j, coarse, p, beta);
  double b = lagrange_functional(cfg, j, fine, p, beta);
  if (std::abs(a - b) > tol * (1.0 + std::abs(b)))
    throw std::runtime_error(
        "lagrange functional quadrature did not converge; residual " +
        std::to_string(std::abs(a - b)));
  return b;
}

}  // namespace cgas
