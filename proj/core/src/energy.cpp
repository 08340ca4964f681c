#include "cgas/energy.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "cgas/equilibrium.hpp"
#include "cgas/quadrature.hpp"

namespace cgas {

double energy_discrete(const Configuration& cfg, const Potential& p) {
  const int n = (int)cfg.size();
  if (n < 2) throw std::invalid_argument("discrete energy needs n >= 2");
  double inter = 0;
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) {
      double d2 = std::norm(cfg[j] - cfg[k]);
      if (d2 == 0) return std::numeric_limits<double>::infinity();
      inter -= std::log(d2);  // = 2 * log 1/|z_j - z_k|, the ordered pair sum
    }
  double qsum = 0;
  for (complexd z : cfg) qsum += p.value(z);
  return inter / ((double)n * (n - 1)) + qsum / n;
}

namespace {

// streaming log-sum-exp accumulator for positive terms given in log form
struct LogAcc {
  double m = -std::numeric_limits<double>::infinity();
  double s = 0;
  void add(double lt) {
    if (!(lt > -std::numeric_limits<double>::infinity())) return;
    if (lt <= m) {
      s += std::exp(lt - m);
    } else {
      s = s * std::exp(m - lt) + 1.0;
      m = lt;
    }
  }
  double log() const {
    return s > 0 ? m + std::log(s)
                 : -std::numeric_limits<double>::infinity();
  }
};

inline double pow_beta(double t, double beta) {
  if (beta == 1.0) return t;
  if (beta == 1.5) return t * std::sqrt(t);
  if (beta == 2.0) return t * t;
  return std::pow(t, beta);
}

void require_radial(const Potential& p, const char* who) {
  if (!p.has_radial_profile())
    throw std::invalid_argument(std::string(who) +
                                " requires a radial potential profile");
}

// smallest radius beyond the droplet where the Boltzmann factor has dropped
// by spec.log_falloff nats relative to any polynomial prefactor
double radial_cut(const Potential& p, double beta, int n, double falloff) {
  double R = radial_droplet_radius(p);
  auto cleared = [&](double r) {
    double q = p.radial_value(r);
    if (!std::isfinite(q)) return true;
    return beta * n * q - 2.0 * n * std::log(std::max(r, 1.0)) >= falloff;
  };
  double hi = 2.0 * R;
  for (int it = 0; it < 200 && !cleared(hi); ++it) hi *= 1.5;
  double lo = R;
  for (int it = 0; it < 60; ++it) {
    double mid = 0.5 * (lo + hi);
    (cleared(mid) ? hi : lo) = mid;
  }
  return 1.05 * hi;
}

struct RadialGrid {
  std::vector<double> r, logwr;  // node and log(w * r)
};

RadialGrid radial_grid(const Potential& p, double beta, int n,
                       const QuadratureSpec& spec) {
  double cut = radial_cut(p, beta, n, spec.log_falloff);
  const auto& gl = gl_rule(spec.radial);
  RadialGrid g;
  for (int i = 0; i < spec.radial; ++i) {
    double r = 0.5 * cut * (gl.x[i] + 1.0);
    g.r.push_back(r);
    g.logwr.push_back(std::log(0.5 * cut * gl.w[i] * r));
  }
  return g;
}

int angular_count(double beta, const QuadratureSpec& spec) {
  // uniform periodic rules are exact up to trig degree M-1; integer beta
  // keeps the integrand a trig polynomial, anything else needs density
  bool integer = beta == std::floor(beta);
  return integer ? std::max(spec.angular, (int)(2 * beta) + 2)
                 : std::max(spec.angular, 128);
}

double log_z1(const Potential& p, double beta, const QuadratureSpec& spec) {
  RadialGrid g = radial_grid(p, beta, 1, spec);
  LogAcc acc;
  for (std::size_t i = 0; i < g.r.size(); ++i)
    acc.add(std::log(2.0) + g.logwr[i] - beta * p.radial_value(g.r[i]));
  return acc.log();
}

double log_z2(const Potential& p, double beta, const QuadratureSpec& spec) {
  RadialGrid g = radial_grid(p, beta, 2, spec);
  const int M = angular_count(beta, spec);
  const double wphi = 2.0 * kPi / M;
  const int nr = (int)g.r.size();
  std::vector<double> q(nr);
  for (int i = 0; i < nr; ++i) q[i] = p.radial_value(g.r[i]);
  LogAcc acc;
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nr; ++j) {
      double a = g.r[i] * g.r[i] + g.r[j] * g.r[j];
      double b = 2.0 * g.r[i] * g.r[j];
      double ang = 0;
      for (int m = 0; m < M; ++m)
        ang += pow_beta(a - b * std::cos(wphi * (m + 0.5)), beta);
      ang *= wphi;
      if (ang <= 0) continue;
      acc.add(g.logwr[i] + g.logwr[j] - 2.0 * beta * (q[i] + q[j]) +
              std::log(ang));
    }
  // (1/pi^2) * 2 pi = 2/pi from collapsing one angle by rotation invariance
  return acc.log() + std::log(2.0 / kPi);
}

double log_z3(const Potential& p, double beta, const QuadratureSpec& spec) {
  RadialGrid g = radial_grid(p, beta, 3, spec);
  const int M = angular_count(beta, spec);
  const double wphi = 2.0 * kPi / M;
  const int nr = (int)g.r.size();
  std::vector<double> q(nr);
  for (int i = 0; i < nr; ++i) q[i] = p.radial_value(g.r[i]);
  std::vector<double> cphi(M), d12(M), d13(M), d23(M);
  for (int m = 0; m < M; ++m) cphi[m] = std::cos(wphi * m);
  LogAcc acc;
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nr; ++j)
      for (int k = 0; k < nr; ++k) {
        double ri = g.r[i], rj = g.r[j], rk = g.r[k];
        for (int m = 0; m < M; ++m) {
          d12[m] = pow_beta(ri * ri + rj * rj - 2 * ri * rj * cphi[m], beta);
          d13[m] = pow_beta(ri * ri + rk * rk - 2 * ri * rk * cphi[m], beta);
          d23[m] = pow_beta(rj * rj + rk * rk - 2 * rj * rk * cphi[m], beta);
        }
        double G = 0;
        for (int a = 0; a < M; ++a) {
          double inner = 0;
          for (int b = 0; b < M; ++b)
            inner += d13[b] * d23[(a - b + M) % M];
          G += d12[a] * inner;
        }
        G *= wphi * wphi;
        if (G <= 0) continue;
        acc.add(g.logwr[i] + g.logwr[j] + g.logwr[k] -
                3.0 * beta * (q[i] + q[j] + q[k]) + std::log(G));
      }
  // (1/pi^3) * 2 pi = 2/pi^2 after removing the global rotation angle
  return acc.log() + std::log(2.0) - 2.0 * std::log(kPi);
}

}  // namespace

double log_partition_bruteforce(const Potential& p, double beta, int n,
                                const QuadratureSpec& spec) {
  if (!(beta > 0)) throw std::invalid_argument("beta must be positive");
  require_radial(p, "brute-force partition function");
  switch (n) {
    case 1:
      return log_z1(p, beta, spec);
    case 2:
      return log_z2(p, beta, spec);
    case 3:
      return log_z3(p, beta, spec);
    default:
      throw std::invalid_argument("brute-force partition limited to n <= 3");
  }
}

double entropy_bound_rhs(const Potential& p, double beta, int n) {
  require_radial(p, "entropy bound");
  if (n < 1) throw std::invalid_argument("entropy bound needs n >= 1");
  const double R = radial_droplet_radius(p);
  // gamma(Q) = -log R + Q(R) - (1/2) int_0^R r Q'(r)^2 / 2 dr
  double tail = adaptive_simpson(
      [&](double r) {
        double d = p.radial_derivative(r);
        return 0.5 * r * d * d;
      },
      0.0, R, 1e-12, 30);
  double gamma_q = -std::log(R) + p.radial_value(R) - 0.5 * tail;
  double q_lap = adaptive_simpson(
      [&](double r) {
        return p.radial_value(r) * p.laplacian({r, 0.0}) * 2.0 * r;
      },
      0.0, R, 1e-12, 30);
  double lap_log = adaptive_simpson(
      [&](double r) {
        double l = p.laplacian({r, 0.0});
        return l > 0 ? l * std::log(l) * 2.0 * r : 0.0;
      },
      0.0, R, 1e-12, 30);
  double nn = (double)n;
  return -beta * (1.0 - 1.0 / nn) * gamma_q - (beta / nn) * q_lap -
         lap_log / nn;
}

EntropyCheck entropy_bound_check(const Potential& p, double beta, int n,
                                 const QuadratureSpec& spec) {
  EntropyCheck chk;
  chk.n = n;
  chk.beta = beta;
  chk.log_zn = log_partition_bruteforce(p, beta, n, spec);
  chk.lhs = chk.log_zn / ((double)n * n);
  chk.rhs = entropy_bound_rhs(p, beta, n);
  chk.pass = chk.lhs >= chk.rhs - 1e-9;
  return chk;
}

}  // namespace cgas
