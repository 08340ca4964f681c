#include "cgas/potential.hpp"

#include <cmath>
#include <limits>

namespace cgas {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

class Ginibre final : public Potential {
 public:
  double value(complexd z) const override { return std::norm(z); }
  double laplacian(complexd) const override { return 1.0; }
  double growth_exponent() const override { return kInf; }
  bool has_radial_profile() const override { return true; }
  double radial_value(double r) const override { return r * r; }
  double radial_derivative(double r) const override { return 2.0 * r; }
  std::string name() const override { return "ginibre"; }
};

class PowerField final : public Potential {
 public:
  explicit PowerField(double b) : b_(b) {}
  double value(complexd z) const override {
    return std::pow(std::norm(z), b_);
  }
  double laplacian(complexd z) const override {
    // full Laplacian of r^(2b) is 4 b^2 r^(2b-2)
    double r2 = std::norm(z);
    return b_ * b_ * std::pow(r2, b_ - 1.0);
  }
  double growth_exponent() const override { return kInf; }
  bool has_radial_profile() const override { return true; }
  double radial_value(double r) const override { return std::pow(r, 2.0 * b_); }
  double radial_derivative(double r) const override {
    return 2.0 * b_ * std::pow(r, 2.0 * b_ - 1.0);
  }
  std::string name() const override { return "power"; }

 private:
  double b_;
};

class Elliptic final : public Potential {
 public:
  explicit Elliptic(double tau) : tau_(tau) {}
  double value(complexd z) const override {
    double x = z.real(), y = z.imag();
    // (|z|^2 - tau Re z^2)/(1-tau^2) = x^2/(1+tau) + y^2/(1-tau)
    return x * x / (1.0 + tau_) + y * y / (1.0 - tau_);
  }
  double laplacian(complexd) const override {
    return 1.0 / (1.0 - tau_ * tau_);
  }
  double growth_exponent() const override {
    // liminf along the slow axis: Q ~ r^2/(1+tau)
    return kInf;
  }
  bool has_radial_profile() const override { return tau_ == 0.0; }
  double radial_value(double r) const override { return r * r; }
  double radial_derivative(double r) const override { return 2.0 * r; }
  std::string name() const override { return "elliptic"; }

 private:
  double tau_;
};

}  // namespace

bool Potential::finite_at(complexd z) const { return std::isfinite(value(z)); }

double Potential::radial_value(double) const {
  throw std::logic_error("potential has no radial profile");
}

double Potential::radial_derivative(double) const {
  throw std::logic_error("potential has no radial profile");
}

PotentialPtr make_ginibre() { return std::make_shared<Ginibre>(); }

PotentialPtr make_power(double b) {
  if (!(b > 0)) throw std::invalid_argument("power potential requires b > 0");
  return std::make_shared<PowerField>(b);
}

PotentialPtr make_elliptic(double tau) {
  if (!(tau >= 0 && tau < 1))
    throw std::invalid_argument("elliptic potential requires 0 <= tau < 1");
  return std::make_shared<Elliptic>(tau);
}

PotentialPtr make_builtin(const std::string& name, double param) {
  if (name == "ginibre") return make_ginibre();
  if (name == "power") return make_power(param);
  if (name == "elliptic") return make_elliptic(param);
  throw std::invalid_argument("unknown potential: " + name);
}

Perturbation make_perturbation(const std::string& kind, double amplitude,
                               complexd center, double width) {
  Perturbation p;
  p.name = kind;
  if (kind == "constant") {
    p.sup_norm = std::abs(amplitude);
    p.u = [amplitude](complexd) { return amplitude; };
    p.lap_u = [](complexd) { return 0.0; };
  } else if (kind == "sinusoidal") {
    p.sup_norm = std::abs(amplitude);
    p.u = [amplitude](complexd z) { return amplitude * std::sin(z.real()); };
    p.lap_u = [amplitude](complexd z) {
      return -0.25 * amplitude * std::sin(z.real());
    };
  } else if (kind == "gaussian_bump") {
    if (!(width > 0)) throw std::invalid_argument("bump width must be > 0");
    p.sup_norm = std::abs(amplitude);
    double w2 = width * width;
    p.u = [amplitude, center, w2](complexd z) {
      return amplitude * std::exp(-std::norm(z - center) / w2);
    };
    p.lap_u = [amplitude, center, w2](complexd z) {
      // (1/4) lap of a e^(-s/w^2), s = |z-c|^2: a e^(-s/w^2) (s/w^4 - 1/w^2)
      double s = std::norm(z - center);
      return amplitude * std::exp(-s / w2) * (s / (w2 * w2) - 1.0 / w2);
    };
  } else {
    throw std::invalid_argument("unknown perturbation kind: " + kind);
  }
  return p;
}

PerturbedPotential::PerturbedPotential(PotentialPtr base, Perturbation u,
                                       int n)
    : base_(std::move(base)), u_(std::move(u)), n_(n) {
  if (n_ < 1) throw std::invalid_argument("perturbation requires n >= 1");
}

double PerturbedPotential::value(complexd z) const {
  double b = base_->value(z);
  if (!std::isfinite(b)) return b;
  return b + u_.u(z) / n_;
}

double PerturbedPotential::laplacian(complexd z) const {
  return base_->laplacian(z) + u_.lap_u(z) / n_;
}

std::string PerturbedPotential::name() const {
  return base_->name() + "+" + u_.name + "/n";
}

PotentialPtr perturb(PotentialPtr base, const Perturbation& u, int n,
                     Box check_box) {
  // sampled sup-norm validation; 33x33 lattice over the sampling box
  const int m = 33;
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) {
      complexd z{check_box.xlo + check_box.width() * i / (m - 1.0),
                 check_box.ylo + check_box.height() * j / (m - 1.0)};
      if (std::abs(u.u(z)) > u.sup_norm * (1.0 + 1e-12))
        throw std::invalid_argument(
            "perturbation exceeds declared sup-norm on the sampling box");
    }
  return std::make_shared<PerturbedPotential>(std::move(base), u, n);
}

double growth_margin(const Potential& p, const std::vector<double>& radii) {
  double margin = kInf;
  bool any_finite = false;
  for (double r : radii) {
    if (!(r > 1.0)) continue;  // log r must be positive for the ratio
    for (int a = 0; a < 16; ++a) {
      double th = 2.0 * kPi * a / 16.0;
      complexd z{r * std::cos(th), r * std::sin(th)};
      double q = p.value(z);
      if (!std::isfinite(q)) continue;
      any_finite = true;
      margin = std::min(margin, q / (2.0 * std::log(r)));
    }
  }
  return any_finite ? margin : -kInf;
}

double estimate_droplet_scale(const Potential& p) {
  auto radial_slope = [&p](double r, double th) {
    // r dQ/dr along the ray, centered difference
    complexd dir{std::cos(th), std::sin(th)};
    double dr = 1e-5 * std::max(r, 1.0);
    return r * (p.value((r + dr) * dir) - p.value((r - dr) * dir)) /
           (2.0 * dr);
  };
  double scale = 0;
  for (int a = 0; a < 16; ++a) {
    double th = 2.0 * kPi * a / 16.0;
    double lo = 1e-6, hi = 1.0;
    while (radial_slope(hi, th) < 2.0 && hi < 1e6) hi *= 2.0;
    if (hi >= 1e6) continue;
    for (int it = 0; it < 80; ++it) {
      double mid = 0.5 * (lo + hi);
      (radial_slope(mid, th) < 2.0 ? lo : hi) = mid;
    }
    scale = std::max(scale, hi);
  }
  if (scale == 0)
    throw std::runtime_error("droplet scale estimate failed: r dQ/dr never reaches 2");
  return scale;
}

double growth_margin_default(const Potential& p) {
  double rc = 5.0 * estimate_droplet_scale(p);
  std::vector<double> radii;
  for (int i = 0; i <= 64; ++i) radii.push_back(rc * std::pow(10.0, i / 64.0));
  return growth_margin(p, radii);
}

double fd_quarter_laplacian(const Potential& p, complexd z, double step) {
  double f0 = p.value(z);
  double fx1 = p.value(z + complexd{step, 0}), fx0 = p.value(z - complexd{step, 0});
  double fy1 = p.value(z + complexd{0, step}), fy0 = p.value(z - complexd{0, step});
  return 0.25 * (fx1 + fx0 + fy1 + fy0 - 4.0 * f0) / (step * step);
}

}  // namespace cgas
