#pragma once
// External fields Q: built-in families (ginibre, power, elliptic), bounded
// perturbations Q + u/n, growth checks. The Laplacian convention everywhere
// is the quarter-Laplacian (d/dz)(d/dzbar); for Q = |z|^2 it equals 1, and
// the equilibrium density reads d(sigma) = lap(Q) on the droplet against
// dA = Lebesgue/pi.

#include "cgas/types.hpp"

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace cgas {

class Potential {
 public:
  virtual ~Potential() = default;

  // +infinity outside the finiteness domain
  virtual double value(complexd z) const = 0;
  // quarter-Laplacian (1/4)(Q_xx + Q_yy)
  virtual double laplacian(complexd z) const = 0;
  virtual bool finite_at(complexd z) const;

  // claimed liminf of Q / (2 log|z|) at infinity; must exceed 1
  virtual double growth_exponent() const = 0;

  virtual bool has_radial_profile() const { return false; }
  virtual double radial_value(double r) const;
  virtual double radial_derivative(double r) const;

  virtual std::string name() const = 0;
};

using PotentialPtr = std::shared_ptr<const Potential>;

// ginibre: Q = |z|^2.  power(b), b > 0: Q = |z|^(2b).
// elliptic(tau), 0 <= tau < 1: Q = (|z|^2 - tau Re z^2) / (1 - tau^2).
PotentialPtr make_ginibre();
PotentialPtr make_power(double b);
PotentialPtr make_elliptic(double tau);
// name in {"ginibre", "power", "elliptic"}; param = b or tau (ignored for ginibre)
PotentialPtr make_builtin(const std::string& name, double param = 0.0);

// Bounded perturbation u with a declared sup-norm; built-in kinds below.
struct Perturbation {
  std::string name;
  double sup_norm = 0;
  std::function<double(complexd)> u;
  // quarter-Laplacian of u (analytic for built-ins)
  std::function<double(complexd)> lap_u;
};

// kinds: "constant" u = a; "sinusoidal" u = a sin(Re z);
// "gaussian_bump" u = a exp(-|z - z0|^2 / w^2)
Perturbation make_perturbation(const std::string& kind, double amplitude,
                               complexd center = {0, 0}, double width = 1.0);

// Q + u/n. The equilibrium data of the perturbed field are declared identical
// to the base field's: a bounded u/n shift does not move the droplet.
class PerturbedPotential final : public Potential {
 public:
  PerturbedPotential(PotentialPtr base, Perturbation u, int n);
  double value(complexd z) const override;
  double laplacian(complexd z) const override;
  double growth_exponent() const override { return base_->growth_exponent(); }
  bool has_radial_profile() const override { return false; }
  std::string name() const override;
  const Potential& base() const { return *base_; }
  int n() const { return n_; }

 private:
  PotentialPtr base_;
  Perturbation u_;
  int n_;
};

// Validates the declared sup-norm by sampling |u| on check_box (throws on
// violation), then wraps base as Q + u/n.
PotentialPtr perturb(PotentialPtr base, const Perturbation& u, int n,
                     Box check_box);

// min over {radii x 16 rays} of Q / (2 log r); -inf when Q is infinite on the
// whole outer grid. Callers assert > 1.
double growth_margin(const Potential& p, const std::vector<double>& radii);

// per-ray solve of r dQ/dr = 2, maximized over 16 rays; exact for radial Q
double estimate_droplet_scale(const Potential& p);

// growth_margin on [5*scale, 50*scale]; a finite-radius proxy for the liminf,
// so it can false-flag slowly growing valid fields (callers may override)
double growth_margin_default(const Potential& p);

// centered five-point stencil of value(), quarter normalization; test oracle
double fd_quarter_laplacian(const Potential& p, complexd z, double step = 1e-4);

}  // namespace cgas
