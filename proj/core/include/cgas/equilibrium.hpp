#pragma once
// Equilibrium measure and droplet: closed-form radial solve, grid solve by
// simplex-constrained quadratic minimization of the discretized logarithmic
// energy, the obstacle/effective-potential fields, and the derived constants
// gamma (Frostman), gamma(Q) (Robin), c0 (boundary min of lap Q), a0
// (certified exterior floor).

#include "cgas/geometry.hpp"
#include "cgas/potential.hpp"
#include "cgas/types.hpp"

#include <cstdint>
#include <vector>

namespace cgas {

struct GridDomain {
  Box box;
  int resolution = 256;
};

struct EquilibriumResult {
  GridSpec grid;
  PotentialPtr potential;

  std::vector<double> sigma_weights;          // cell masses, sum = 1
  std::vector<std::uint8_t> droplet_mask;     // S
  std::vector<std::uint8_t> coincidence_mask; // where q_eff vanishes (tol)
  std::vector<double> q_check;                // obstacle function at centers
  std::vector<double> q_eff;                  // Q - q_check, clamped >= 0
  std::vector<double> cell_delta;             // distance-to-droplet at centers

  double frostman_gamma = 0;  // Q + 2 U^sigma = gamma on the droplet
  double robin_gamma_q = 0;   // minimized energy I_Q[sigma]
  double c0 = 0;              // min of lap Q over the droplet boundary
  double a0 = 0;              // exterior floor: q_eff >= 2 min(c delta^2, a0)
  double a0_delta0 = 0;       // scan radius certifying a0

  DropletGeometry droplet;

  // solver diagnostics
  int iterations = 0;
  double frostman_residual = 0;  // max_i min(w_i, Q_i + 2U_i - gamma)
  double field_tol = 0;  // solver accuracy scale; tiny for closed-form solves

  // cells fully inside the droplet (mask eroded by one ring)
  std::vector<std::uint8_t> interior_mask() const;
};

struct RadialSolveResult {
  double radius = 0;  // droplet radius R, from r Q'(r) = 2
  EquilibriumResult eq;
};

// bisection solve of r Q'(r) = 2 to 1e-12 (throws when the slope never
// crosses 2: unsupported potential shape)
double radial_droplet_radius(const Potential& p);

// closed-form radial equilibrium sampled onto a grid; box defaults to
// half-width 2R when box_halfwidth <= 0
RadialSolveResult solve_radial(PotentialPtr p, int resolution = 256,
                               double box_halfwidth = 0);

struct GridSolveOptions {
  int max_iters = 6000;
  int min_iters = 40;
  double residual_tol_scale = 1e-4;  // on 1 + |gamma|
  unsigned threads = 1;
  bool trace = false;
};

EquilibriumResult solve_grid(PotentialPtr p, const GridDomain& dom,
                             const GridSolveOptions& opts = {});

// bilinear in-box interpolation of q_eff; far-field Q - 2log|z| - gamma
// outside the box; clamped at 0
double effective_potential(const EquilibriumResult& eq, complexd z);

inline double distance_to_droplet(const DropletGeometry& geo, complexd z) {
  return geo.distance(z);
}

// exterior floor scan at level c < c0: delta0 is the largest scanned distance
// below which q_eff >= 2 c delta^2 holds cell-wise (ties toward smaller),
// a0 = half the q_eff minimum over {delta >= delta0}, and violations counts
// cells with q_eff < 2 min(c delta^2, a0) - tol (must be 0)
struct QuadraticFloor {
  double a0 = 0;
  double delta0 = 0;
  long violations = 0;
};
QuadraticFloor quadratic_floor_scan(const EquilibriumResult& eq, double c);

double boundary_min_laplacian(const EquilibriumResult& eq);

// exterior decay scale: half the minimum of q_eff over {delta >= r}
double exterior_rate(const EquilibriumResult& eq, double r);

// discrete logarithmic energy w.Kw + q.w of arbitrary cell weights on the
// grid (same regularized diagonal as the solver); FFT-backed
double grid_energy(const GridSpec& g, const std::vector<double>& w,
                   const std::vector<double>& q);

// self-energy factor of a uniformly charged unit square:
// exp(E log|X - Y|); the discrete kernel diagonal is -log(factor * h)
inline constexpr double kCellSelfEnergyFactor = 0.447049155904;

}  // namespace cgas
