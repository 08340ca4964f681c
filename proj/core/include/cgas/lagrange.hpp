#pragma once
// Weighted Lagrange interpolation magnitudes attached to a point
// configuration, and their integrals over discs/rectangles.  All products are
// accumulated as log-magnitude sums so degree-10^3 nodes stay in range.

#include <vector>

#include "cgas/potential.hpp"
#include "cgas/sampler.hpp"
#include "cgas/types.hpp"

namespace cgas {

// log of |l_j(z)|^(2beta) where
//   l_j(z) = prod_{i != j} (z - zeta_i)/(zeta_j - zeta_i)
//            * exp(-n beta_weight (Q(z) - Q(zeta_j)) / 2)
// with the weight exponent folded in per the 2beta power.  Returns -inf when
// z coincides with some other node, +0 at z == zeta_j.
double lagrange_log_pow(const Configuration& cfg, int j, complexd z,
                        const Potential& p, double beta);

// |l_j(z)|^(2beta); exact 0 on node collisions, exact 1 at its own node
double eval_lagrange(const Configuration& cfg, int j, complexd z,
                     const Potential& p, double beta);

// fixed quadrature nodes/weights for integrals against dA = dxdy/pi over a
// region; built once, reused for every (configuration, j) pair
struct RegionRule {
  std::vector<complexd> pts;
  std::vector<double> w;  // already includes the 1/pi area normalization
  double area_da = 0;     // sum of w, for sanity checks
};

// disc: Gauss-Legendre radial x uniform angular; rect: tensor Gauss-Legendre
RegionRule make_region_rule(const Region& region, int n1 = 32, int n2 = 64);

// Y_{j,W} = int_W |l_j|^(2beta) dA using a prebuilt rule
double lagrange_functional(const Configuration& cfg, int j,
                           const RegionRule& rule, const Potential& p,
                           double beta);

// convenience: builds the rule, then refines once; throws if the two levels
// disagree beyond tol * (1 + |value|)
double lagrange_functional(const Configuration& cfg, int j,
                           const Region& region, const Potential& p,
                           double beta, double tol = 1e-6);

}  // namespace cgas
