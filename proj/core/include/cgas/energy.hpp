#pragma once
// Discrete and continuous logarithmic energy functionals, brute-force
// partition functions for n <= 3 radial potentials, and the entropy lower
// bound on (1/n^2) log Z_n.

#include "cgas/potential.hpp"
#include "cgas/sampler.hpp"

namespace cgas {

// I_Q^sharp = (1/(n(n-1))) sum_{j != k} log 1/|z_j - z_k| + mean Q;
// +infinity on coincident points.  Satisfies
//   H_n = n(n-1) I_Q^sharp + sum_j Q(z_j).
double energy_discrete(const Configuration& cfg, const Potential& p);

struct QuadratureSpec {
  int radial = 48;        // Gauss-Legendre nodes per radial coordinate
  int angular = 32;       // uniform nodes per angular coordinate (periodic)
  double log_falloff = 60;  // radial cut where n beta Q clears this many nats
};

// log Z_n for n in {1,2,3} by tensor quadrature in polar coordinates with
// one angular integral removed by rotation invariance; requires a radial
// profile.  Integer and half-integer beta are exact to quadrature precision;
// other beta get a denser angular rule.
double log_partition_bruteforce(const Potential& p, double beta, int n,
                                const QuadratureSpec& spec = {});

// right-hand side of the entropy bound:
//   -beta (1 - 1/n) gamma(Q) - (beta/n) int_S Q lapQ dA
//   - (1/n) int_S lapQ log lapQ dA
double entropy_bound_rhs(const Potential& p, double beta, int n);

struct EntropyCheck {
  int n = 0;
  double beta = 0;
  double log_zn = 0;
  double lhs = 0;  // log_zn / n^2
  double rhs = 0;
  bool pass = false;  // lhs >= rhs
};

EntropyCheck entropy_bound_check(const Potential& p, double beta, int n,
                                 const QuadratureSpec& spec = {});

}  // namespace cgas
