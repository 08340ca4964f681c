#include "cgas/equilibrium.hpp"

#include "cgas/quadrature.hpp"
#include "eq_detail.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace cgas {

namespace detail {

std::vector<std::uint8_t> fill_holes(const GridSpec& g,
                                     std::vector<std::uint8_t> mask) {
  const int nx = g.nx, ny = g.ny;
  std::vector<std::uint8_t> outside((std::size_t)nx * ny, 0);
  std::vector<int> stack;
  auto push = [&](int i, int j) {
    if (i < 0 || i >= nx || j < 0 || j >= ny) return;
    int id = g.index(i, j);
    if (outside[id] || mask[id]) return;
    outside[id] = 1;
    stack.push_back(id);
  };
  for (int i = 0; i < nx; ++i) {
    push(i, 0);
    push(i, ny - 1);
  }
  for (int j = 0; j < ny; ++j) {
    push(0, j);
    push(nx - 1, j);
  }
  while (!stack.empty()) {
    int id = stack.back();
    stack.pop_back();
    int i = id % nx, j = id / nx;
    push(i - 1, j);
    push(i + 1, j);
    push(i, j - 1);
    push(i, j + 1);
  }
  for (int id = 0; id < nx * ny; ++id)
    if (!outside[id]) mask[id] = 1;
  return mask;
}

bool mask_touches_frame(const GridSpec& g,
                        const std::vector<std::uint8_t>& mask) {
  for (int i = 0; i < g.nx; ++i)
    if (mask[g.index(i, 0)] || mask[g.index(i, g.ny - 1)]) return true;
  for (int j = 0; j < g.ny; ++j)
    if (mask[g.index(0, j)] || mask[g.index(g.nx - 1, j)]) return true;
  return false;
}

std::vector<double> cell_deltas(const GridSpec& g, const DropletGeometry& geo) {
  std::vector<double> d((std::size_t)g.cells());
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      d[g.index(i, j)] = geo.distance(g.center(i, j));
  return d;
}

double median(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("median of empty set");
  std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  double hi = v[mid];
  if (v.size() % 2) return hi;
  std::nth_element(v.begin(), v.begin() + mid - 1, v.begin() + mid);
  return 0.5 * (hi + v[mid - 1]);
}

}  // namespace detail

std::vector<std::uint8_t> EquilibriumResult::interior_mask() const {
  std::vector<std::uint8_t> out((std::size_t)grid.cells(), 0);
  for (int j = 1; j + 1 < grid.ny; ++j)
    for (int i = 1; i + 1 < grid.nx; ++i) {
      bool all = true;
      for (int dj = -1; dj <= 1 && all; ++dj)
        for (int di = -1; di <= 1 && all; ++di)
          all = droplet_mask[grid.index(i + di, j + dj)] != 0;
      out[grid.index(i, j)] = all ? 1 : 0;
    }
  return out;
}

double radial_droplet_radius(const Potential& p) {
  if (!p.has_radial_profile())
    throw std::invalid_argument("radial solve requires a radial profile");
  auto slope = [&p](double r) { return r * p.radial_derivative(r) - 2.0; };
  double lo = 1e-9, hi = 1.0;
  int expand = 0;
  while (slope(hi) < 0 && expand++ < 80) hi *= 2.0;
  if (slope(hi) < 0 || slope(lo) > 0)
    throw std::runtime_error(
        "r Q'(r) does not cross 2: unsupported potential shape");
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    (slope(mid) < 0 ? lo : hi) = mid;
    if (hi - lo < 1e-13 * std::max(1.0, hi)) break;
  }
  return 0.5 * (lo + hi);
}

namespace {

// fraction of the cell inside the disc |z| <= R, 4x4 midpoint subsamples
double disc_coverage(const GridSpec& g, int i, int j, double R) {
  complexd c = g.center(i, j);
  double half = 0.5 * std::hypot(g.hx, g.hy);
  double r = std::abs(c);
  if (r <= R - half) return 1.0;
  if (r >= R + half) return 0.0;
  int inside = 0;
  for (int sj = 0; sj < 4; ++sj)
    for (int si = 0; si < 4; ++si) {
      complexd z{c.real() + ((si + 0.5) / 4.0 - 0.5) * g.hx,
                 c.imag() + ((sj + 0.5) / 4.0 - 0.5) * g.hy};
      if (std::abs(z) <= R) ++inside;
    }
  return inside / 16.0;
}

void finish_scan_constants(EquilibriumResult& eq, double scan_c_fraction) {
  eq.c0 = boundary_min_laplacian(eq);
  QuadraticFloor fl = quadratic_floor_scan(eq, scan_c_fraction * eq.c0);
  eq.a0 = fl.a0;
  eq.a0_delta0 = fl.delta0;
}

}  // namespace

RadialSolveResult solve_radial(PotentialPtr p, int resolution,
                               double box_halfwidth) {
  const double R = radial_droplet_radius(*p);
  double hw = box_halfwidth > 0 ? box_halfwidth : 2.0 * R;
  if (hw < 1.5 * R)
    throw std::invalid_argument("grid box too small for the droplet");

  EquilibriumResult eq;
  eq.potential = p;
  eq.grid = GridSpec::make(Box::centered(hw), resolution);
  const GridSpec& g = eq.grid;
  const int nc = g.cells();

  const double qR = p->radial_value(R);
  const double gamma = qR - 2.0 * std::log(R);
  eq.frostman_gamma = gamma;
  // closed-form fields: tolerance covers only rounding, not solver error
  eq.field_tol = 1e-12 * (1.0 + std::abs(gamma));

  eq.sigma_weights.assign(nc, 0.0);
  eq.droplet_mask.assign(nc, 0);
  eq.q_check.resize(nc);
  eq.q_eff.resize(nc);
  double mass = 0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      int id = g.index(i, j);
      complexd z = g.center(i, j);
      double r = std::abs(z);
      double q = p->value(z);
      double qc = r <= R ? q : qR + 2.0 * std::log(r / R);
      eq.q_check[id] = qc;
      eq.q_eff[id] = std::max(0.0, q - qc);
      double cov = disc_coverage(g, i, j, R);
      if (cov > 0) {
        double w = p->laplacian(z) * g.cell_area_da() * cov;
        eq.sigma_weights[id] = std::max(0.0, w);
        mass += eq.sigma_weights[id];
      }
      eq.droplet_mask[id] = r <= R ? 1 : 0;
    }
  if (mass <= 0) throw std::runtime_error("radial solve produced zero mass");
  for (double& w : eq.sigma_weights) w /= mass;

  eq.droplet_mask = detail::fill_holes(g, std::move(eq.droplet_mask));
  eq.coincidence_mask.assign(nc, 0);
  for (int id = 0; id < nc; ++id)
    eq.coincidence_mask[id] = eq.q_eff[id] <= eq.field_tol ? 1 : 0;

  eq.droplet = DropletGeometry::disc({0, 0}, R);
  eq.cell_delta = detail::cell_deltas(g, eq.droplet);

  // gamma(Q) = -log R + Q(R)/2 + (1/2) int_0^R Q dm  with m(r) = r Q'(r)/2;
  // integrating by parts removes Q'': int Q dm = Q(R) - int_0^R r Q'(r)^2/2 dr
  double tail = adaptive_simpson(
      [&p](double r) {
        double d = p->radial_derivative(r);
        return 0.5 * r * d * d;
      },
      0.0, R, 1e-11);
  eq.robin_gamma_q = -std::log(R) + qR - 0.5 * tail;

  eq.iterations = 0;
  eq.frostman_residual = 0.0;
  finish_scan_constants(eq, 0.9);
  return {R, eq};
}

double effective_potential(const EquilibriumResult& eq, complexd z) {
  const GridSpec& g = eq.grid;
  if (!g.box.contains(z)) {
    double q = eq.potential->value(z);
    return std::max(0.0, q - 2.0 * std::log(std::abs(z)) - eq.frostman_gamma);
  }
  double fi = (z.real() - g.box.xlo) / g.hx - 0.5;
  double fj = (z.imag() - g.box.ylo) / g.hy - 0.5;
  int i0 = std::clamp((int)std::floor(fi), 0, g.nx - 2);
  int j0 = std::clamp((int)std::floor(fj), 0, g.ny - 2);
  double tx = std::clamp(fi - i0, 0.0, 1.0);
  double ty = std::clamp(fj - j0, 0.0, 1.0);
  double v00 = eq.q_eff[g.index(i0, j0)], v10 = eq.q_eff[g.index(i0 + 1, j0)];
  double v01 = eq.q_eff[g.index(i0, j0 + 1)],
         v11 = eq.q_eff[g.index(i0 + 1, j0 + 1)];
  double v = (1 - tx) * (1 - ty) * v00 + tx * (1 - ty) * v10 +
             (1 - tx) * ty * v01 + tx * ty * v11;
  return std::max(0.0, v);
}

QuadraticFloor quadratic_floor_scan(const EquilibriumResult& eq, double c) {
  const int nc = eq.grid.cells();
  std::vector<int> exterior;
  exterior.reserve(nc);
  for (int id = 0; id < nc; ++id)
    if (eq.cell_delta[id] > 0) exterior.push_back(id);
  if (exterior.empty())
    throw std::runtime_error("no exterior cells: box too tight for the scan");
  std::sort(exterior.begin(), exterior.end(), [&](int a, int b) {
    return eq.cell_delta[a] < eq.cell_delta[b];
  });

  const double tol = eq.field_tol;
  QuadraticFloor out;
  // largest prefix (in delta order) satisfying the quadratic floor cell-wise;
  // on a violation at delta_v the scan radius stays strictly below delta_v
  double delta0 = 0;
  for (int id : exterior) {
    double d = eq.cell_delta[id];
    if (eq.q_eff[id] < 2.0 * c * d * d - tol) break;
    delta0 = d;
  }
  out.delta0 = delta0;

  double min_far = std::numeric_limits<double>::infinity();
  for (int id : exterior)
    if (eq.cell_delta[id] >= delta0) min_far = std::min(min_far, eq.q_eff[id]);
  out.a0 = std::isfinite(min_far) ? 0.5 * min_far : 0.0;

  for (int id : exterior) {
    double d = eq.cell_delta[id];
    double floor = 2.0 * std::min(c * d * d, out.a0);
    if (eq.q_eff[id] < floor - tol) ++out.violations;
  }
  return out;
}

double boundary_min_laplacian(const EquilibriumResult& eq) {
  double c0 = std::numeric_limits<double>::infinity();
  for (complexd z : eq.droplet.boundary_samples(2048))
    c0 = std::min(c0, eq.potential->laplacian(z));
  if (!(c0 > 0))
    throw std::runtime_error(
        "laplacian of Q is not positive on the droplet boundary");
  return c0;
}

double exterior_rate(const EquilibriumResult& eq, double r) {
  if (!(r > 0)) throw std::invalid_argument("exterior rate needs r > 0");
  double lo = std::numeric_limits<double>::infinity();
  const int nc = eq.grid.cells();
  for (int id = 0; id < nc; ++id)
    if (eq.cell_delta[id] >= r) lo = std::min(lo, eq.q_eff[id]);

  // ring exactly at distance r (grid cells quantize delta; parts of the ring
  // may fall outside the box, where the far-field formula applies)
  auto ring_min = [&](double dist) {
    auto samples = eq.droplet.boundary_samples(1024);
    std::size_t m = samples.size();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < m; ++k) {
      complexd t = samples[(k + 1) % m] - samples[(k + m - 1) % m];
      double len = std::abs(t);
      if (len == 0) continue;
      complexd nrm{t.imag() / len, -t.real() / len};
      complexd z = samples[k] + dist * nrm;
      if (eq.droplet.distance(z) <= 0.5 * dist) z = samples[k] - dist * nrm;
      best = std::min(best, effective_potential(eq, z));
    }
    return best;
  };
  lo = std::min(lo, ring_min(r));
  return 0.5 * lo;
}

}  // namespace cgas
