// Grid equilibrium solve: minimize w.Kw + q.w over the probability simplex,
// K the discretized log kernel with the cell self-energy on the diagonal.
// The kernel is translation-invariant on the uniform grid, so K w is a
// circular convolution after zero-padded embedding — exact to roundoff and
// O(N log N), which beats both direct summation and far-field approximations
// at every size where the solve matters.

#include "cgas/equilibrium.hpp"
#include "cgas/quadrature.hpp"
#include "eq_detail.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <deque>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace cgas {
namespace {

class KernelMultiplier {
 public:
  explicit KernelMultiplier(const GridSpec& g)
      : nx_(g.nx), ny_(g.ny), px_(2 * g.nx), py_(2 * g.ny) {
    const double h = g.h();
    spec_len_ = (std::size_t)py_ * (px_ / 2 + 1);
    real_ = fftw_alloc_real((std::size_t)px_ * py_);
    spec_ = fftw_alloc_complex(spec_len_);
    kspec_ = fftw_alloc_complex(spec_len_);
    fwd_ = fftw_plan_dft_r2c_2d(py_, px_, real_, spec_, FFTW_ESTIMATE);
    inv_ = fftw_plan_dft_c2r_2d(py_, px_, spec_, real_, FFTW_ESTIMATE);

    // wrapped kernel table: entry (row=q, col=p) is -log distance between
    // cells offset by (di, dj); diagonal is the cell self-energy
    const double diag = -std::log(kCellSelfEnergyFactor * h);
    for (int q = 0; q < py_; ++q) {
      int dj = q < ny_ ? q : q - py_;
      for (int p = 0; p < px_; ++p) {
        int di = p < nx_ ? p : p - px_;
        double v;
        if (di == 0 && dj == 0)
          v = diag;
        else
          v = -0.5 * std::log(((double)di * di + (double)dj * dj) * h * h);
        real_[(std::size_t)q * px_ + p] = v;
      }
    }
    fftw_execute(fwd_);
    std::memcpy(kspec_, spec_, spec_len_ * sizeof(fftw_complex));
  }

  ~KernelMultiplier() {
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(inv_);
    fftw_free(real_);
    fftw_free(spec_);
    fftw_free(kspec_);
  }

  KernelMultiplier(const KernelMultiplier&) = delete;
  KernelMultiplier& operator=(const KernelMultiplier&) = delete;

  // out_i = sum_j K_ij w_j over the nx*ny grid
  void multiply(const std::vector<double>& w, std::vector<double>& out) {
    std::memset(real_, 0, (std::size_t)px_ * py_ * sizeof(double));
    for (int j = 0; j < ny_; ++j)
      std::memcpy(real_ + (std::size_t)j * px_, w.data() + (std::size_t)j * nx_,
                  nx_ * sizeof(double));
    fftw_execute(fwd_);
    const double scale = 1.0 / ((double)px_ * py_);
    for (std::size_t k = 0; k < spec_len_; ++k) {
      double re = spec_[k][0] * kspec_[k][0] - spec_[k][1] * kspec_[k][1];
      double im = spec_[k][0] * kspec_[k][1] + spec_[k][1] * kspec_[k][0];
      spec_[k][0] = re * scale;
      spec_[k][1] = im * scale;
    }
    fftw_execute(inv_);
    out.resize((std::size_t)nx_ * ny_);
    for (int j = 0; j < ny_; ++j)
      std::memcpy(out.data() + (std::size_t)j * nx_,
                  real_ + (std::size_t)j * px_, nx_ * sizeof(double));
  }

 private:
  int nx_, ny_, px_, py_;
  std::size_t spec_len_ = 0;
  double* real_ = nullptr;
  fftw_complex* spec_ = nullptr;
  fftw_complex* kspec_ = nullptr;
  fftw_plan fwd_{}, inv_{};
};

void project_simplex(std::vector<double>& v, std::vector<double>& scratch) {
  scratch = v;
  std::sort(scratch.begin(), scratch.end(), std::greater<double>());
  double css = 0, tau = 0;
  for (std::size_t k = 0; k < scratch.size(); ++k) {
    css += scratch[k];
    double t = (css - 1.0) / (double)(k + 1);
    if (scratch[k] - t > 0) tau = t;
  }
  for (double& x : v) x = std::max(0.0, x - tau);
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

EquilibriumResult solve_grid(PotentialPtr p, const GridDomain& dom,
                             const GridSolveOptions& opts) {
  if (dom.resolution < 16)
    throw std::invalid_argument("grid resolution too small");
  GridSpec g = GridSpec::make(dom.box, dom.resolution);
  if (std::abs(g.hx - g.hy) > 1e-12 * std::max(g.hx, g.hy))
    throw std::invalid_argument("grid solve requires square cells");
  const int nc = g.cells();

  std::vector<double> q(nc), lap(nc);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      complexd z = g.center(i, j);
      int id = g.index(i, j);
      q[id] = p->value(z);
      lap[id] = p->laplacian(z);
      if (!std::isfinite(q[id]))
        throw std::invalid_argument("potential infinite inside the grid box");
    }

  // start from the density guess lap(Q) restricted to a disc just beyond the
  // per-ray droplet scale
  const double scale = estimate_droplet_scale(*p);
  std::vector<double> w(nc, 0.0);
  {
    double mass = 0;
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        int id = g.index(i, j);
        if (std::abs(g.center(i, j)) <= 1.1 * scale)
          w[id] = std::max(lap[id], 0.0) * g.cell_area_da();
        mass += w[id];
      }
    if (mass <= 0) throw std::runtime_error("empty initial density guess");
    for (double& x : w) x /= mass;
  }

  KernelMultiplier K(g);
  std::vector<double> U, g_vec(nc), scratch, w_new, U_new, g_new(nc);
  K.multiply(w, U);
  for (int i = 0; i < nc; ++i) g_vec[i] = 2.0 * U[i] + q[i];
  double E = dot(w, U) + dot(w, q);

  std::deque<double> hist{E};
  const int stall_window = 40;
  double alpha = 0;
  {
    double gmax = 0;
    for (double x : g_vec) gmax = std::max(gmax, std::abs(x));
    alpha = 0.1 / (gmax + 1.0);
  }

  double gamma_est = 0, residual = std::numeric_limits<double>::infinity();
  int iter = 0;
  bool converged = false;
  for (iter = 1; iter <= opts.max_iters; ++iter) {
    double hist_max = *std::max_element(hist.begin(), hist.end());
    double E_new = 0;
    int halvings = 0;
    while (true) {
      w_new = w;
      for (int i = 0; i < nc; ++i) w_new[i] -= alpha * g_vec[i];
      project_simplex(w_new, scratch);
      K.multiply(w_new, U_new);
      E_new = dot(w_new, U_new) + dot(w_new, q);
      if (E_new <= hist_max + 1e-12 * (1.0 + std::abs(hist_max)) ||
          halvings >= 50)
        break;
      alpha *= 0.5;
      ++halvings;
    }

    for (int i = 0; i < nc; ++i) g_new[i] = 2.0 * U_new[i] + q[i];
    // Barzilai-Borwein step from (s, y); s sums to zero on the simplex, so
    // s.y = 2 s.Ks > 0 for the positive-definite neutral-charge energy
    double ss = 0, sy = 0;
    for (int i = 0; i < nc; ++i) {
      double s = w_new[i] - w[i];
      ss += s * s;
      sy += s * (g_new[i] - g_vec[i]);
    }
    if (sy > 0 && ss > 0) alpha = std::clamp(ss / sy, 1e-12, 1e12);

    w.swap(w_new);
    U.swap(U_new);
    g_vec.swap(g_new);
    E = E_new;
    hist.push_back(E);
    if ((int)hist.size() > stall_window) hist.pop_front();

    // Frostman complementarity residual against the support-median multiplier
    std::vector<double> on_support;
    on_support.reserve(nc);
    for (int i = 0; i < nc; ++i)
      if (w[i] > 0) on_support.push_back(g_vec[i]);
    gamma_est = detail::median(std::move(on_support));
    residual = 0;
    for (int i = 0; i < nc; ++i)
      residual = std::max(residual, std::min(w[i], g_vec[i] - gamma_est));

    double tol = opts.residual_tol_scale * (1.0 + std::abs(gamma_est));
    double hist_lo = *std::min_element(hist.begin(), hist.end());
    double hist_hi = *std::max_element(hist.begin(), hist.end());
    bool stalled = (int)hist.size() >= stall_window &&
                   hist_hi - hist_lo <= 1e-11 * (1.0 + std::abs(E));
    if (opts.trace && iter % 50 == 0)
      std::fprintf(stderr, "iter %d E %.12f res %.3e gamma %.6f\n", iter, E,
                   residual, gamma_est);
    if (iter >= opts.min_iters && residual <= tol && stalled) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw std::runtime_error("grid solve did not converge in max iterations");

  EquilibriumResult eq;
  eq.potential = p;
  eq.grid = g;
  eq.sigma_weights = w;
  eq.iterations = iter;

  // droplet mask: at least half the local density guess, holes filled (the
  // density may genuinely vanish inside the droplet, e.g. power fields at 0)
  std::vector<std::uint8_t> mask(nc, 0);
  for (int i = 0; i < nc; ++i)
    mask[i] = w[i] >= 0.5 * std::max(lap[i], 0.0) * g.cell_area_da() ? 1 : 0;
  mask = detail::fill_holes(g, std::move(mask));
  if (detail::mask_touches_frame(g, mask))
    throw std::runtime_error("droplet touches the box boundary: box too small");
  eq.droplet_mask = std::move(mask);

  // gamma as the Q + 2U median over interior droplet cells
  {
    std::vector<double> vals;
    auto interior = [&](int i, int j) {
      for (int dj = -1; dj <= 1; ++dj)
        for (int di = -1; di <= 1; ++di)
          if (!eq.droplet_mask[g.index(i + di, j + dj)]) return false;
      return true;
    };
    for (int j = 1; j + 1 < g.ny; ++j)
      for (int i = 1; i + 1 < g.nx; ++i)
        if (eq.droplet_mask[g.index(i, j)] && interior(i, j))
          vals.push_back(g_vec[g.index(i, j)]);
    if (vals.empty())
      throw std::runtime_error("droplet has no interior cells on this grid");
    eq.frostman_gamma = detail::median(std::move(vals));
  }
  eq.field_tol = 1e-3 * (1.0 + std::abs(eq.frostman_gamma));

  eq.q_check.resize(nc);
  eq.q_eff.resize(nc);
  eq.coincidence_mask.assign(nc, 0);
  for (int i = 0; i < nc; ++i) {
    double qc = std::min(q[i], -2.0 * U[i] + eq.frostman_gamma);
    eq.q_check[i] = qc;
    eq.q_eff[i] = std::max(0.0, q[i] - qc);
    eq.coincidence_mask[i] = eq.q_eff[i] <= eq.field_tol ? 1 : 0;
  }

  // final residual against the reported gamma
  eq.frostman_residual = 0;
  for (int i = 0; i < nc; ++i)
    eq.frostman_residual = std::max(
        eq.frostman_residual, std::min(w[i], g_vec[i] - eq.frostman_gamma));

  eq.robin_gamma_q = E;
  eq.droplet = DropletGeometry::from_mask(g, eq.droplet_mask, 4);
  if (eq.droplet.empty())
    throw std::runtime_error("no droplet component survived extraction");
  eq.cell_delta = detail::cell_deltas(g, eq.droplet);
  eq.c0 = boundary_min_laplacian(eq);
  QuadraticFloor fl = quadratic_floor_scan(eq, 0.9 * eq.c0);
  eq.a0 = fl.a0;
  eq.a0_delta0 = fl.delta0;
  return eq;
}

double grid_energy(const GridSpec& g, const std::vector<double>& w,
                   const std::vector<double>& q) {
  if ((int)w.size() != g.cells() || (int)q.size() != g.cells())
    throw std::invalid_argument("grid_energy: size mismatch");
  KernelMultiplier K(g);
  std::vector<double> Kw;
  K.multiply(w, Kw);
  return dot(w, Kw) + dot(q, w);
}

}  // namespace cgas
