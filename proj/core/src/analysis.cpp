#include "cgas/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "cgas/lagrange.hpp"

namespace cgas {

namespace {

void require_points(const SampleBatch& batch, const char* who) {
  if (batch.points.empty())
    throw std::invalid_argument(std::string(who) +
                                " requires a batch with stored points");
}

long count_exceed(const std::vector<double>& xs, double thr) {
  long c = 0;
  for (double x : xs) c += x > thr;
  return c;
}

}  // namespace

TailReport dn_tail(const SampleBatch& batch, const EquilibriumResult& eq,
                   double c, double mu, const std::vector<double>& t_grid) {
  if (batch.d_n.empty()) throw std::invalid_argument("dn_tail: empty batch");
  if (!(c > 0) || !(c < eq.c0))
    throw std::invalid_argument("dn_tail requires 0 < c < c0");
  if (mu < 0) throw std::invalid_argument("dn_tail requires mu >= 0");
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    if (!(t_grid[i] > t_grid[i - 1]))
      throw std::invalid_argument("t grid must be strictly increasing");

  TailReport rep;
  rep.n = batch.n;
  rep.beta = batch.beta;
  rep.c = c;
  rep.mu = mu;
  const double N = (double)batch.d_n.size();
  for (double t : t_grid) {
    double bound = std::exp(-2.0 * t);
    if (N * bound < 5.0) {
      // beyond here even a perfectly matching sample cannot resolve the bound
      rep.truncated = true;
      rep.note = "t grid truncated: expected exceedance count below 5";
      break;
    }
    double arg = (std::log((double)batch.n) + mu + t) / (c * batch.beta * batch.n);
    TailRow row;
    row.t = t;
    row.threshold = std::sqrt(arg);
    row.bound = bound;
    long hits = count_exceed(batch.d_n, row.threshold);
    Wilson w = wilson_interval(hits, (long)N);
    row.p_hat = w.p_hat;
    row.ci_lo = w.lo;
    row.ci_hi = w.hi;
    row.pass = !(row.ci_lo > row.bound);
    rep.rows.push_back(row);
  }
  if (rep.rows.empty())
    throw std::invalid_argument("dn_tail: sample too small for every t");
  return rep;
}

ScalingReport localization_scaling(const std::vector<SampleBatch>& batches,
                                   double c0) {
  std::map<int, const SampleBatch*> by_n;
  for (const auto& b : batches) {
    if (b.d_n.size() < 1000)
      throw std::invalid_argument(
          "localization_scaling: need >= 1000 D_n samples per n");
    by_n[b.n] = &b;
  }
  if (by_n.size() < 3)
    throw std::invalid_argument(
        "localization_scaling: need >= 3 distinct n values");
  if (!(c0 > 0)) throw std::invalid_argument("c0 must be positive");

  ScalingReport rep;
  rep.a_ref = 1.1 / std::sqrt(c0);
  for (auto& [n, b] : by_n) {
    ScalingRow row;
    row.n = n;
    row.beta = b->beta;
    row.median_dn = median_copy(b->d_n);
    row.rho = row.median_dn / std::sqrt(std::log((double)n) / (b->beta * n));
    rep.rows.push_back(row);
  }
  bool inc = true, dec = true;
  for (std::size_t i = 1; i < rep.rows.size(); ++i) {
    inc = inc && rep.rows[i].rho >= rep.rows[i - 1].rho;
    dec = dec && rep.rows[i].rho <= rep.rows[i - 1].rho;
  }
  rep.trend = inc ? "increasing" : dec ? "decreasing" : "mixed";
  rep.below_a_at_largest = rep.rows.back().rho < rep.a_ref;
  return rep;
}

LargeRReport large_r_tail(const SampleBatch& batch,
                          const EquilibriumResult& eq,
                          const std::vector<double>& r_grid, double c) {
  if (batch.d_n.empty())
    throw std::invalid_argument("large_r_tail: empty batch");
  if (!(c > 0)) throw std::invalid_argument("large_r_tail: c must be > 0");
  LargeRReport rep;
  rep.r0 = std::sqrt(eq.a0 / c);
  const long N = (long)batch.d_n.size();
  for (double r : r_grid) {
    if (c * r * r < eq.a0)
      throw std::invalid_argument(
          "large_r_tail: r below the admissible radius r0");
    LargeRRow row;
    row.r = r;
    row.k_r = exterior_rate(eq, r);
    row.bound = std::exp(-row.k_r * batch.beta * batch.n);
    row.exceed = count_exceed(batch.d_n, r);
    Wilson w = wilson_interval(row.exceed, N);
    row.p_hat = w.p_hat;
    row.ci_lo = w.lo;
    row.pass = !(row.ci_lo > row.bound);
    rep.rows.push_back(row);
  }
  return rep;
}

OnePointField one_point_histogram(const SampleBatch& batch,
                                  const GridSpec& grid) {
  require_points(batch, "one_point_histogram");
  OnePointField f;
  f.grid = grid;
  f.n = batch.n;
  f.samples = (long)batch.points.size();
  f.bin_spacing_ratio = grid.hx * std::sqrt((double)batch.n);
  f.values.assign(grid.cells(), 0.0);
  for (const auto& cfg : batch.points)
    for (complexd z : cfg) {
      if (!grid.box.contains(z)) continue;
      auto [i, j] = grid.locate(z);
      f.values[grid.index(i, j)] += 1.0;
    }
  double norm = 1.0 / ((double)f.samples * grid.cell_area_da());
  for (double& v : f.values) v *= norm;
  for (double v : f.values) f.total_mass += v;
  f.total_mass *= grid.cell_area_da();
  return f;
}

std::vector<RadialProfileRow> radial_one_point_profile(
    const SampleBatch& batch, double r_max, int nbins) {
  require_points(batch, "radial_one_point_profile");
  if (nbins < 1 || !(r_max > 0))
    throw std::invalid_argument("bad radial profile bins");
  std::vector<RadialProfileRow> rows(nbins);
  double dr = r_max / nbins;
  for (int b = 0; b < nbins; ++b) {
    rows[b].r_lo = b * dr;
    rows[b].r_hi = (b + 1) * dr;
  }
  for (const auto& cfg : batch.points)
    for (complexd z : cfg) {
      double r = std::abs(z);
      if (r >= r_max) continue;
      rows[(int)(r / dr)].count += 1;
    }
  double ns = (double)batch.points.size();
  for (auto& row : rows) {
    double area_da = row.r_hi * row.r_hi - row.r_lo * row.r_lo;
    row.value = (double)row.count / (ns * area_da);
  }
  return rows;
}

DecayFit decay_fit(const std::vector<std::pair<double, double>>& pairs,
                   double beta, int n, double c0) {
  if (pairs.size() < 2)
    throw std::invalid_argument("decay_fit: need >= 2 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto [x, y] : pairs) {
    if (!std::isfinite(y))
      throw std::invalid_argument(
          "decay_fit: non-positive one-point values in window");
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double m = (double)pairs.size();
  double det = m * sxx - sx * sx;
  if (det <= 0) throw std::invalid_argument("decay_fit: degenerate abscissae");
  DecayFit fit;
  fit.slope = (m * sxy - sx * sy) / det;
  fit.intercept = (sy - fit.slope * sx) / m;
  fit.c_hat = fit.slope / (beta * n);
  double ss = 0;
  for (auto [x, y] : pairs) {
    double e = y - (fit.intercept + fit.slope * x);
    ss += e * e;
  }
  fit.residual_rms = std::sqrt(ss / m);
  fit.points = (int)m;
  fit.window_lo_sq = pairs.front().first;
  fit.window_hi_sq = pairs.back().first;
  fit.verdict = fit.c_hat >= 0.9 * (2.0 * c0);
  return fit;
}

std::vector<std::pair<double, double>> decay_points_exact(
    const RadialEnsemble& ens, double delta_lo, double delta_hi, int npts) {
  if (!(0 < delta_lo && delta_lo < delta_hi) || npts < 2)
    throw std::invalid_argument("bad decay window");
  std::vector<std::pair<double, double>> pts;
  double lo2 = delta_lo * delta_lo, hi2 = delta_hi * delta_hi;
  for (int i = 0; i < npts; ++i) {
    double d2 = lo2 + (hi2 - lo2) * i / (npts - 1);
    double r = ens.droplet_radius() + std::sqrt(d2);
    pts.emplace_back(d2, -ens.log_one_point({r, 0.0}));
  }
  return pts;
}

std::vector<TestFunction> builtin_test_functions(const EquilibriumResult& eq) {
  const Box box = eq.grid.box;
  double m2 = 0;  // max |z|^2 over the box corners
  for (double x : {box.xlo, box.xhi})
    for (double y : {box.ylo, box.yhi}) m2 = std::max(m2, x * x + y * y);
  complexd c{0.5 * (box.xlo + box.xhi), 0.5 * (box.ylo + box.yhi)};
  double w = 0.25 * (box.xhi - box.xlo);
  std::vector<TestFunction> fs;
  fs.push_back({"one", [](complexd) { return 1.0; }});
  fs.push_back({"abs2_clipped",
                [m2](complexd z) { return std::min(std::norm(z), m2); }});
  fs.push_back({"re_clipped", [box](complexd z) {
                  return std::clamp(z.real(), box.xlo, box.xhi);
                }});
  fs.push_back({"gauss_bump", [c, w](complexd z) {
                  return std::exp(-std::norm(z - c) / (w * w));
                }});
  return fs;
}

ConvergenceReport empirical_measure_test(const SampleBatch& batch,
                                         const EquilibriumResult& eq,
                                         const std::vector<TestFunction>& fs) {
  require_points(batch, "empirical_measure_test");
  ConvergenceReport rep;
  const GridSpec& g = eq.grid;
  for (const auto& tf : fs) {
    double sigma_f = 0;
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        sigma_f += eq.sigma_weights[g.index(i, j)] * tf.f(g.center(i, j));
    std::vector<double> mu_f;
    mu_f.reserve(batch.points.size());
    for (const auto& cfg : batch.points) {
      double s = 0;
      for (complexd z : cfg) s += tf.f(z);
      mu_f.push_back(s / (double)cfg.size());
    }
    ConvergenceRow row;
    row.name = tf.name;
    row.sample_mean = mean_of(mu_f);
    row.sigma_f = sigma_f;
    row.abs_err = std::abs(row.sample_mean - sigma_f);
    int blocks = std::min<int>(100, (int)mu_f.size() / 2);
    row.se = blocks >= 2 ? blocked_standard_error(mu_f, blocks) : 0.0;
    row.pass = row.abs_err <= std::max(0.05, 3.0 * row.se);
    rep.rows.push_back(row);
  }
  return rep;
}

namespace {

IdentityCheck summarize_identity(const std::vector<double>& lhs_terms,
                                 const std::vector<double>& rhs_terms) {
  IdentityCheck chk;
  chk.samples = (long)lhs_terms.size();
  chk.lhs = mean_of(lhs_terms);
  chk.rhs = mean_of(rhs_terms);
  chk.diff = chk.lhs - chk.rhs;
  std::vector<double> d(lhs_terms.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = lhs_terms[i] - rhs_terms[i];
  int blocks = std::min<int>(100, (int)d.size() / 2);
  chk.se = blocks >= 2 ? blocked_standard_error(d, blocks) : 0.0;
  chk.pass = std::abs(chk.diff) <= 3.0 * chk.se;
  return chk;
}

}  // namespace

namespace {

// t^beta for t >= 0 with fast paths for the common (half-)integer betas
inline double pow_beta(double t, double beta) {
  if (beta == 1.0) return t;
  if (beta == 1.5) return t * std::sqrt(t);
  if (beta == 2.0) return t * t;
  return std::pow(t, beta);
}

// quadrature nodes with Q precomputed; node count kept moderate because the
// pair check touches |rule|^2 node pairs per accepted sample
struct IdentityRule {
  RegionRule rule;
  std::vector<double> q;  // Q at nodes
  explicit IdentityRule(const Region& W, const Potential& p)
      : rule(make_region_rule(W, 16, 32)) {
    q.reserve(rule.pts.size());
    for (complexd z : rule.pts) q.push_back(p.value(z));
  }
};

// |l_j(node_a)|^{2 beta} for every node, one configuration; log_den and q_j
// are per-sample precomputations
void lagrange_row(const Configuration& cfg, int j, double q_j, double log_den,
                  double n_over, double two_beta, const IdentityRule& ir,
                  std::vector<double>& out) {
  const int n = (int)cfg.size();
  out.resize(ir.rule.pts.size());
  for (std::size_t a = 0; a < ir.rule.pts.size(); ++a) {
    complexd z = ir.rule.pts[a];
    double s = 0;
    bool dead = false;
    for (int i = 0; i < n; ++i) {
      if (i == j) continue;
      double d2 = std::norm(z - cfg[i]);
      if (d2 == 0) {
        dead = true;
        break;
      }
      s += 0.5 * std::log(d2);
    }
    if (dead) {
      out[a] = 0;
      continue;
    }
    s -= log_den;
    s -= 0.5 * n_over * (ir.q[a] - q_j);
    out[a] = std::exp(two_beta * s);
  }
}

double log_den_sum(const Configuration& cfg, int j) {
  double s = 0;
  for (std::size_t i = 0; i < cfg.size(); ++i)
    if ((int)i != j) s += 0.5 * std::log(std::norm(cfg[j] - cfg[i]));
  return s;
}

struct StreamedChain {
  ChainState chain;
  long retained;
  int thinning;
  explicit StreamedChain(const ChainParams& par, PotentialPtr p,
                         const EquilibriumResult* eq)
      : chain(par, p, eq),
        retained(par.sweeps / std::max(1, par.thinning)),
        thinning(std::max(1, par.thinning)) {
    for (long s = 0; s < par.burn_in; ++s) chain.sweep();
    chain.freeze_tuning();
  }
  template <typename F>
  void run(F&& per_sample) {
    for (long s = 0; s < retained; ++s) {
      for (int t = 0; t < thinning; ++t) chain.sweep();
      per_sample(chain.config());
    }
  }
};

}  // namespace

IdentityCheck interpolation_identity_single(const ChainParams& par,
                                            PotentialPtr p,
                                            const EquilibriumResult* eq,
                                            const Region& U, const Region& W,
                                            int j) {
  if (j < 0 || j >= par.n) throw std::out_of_range("identity check: node");
  IdentityRule ir(W, *p);
  const double two_beta = 2.0 * par.beta;
  std::vector<double> lhs, rhs, row;
  StreamedChain sc(par, p, eq);
  lhs.reserve(sc.retained);
  rhs.reserve(sc.retained);
  sc.run([&](const Configuration& cfg) {
    double y = 0;
    if (U.contains(cfg[j])) {
      lagrange_row(cfg, j, p->value(cfg[j]), log_den_sum(cfg, j), (double)par.n,
                   two_beta, ir, row);
      for (std::size_t a = 0; a < row.size(); ++a) y += ir.rule.w[a] * row[a];
    }
    lhs.push_back(y);
    rhs.push_back(U.area_da() * (W.contains(cfg[j]) ? 1.0 : 0.0));
  });
  return summarize_identity(lhs, rhs);
}

IdentityCheck interpolation_identity_pair(const ChainParams& par,
                                          PotentialPtr p,
                                          const EquilibriumResult* eq,
                                          const Region& U1, const Region& U2,
                                          const Region& W1, const Region& W2) {
  if (par.n < 2) throw std::invalid_argument("pair identity needs n >= 2");
  IdentityRule ir1(W1, *p);
  IdentityRule ir2(W2, *p);
  const double two_beta = 2.0 * par.beta;
  const double area = U1.area_da() * U2.area_da();
  std::vector<double> lhs, rhs, row0, row1, base;
  StreamedChain sc(par, p, eq);
  lhs.reserve(sc.retained);
  rhs.reserve(sc.retained);
  sc.run([&](const Configuration& cfg) {
    double y = 0;
    if (U1.contains(cfg[0]) && U2.contains(cfg[1])) {
      double q0 = p->value(cfg[0]), q1 = p->value(cfg[1]);
      lagrange_row(cfg, 0, q0, log_den_sum(cfg, 0), (double)par.n, two_beta,
                   ir1, row0);
      lagrange_row(cfg, 1, q1, log_den_sum(cfg, 1), (double)par.n, two_beta,
                   ir2, row1);
      // moving slot 0 to the outer node zeta rescales l_1 by
      //   (zeta_1 - zeta_0)(eta - zeta) / ((zeta_1 - zeta)(eta - zeta_0)),
      // so the inner integral factorizes into one pass over its nodes
      double d01 = std::norm(cfg[1] - cfg[0]);
      base.resize(row1.size());
      for (std::size_t b = 0; b < row1.size(); ++b) {
        double db0 = std::norm(ir2.rule.pts[b] - cfg[0]);
        base[b] = db0 == 0 ? 0.0
                           : ir2.rule.w[b] * row1[b] *
                                 pow_beta(d01 / db0, par.beta);
      }
      for (std::size_t a = 0; a < row0.size(); ++a) {
        if (row0[a] == 0) continue;
        complexd za = ir1.rule.pts[a];
        double d1a = std::norm(cfg[1] - za);
        if (d1a == 0) continue;
        double inner = 0;
        for (std::size_t b = 0; b < base.size(); ++b)
          inner += base[b] * pow_beta(std::norm(ir2.rule.pts[b] - za),
                                      par.beta);
        y += ir1.rule.w[a] * row0[a] * inner / pow_beta(d1a, par.beta);
      }
    }
    lhs.push_back(y);
    bool in = W1.contains(cfg[0]) && W2.contains(cfg[1]);
    rhs.push_back(area * (in ? 1.0 : 0.0));
  });
  return summarize_identity(lhs, rhs);
}

}  // namespace cgas
