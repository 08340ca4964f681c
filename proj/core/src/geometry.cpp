#include "cgas/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace cgas {
namespace {

double point_segment_distance(complexd z, complexd a, complexd b) {
  complexd ab = b - a;
  double len2 = std::norm(ab);
  if (len2 == 0) return std::abs(z - a);
  double t = ((z.real() - a.real()) * ab.real() +
              (z.imag() - a.imag()) * ab.imag()) /
             len2;
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(z - (a + t * ab));
}

}  // namespace

bool point_in_polyline(const std::vector<complexd>& poly, complexd z) {
  bool inside = false;
  std::size_t m = poly.size();
  for (std::size_t k = 0, prev = m - 1; k < m; prev = k++) {
    complexd p = poly[prev], q = poly[k];
    if ((p.imag() > z.imag()) != (q.imag() > z.imag())) {
      double xint = p.real() + (z.imag() - p.imag()) * (q.real() - p.real()) /
                                   (q.imag() - p.imag());
      if (xint > z.real()) inside = !inside;
    }
  }
  return inside;
}

DropletGeometry DropletGeometry::disc(complexd center, double radius) {
  DropletGeometry g;
  g.is_disc_ = true;
  g.disc_center_ = center;
  g.disc_radius_ = radius;
  const int npts = 1024;
  std::vector<complexd> poly;
  poly.reserve(npts);
  for (int k = 0; k < npts; ++k) {
    double th = 2.0 * kPi * k / npts;
    poly.push_back(center + radius * complexd{std::cos(th), std::sin(th)});
  }
  g.boundary_.push_back(std::move(poly));
  g.finalize();
  return g;
}

DropletGeometry DropletGeometry::ellipse(complexd center, double semi_x,
                                         double semi_y, int npts) {
  DropletGeometry g;
  std::vector<complexd> poly;
  poly.reserve(npts);
  for (int k = 0; k < npts; ++k) {
    double th = 2.0 * kPi * k / npts;
    poly.push_back(center +
                   complexd{semi_x * std::cos(th), semi_y * std::sin(th)});
  }
  g.boundary_.push_back(std::move(poly));
  g.finalize();
  return g;
}

DropletGeometry DropletGeometry::from_mask(const GridSpec& g,
                                           const std::vector<std::uint8_t>& mask,
                                           int min_cells) {
  if ((int)mask.size() != g.cells())
    throw std::invalid_argument("mask size does not match grid");
  auto at = [&](int i, int j) -> bool {
    if (i < 0 || i >= g.nx || j < 0 || j >= g.ny) return false;
    return mask[g.index(i, j)] != 0;
  };

  // edge keys: horizontal edge (i,j) joins nodes (i,j)-(i+1,j); vertical edge
  // (i,j) joins (i,j)-(i,j+1); nodes are cell centers
  // indices stored with a +1 offset so the i = -1 / j = -1 frame blocks pack
  // into unsigned fields
  auto hkey = [&](int i, int j) -> std::uint64_t {
    return (std::uint64_t(1) << 62) | (std::uint64_t(j + 1) << 24) |
           std::uint64_t(i + 1);
  };
  auto vkey = [&](int i, int j) -> std::uint64_t {
    return (std::uint64_t(2) << 62) | (std::uint64_t(j + 1) << 24) |
           std::uint64_t(i + 1);
  };
  auto edge_point = [&](std::uint64_t key) -> complexd {
    int i = int(key & 0xFFFFFF) - 1, j = int((key >> 24) & 0xFFFFFF) - 1;
    if ((key >> 62) == 1)  // horizontal: midpoint of centers (i,j),(i+1,j)
      return {g.box.xlo + (i + 1.0) * g.hx, g.box.ylo + (j + 0.5) * g.hy};
    // vertical: midpoint of centers (i,j),(i,j+1)
    return {g.box.xlo + (i + 0.5) * g.hx, g.box.ylo + (j + 1.0) * g.hy};
  };

  // adjacency between crossed edges; closed curves give exactly two
  // neighbours per edge
  std::unordered_map<std::uint64_t, std::pair<std::uint64_t, std::uint64_t>>
      adj;
  auto link = [&](std::uint64_t a, std::uint64_t b) {
    auto& pa = adj.emplace(a, std::pair<std::uint64_t, std::uint64_t>{0, 0})
                   .first->second;
    (pa.first == 0 ? pa.first : pa.second) = b;
    auto& pb = adj.emplace(b, std::pair<std::uint64_t, std::uint64_t>{0, 0})
                   .first->second;
    (pb.first == 0 ? pb.first : pb.second) = a;
  };

  // blocks span node pairs one beyond the grid so frame-adjacent components
  // still close (exterior nodes read as false)
  for (int j = -1; j < g.ny; ++j)
    for (int i = -1; i < g.nx; ++i) {
      int c = (at(i, j) ? 1 : 0) | (at(i + 1, j) ? 2 : 0) |
              (at(i + 1, j + 1) ? 4 : 0) | (at(i, j + 1) ? 8 : 0);
      if (c == 0 || c == 15) continue;
      std::uint64_t B = hkey(i, j), R = vkey(i + 1, j), T = hkey(i, j + 1),
                    L = vkey(i, j);
      switch (c) {
        case 1: case 14: link(L, B); break;
        case 2: case 13: link(B, R); break;
        case 3: case 12: link(L, R); break;
        case 4: case 11: link(R, T); break;
        case 6: case 9:  link(B, T); break;
        case 7: case 8:  link(L, T); break;
        case 5:  link(L, B); link(R, T); break;  // saddle: separate corners
        case 10: link(B, R); link(T, L); break;
      }
    }

  // walk closed loops
  DropletGeometry out;
  std::unordered_map<std::uint64_t, bool> used;
  used.reserve(adj.size());
  for (const auto& [start, nbrs] : adj) {
    if (used[start]) continue;
    std::vector<complexd> poly;
    std::uint64_t prev = 0, cur = start;
    while (true) {
      used[cur] = true;
      poly.push_back(edge_point(cur));
      auto [n1, n2] = adj.at(cur);
      std::uint64_t next = (n1 != prev && n1 != 0) ? n1 : n2;
      prev = cur;
      cur = next;
      if (cur == start || cur == 0) break;
    }
    if (poly.size() < 3) continue;
    // noise filter: count enclosed mask cells
    double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
    for (auto v : poly) {
      xlo = std::min(xlo, v.real());
      xhi = std::max(xhi, v.real());
      ylo = std::min(ylo, v.imag());
      yhi = std::max(yhi, v.imag());
    }
    int i0 = std::max(0, (int)((xlo - g.box.xlo) / g.hx) - 1);
    int i1 = std::min(g.nx - 1, (int)((xhi - g.box.xlo) / g.hx) + 1);
    int j0 = std::max(0, (int)((ylo - g.box.ylo) / g.hy) - 1);
    int j1 = std::min(g.ny - 1, (int)((yhi - g.box.ylo) / g.hy) + 1);
    int enclosed = 0;
    for (int j = j0; j <= j1 && enclosed < min_cells; ++j)
      for (int i = i0; i <= i1 && enclosed < min_cells; ++i)
        if (mask[g.index(i, j)] && point_in_polyline(poly, g.center(i, j)))
          ++enclosed;
    if (enclosed >= min_cells) out.boundary_.push_back(std::move(poly));
  }
  out.finalize();
  return out;
}

void DropletGeometry::finalize() {
  segs_.clear();
  for (const auto& poly : boundary_) {
    std::size_t m = poly.size();
    for (std::size_t k = 0; k < m; ++k)
      segs_.push_back({poly[k], poly[(k + 1) % m]});
  }
  if (segs_.empty()) return;
  bbox_ = {1e300, -1e300, 1e300, -1e300};
  for (const auto& s : segs_) {
    bbox_.xlo = std::min({bbox_.xlo, s.a.real(), s.b.real()});
    bbox_.xhi = std::max({bbox_.xhi, s.a.real(), s.b.real()});
    bbox_.ylo = std::min({bbox_.ylo, s.a.imag(), s.b.imag()});
    bbox_.yhi = std::max({bbox_.yhi, s.a.imag(), s.b.imag()});
  }
  int target = std::clamp((int)std::sqrt((double)segs_.size()), 4, 192);
  bx_ = by_ = target;
  bhx_ = std::max(bbox_.width() / bx_, 1e-12);
  bhy_ = std::max(bbox_.height() / by_, 1e-12);
  buckets_.assign((std::size_t)bx_ * by_, {});
  for (std::int32_t si = 0; si < (std::int32_t)segs_.size(); ++si) {
    const auto& s = segs_[si];
    int i0 = std::clamp((int)((std::min(s.a.real(), s.b.real()) - bbox_.xlo) / bhx_), 0, bx_ - 1);
    int i1 = std::clamp((int)((std::max(s.a.real(), s.b.real()) - bbox_.xlo) / bhx_), 0, bx_ - 1);
    int j0 = std::clamp((int)((std::min(s.a.imag(), s.b.imag()) - bbox_.ylo) / bhy_), 0, by_ - 1);
    int j1 = std::clamp((int)((std::max(s.a.imag(), s.b.imag()) - bbox_.ylo) / bhy_), 0, by_ - 1);
    for (int j = j0; j <= j1; ++j)
      for (int i = i0; i <= i1; ++i)
        buckets_[(std::size_t)j * bx_ + i].push_back(si);
  }
}

bool DropletGeometry::contains(complexd z) const {
  if (is_disc_) return std::abs(z - disc_center_) <= disc_radius_;
  // even-odd over every component
  std::size_t crossings = 0;
  for (const auto& s : segs_) {
    if ((s.a.imag() > z.imag()) != (s.b.imag() > z.imag())) {
      double xint = s.a.real() + (z.imag() - s.a.imag()) *
                                     (s.b.real() - s.a.real()) /
                                     (s.b.imag() - s.a.imag());
      if (xint > z.real()) ++crossings;
    }
  }
  return (crossings & 1) != 0;
}

double DropletGeometry::boundary_distance(complexd z) const {
  if (is_disc_) return std::abs(std::abs(z - disc_center_) - disc_radius_);
  if (segs_.empty()) return std::numeric_limits<double>::infinity();

  double zx = std::clamp(z.real(), bbox_.xlo, bbox_.xhi);
  double zy = std::clamp(z.imag(), bbox_.ylo, bbox_.yhi);
  double clamp_shift = std::abs(z - complexd{zx, zy});
  int ci = std::clamp((int)((zx - bbox_.xlo) / bhx_), 0, bx_ - 1);
  int cj = std::clamp((int)((zy - bbox_.ylo) / bhy_), 0, by_ - 1);
  double bh_min = std::min(bhx_, bhy_);

  double best = std::numeric_limits<double>::infinity();
  int max_ring = std::max(bx_, by_);
  for (int ring = 0; ring <= max_ring; ++ring) {
    // rings >= ring are unvisited; their cells differ by >= ring in one index,
    // so their segments sit >= (ring-1)*bh_min - clamp_shift away from z
    if (ring > 1 && best <= (double)(ring - 1) * bh_min - clamp_shift) break;
    int i0 = ci - ring, i1 = ci + ring, j0 = cj - ring, j1 = cj + ring;
    auto scan = [&](int i, int j) {
      if (i < 0 || i >= bx_ || j < 0 || j >= by_) return;
      for (std::int32_t si : buckets_[(std::size_t)j * bx_ + i])
        best = std::min(best,
                        point_segment_distance(z, segs_[si].a, segs_[si].b));
    };
    if (ring == 0) {
      scan(ci, cj);
      continue;
    }
    for (int i = i0; i <= i1; ++i) {
      scan(i, j0);
      scan(i, j1);
    }
    for (int j = j0 + 1; j < j1; ++j) {
      scan(i0, j);
      scan(i1, j);
    }
  }
  return best;
}

double DropletGeometry::distance(complexd z) const {
  if (is_disc_)
    return std::max(0.0, std::abs(z - disc_center_) - disc_radius_);
  if (contains(z)) return 0.0;
  return boundary_distance(z);
}

std::vector<complexd> DropletGeometry::boundary_samples(
    int per_component) const {
  std::vector<complexd> out;
  if (is_disc_) {
    out.reserve(per_component);
    for (int k = 0; k < per_component; ++k) {
      double th = 2.0 * kPi * k / per_component;
      out.push_back(disc_center_ +
                    disc_radius_ * complexd{std::cos(th), std::sin(th)});
    }
    return out;
  }
  for (const auto& poly : boundary_) {
    std::size_t m = poly.size();
    if ((int)m <= per_component) {
      out.insert(out.end(), poly.begin(), poly.end());
      continue;
    }
    for (int k = 0; k < per_component; ++k)
      out.push_back(poly[(std::size_t)((double)k * m / per_component)]);
  }
  return out;
}

double hausdorff_boundary_distance(const DropletGeometry& a,
                                   const DropletGeometry& b,
                                   int samples_per_component) {
  double h = 0;
  for (complexd z : a.boundary_samples(samples_per_component))
    h = std::max(h, b.boundary_distance(z));
  for (complexd z : b.boundary_samples(samples_per_component))
    h = std::max(h, a.boundary_distance(z));
  return h;
}

}  // namespace cgas
