#pragma once
// Droplet geometry: boundary polylines extracted by marching squares on a
// cell mask, point-in-droplet tests, and nearest-boundary queries through a
// uniform bucket index. Radial droplets take an exact disc fast path — the
// MCMC D_n loop issues millions of distance queries.

#include "cgas/types.hpp"

#include <cstdint>
#include <vector>

namespace cgas {

class DropletGeometry {
 public:
  DropletGeometry() = default;

  static DropletGeometry disc(complexd center, double radius);
  static DropletGeometry ellipse(complexd center, double semi_x, double semi_y,
                                 int npts = 2048);
  // marching squares at level 0.5 on a 0/1 mask sampled at cell centers;
  // components enclosing fewer than min_cells mask cells are dropped as noise
  static DropletGeometry from_mask(const GridSpec& g,
                                   const std::vector<std::uint8_t>& mask,
                                   int min_cells = 4);

  bool empty() const { return boundary_.empty() && !is_disc_; }
  bool contains(complexd z) const;
  // 0 exactly on/inside the droplet, else Euclidean distance to the boundary
  double distance(complexd z) const;
  // unsigned distance to the boundary curve (nonzero also inside)
  double boundary_distance(complexd z) const;

  // closed polylines (implicit edge from back() to front())
  const std::vector<std::vector<complexd>>& boundary() const {
    return boundary_;
  }
  bool is_disc() const { return is_disc_; }
  double disc_radius() const { return disc_radius_; }
  complexd disc_center() const { return disc_center_; }

  // evenly spread boundary points, per component
  std::vector<complexd> boundary_samples(int per_component) const;

 private:
  void finalize();  // segment list + bucket index

  std::vector<std::vector<complexd>> boundary_;
  bool is_disc_ = false;
  complexd disc_center_{0, 0};
  double disc_radius_ = 0;

  struct Segment {
    complexd a, b;
  };
  std::vector<Segment> segs_;
  Box bbox_{};
  int bx_ = 0, by_ = 0;
  double bhx_ = 0, bhy_ = 0;
  std::vector<std::vector<std::int32_t>> buckets_;
};

// symmetric sup-distance between the two boundary curves
double hausdorff_boundary_distance(const DropletGeometry& a,
                                   const DropletGeometry& b,
                                   int samples_per_component = 1024);

// even-odd test against one closed polyline
bool point_in_polyline(const std::vector<complexd>& poly, complexd z);

}  // namespace cgas
