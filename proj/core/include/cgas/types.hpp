#pragma once
// Shared scalar and geometry types. Planar points are std::complex<double>;
// all area integrals are taken against dA = dx dy / pi.

#include <complex>
#include <cstdint>

namespace cgas {

using complexd = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kEulerGamma = 0.57721566490153286061;

// Axis-aligned box [xlo,xhi] x [ylo,yhi].
struct Box {
  double xlo = 0, xhi = 0, ylo = 0, yhi = 0;
  double width() const { return xhi - xlo; }
  double height() const { return yhi - ylo; }
  bool contains(complexd z) const {
    return z.real() >= xlo && z.real() <= xhi && z.imag() >= ylo &&
           z.imag() <= yhi;
  }
  static Box centered(double half_width) {
    return {-half_width, half_width, -half_width, half_width};
  }
};

// Uniform cell-centered grid: cell (i,j) has center
// (xlo + (i+1/2)h, ylo + (j+1/2)h); flat index j*nx + i (i fastest).
struct GridSpec {
  Box box;
  int nx = 0, ny = 0;
  double hx = 0, hy = 0;

  static GridSpec make(Box b, int resolution) {
    GridSpec g;
    g.box = b;
    g.nx = g.ny = resolution;
    g.hx = b.width() / resolution;
    g.hy = b.height() / resolution;
    return g;
  }
  int cells() const { return nx * ny; }
  double h() const { return hx; }  // callers assume square cells
  double cell_area_da() const { return hx * hy / kPi; }
  complexd center(int i, int j) const {
    return {box.xlo + (i + 0.5) * hx, box.ylo + (j + 0.5) * hy};
  }
  int index(int i, int j) const { return j * nx + i; }
  // cell containing z, clamped to the grid
  std::pair<int, int> locate(complexd z) const {
    int i = (int)((z.real() - box.xlo) / hx);
    int j = (int)((z.imag() - box.ylo) / hy);
    if (i < 0) i = 0;
    if (i >= nx) i = nx - 1;
    if (j < 0) j = 0;
    if (j >= ny) j = ny - 1;
    return {i, j};
  }
};

// Integration region for Lagrange-polynomial functionals: disc or rectangle.
struct Region {
  enum class Kind { disc, rect } kind = Kind::disc;
  complexd center{0, 0};
  double radius = 0;  // disc
  Box rect{};         // rect

  static Region disc(complexd c, double r) { return {Kind::disc, c, r, {}}; }
  static Region rectangle(Box b) { return {Kind::rect, {0, 0}, 0, b}; }
  // area in dA units (Lebesgue / pi)
  double area_da() const {
    return kind == Kind::disc ? radius * radius
                              : rect.width() * rect.height() / kPi;
  }
  bool contains(complexd z) const {
    return kind == Kind::disc ? std::abs(z - center) <= radius
                              : rect.contains(z);
  }
};

}  // namespace cgas
