#include <doctest.h>

#include <cmath>

#include "cgas/geometry.hpp"
#include "cgas/rng.hpp"
#include "cgas/types.hpp"

using namespace cgas;

TEST_CASE("disc fast path") {
  auto d = DropletGeometry::disc({0.5, 0}, 1.0);
  CHECK(d.is_disc());
  CHECK(d.contains({1.4, 0}));
  CHECK_FALSE(d.contains({1.6, 0}));
  CHECK(d.distance({0.5, 0}) == 0.0);
  CHECK(d.distance({2.5, 0}) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(d.boundary_distance({0.5, 0}) == doctest::Approx(1.0));
}

TEST_CASE("marching squares recovers a circle from a mask") {
  GridSpec g = GridSpec::make(Box::centered(2.0), 128);
  std::vector<std::uint8_t> mask(g.cells(), 0);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      mask[g.index(i, j)] = std::abs(g.center(i, j)) <= 1.0;
  auto geo = DropletGeometry::from_mask(g, mask);
  REQUIRE(geo.boundary().size() == 1);
  for (complexd b : geo.boundary_samples(256))
    CHECK(std::abs(std::abs(b) - 1.0) <= g.hx);

  // containment agrees with the defining disc away from the pixel boundary
  Rng rng(3);
  for (int i = 0; i < 500; ++i) {
    complexd z{rng.uniform(-2, 2), rng.uniform(-2, 2)};
    if (std::abs(std::abs(z) - 1.0) > 2 * g.hx)
      CHECK(geo.contains(z) == (std::abs(z) <= 1.0));
  }
}

TEST_CASE("bucket index against brute-force segment distance") {
  GridSpec g = GridSpec::make(Box::centered(2.0), 96);
  std::vector<std::uint8_t> mask(g.cells(), 0);
  // kidney shape: union of two discs
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      complexd z = g.center(i, j);
      mask[g.index(i, j)] =
          std::abs(z - complexd{0.5, 0}) <= 0.8 ||
          std::abs(z - complexd{-0.5, 0.3}) <= 0.7;
    }
  auto geo = DropletGeometry::from_mask(g, mask);
  REQUIRE_FALSE(geo.empty());

  auto seg_dist = [](complexd a, complexd b, complexd z) {
    complexd ab = b - a;
    double t = std::max(0.0, std::min(1.0, ((z - a).real() * ab.real() +
                                            (z - a).imag() * ab.imag()) /
                                               std::norm(ab)));
    return std::abs(z - (a + t * ab));
  };
  Rng rng(11);
  for (int i = 0; i < 300; ++i) {
    complexd z{rng.uniform(-2.5, 2.5), rng.uniform(-2.5, 2.5)};
    double brute = 1e300;
    for (const auto& comp : geo.boundary())
      for (std::size_t k = 0; k < comp.size(); ++k)
        brute = std::min(
            brute, seg_dist(comp[k], comp[(k + 1) % comp.size()], z));
    CHECK(geo.boundary_distance(z) == doctest::Approx(brute).epsilon(1e-10));
    if (!geo.contains(z))
      CHECK(geo.distance(z) == doctest::Approx(brute).epsilon(1e-10));
  }
}

TEST_CASE("ellipse polyline") {
  auto e = DropletGeometry::ellipse({0, 0}, 1.5, 0.5);
  CHECK(e.contains({1.49, 0}));
  CHECK_FALSE(e.contains({0, 0.52}));
  CHECK(e.distance({3.0, 0}) == doctest::Approx(1.5).epsilon(1e-3));
}
