#pragma once
// Internal helpers shared by the radial and grid equilibrium paths.

#include "cgas/equilibrium.hpp"

#include <vector>

namespace cgas::detail {

// flood fill from the frame: cells unreachable through the complement are
// holes and get added to the mask
std::vector<std::uint8_t> fill_holes(const GridSpec& g,
                                     std::vector<std::uint8_t> mask);

bool mask_touches_frame(const GridSpec& g,
                        const std::vector<std::uint8_t>& mask);

std::vector<double> cell_deltas(const GridSpec& g, const DropletGeometry& geo);

double median(std::vector<double> v);

}  // namespace cgas::detail
