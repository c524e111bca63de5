#pragma once

#include <cstddef>

#include "sarseg/grid.hpp"

namespace sarseg {

/// Region uniformity: 1 - (within-region scatter) / (total scatter about the
/// global mean). Regions are the 0 and 1 labels of `regions`; both must be
/// nonempty. A constant image scores 1.
double pp_uniformity(const ScalarField& f, const Mask& regions);

/// 2|A n B| / (|A| + |B|); 1 when both masks are empty.
double dice(const Mask& mask, const Mask& truth);

/// Foreground pixels with a 4-neighbour in the background.
Mask boundary_pixels(const Mask& mask);

/// Number of 8-connected components of boundary_pixels(mask).
std::size_t count_boundary_contours(const Mask& mask);

}  // namespace sarseg
