#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "sarseg/grid.hpp"

namespace sarseg {

/// Fully developed speckle: Gamma(L, 1/L), mean 1, variance 1/L.
struct SpeckleSpec {
  int looks = 4;
  std::uint64_t seed = 0;
};

enum class Geometry { disk, two_disks, annulus, rectangle };

Geometry parse_geometry(std::string_view name);
std::string_view to_string(Geometry g);

struct Phantom {
  ScalarField clean;
  Mask mask;
  ScalarField noisy;
};

/// i.i.d. Gamma(L, 1/L) samples; bit-identical for a given (shape, spec).
ScalarField gamma_speckle(Shape shape, const SpeckleSpec& spec);

/// Indicator of the geometry, sized relative to min(height, width).
Mask rasterize(Shape shape, Geometry geometry);

/// Two-phase phantom: c1 inside the geometry, c2 outside. Without speckle
/// spec the noisy field equals the clean one.
Phantom make_phantom(Shape shape, double c1, double c2, Geometry geometry,
                     const std::optional<SpeckleSpec>& speckle);

}  // namespace sarseg
