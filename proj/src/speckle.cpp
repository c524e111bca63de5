#include "sarseg/speckle.hpp"

#include <cmath>
#include <random>
#include <string>

namespace sarseg {

namespace {

// Uniform on the open interval (0, 1) from the top 53 bits.
inline double open_uniform(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

struct Disk {
  double ci, cj, r;
  bool contains(double y, double x) const {
    return (y - ci) * (y - ci) + (x - cj) * (x - cj) <= r * r;
  }
};

}  // namespace

Geometry parse_geometry(std::string_view name) {
  if (name == "disk") return Geometry::disk;
  if (name == "two_disks") return Geometry::two_disks;
  if (name == "annulus") return Geometry::annulus;
  if (name == "rectangle") return Geometry::rectangle;
  throw InvalidInput("unknown geometry '" + std::string(name) + "'");
}

std::string_view to_string(Geometry g) {
  switch (g) {
    case Geometry::disk: return "disk";
    case Geometry::two_disks: return "two_disks";
    case Geometry::annulus: return "annulus";
    case Geometry::rectangle: return "rectangle";
  }
  return "?";
}

ScalarField gamma_speckle(Shape shape, const SpeckleSpec& spec) {
  if (spec.looks < 1) throw InvalidInput("gamma_speckle: looks must be >= 1");
  ScalarField n(shape, 0.0);
  std::mt19937_64 rng(spec.seed);
  const double inv_l = 1.0 / static_cast<double>(spec.looks);
  // Gamma(L, 1/L) as the mean of L unit exponentials.
  for (double& v : n) {
    double s = 0.0;
    for (int k = 0; k < spec.looks; ++k) s -= std::log(open_uniform(rng));
    v = s * inv_l;
  }
  return n;
}

Mask rasterize(Shape shape, Geometry geometry) {
  if (shape.height < 1 || shape.width < 1) {
    throw InvalidInput("phantom: empty shape " + to_string(shape));
  }
  const double h = shape.height;
  const double w = shape.width;
  const double m = std::min(h, w);
  const double ci = h / 2.0;
  const double cj = w / 2.0;
  Mask mask(shape, 0);
  for (int i = 0; i < shape.height; ++i) {
    for (int j = 0; j < shape.width; ++j) {
      const double y = i + 0.5;
      const double x = j + 0.5;
      bool inside = false;
      switch (geometry) {
        case Geometry::disk:
          inside = Disk{ci, cj, 0.3 * m}.contains(y, x);
          break;
        case Geometry::two_disks:
          inside = Disk{ci, 0.28 * w, 0.16 * m}.contains(y, x) ||
                   Disk{ci, 0.72 * w, 0.16 * m}.contains(y, x);
          break;
        case Geometry::annulus:
          inside = Disk{ci, cj, 0.35 * m}.contains(y, x) && !Disk{ci, cj, 0.15 * m}.contains(y, x);
          break;
        case Geometry::rectangle:
          inside = y >= 0.25 * h && y < 0.75 * h && x >= 0.2 * w && x < 0.8 * w;
          break;
      }
      mask(i, j) = inside ? 1 : 0;
    }
  }
  const auto area = count_ones(mask);
  if (area == 0 || area == mask.size()) {
    throw InvalidInput("phantom: geometry " + std::string(to_string(geometry)) +
                       " is degenerate at " + to_string(shape));
  }
  return mask;
}

Phantom make_phantom(Shape shape, double c1, double c2, Geometry geometry,
                     const std::optional<SpeckleSpec>& speckle) {
  if (!(c1 > 0.0) || !(c2 > 0.0)) throw InvalidInput("phantom: intensities must be positive");
  if (c1 == c2) throw InvalidInput("phantom: c1 and c2 must differ");
  Phantom p;
  p.mask = rasterize(shape, geometry);
  p.clean = ScalarField(shape, c2);
  for (std::size_t k = 0; k < p.clean.size(); ++k) {
    if (p.mask[k]) p.clean[k] = c1;
  }
  p.noisy = p.clean;
  if (speckle) {
    const auto n = gamma_speckle(shape, *speckle);
    for (std::size_t k = 0; k < p.noisy.size(); ++k) p.noisy[k] *= n[k];
  }
  return p;
}

}  // namespace sarseg
