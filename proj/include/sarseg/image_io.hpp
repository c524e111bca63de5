#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "sarseg/grid.hpp"

namespace sarseg {

using Image8 = Grid<std::uint8_t>;

struct RgbImage {
  Shape shape;
  std::vector<std::uint8_t> rgb;  // interleaved, row-major
};

/// PGM reader for P2 and P5 with maxval <= 255. Samples are rescaled to
/// 0..255 when maxval is smaller.
Image8 read_pgm(const std::filesystem::path& path);
void write_pgm(const std::filesystem::path& path, const Image8& image, bool ascii = false);

/// 8-bit grayscale PNG; colour input is converted to gray by libpng.
Image8 read_png(const std::filesystem::path& path);
void write_png(const std::filesystem::path& path, const RgbImage& image);

/// Dispatch on the file signature (PGM or PNG).
Image8 read_image(const std::filesystem::path& path);

/// Round and clamp to 0..255.
Image8 quantize(const ScalarField& f);
/// Linear map of [min, max] onto 0..255; a constant field maps to 0.
Image8 rescale_to_8bit(const ScalarField& f);
/// f = max(pixel, 1) so the log data term is defined.
ScalarField to_positive_field(const Image8& image);

/// Nonzero pixels are foreground.
Mask mask_from_image(const Image8& image);
Image8 mask_to_image(const Mask& mask);

inline constexpr std::array<std::uint8_t, 3> kContourColor{255, 32, 32};

/// Gray image with the mask's boundary pixels painted in kContourColor.
RgbImage contour_overlay(const Image8& image, const Mask& mask);

}  // namespace sarseg
