#include "sarseg/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>

#include "sarseg/metrics.hpp"

namespace sarseg {

namespace fs = std::filesystem;

namespace {

std::vector<unsigned char> slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading", path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Cursor over a PGM byte buffer; header tokens may be separated by
// whitespace and '#' comments.
class PgmCursor {
 public:
  PgmCursor(const std::vector<unsigned char>& bytes, const fs::path& path)
      : b_(bytes), path_(path) {}

  void skip_space_and_comments() {
    while (pos_ < b_.size()) {
      if (b_[pos_] == '#') {
        while (pos_ < b_.size() && b_[pos_] != '\n') ++pos_;
      } else if (std::isspace(b_[pos_])) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  long number() {
    skip_space_and_comments();
    if (pos_ >= b_.size() || !std::isdigit(b_[pos_])) fail("expected a number");
    long v = 0;
    while (pos_ < b_.size() && std::isdigit(b_[pos_])) {
      v = v * 10 + (b_[pos_++] - '0');
      if (v > 1'000'000'000) fail("number out of range");
    }
    return v;
  }

  std::size_t pos() const noexcept { return pos_; }
  void advance(std::size_t n) { pos_ += n; }
  [[noreturn]] void fail(const std::string& what) const {
    throw IoError("malformed PGM (" + what + ")", path_.string());
  }

 private:
  const std::vector<unsigned char>& b_;
  const fs::path& path_;
  std::size_t pos_ = 0;
};

std::uint8_t rescale(long v, long maxval) {
  if (maxval == 255) return static_cast<std::uint8_t>(v);
  return static_cast<std::uint8_t>((v * 255 + maxval / 2) / maxval);
}

bool has_png_signature(const std::vector<unsigned char>& bytes) {
  return bytes.size() >= 8 && png_sig_cmp(bytes.data(), 0, 8) == 0;
}

Image8 decode_png(const std::vector<unsigned char>& bytes, const fs::path& path) {
  png_image img{};
  img.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&img, bytes.data(), bytes.size())) {
    throw IoError(std::string("cannot decode PNG (") + img.message + ")", path.string());
  }
  img.format = PNG_FORMAT_GRAY;
  Image8 out(static_cast<int>(img.height), static_cast<int>(img.width));
  if (!png_image_finish_read(&img, nullptr, out.values().data(), 0, nullptr)) {
    std::string msg = img.message;
    png_image_free(&img);
    throw IoError("cannot decode PNG (" + msg + ")", path.string());
  }
  return out;
}

Image8 decode_pgm(const std::vector<unsigned char>& bytes, const fs::path& path) {
  PgmCursor cur(bytes, path);
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5')) {
    cur.fail("missing P2/P5 magic");
  }
  const bool ascii = bytes[1] == '2';
  cur.advance(2);
  const long width = cur.number();
  const long height = cur.number();
  const long maxval = cur.number();
  if (width <= 0 || height <= 0) cur.fail("nonpositive dimensions");
  if (maxval <= 0 || maxval > 255) cur.fail("maxval must be in 1..255");
  Image8 out(static_cast<int>(height), static_cast<int>(width));
  if (ascii) {
    for (auto& px : out) {
      const long v = cur.number();
      if (v > maxval) cur.fail("sample exceeds maxval");
      px = rescale(v, maxval);
    }
    return out;
  }
  // Exactly one whitespace byte separates maxval from the raster.
  if (cur.pos() >= bytes.size() || !std::isspace(bytes[cur.pos()])) cur.fail("bad raster start");
  cur.advance(1);
  if (bytes.size() - cur.pos() < out.size()) cur.fail("truncated raster");
  const auto* raster = bytes.data() + cur.pos();
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (raster[k] > maxval) cur.fail("sample exceeds maxval");
    out[k] = rescale(raster[k], maxval);
  }
  return out;
}

}  // namespace

Image8 read_pgm(const fs::path& path) { return decode_pgm(slurp(path), path); }

void write_pgm(const fs::path& path, const Image8& image, bool ascii) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing", path.string());
  out << (ascii ? "P2\n" : "P5\n") << image.width() << ' ' << image.height() << "\n255\n";
  if (ascii) {
    for (int i = 0; i < image.height(); ++i) {
      const auto row = image.row(i);
      for (int j = 0; j < image.width(); ++j) {
        out << static_cast<int>(row[j]) << (j + 1 == image.width() ? '\n' : ' ');
      }
    }
  } else {
    out.write(reinterpret_cast<const char*>(image.values().data()),
              static_cast<std::streamsize>(image.size()));
  }
  if (!out) throw IoError("write failed", path.string());
}

Image8 read_png(const fs::path& path) {
  const auto bytes = slurp(path);
  if (!has_png_signature(bytes)) throw IoError("not a PNG file", path.string());
  return decode_png(bytes, path);
}

void write_png(const fs::path& path, const RgbImage& image) {
  if (image.rgb.size() != image.shape.size() * 3) {
    throw InvalidInput("write_png: buffer does not match shape " + to_string(image.shape));
  }
  png_image img{};
  img.version = PNG_IMAGE_VERSION;
  img.width = static_cast<png_uint_32>(image.shape.width);
  img.height = static_cast<png_uint_32>(image.shape.height);
  img.format = PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&img, path.c_str(), 0, image.rgb.data(), 0, nullptr)) {
    throw IoError(std::string("cannot write PNG (") + img.message + ")", path.string());
  }
}

Image8 read_image(const fs::path& path) {
  const auto bytes = slurp(path);
  if (has_png_signature(bytes)) return decode_png(bytes, path);
  return decode_pgm(bytes, path);
}

Image8 quantize(const ScalarField& f) {
  Image8 out(f.shape());
  for (std::size_t k = 0; k < f.size(); ++k) {
    out[k] = static_cast<std::uint8_t>(std::clamp(std::round(f[k]), 0.0, 255.0));
  }
  return out;
}

Image8 rescale_to_8bit(const ScalarField& f) {
  Image8 out(f.shape(), 0);
  if (f.empty()) return out;
  const auto [lo, hi] = std::minmax_element(f.begin(), f.end());
  const double range = *hi - *lo;
  if (!(range > 0.0)) return out;
  for (std::size_t k = 0; k < f.size(); ++k) {
    out[k] = static_cast<std::uint8_t>(std::lround(255.0 * (f[k] - *lo) / range));
  }
  return out;
}

ScalarField to_positive_field(const Image8& image) {
  ScalarField f(image.shape());
  for (std::size_t k = 0; k < image.size(); ++k) f[k] = std::max<double>(image[k], 1.0);
  return f;
}

Mask mask_from_image(const Image8& image) {
  Mask m(image.shape());
  for (std::size_t k = 0; k < image.size(); ++k) m[k] = image[k] ? 1 : 0;
  return m;
}

Image8 mask_to_image(const Mask& mask) {
  Image8 out(mask.shape());
  for (std::size_t k = 0; k < mask.size(); ++k) out[k] = mask[k] ? 255 : 0;
  return out;
}

RgbImage contour_overlay(const Image8& image, const Mask& mask) {
  require_same_shape(image.shape(), mask.shape(), "contour_overlay");
  const auto edge = boundary_pixels(mask);
  RgbImage out{image.shape(), std::vector<std::uint8_t>(image.size() * 3)};
  for (std::size_t k = 0; k < image.size(); ++k) {
    for (int c = 0; c < 3; ++c) out.rgb[3 * k + c] = edge[k] ? kContourColor[c] : image[k];
  }
  return out;
}

}  // namespace sarseg
