#include "sarseg/metrics.hpp"

#include <utility>
#include <vector>

namespace sarseg {

double pp_uniformity(const ScalarField& f, const Mask& regions) {
  require_same_shape(f.shape(), regions.shape(), "pp_uniformity");
  double sum[2] = {0.0, 0.0};
  std::size_t count[2] = {0, 0};
  for (std::size_t k = 0; k < f.size(); ++k) {
    const int r = regions[k] ? 1 : 0;
    sum[r] += f[k];
    ++count[r];
  }
  if (count[0] == 0 || count[1] == 0) {
    throw InvalidInput("pp_uniformity: every region must be nonempty");
  }
  const double mean[2] = {sum[0] / static_cast<double>(count[0]),
                          sum[1] / static_cast<double>(count[1])};
  const double global = (sum[0] + sum[1]) / static_cast<double>(f.size());
  double within = 0.0;
  double total = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    const double dw = f[k] - mean[regions[k] ? 1 : 0];
    const double dt = f[k] - global;
    within += dw * dw;
    total += dt * dt;
  }
  if (total == 0.0) return 1.0;
  return 1.0 - within / total;
}

double dice(const Mask& mask, const Mask& truth) {
  require_same_shape(mask.shape(), truth.shape(), "dice");
  std::size_t a = 0, b = 0, both = 0;
  for (std::size_t k = 0; k < mask.size(); ++k) {
    const bool x = mask[k] != 0;
    const bool y = truth[k] != 0;
    a += x;
    b += y;
    both += x && y;
  }
  if (a + b == 0) return 1.0;
  return 2.0 * static_cast<double>(both) / static_cast<double>(a + b);
}

Mask boundary_pixels(const Mask& mask) {
  const int h = mask.height();
  const int w = mask.width();
  Mask out(mask.shape(), 0);
  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < w; ++j) {
      if (!mask(i, j)) continue;
      const bool edge = (i > 0 && !mask(i - 1, j)) || (i + 1 < h && !mask(i + 1, j)) ||
                        (j > 0 && !mask(i, j - 1)) || (j + 1 < w && !mask(i, j + 1));
      out(i, j) = edge ? 1 : 0;
    }
  }
  return out;
}

std::size_t count_boundary_contours(const Mask& mask) {
  auto b = boundary_pixels(mask);
  const int h = b.height();
  const int w = b.width();
  std::size_t components = 0;
  std::vector<std::pair<int, int>> stack;
  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < w; ++j) {
      if (b(i, j) != 1) continue;
      ++components;
      b(i, j) = 2;
      stack.emplace_back(i, j);
      while (!stack.empty()) {
        const auto [ci, cj] = stack.back();
        stack.pop_back();
        for (int di = -1; di <= 1; ++di) {
          for (int dj = -1; dj <= 1; ++dj) {
            const int ni = ci + di;
            const int nj = cj + dj;
            if (ni < 0 || nj < 0 || ni >= h || nj >= w || b(ni, nj) != 1) continue;
            b(ni, nj) = 2;
            stack.emplace_back(ni, nj);
          }
        }
      }
    }
  }
  return components;
}

}  // namespace sarseg
