#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sarseg/errors.hpp"

namespace sarseg {

struct Shape {
  int height = 0;
  int width = 0;

  std::size_t size() const noexcept {
    return static_cast<std::size_t>(height) * static_cast<std::size_t>(width);
  }
  bool operator==(const Shape&) const = default;
};

inline std::string to_string(Shape s) {
  return std::to_string(s.height) + "x" + std::to_string(s.width);
}

/// Dense row-major 2-D grid. Row index i runs along y, column index j along x.
template <typename T>
class Grid {
 public:
  using value_type = T;

  Grid() = default;
  explicit Grid(Shape shape, T fill = T{})
      : shape_(shape), data_(checked_size(shape), fill) {}
  Grid(int height, int width, T fill = T{}) : Grid(Shape{height, width}, fill) {}
  Grid(Shape shape, std::vector<T> values) : shape_(shape), data_(std::move(values)) {
    if (data_.size() != checked_size(shape)) {
      throw InvalidInput("grid: value count does not match shape " + to_string(shape));
    }
  }

  Shape shape() const noexcept { return shape_; }
  int height() const noexcept { return shape_.height; }
  int width() const noexcept { return shape_.width; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  T& operator()(int i, int j) noexcept { return data_[index(i, j)]; }
  const T& operator()(int i, int j) const noexcept { return data_[index(i, j)]; }
  T& operator[](std::size_t k) noexcept { return data_[k]; }
  const T& operator[](std::size_t k) const noexcept { return data_[k]; }

  std::span<T> values() noexcept { return data_; }
  std::span<const T> values() const noexcept { return data_; }
  std::span<T> row(int i) noexcept {
    return std::span<T>(data_).subspan(static_cast<std::size_t>(i) * shape_.width, shape_.width);
  }
  std::span<const T> row(int i) const noexcept {
    return std::span<const T>(data_).subspan(static_cast<std::size_t>(i) * shape_.width,
                                             shape_.width);
  }

  auto begin() noexcept { return data_.begin(); }
  auto end() noexcept { return data_.end(); }
  auto begin() const noexcept { return data_.begin(); }
  auto end() const noexcept { return data_.end(); }

  void fill(T v) { std::fill(data_.begin(), data_.end(), v); }

  bool operator==(const Grid&) const = default;

 private:
  static std::size_t checked_size(Shape s) {
    if (s.height < 0 || s.width < 0) {
      throw InvalidInput("grid: negative dimension " + to_string(s));
    }
    return s.size();
  }
  std::size_t index(int i, int j) const noexcept {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(shape_.width) +
           static_cast<std::size_t>(j);
  }

  Shape shape_{};
  std::vector<T> data_;
};

using ScalarField = Grid<double>;
// Binary field; 1 marks the foreground region (Omega_1).
using Mask = Grid<std::uint8_t>;

inline void require_same_shape(Shape a, Shape b, const char* what) {
  if (a != b) {
    throw InvalidInput(std::string(what) + ": shape mismatch " + to_string(a) + " vs " +
                       to_string(b));
  }
}

inline bool all_finite(const ScalarField& u) {
  return std::all_of(u.begin(), u.end(), [](double v) { return std::isfinite(v); });
}

inline double max_abs_diff(const ScalarField& a, const ScalarField& b) {
  require_same_shape(a.shape(), b.shape(), "max_abs_diff");
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

inline double inner(const ScalarField& a, const ScalarField& b) {
  require_same_shape(a.shape(), b.shape(), "inner");
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

inline std::size_t count_ones(const Mask& m) {
  return static_cast<std::size_t>(std::count_if(m.begin(), m.end(), [](auto v) { return v != 0; }));
}

}  // namespace sarseg
