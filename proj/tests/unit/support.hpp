#pragma once

#include <random>

#include "sarseg/grid.hpp"

namespace sarseg::testing {

inline ScalarField random_field(Shape shape, std::mt19937_64& rng, double lo = -1.0,
                                double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  ScalarField u(shape);
  for (auto& v : u) v = dist(rng);
  return u;
}

// Half-sample symmetric reflection of an out-of-range index.
inline int reflect(int k, int n) {
  while (k < 0 || k >= n) k = k < 0 ? -k - 1 : 2 * n - k - 1;
  return k;
}

inline double plain_sum_product(const ScalarField& a, const ScalarField& b) {
  long double s = 0.0L;
  for (int i = 0; i < a.height(); ++i) {
    for (int j = 0; j < a.width(); ++j) s += static_cast<long double>(a(i, j)) * b(i, j);
  }
  return static_cast<double>(s);
}

}  // namespace sarseg::testing
