#include "sarseg/grid_ops.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace sarseg {

namespace {

void require_axis_extent(const ScalarField& u, Axis axis, const char* op) {
  const int n = axis == Axis::x ? u.width() : u.height();
  if (n < 2) {
    throw InvalidInput(std::string(op) + ": need at least 2 samples along axis, got " +
                       to_string(u.shape()));
  }
}

// Half-sample symmetric reflection: ... u1 u0 | u0 u1 ... u(n-1) | u(n-1) ...
inline int reflect(int k, int n) noexcept {
  if (k < 0) return -k - 1;
  if (k >= n) return 2 * n - k - 1;
  return k;
}

}  // namespace

KernelSpec gaussian_kernel(double sigma) {
  if (!(sigma > 0.0)) throw InvalidInput("gaussian_kernel: sigma must be positive");
  return {KernelKind::gaussian, sigma, static_cast<int>(std::ceil(2.0 * sigma))};
}

std::vector<double> kernel_weights(const KernelSpec& k) {
  if (!(k.sigma > 0.0)) throw InvalidInput("kernel: sigma must be positive");
  if (k.radius < 0) throw InvalidInput("kernel: radius must be nonnegative");
  std::vector<double> w(2 * static_cast<std::size_t>(k.radius) + 1);
  for (int d = -k.radius; d <= k.radius; ++d) {
    const double x = static_cast<double>(d);
    w[static_cast<std::size_t>(d + k.radius)] =
        k.kind == KernelKind::isef ? std::exp(-std::abs(x) / k.sigma)
                                   : std::exp(-x * x / (2.0 * k.sigma * k.sigma));
  }
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& v : w) v /= total;
  return w;
}

ScalarField grad_forward(const ScalarField& u, Axis axis) {
  require_axis_extent(u, axis, "grad_forward");
  const int h = u.height();
  const int w = u.width();
  ScalarField out(u.shape(), 0.0);
  if (axis == Axis::x) {
    for (int i = 0; i < h; ++i) {
      auto src = u.row(i);
      auto dst = out.row(i);
      for (int j = 0; j + 1 < w; ++j) dst[j] = src[j + 1] - src[j];
    }
  } else {
    for (int i = 0; i + 1 < h; ++i) {
      auto cur = u.row(i);
      auto nxt = u.row(i + 1);
      auto dst = out.row(i);
      for (int j = 0; j < w; ++j) dst[j] = nxt[j] - cur[j];
    }
  }
  return out;
}

ScalarField div_adjoint(const ScalarField& p, Axis axis) {
  require_axis_extent(p, axis, "div_adjoint");
  const int h = p.height();
  const int w = p.width();
  ScalarField out(p.shape(), 0.0);
  // (G^T p)_k = p_{k-1} [k >= 1] - p_k [k <= n-2]
  if (axis == Axis::x) {
    for (int i = 0; i < h; ++i) {
      auto src = p.row(i);
      auto dst = out.row(i);
      dst[0] = -src[0];
      for (int j = 1; j + 1 < w; ++j) dst[j] = src[j - 1] - src[j];
      dst[w - 1] = src[w - 2];
    }
  } else {
    {
      auto src = p.row(0);
      auto dst = out.row(0);
      for (int j = 0; j < w; ++j) dst[j] = -src[j];
    }
    for (int i = 1; i + 1 < h; ++i) {
      auto prev = p.row(i - 1);
      auto cur = p.row(i);
      auto dst = out.row(i);
      for (int j = 0; j < w; ++j) dst[j] = prev[j] - cur[j];
    }
    auto prev = p.row(h - 2);
    auto dst = out.row(h - 1);
    for (int j = 0; j < w; ++j) dst[j] = prev[j];
  }
  return out;
}

ScalarField laplacian(const ScalarField& u) {
  const int h = u.height();
  const int w = u.width();
  if (h < 3 || w < 3) {
    throw InvalidInput("laplacian: need at least 3x3, got " + to_string(u.shape()));
  }
  ScalarField out(u.shape(), 0.0);
  for (int i = 0; i < h; ++i) {
    const int up = reflect(i - 1, h);
    const int dn = reflect(i + 1, h);
    for (int j = 0; j < w; ++j) {
      const int lf = reflect(j - 1, w);
      const int rt = reflect(j + 1, w);
      out(i, j) = u(up, j) + u(dn, j) + u(i, lf) + u(i, rt) - 4.0 * u(i, j);
    }
  }
  return out;
}

ScalarField convolve(const ScalarField& u, const KernelSpec& k) {
  const int h = u.height();
  const int w = u.width();
  if (k.radius >= std::min(h, w)) {
    throw InvalidInput("convolve: kernel radius " + std::to_string(k.radius) +
                       " must be smaller than min dimension of " + to_string(u.shape()));
  }
  const auto weights = kernel_weights(k);
  const int r = k.radius;
  if (r == 0) return u;

  // Horizontal pass through a padded row buffer.
  ScalarField tmp(u.shape(), 0.0);
  std::vector<double> padded(static_cast<std::size_t>(w + 2 * r));
  for (int i = 0; i < h; ++i) {
    auto src = u.row(i);
    for (int j = -r; j < w + r; ++j) padded[static_cast<std::size_t>(j + r)] = src[reflect(j, w)];
    auto dst = tmp.row(i);
    for (int j = 0; j < w; ++j) {
      double acc = 0.0;
      const double* p = padded.data() + j;
      for (int d = 0; d <= 2 * r; ++d) acc += weights[static_cast<std::size_t>(d)] * p[d];
      dst[j] = acc;
    }
  }

  // Vertical pass accumulates whole rows for contiguous access.
  ScalarField out(u.shape(), 0.0);
  for (int i = 0; i < h; ++i) {
    auto dst = out.row(i);
    for (int d = -r; d <= r; ++d) {
      const double wt = weights[static_cast<std::size_t>(d + r)];
      auto src = tmp.row(reflect(i + d, h));
      for (int j = 0; j < w; ++j) dst[j] += wt * src[j];
    }
  }
  return out;
}

ScalarField isef_smooth(const ScalarField& u, double sigma) {
  if (!(sigma > 0.0)) throw InvalidInput("isef_smooth: sigma must be positive");
  return convolve(u, KernelSpec{KernelKind::isef, sigma, kIsefRadius});
}

}  // namespace sarseg
