#include "sarseg/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace sarseg {

DataTerm parse_data_term(std::string_view name) {
  if (name == "log") return DataTerm::log;
  if (name == "linear") return DataTerm::linear;
  throw InvalidInput("unknown data term '" + std::string(name) + "'");
}

std::string_view to_string(DataTerm t) { return t == DataTerm::log ? "log" : "linear"; }

void ModelParams::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ConfigError(std::string("model parameter ") + name + " must be positive");
    }
  };
  positive(mu, "mu");
  positive(beta, "beta");
  positive(eps, "eps");
  positive(sigma, "sigma");
  positive(kernel_sigma, "kernel_sigma");
}

ScalarField heaviside_eps(const ScalarField& phi, double eps) {
  if (!(eps > 0.0)) throw InvalidInput("heaviside_eps: eps must be positive");
  ScalarField out(phi.shape());
  for (std::size_t k = 0; k < phi.size(); ++k) {
    out[k] = 0.5 * (1.0 + (2.0 / std::numbers::pi) * std::atan(phi[k] / eps));
  }
  return out;
}

ScalarField delta_eps(const ScalarField& phi, double eps) {
  if (!(eps > 0.0)) throw InvalidInput("delta_eps: eps must be positive");
  ScalarField out(phi.shape());
  for (std::size_t k = 0; k < phi.size(); ++k) {
    out[k] = eps / (std::numbers::pi * (eps * eps + phi[k] * phi[k]));
  }
  return out;
}

ScalarField edge_detector(const ScalarField& f, double beta, double sigma) {
  if (!(beta > 0.0)) throw InvalidInput("edge_detector: beta must be positive");
  const auto smooth = isef_smooth(f, sigma);
  const auto gx = grad_forward(smooth, Axis::x);
  const auto gy = grad_forward(smooth, Axis::y);
  ScalarField g(f.shape());
  for (std::size_t k = 0; k < g.size(); ++k) {
    g[k] = 1.0 / (1.0 + beta * (gx[k] * gx[k] + gy[k] * gy[k]));
  }
  return g;
}

LocalStatistics::LocalStatistics(ScalarField f, double kernel_sigma)
    : f_(std::move(f)), kernel_(gaussian_kernel(kernel_sigma)) {
  if (f_.empty()) throw InvalidInput("local statistics: empty image");
  smoothed_f_ = convolve(f_, kernel_);
  const auto [lo, hi] = std::minmax_element(f_.begin(), f_.end());
  f_min_ = *lo;
  f_max_ = *hi;
}

LocalMeans LocalStatistics::means(const ScalarField& h) const {
  require_same_shape(f_.shape(), h.shape(), "local_means");
  ScalarField hf(f_.shape());
  double mass1 = 0.0, sum1 = 0.0, mass2 = 0.0, sum2 = 0.0;
  for (std::size_t k = 0; k < hf.size(); ++k) {
    hf[k] = h[k] * f_[k];
    mass1 += h[k];
    sum1 += hf[k];
    mass2 += 1.0 - h[k];
    sum2 += (1.0 - h[k]) * f_[k];
  }
  // K*(1-h) = 1 - K*h and K*((1-h)f) = K*f - K*(hf): the kernel is
  // normalized and the reflected border preserves constants.
  const auto kh = convolve(h, kernel_);
  const auto khf = convolve(hf, kernel_);

  LocalMeans m{ScalarField(f_.shape()), ScalarField(f_.shape())};
  std::vector<std::uint8_t> flag1(hf.size(), 0), flag2(hf.size(), 0);
  for (std::size_t k = 0; k < hf.size(); ++k) {
    const double den1 = kh[k];
    const double den2 = 1.0 - kh[k];
    if (den1 < kMeansClamp) {
      flag1[k] = 1;
      ++m.clamped1;
    } else {
      m.c1[k] = std::clamp(khf[k] / den1, f_min_, f_max_);
    }
    if (den2 < kMeansClamp) {
      flag2[k] = 1;
      ++m.clamped2;
    } else {
      m.c2[k] = std::clamp((smoothed_f_[k] - khf[k]) / den2, f_min_, f_max_);
    }
  }
  if (m.degenerate()) {
    const bool empty1 = mass1 < kMeansClamp;
    const bool empty2 = mass2 < kMeansClamp;
    const double global1 = empty1 ? 0.0 : sum1 / mass1;
    const double global2 = empty2 ? 0.0 : sum2 / mass2;
    for (std::size_t k = 0; k < hf.size(); ++k) {
      if (flag1[k]) m.c1[k] = empty1 ? (flag2[k] ? smoothed_f_[k] : m.c2[k]) : global1;
      if (flag2[k]) m.c2[k] = empty2 ? (flag1[k] ? smoothed_f_[k] : m.c1[k]) : global2;
    }
  }
  return m;
}

ScalarField LocalStatistics::data_force(const LocalMeans& m, DataTerm term) const {
  require_same_shape(f_.shape(), m.c1.shape(), "data_force");
  require_same_shape(f_.shape(), m.c2.shape(), "data_force");
  ScalarField diff(f_.shape());
  for (std::size_t k = 0; k < diff.size(); ++k) diff[k] = m.c1[k] - m.c2[k];
  const auto kdiff = convolve(diff, kernel_);
  ScalarField eta(f_.shape());
  if (term == DataTerm::linear) {
    for (std::size_t k = 0; k < eta.size(); ++k) eta[k] = kdiff[k] - f_[k] * kdiff[k];
    return eta;
  }
  ScalarField logdiff(f_.shape());
  for (std::size_t k = 0; k < logdiff.size(); ++k) {
    if (!(m.c1[k] > 0.0) || !(m.c2[k] > 0.0)) {
      throw InvalidInput("data_force: log data term needs positive means");
    }
    logdiff[k] = std::log(m.c1[k]) - std::log(m.c2[k]);
  }
  const auto klog = convolve(logdiff, kernel_);
  for (std::size_t k = 0; k < eta.size(); ++k) eta[k] = kdiff[k] - f_[k] * klog[k];
  return eta;
}

LocalMeans local_means(const ScalarField& f, const ScalarField& h_eps, double kernel_sigma) {
  return LocalStatistics(f, kernel_sigma).means(h_eps);
}

ScalarField data_force(const ScalarField& f, const LocalMeans& means, double kernel_sigma,
                       DataTerm data_term) {
  return LocalStatistics(f, kernel_sigma).data_force(means, data_term);
}

ScalarField weighted_curvature(const ScalarField& phi, const ScalarField& g) {
  require_same_shape(phi.shape(), g.shape(), "weighted_curvature");
  auto px = grad_forward(phi, Axis::x);
  auto py = grad_forward(phi, Axis::y);
  constexpr double eps2 = kCurvatureEps * kCurvatureEps;
  for (std::size_t k = 0; k < px.size(); ++k) {
    const double scale = g[k] / std::sqrt(px[k] * px[k] + py[k] * py[k] + eps2);
    px[k] *= scale;
    py[k] *= scale;
  }
  // div = -(Gx^T px + Gy^T py)
  const auto dx = div_adjoint(px, Axis::x);
  const auto dy = div_adjoint(py, Axis::y);
  ScalarField out(phi.shape());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = -(dx[k] + dy[k]);
  return out;
}

}  // namespace sarseg
