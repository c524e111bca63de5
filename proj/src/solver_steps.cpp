#include <algorithm>
#include <cmath>
#include <numbers>

#include "sarseg/grid_ops.hpp"
#include "sarseg/solvers.hpp"

namespace sarseg::steps {

namespace {

ScalarField adjoint_sum(const ScalarField& px, const ScalarField& py) {
  auto out = div_adjoint(px, Axis::x);
  const auto ty = div_adjoint(py, Axis::y);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] += ty[k];
  return out;
}

inline double clip(double v, double tau) { return std::clamp(v, -tau, tau); }

}  // namespace

void sbrd_sweep(ScalarField& phi, const ScalarField& eta, const BregmanState& s, double mu,
                double lambda, double alpha) {
  const Shape shape = phi.shape();
  require_same_shape(shape, eta.shape(), "sbrd_sweep");
  ScalarField rx(shape), ry(shape);
  for (std::size_t k = 0; k < rx.size(); ++k) {
    rx[k] = s.dx[k] - s.bx[k];
    ry[k] = s.dy[k] - s.by[k];
  }
  const auto a = adjoint_sum(rx, ry);

  const int h = shape.height;
  const int w = shape.width;
  const double inv = 1.0 / (alpha + 4.0 * lambda);
  // Neighbours outside the grid reflect onto the pixel itself (Neumann).
  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < w; ++j) {
      const double self = phi(i, j);
      const double nb = (i > 0 ? phi(i - 1, j) : self) + (i + 1 < h ? phi(i + 1, j) : self) +
                        (j > 0 ? phi(i, j - 1) : self) + (j + 1 < w ? phi(i, j + 1) : self);
      const double beta = (lambda * (nb + a(i, j)) + 0.5 * alpha - mu * eta(i, j)) * inv;
      phi(i, j) = std::clamp(beta, 0.0, 1.0);
    }
  }
}

void sbrd_bregman_update(const ScalarField& phi, const ScalarField& g, double lambda,
                         BregmanState& s) {
  const auto gx = grad_forward(phi, Axis::x);
  const auto gy = grad_forward(phi, Axis::y);
  for (std::size_t k = 0; k < gx.size(); ++k) {
    const double tau = g[k] / lambda;
    const double vx = gx[k] + s.bx[k];
    const double vy = gy[k] + s.by[k];
    s.dx[k] = vx - clip(vx, tau);
    s.dy[k] = vy - clip(vy, tau);
    s.bx[k] += gx[k] - s.dx[k];
    s.by[k] += gy[k] - s.dy[k];
  }
}

void relaxed_dual_update(const ScalarField& phi, const ScalarField& g, double lambda, double t,
                         BregmanState& s) {
  const auto gx = grad_forward(phi, Axis::x);
  const auto gy = grad_forward(phi, Axis::y);
  // (I - shrink_tau)(v) is the clip of v to [-tau, tau].
  for (std::size_t k = 0; k < gx.size(); ++k) {
    const double tau = g[k] / lambda;
    s.bx[k] = t * s.bx[k] + (1.0 - t) * clip(gx[k] + s.bx[k], tau);
    s.by[k] = t * s.by[k] + (1.0 - t) * clip(gy[k] + s.by[k], tau);
  }
}

void fprd1_primal_update(ScalarField& phi, const ScalarField& eta, const BregmanState& s,
                         double mu, double lambda, double alpha) {
  const auto div = adjoint_sum(s.bx, s.by);
  const double a = mu / alpha;
  const double r = lambda / alpha;
  for (std::size_t k = 0; k < phi.size(); ++k) {
    phi[k] = std::clamp(phi[k] - a * eta[k] - r * div[k], 0.0, 1.0);
  }
}

void fprd2_primal_update(ScalarField& phi, ScalarField& psi, BregmanState& s,
                         const ScalarField& eta, double mu, double lambda, double alpha) {
  const auto div = adjoint_sum(s.bx, s.by);
  const double a = mu / alpha;
  const double r = lambda / alpha;
  for (std::size_t k = 0; k < phi.size(); ++k) {
    phi[k] = psi[k] + s.c[k] - r * div[k];
    psi[k] = std::clamp(phi[k] - s.c[k] - a * eta[k], 0.0, 1.0);
    s.c[k] += psi[k] - phi[k];
  }
}

void rdls_reaction(ScalarField& phi, const ScalarField& eta, const ScalarField& g, double mu,
                   double eps, double gamma, double dt1, double xi) {
  const auto curv = weighted_curvature(phi, g);
  const double step = dt1 / xi;
  for (std::size_t k = 0; k < phi.size(); ++k) {
    const double d = phi[k] - gamma;
    const double delta = std::numbers::inv_pi * eps / (eps * eps + d * d);
    phi[k] += step * delta * (curv[k] - mu * eta[k]);
  }
}

void rdls_diffusion(ScalarField& phi, double dt2, double xi) {
  const auto lap = laplacian(phi);
  const double step = dt2 * xi;
  for (std::size_t k = 0; k < phi.size(); ++k) phi[k] += step * lap[k];
}

}  // namespace sarseg::steps
