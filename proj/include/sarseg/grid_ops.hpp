#pragma once

#include <vector>

#include "sarseg/grid.hpp"

namespace sarseg {

// x differences run along columns (j), y differences along rows (i).
enum class Axis { x, y };

enum class KernelKind { gaussian, isef };

struct KernelSpec {
  KernelKind kind = KernelKind::gaussian;
  double sigma = 1.0;
  int radius = 2;
};

// Half-width of the ISEF window (15x15).
inline constexpr int kIsefRadius = 7;

/// Normalized Gaussian kernel with truncation radius ceil(2 sigma).
KernelSpec gaussian_kernel(double sigma);

/// Normalized 1-D weights of length 2*radius+1, centre at index radius.
std::vector<double> kernel_weights(const KernelSpec& k);

/// Forward difference along `axis`; the last sample along the axis is 0
/// (homogeneous Neumann).
ScalarField grad_forward(const ScalarField& u, Axis axis);

/// Exact adjoint of grad_forward: <grad_forward(u,a), p> == <u, div_adjoint(p,a)>.
/// Equals minus the backward-difference divergence.
ScalarField div_adjoint(const ScalarField& p, Axis axis);

/// 5-point Laplacian with reflected boundary; identical to
/// -(div_adjoint(grad_forward(u,x),x) + div_adjoint(grad_forward(u,y),y)).
ScalarField laplacian(const ScalarField& u);

/// Separable convolution with the normalized kernel, half-sample
/// symmetric reflection at the border.
ScalarField convolve(const ScalarField& u, const KernelSpec& k);

ScalarField isef_smooth(const ScalarField& u, double sigma);

}  // namespace sarseg
