#pragma once

#include <cstddef>
#include <string_view>

#include "sarseg/grid.hpp"
#include "sarseg/grid_ops.hpp"

namespace sarseg {

// log: I-divergence fitting C - f log C (default).
// linear: the fitting term without the logarithm, C - f C.
enum class DataTerm { log, linear };

DataTerm parse_data_term(std::string_view name);
std::string_view to_string(DataTerm t);

struct ModelParams {
  double mu = 0.15;           // data-term weight
  double beta = 20.0;         // edge detector sharpness
  double eps = 1.0;           // Heaviside width
  double sigma = 15.0;        // ISEF scale of the edge detector
  double kernel_sigma = 3.0;  // local-statistics Gaussian scale
  DataTerm data_term = DataTerm::log;

  void validate() const;
};

/// 1/2 [1 + 2/pi atan(phi/eps)]
ScalarField heaviside_eps(const ScalarField& phi, double eps);
/// (1/pi) eps / (eps^2 + phi^2)
ScalarField delta_eps(const ScalarField& phi, double eps);

/// g = 1 / (1 + beta |grad(isef_smooth(f, sigma))|^2), in (0, 1].
ScalarField edge_detector(const ScalarField& f, double beta, double sigma);

inline constexpr double kMeansClamp = 1e-8;
inline constexpr double kCurvatureEps = 1e-8;

struct LocalMeans {
  ScalarField c1;
  ScalarField c2;
  // Pixels whose kernel-weighted region mass fell below kMeansClamp.
  std::size_t clamped1 = 0;
  std::size_t clamped2 = 0;

  bool degenerate() const noexcept { return clamped1 + clamped2 > 0; }
};

/// Kernel-weighted region statistics of a fixed image. Caches the
/// smoothed image so repeated refreshes inside a solver cost two
/// convolutions for the means and two for the force.
class LocalStatistics {
 public:
  LocalStatistics(ScalarField f, double kernel_sigma);

  const ScalarField& image() const noexcept { return f_; }
  const KernelSpec& kernel() const noexcept { return kernel_; }

  /// C1 = K*(h f) / K*h and C2 = K*((1-h) f) / K*(1-h). Where a
  /// denominator is below kMeansClamp the pixel takes the region's global
  /// weighted mean, or the other region's local mean if the region is
  /// empty everywhere.
  LocalMeans means(const ScalarField& h) const;

  /// eta = K*(C1 - C2) - f K*(log C1 - log C2)   (log)
  /// eta = K*(C1 - C2) - f K*(C1 - C2)           (linear)
  ScalarField data_force(const LocalMeans& m, DataTerm term) const;

 private:
  ScalarField f_;
  KernelSpec kernel_;
  ScalarField smoothed_f_;
  double f_min_ = 0.0;
  double f_max_ = 0.0;
};

LocalMeans local_means(const ScalarField& f, const ScalarField& h_eps, double kernel_sigma);

ScalarField data_force(const ScalarField& f, const LocalMeans& means, double kernel_sigma,
                       DataTerm data_term);

/// div(g grad(phi) / sqrt(|grad(phi)|^2 + kCurvatureEps^2)).
ScalarField weighted_curvature(const ScalarField& phi, const ScalarField& g);

}  // namespace sarseg
