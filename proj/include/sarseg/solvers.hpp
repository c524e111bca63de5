#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "sarseg/grid.hpp"
#include "sarseg/model.hpp"

namespace sarseg {

enum class Algorithm { rdls, sbrd, fprd1, fprd2 };

Algorithm parse_algorithm(std::string_view name);
std::string_view to_string(Algorithm a);

// Largest lambda/alpha accepted by the fixed-point solvers.
inline constexpr double kFixedPointStabilityBound = 0.25;

struct SolverConfig {
  Algorithm algorithm = Algorithm::fprd1;
  ModelParams model;
  double lambda = 1.0;
  double alpha = 12.0;
  double t = 1e-4;      // relaxation of the b update (fprd1/fprd2)
  double gamma = 0.5;   // threshold defining Omega_1 = {phi > gamma}
  double xi = 1.0;      // reaction/diffusion balance (rdls)
  double dt1 = 0.1;     // reaction step (rdls)
  double dt2 = 0.15;    // diffusion step (rdls)
  int max_iter = 500;
  double tol = 1e-3;    // stop when max |phi^{k+1} - phi^k| < tol
  int means_update_every = 1;
  int mask_patience = 3;  // stop after this many unchanged masks; 0 disables

  /// Published parameter set for each algorithm.
  static SolverConfig defaults(Algorithm a);

  /// Throws ConfigError on any violated constraint.
  void validate() const;

  /// Canonical "key = value" rendering, stable across runs.
  std::string canonical() const;
};

struct BregmanState {
  ScalarField dx, dy;  // split variables (sbrd)
  ScalarField bx, by;  // Bregman / dual variables
  ScalarField c;       // multiplier of the phi = psi split (fprd2)

  explicit BregmanState(Shape shape)
      : dx(shape, 0.0), dy(shape, 0.0), bx(shape, 0.0), by(shape, 0.0), c(shape, 0.0) {}
};

struct SegmentationResult {
  ScalarField phi;  // final level-set field (psi for fprd2)
  Mask mask;        // phi > gamma
  int iterations = 0;
  double wall_seconds = 0.0;
  double pp = 0.0;
  std::optional<double> dice;
};

// Called after every iteration with (iteration, current thresholded field).
using IterationObserver = std::function<void(int, const ScalarField&)>;

Mask threshold_mask(const ScalarField& phi, double gamma);

/// Soft threshold sgn(v) max(|v| - tau, 0) with a per-pixel threshold.
ScalarField shrink(const ScalarField& v, const ScalarField& threshold);

SegmentationResult run_rdls(const ScalarField& f, const SolverConfig& cfg,
                            const IterationObserver& observer = {});
SegmentationResult run_sbrd(const ScalarField& f, const SolverConfig& cfg,
                            const IterationObserver& observer = {});
SegmentationResult run_fprd1(const ScalarField& f, const SolverConfig& cfg,
                             const IterationObserver& observer = {});
SegmentationResult run_fprd2(const ScalarField& f, const SolverConfig& cfg,
                             const IterationObserver& observer = {});

/// Dispatch on cfg.algorithm.
SegmentationResult segment(const ScalarField& f, const SolverConfig& cfg,
                           const IterationObserver& observer = {});

/// sum g (|Gx phi| + |Gy phi|) + mu <phi, eta> + alpha/2 ||phi - 1/2||^2
double convex_objective(const ScalarField& phi, const ScalarField& g, const ScalarField& eta,
                        double mu, double alpha);

// Single-iteration kernels used by the solvers. Exposed so the update maps
// can be checked in isolation.
namespace steps {

/// One raster-order Gauss-Seidel sweep for
/// (alpha I - lambda Lap) phi = alpha/2 - mu eta + lambda G^T(d - b),
/// each update projected to [0, 1].
void sbrd_sweep(ScalarField& phi, const ScalarField& eta, const BregmanState& s, double mu,
                double lambda, double alpha);

/// d = shrink_{g/lambda}(G phi + b); b += G phi - d.
void sbrd_bregman_update(const ScalarField& phi, const ScalarField& g, double lambda,
                         BregmanState& s);

/// b = t b + (1 - t) (I - shrink_{g/lambda})(G phi + b).
void relaxed_dual_update(const ScalarField& phi, const ScalarField& g, double lambda, double t,
                         BregmanState& s);

/// phi = clamp(phi - mu eta / alpha - lambda/alpha G^T b, 0, 1).
void fprd1_primal_update(ScalarField& phi, const ScalarField& eta, const BregmanState& s,
                         double mu, double lambda, double alpha);

/// phi = psi + c - lambda/alpha G^T b; psi = clamp(phi - c - mu eta / alpha);
/// c += psi - phi.
void fprd2_primal_update(ScalarField& phi, ScalarField& psi, BregmanState& s,
                         const ScalarField& eta, double mu, double lambda, double alpha);

/// phi += dt1/xi delta_eps(phi - gamma) (curv_g(phi) - mu eta).
void rdls_reaction(ScalarField& phi, const ScalarField& eta, const ScalarField& g, double mu,
                   double eps, double gamma, double dt1, double xi);

/// phi += dt2 xi Lap(phi).
void rdls_diffusion(ScalarField& phi, double dt2, double xi);

}  // namespace steps

}  // namespace sarseg
