#include "sarseg/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "sarseg/grid_ops.hpp"
#include "sarseg/metrics.hpp"

namespace sarseg {

Algorithm parse_algorithm(std::string_view name) {
  if (name == "rdls") return Algorithm::rdls;
  if (name == "sbrd") return Algorithm::sbrd;
  if (name == "fprd1") return Algorithm::fprd1;
  if (name == "fprd2") return Algorithm::fprd2;
  throw InvalidInput("unknown algorithm '" + std::string(name) + "'");
}

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::rdls: return "rdls";
    case Algorithm::sbrd: return "sbrd";
    case Algorithm::fprd1: return "fprd1";
    case Algorithm::fprd2: return "fprd2";
  }
  return "?";
}

SolverConfig SolverConfig::defaults(Algorithm a) {
  SolverConfig c;
  c.algorithm = a;
  c.model.eps = 1.0;
  c.model.sigma = 15.0;
  c.model.beta = 20.0;
  switch (a) {
    case Algorithm::rdls:
      c.model.mu = 15.0;
      c.dt1 = 0.1;
      c.dt2 = 0.15;
      c.xi = 1.0;
      break;
    case Algorithm::sbrd:
      c.lambda = 1000.0;
      c.model.mu = 0.006 * c.lambda;
      c.alpha = 12.0;
      break;
    case Algorithm::fprd1:
      c.model.mu = 0.15;
      c.lambda = 1.0;
      c.alpha = 12.0;
      c.t = 1e-4;
      break;
    case Algorithm::fprd2:
      c.model.mu = 0.1;
      c.model.beta = 12.0;
      c.lambda = 1.0;
      c.alpha = 8.0;
      c.t = 1e-4;
      break;
  }
  return c;
}

void SolverConfig::validate() const {
  model.validate();
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ConfigError(std::string(name) + " must be positive");
    }
  };
  positive(lambda, "lambda");
  positive(alpha, "alpha");
  positive(tol, "tol");
  if (!(gamma > 0.0 && gamma < 1.0)) throw ConfigError("gamma must lie in (0, 1)");
  if (max_iter < 1) throw ConfigError("max_iter must be at least 1");
  if (means_update_every < 1) throw ConfigError("means_update_every must be at least 1");
  if (mask_patience < 0) throw ConfigError("mask_patience must be nonnegative");
  if (algorithm == Algorithm::rdls) {
    positive(xi, "xi");
    positive(dt1, "dt1");
    positive(dt2, "dt2");
  }
  if (algorithm == Algorithm::fprd1 || algorithm == Algorithm::fprd2) {
    if (!(t > 0.0 && t < 1.0)) throw ConfigError("relaxation t must lie in (0, 1)");
    const double ratio = lambda / alpha;
    if (ratio > kFixedPointStabilityBound) {
      std::ostringstream os;
      os << "lambda/alpha = " << ratio << " violates the fixed-point stability bound "
         << "lambda/alpha <= " << kFixedPointStabilityBound;
      throw ConfigError(os.str());
    }
  }
}

std::string SolverConfig::canonical() const {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "algorithm = " << to_string(algorithm) << '\n'
     << "mu = " << model.mu << '\n'
     << "beta = " << model.beta << '\n'
     << "eps = " << model.eps << '\n'
     << "sigma = " << model.sigma << '\n'
     << "kernel_sigma = " << model.kernel_sigma << '\n'
     << "data_term = " << to_string(model.data_term) << '\n'
     << "lambda = " << lambda << '\n'
     << "alpha = " << alpha << '\n'
     << "t = " << t << '\n'
     << "gamma = " << gamma << '\n'
     << "xi = " << xi << '\n'
     << "dt1 = " << dt1 << '\n'
     << "dt2 = " << dt2 << '\n'
     << "max_iter = " << max_iter << '\n'
     << "tol = " << tol << '\n'
     << "means_update_every = " << means_update_every << '\n'
     << "mask_patience = " << mask_patience << '\n';
  return os.str();
}

Mask threshold_mask(const ScalarField& phi, double gamma) {
  Mask m(phi.shape(), 0);
  for (std::size_t k = 0; k < phi.size(); ++k) m[k] = phi[k] > gamma ? 1 : 0;
  return m;
}

ScalarField shrink(const ScalarField& v, const ScalarField& threshold) {
  require_same_shape(v.shape(), threshold.shape(), "shrink");
  ScalarField out(v.shape());
  for (std::size_t k = 0; k < v.size(); ++k) {
    const double tau = threshold[k];
    if (!(tau >= 0.0)) throw InvalidInput("shrink: threshold must be nonnegative");
    const double mag = std::max(std::abs(v[k]) - tau, 0.0);
    out[k] = v[k] < 0.0 ? -mag : mag;
  }
  return out;
}

double convex_objective(const ScalarField& phi, const ScalarField& g, const ScalarField& eta,
                        double mu, double alpha) {
  const auto gx = grad_forward(phi, Axis::x);
  const auto gy = grad_forward(phi, Axis::y);
  double e = 0.0;
  for (std::size_t k = 0; k < phi.size(); ++k) {
    const double dev = phi[k] - 0.5;
    e += g[k] * (std::abs(gx[k]) + std::abs(gy[k])) + mu * phi[k] * eta[k] +
         0.5 * alpha * dev * dev;
  }
  return e;
}

namespace {

using Clock = std::chrono::steady_clock;

void check_image(const ScalarField& f, const SolverConfig& cfg) {
  const int m = std::min(f.height(), f.width());
  const int need = std::max(kIsefRadius, gaussian_kernel(cfg.model.kernel_sigma).radius) + 1;
  if (m < need) {
    throw InvalidInput("segment: image " + to_string(f.shape()) + " is smaller than the " +
                       std::to_string(need) + "-pixel minimum for the configured kernels");
  }
  for (double v : f) {
    if (!std::isfinite(v) || !(v > 0.0)) {
      throw InvalidInput("segment: image values must be finite and positive");
    }
  }
}

ScalarField initial_phi(const ScalarField& f) {
  const double fmax = *std::max_element(f.begin(), f.end());
  ScalarField phi(f.shape());
  for (std::size_t k = 0; k < f.size(); ++k) phi[k] = f[k] / fmax;
  return phi;
}

ScalarField indicator(const ScalarField& phi, double gamma) {
  ScalarField h(phi.shape());
  for (std::size_t k = 0; k < phi.size(); ++k) h[k] = phi[k] > gamma ? 1.0 : 0.0;
  return h;
}

ScalarField shifted_heaviside(const ScalarField& phi, double gamma, double eps) {
  ScalarField shifted(phi.shape());
  for (std::size_t k = 0; k < phi.size(); ++k) shifted[k] = phi[k] - gamma;
  return heaviside_eps(shifted, eps);
}

// Shared stopping rule: small sup-norm update, a mask that has not changed
// for `patience` iterations, or the iteration cap.
class StopRule {
 public:
  StopRule(const SolverConfig& cfg, Mask initial)
      : tol_(cfg.tol), patience_(cfg.mask_patience), previous_(std::move(initial)) {}

  bool done(double change, Mask mask) {
    stable_ = mask == previous_ ? stable_ + 1 : 0;
    previous_ = std::move(mask);
    return change < tol_ || (patience_ > 0 && stable_ >= patience_);
  }

 private:
  double tol_;
  int patience_;
  Mask previous_;
  int stable_ = 0;
};

void require_finite(const ScalarField& u, int iteration) {
  if (!all_finite(u)) throw NumericFailure("solver diverged: non-finite level-set value", iteration);
}

// State shared by the four solvers: fixed edge map and local statistics.
struct Problem {
  const SolverConfig& cfg;
  Clock::time_point start;
  ScalarField g;
  LocalStatistics stats;

  Problem(const ScalarField& f, const SolverConfig& c, Algorithm expected)
      : cfg(validated(f, c, expected)),
        start(Clock::now()),
        g(edge_detector(f, c.model.beta, c.model.sigma)),
        stats(f, c.model.kernel_sigma) {}

  static const SolverConfig& validated(const ScalarField& f, const SolverConfig& c,
                                       Algorithm expected) {
    if (c.algorithm != expected) {
      throw ConfigError("solver for " + std::string(to_string(expected)) +
                        " called with algorithm " + std::string(to_string(c.algorithm)));
    }
    c.validate();
    check_image(f, c);
    return c;
  }

  ScalarField force(const ScalarField& h) const {
    return stats.data_force(stats.means(h), cfg.model.data_term);
  }

  bool refresh_due(int iteration) const { return iteration % cfg.means_update_every == 0; }

  SegmentationResult finish(ScalarField phi, int iterations) const {
    SegmentationResult r;
    r.mask = threshold_mask(phi, cfg.gamma);
    r.phi = std::move(phi);
    r.iterations = iterations;
    const auto ones = count_ones(r.mask);
    if (ones == 0 || ones == r.mask.size()) {
      // One-region partition: within-region scatter equals the total.
      const auto& f = stats.image();
      const bool constant = std::all_of(f.begin(), f.end(), [&](double v) { return v == f[0]; });
      r.pp = constant ? 1.0 : 0.0;
    } else {
      r.pp = pp_uniformity(stats.image(), r.mask);
    }
    r.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
    return r;
  }
};

}  // namespace

SegmentationResult run_rdls(const ScalarField& f, const SolverConfig& cfg,
                            const IterationObserver& observer) {
  Problem p(f, cfg, Algorithm::rdls);
  const auto& m = cfg.model;
  ScalarField phi = initial_phi(f);
  ScalarField eta = p.force(shifted_heaviside(phi, cfg.gamma, m.eps));
  StopRule stop(cfg, threshold_mask(phi, cfg.gamma));
  int k = 0;
  while (k < cfg.max_iter) {
    const ScalarField previous = phi;
    steps::rdls_reaction(phi, eta, p.g, m.mu, m.eps, cfg.gamma, cfg.dt1, cfg.xi);
    steps::rdls_diffusion(phi, cfg.dt2, cfg.xi);
    ++k;
    require_finite(phi, k);
    if (observer) observer(k, phi);
    if (stop.done(max_abs_diff(previous, phi), threshold_mask(phi, cfg.gamma))) break;
    if (p.refresh_due(k)) eta = p.force(shifted_heaviside(phi, cfg.gamma, m.eps));
  }
  return p.finish(std::move(phi), k);
}

SegmentationResult run_sbrd(const ScalarField& f, const SolverConfig& cfg,
                            const IterationObserver& observer) {
  Problem p(f, cfg, Algorithm::sbrd);
  ScalarField phi = initial_phi(f);
  BregmanState s(f.shape());
  ScalarField eta = p.force(indicator(phi, cfg.gamma));
  StopRule stop(cfg, threshold_mask(phi, cfg.gamma));
  int k = 0;
  while (k < cfg.max_iter) {
    const ScalarField previous = phi;
    steps::sbrd_sweep(phi, eta, s, cfg.model.mu, cfg.lambda, cfg.alpha);
    steps::sbrd_bregman_update(phi, p.g, cfg.lambda, s);
    ++k;
    require_finite(phi, k);
    if (observer) observer(k, phi);
    if (stop.done(max_abs_diff(previous, phi), threshold_mask(phi, cfg.gamma))) break;
    if (p.refresh_due(k)) eta = p.force(indicator(phi, cfg.gamma));
  }
  return p.finish(std::move(phi), k);
}

SegmentationResult run_fprd1(const ScalarField& f, const SolverConfig& cfg,
                             const IterationObserver& observer) {
  Problem p(f, cfg, Algorithm::fprd1);
  ScalarField phi = initial_phi(f);
  BregmanState s(f.shape());
  // C1/C2 seeded from the thresholded initial region.
  ScalarField eta = p.force(indicator(phi, cfg.gamma));
  StopRule stop(cfg, threshold_mask(phi, cfg.gamma));
  int k = 0;
  while (k < cfg.max_iter) {
    const ScalarField previous = phi;
    steps::relaxed_dual_update(phi, p.g, cfg.lambda, cfg.t, s);
    steps::fprd1_primal_update(phi, eta, s, cfg.model.mu, cfg.lambda, cfg.alpha);
    ++k;
    require_finite(phi, k);
    if (observer) observer(k, phi);
    if (stop.done(max_abs_diff(previous, phi), threshold_mask(phi, cfg.gamma))) break;
    if (p.refresh_due(k)) eta = p.force(indicator(phi, cfg.gamma));
  }
  return p.finish(std::move(phi), k);
}

SegmentationResult run_fprd2(const ScalarField& f, const SolverConfig& cfg,
                             const IterationObserver& observer) {
  Problem p(f, cfg, Algorithm::fprd2);
  ScalarField phi = initial_phi(f);
  ScalarField psi = phi;
  BregmanState s(f.shape());
  ScalarField eta = p.force(indicator(psi, cfg.gamma));
  StopRule stop(cfg, threshold_mask(psi, cfg.gamma));
  int k = 0;
  while (k < cfg.max_iter) {
    const ScalarField previous = psi;
    steps::relaxed_dual_update(phi, p.g, cfg.lambda, cfg.t, s);
    steps::fprd2_primal_update(phi, psi, s, eta, cfg.model.mu, cfg.lambda, cfg.alpha);
    ++k;
    require_finite(phi, k);
    require_finite(psi, k);
    if (observer) observer(k, psi);
    if (stop.done(max_abs_diff(previous, psi), threshold_mask(psi, cfg.gamma))) break;
    if (p.refresh_due(k)) eta = p.force(indicator(psi, cfg.gamma));
  }
  return p.finish(std::move(psi), k);
}

SegmentationResult segment(const ScalarField& f, const SolverConfig& cfg,
                           const IterationObserver& observer) {
  switch (cfg.algorithm) {
    case Algorithm::rdls: return run_rdls(f, cfg, observer);
    case Algorithm::sbrd: return run_sbrd(f, cfg, observer);
    case Algorithm::fprd1: return run_fprd1(f, cfg, observer);
    case Algorithm::fprd2: return run_fprd2(f, cfg, observer);
  }
  throw ConfigError("unknown algorithm");
}

}  // namespace sarseg
