#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <random>

#include "sarseg/benchmark.hpp"
#include "sarseg/config.hpp"
#include "sarseg/grid_ops.hpp"
#include "sarseg/metrics.hpp"
#include "sarseg/solvers.hpp"
#include "sarseg/speckle.hpp"
#include "support.hpp"

using namespace sarseg;
using sarseg::testing::random_field;

namespace {

constexpr Algorithm kAll[] = {Algorithm::rdls, Algorithm::sbrd, Algorithm::fprd1,
                              Algorithm::fprd2};
constexpr Algorithm kConvex[] = {Algorithm::sbrd, Algorithm::fprd1, Algorithm::fprd2};

double l2_distance(const ScalarField& a, const ScalarField& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(s);
}

ScalarField initial_level_set(const ScalarField& f) {
  const double m = *std::max_element(f.begin(), f.end());
  ScalarField phi(f.shape());
  for (std::size_t k = 0; k < f.size(); ++k) phi[k] = f[k] / m;
  return phi;
}

}  // namespace

TEST_CASE("threshold_mask") {
  CHECK(count_ones(threshold_mask(ScalarField(5, 5, 0.5), 0.5)) == 0);
  CHECK(count_ones(threshold_mask(ScalarField(5, 5, 1.0), 0.5)) == 25);
  std::mt19937_64 rng(1);
  const auto phi = random_field({13, 7}, rng, 0.0, 1.0);
  const auto m = threshold_mask(phi, 0.5);
  for (std::size_t k = 0; k < phi.size(); ++k) CHECK(m[k] == (phi[k] > 0.5 ? 1 : 0));
  ScalarField cast(m.shape());
  for (std::size_t k = 0; k < m.size(); ++k) cast[k] = m[k];
  CHECK(threshold_mask(cast, 0.3) == m);
}

TEST_CASE("shrink") {
  auto one = [](double v, double tau) {
    return shrink(ScalarField({1, 1}, std::vector<double>{v}),
                  ScalarField({1, 1}, std::vector<double>{tau}))[0];
  };
  CHECK(one(3.0, 1.0) == 2.0);
  CHECK(one(-0.5, 1.0) == 0.0);
  CHECK(one(-4.0, 1.5) == -2.5);
  std::mt19937_64 rng(2);
  const auto v = random_field({10, 10}, rng, -5.0, 5.0);
  CHECK(shrink(v, ScalarField(v.shape(), 0.0)) == v);
  CHECK_THROWS_AS(shrink(v, ScalarField(v.shape(), -0.1)), InvalidInput);

  std::uniform_real_distribution<double> d(-10.0, 10.0), t(0.0, 5.0);
  for (int n = 0; n < 10000; ++n) {
    const double a = d(rng), b = d(rng), tau = t(rng);
    CHECK(std::abs(one(a, tau) - one(b, tau)) <= std::abs(a - b) + 1e-15);
  }
}

TEST_CASE("solver configuration") {
  const auto rdls = SolverConfig::defaults(Algorithm::rdls);
  CHECK(rdls.model.mu == 15.0);
  CHECK(rdls.dt1 == 0.1);
  CHECK(rdls.dt2 == 0.15);
  CHECK(rdls.model.beta == 20.0);
  CHECK(rdls.model.sigma == 15.0);
  const auto sbrd = SolverConfig::defaults(Algorithm::sbrd);
  CHECK(sbrd.lambda == 1000.0);
  CHECK(sbrd.model.mu == doctest::Approx(6.0));
  const auto f1 = SolverConfig::defaults(Algorithm::fprd1);
  CHECK(f1.model.mu == 0.15);
  CHECK(f1.lambda == 1.0);
  CHECK(f1.alpha == 12.0);
  CHECK(f1.t == 1e-4);
  const auto f2 = SolverConfig::defaults(Algorithm::fprd2);
  CHECK(f2.model.mu == 0.1);
  CHECK(f2.alpha == 8.0);
  CHECK(f2.model.beta == 12.0);
  for (auto a : kAll) {
    CHECK_NOTHROW(SolverConfig::defaults(a).validate());
    CHECK(SolverConfig::defaults(a).gamma == 0.5);
  }

  auto bad = f1;
  bad.alpha = 2.0;
  try {
    bad.validate();
    FAIL("expected a configuration error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("lambda/alpha <= 0.25") != std::string::npos);
  }
  bad = f1;
  bad.t = 1.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = f2;
  bad.gamma = 1.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = rdls;
  bad.max_iter = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  // The bound only applies to the fixed-point solvers.
  auto sb = sbrd;
  sb.alpha = 1.0;
  CHECK_NOTHROW(sb.validate());

  CHECK(f1.canonical() == SolverConfig::defaults(Algorithm::fprd1).canonical());
  CHECK(f1.canonical() != f2.canonical());
  CHECK(parse_algorithm("fprd2") == Algorithm::fprd2);
  CHECK_THROWS_AS(parse_algorithm("chan-vese"), InvalidInput);
}

TEST_CASE("input validation") {
  const auto p = make_phantom({64, 64}, 200.0, 50.0, Geometry::disk, std::nullopt);
  auto cfg = SolverConfig::defaults(Algorithm::fprd1);
  CHECK_THROWS_AS(run_sbrd(p.noisy, cfg), ConfigError);
  CHECK_THROWS_AS(segment(ScalarField(6, 6, 10.0), cfg), InvalidInput);
  auto zero = p.noisy;
  zero(3, 3) = 0.0;
  CHECK_THROWS_AS(segment(zero, cfg), InvalidInput);
  auto nan = p.noisy;
  nan(3, 3) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(segment(nan, cfg), InvalidInput);
}

TEST_CASE("divergence is reported with its iteration") {
  auto f = make_phantom({32, 32}, 1e308, 1.0, Geometry::disk, std::nullopt).clean;
  try {
    segment(f, SolverConfig::defaults(Algorithm::rdls));
    FAIL("expected a numeric failure");
  } catch (const NumericFailure& e) {
    CHECK(e.iteration() >= 1);
    CHECK(std::string(e.what()).find("iteration") != std::string::npos);
  }
}

TEST_CASE("stationary points of the update maps") {
  const Shape s{10, 12};
  const ScalarField eta(s, 0.0);
  const ScalarField g(s, 1.0);

  SUBCASE("rdls") {
    ScalarField phi(s, 0.3);
    steps::rdls_reaction(phi, eta, g, 0.0, 1.0, 0.5, 0.1, 1.0);
    steps::rdls_diffusion(phi, 0.15, 1.0);
    for (double v : phi) CHECK(v == 0.3);
  }
  SUBCASE("fprd2") {
    ScalarField phi(s, 0.7);
    ScalarField psi = phi;
    BregmanState st(s);
    for (int k = 0; k < 5; ++k) {
      steps::relaxed_dual_update(phi, g, 1.0, 1e-4, st);
      steps::fprd2_primal_update(phi, psi, st, eta, 0.0, 1.0, 8.0);
    }
    for (std::size_t k = 0; k < phi.size(); ++k) {
      CHECK(phi[k] == 0.7);
      CHECK(psi[k] == 0.7);
      CHECK(st.c[k] == 0.0);
    }
  }
  SUBCASE("fprd1") {
    ScalarField phi(s, 0.4);
    BregmanState st(s);
    steps::relaxed_dual_update(phi, g, 1.0, 1e-4, st);
    steps::fprd1_primal_update(phi, eta, st, 0.0, 1.0, 12.0);
    for (double v : phi) CHECK(v == 0.4);
  }
}

TEST_CASE("Gauss-Seidel sweeps converge to the dense solve") {
  const int n = 8;
  const Shape s{n, n};
  std::mt19937_64 rng(77);
  const double lambda = 2.0, alpha = 3.0;
  BregmanState st(s);
  st.dx = random_field(s, rng, -0.1, 0.1);
  st.dy = random_field(s, rng, -0.1, 0.1);
  st.bx = random_field(s, rng, -0.1, 0.1);
  st.by = random_field(s, rng, -0.1, 0.1);

  for (double mu : {0.0, 0.05}) {
    CAPTURE(mu);
    const auto eta = random_field(s, rng, -1.0, 1.0);
    ScalarField rx(s), ry(s);
    for (std::size_t k = 0; k < rx.size(); ++k) {
      rx[k] = st.dx[k] - st.bx[k];
      ry[k] = st.dy[k] - st.by[k];
    }
    const auto gtx = div_adjoint(rx, Axis::x);
    const auto gty = div_adjoint(ry, Axis::y);

    const int N = n * n;
    Eigen::MatrixXd A(N, N);
    Eigen::VectorXd rhs(N);
    for (int c = 0; c < N; ++c) {
      ScalarField e(s, 0.0);
      e[c] = 1.0;
      const auto lap = laplacian(e);
      for (int r = 0; r < N; ++r) A(r, c) = (r == c ? alpha : 0.0) - lambda * lap[r];
    }
    for (int k = 0; k < N; ++k) rhs(k) = 0.5 * alpha - mu * eta[k] + lambda * (gtx[k] + gty[k]);
    const Eigen::VectorXd direct = A.partialPivLu().solve(rhs);
    REQUIRE(direct.minCoeff() > 0.0);
    REQUIRE(direct.maxCoeff() < 1.0);

    ScalarField phi(s, 0.5);
    for (int sweep = 0; sweep < 500; ++sweep) steps::sbrd_sweep(phi, eta, st, mu, lambda, alpha);
    Eigen::VectorXd x(N);
    for (int k = 0; k < N; ++k) x(k) = phi[k];
    CHECK((A * x - rhs).cwiseAbs().maxCoeff() <= 1e-6);
    CHECK((x - direct).cwiseAbs().maxCoeff() <= 1e-6);
  }
}

TEST_CASE("fixed-point maps are nonexpansive without the data force") {
  const Shape s{16, 16};
  std::mt19937_64 rng(31);
  const ScalarField eta(s, 0.0);
  const auto g = random_field(s, rng, 0.05, 1.0);
  for (double ratio : {0.25, 0.1}) {
    const double alpha = 8.0, lambda = ratio * alpha;
    for (int trial = 0; trial < 50; ++trial) {
      const auto a = random_field(s, rng, 0.0, 1.0);
      const auto b = random_field(s, rng, 0.0, 1.0);
      BregmanState shared(s);
      shared.bx = random_field(s, rng, -0.2, 0.2);
      shared.by = random_field(s, rng, -0.2, 0.2);
      shared.c = random_field(s, rng, -0.1, 0.1);

      auto sa = shared, sb = shared;
      auto pa = a, pb = b;
      steps::relaxed_dual_update(pa, g, lambda, 1e-4, sa);
      steps::relaxed_dual_update(pb, g, lambda, 1e-4, sb);
      steps::fprd1_primal_update(pa, eta, sa, 0.0, lambda, alpha);
      steps::fprd1_primal_update(pb, eta, sb, 0.0, lambda, alpha);
      CHECK(l2_distance(pa, pb) <= l2_distance(a, b) * (1.0 + 1e-12));

      auto qa = a, qb = b, psia = a, psib = b;
      sa = shared;
      sb = shared;
      steps::relaxed_dual_update(qa, g, lambda, 1e-4, sa);
      steps::relaxed_dual_update(qb, g, lambda, 1e-4, sb);
      steps::fprd2_primal_update(qa, psia, sa, eta, 0.0, lambda, alpha);
      steps::fprd2_primal_update(qb, psib, sb, eta, 0.0, lambda, alpha);
      CHECK(l2_distance(psia, psib) <= l2_distance(a, b) * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("convex iterates stay in [0, 1]") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 3; ++trial) {
    const auto f = random_field({24, 24}, rng, 1.0, 255.0);
    for (auto a : kConvex) {
      auto cfg = SolverConfig::defaults(a);
      cfg.max_iter = 20;
      cfg.tol = 1e-300;
      cfg.mask_patience = 0;
      int seen = 0;
      bool inside = true;
      const auto r = segment(f, cfg, [&](int, const ScalarField& phi) {
        ++seen;
        for (double v : phi) inside = inside && v >= 0.0 && v <= 1.0;
      });
      CHECK(seen == 20);
      CHECK(r.iterations == 20);
      CHECK(inside);
    }
  }
}

TEST_CASE("noiseless phantom is recovered exactly") {
  const auto p = make_phantom({64, 64}, 200.0, 50.0, Geometry::disk, std::nullopt);
  for (auto a : kAll) {
    CAPTURE(to_string(a));
    std::vector<Mask> masks{threshold_mask(initial_level_set(p.noisy), 0.5)};
    const auto r = segment(p.noisy, SolverConfig::defaults(a),
                           [&](int, const ScalarField& phi) { masks.push_back(threshold_mask(phi, 0.5)); });
    CHECK(r.iterations <= 200);
    CHECK(dice(r.mask, p.mask) == 1.0);
    CHECK(r.pp == 1.0);
    REQUIRE(masks.size() >= 3);
    CHECK(masks[masks.size() - 1] == masks[masks.size() - 2]);
    CHECK(masks[masks.size() - 2] == masks[masks.size() - 3]);
    CHECK(r.mask == threshold_mask(r.phi, 0.5));
  }
}

TEST_CASE("solvers are deterministic") {
  const auto img = phantom_image("d", {48, 48}, Geometry::annulus, SpeckleSpec{4, 5});
  for (auto a : kAll) {
    const auto cfg = preset_config(a, Preset::phantom);
    const auto r1 = segment(img.f, cfg);
    const auto r2 = segment(img.f, cfg);
    CHECK(r1.phi == r2.phi);
    CHECK(r1.mask == r2.mask);
    CHECK(r1.iterations == r2.iterations);
    CHECK(r1.pp == r2.pp);
  }
}

TEST_CASE("convex objective decreases on speckled phantoms") {
  for (auto geometry : {Geometry::disk, Geometry::two_disks, Geometry::annulus}) {
    const auto img = phantom_image("p", {64, 64}, geometry, SpeckleSpec{4, 2});
    for (auto a : kConvex) {
      CAPTURE(to_string(a));
      CAPTURE(to_string(geometry));
      const auto cfg = preset_config(a, Preset::phantom);
      const auto r = segment(img.f, cfg);
      const auto g = edge_detector(img.f, cfg.model.beta, cfg.model.sigma);
      const LocalStatistics stats(img.f, cfg.model.kernel_sigma);
      ScalarField h(img.f.shape());
      for (std::size_t k = 0; k < h.size(); ++k) h[k] = r.mask[k];
      const auto eta = stats.data_force(stats.means(h), cfg.model.data_term);
      const auto phi0 = initial_level_set(img.f);
      // In the fixed-point schemes alpha weighs a proximity term toward the
      // previous iterate, so their limit minimizes the objective without the
      // centring term.
      const double centring = a == Algorithm::sbrd ? cfg.alpha : 0.0;
      CHECK(convex_objective(r.phi, g, eta, cfg.model.mu, centring) <
            convex_objective(phi0, g, eta, cfg.model.mu, centring));
    }
  }
}
