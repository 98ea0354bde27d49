// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include <gtest/gtest.h>

#include "ebm/ellipsoid_sde.hpp"
#include "ebm/errors.hpp"
#include "ebm/skew_product.hpp"
#include "ebm/stat_verify.hpp"
#include "ebm/verify_suites.hpp"
#include "oracles.hpp"

using namespace ebm;
using skew::ChangedTimeGrid;

namespace {

Trajectory constant_y(double y, std::size_t steps, double dt) {
  Trajectory t(1, steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) t.push(k * dt, y);
  t.dt = dt;
  return t;
}

// Ambient path of the equator at c = 1 with Y frozen at 0: X moves on the
// unit circle, so the time change is the identity.
Trajectory equator_fixture(std::size_t steps, double dt) {
  Trajectory t(3, steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) {
    const double a = 0.7 * std::sin(3.0 * k * dt) + 0.2 * k * dt;
    const double s[] = {std::cos(a), std::sin(a), 0.0};
    t.push(k * dt, s);
  }
  t.dt = dt;
  t.params = {2, 1.0};
  return t;
}

}  // namespace

TEST(SkewProduct, TimeChangeExamples) {
  const EllipsoidParams p{3, 2.0};
  const auto zero = skew::build_time_change(constant_y(0.0, 100, 0.01), p);
  for (std::size_t k = 0; k < zero.grid().size(); ++k)
    EXPECT_EQ(zero.s_values()[k], zero.grid()[k]);

  const auto flat = skew::build_time_change(constant_y(1.2, 100, 0.01), p);
  const double rate = 4.0 / (4.0 - 1.44);
  for (std::size_t k = 0; k < flat.grid().size(); ++k)
    EXPECT_NEAR(flat.s_values()[k], rate * flat.grid()[k], 1e-14);

  EXPECT_THROW(skew::build_time_change(constant_y(2.0, 10, 0.1), p), DomainError);
}

TEST(SkewProduct, TimeChangeOrderingAndInverse) {
  const EllipsoidParams p{2, 1.5};
  SimConfig cfg;
  cfg.paths = 20;
  cfg.seed = 2;
  for (const auto& ap : ellipsoid::simulate_z(p, cfg)) {
    const auto tmap = skew::build_time_change(skew::last_coordinate(ap.path), p);
    const auto& g = tmap.grid();
    const auto& s = tmap.s_values();
    EXPECT_EQ(s.front(), 0.0);
    for (std::size_t k = 1; k < g.size(); ++k) {
      ASSERT_GT(s[k], s[k - 1]);
      ASSERT_GE(s[k], g[k] * (1.0 - 1e-15));
      ASSERT_NEAR(tmap.inverse(tmap.forward(g[k])), g[k], 1e-9);
    }
    for (int j = 0; j <= 50; ++j) {
      const double u = tmap.horizon() * j / 50.0;
      ASSERT_LE(tmap.inverse(u), u + 1e-15);
      ASSERT_NEAR(tmap.forward(tmap.inverse(u)), u, 1e-9);
    }
  }
}

TEST(SkewProduct, XCoefficients) {
  for (int n : {2, 3}) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    x[0] = 0.6;
    x[1] = 0.8;
    const auto sphere = skew::x_coefficients(x, {n, 1.0});
    const Eigen::MatrixXd expect = Eigen::MatrixXd::Identity(n, n) - x * x.transpose();
    EXPECT_LE((sphere.diffusion - expect).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LE((sphere.drift + 0.5 * n * x).cwiseAbs().maxCoeff(), 1e-14);

    // Interior point at c = 1.
    const Eigen::VectorXd xi = 0.5 * x;
    const auto in = skew::x_coefficients(xi, {n, 1.0});
    const double x2 = xi.squaredNorm();
    const Eigen::MatrixXd e2 = Eigen::MatrixXd::Identity(n, n) -
                               (1.0 - std::sqrt(1.0 - x2)) / x2 * xi * xi.transpose();
    EXPECT_LE((in.diffusion - e2).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LE((in.drift + 0.5 * n * xi).cwiseAbs().maxCoeff(), 1e-14);
  }
  // Equator at c = 2, n = 2 agrees with the ambient drift.
  const EllipsoidParams p{2, 2.0};
  const Eigen::Vector2d e(1.0, 0.0);
  const auto eq = skew::x_coefficients(e, p);
  EXPECT_NEAR(eq.drift[0], -0.625, 1e-15);
  const auto amb = ellipsoid::drift_vector({e, 0.0}, p);
  EXPECT_NEAR(eq.drift[0], amb[0], 1e-15);

  // Small |x|: eigenvalue along x tends to sqrt((1-|x|^2)/((c^2-1)|x|^2+1)).
  for (double r : {1e-2, 1e-4}) {
    const Eigen::Vector2d xs(r, 0.0);
    const auto co = skew::x_coefficients(xs, p);
    const double expect_eig = std::sqrt((1 - r * r) / (3.0 * r * r + 1.0));
    EXPECT_NEAR(co.diffusion(0, 0), expect_eig, 1e-12);
    EXPECT_NEAR(co.diffusion(1, 1), 1.0, 1e-15);
  }
  EXPECT_THROW(skew::x_coefficients(Eigen::Vector2d::Zero(), p), DegenerateError);
}

TEST(SkewProduct, VhatNormalizedOnUniformGrid) {
  const EllipsoidParams p{3, 0.7};
  SimConfig cfg;
  cfg.paths = 20;
  cfg.seed = 4;
  for (const auto& ap : ellipsoid::simulate_z(p, cfg)) {
    const auto tmap = skew::build_time_change(skew::last_coordinate(ap.path), p);
    const auto v = skew::extract_vhat(ap.path, tmap);
    ASSERT_EQ(v.dim, 3u);
    for (std::size_t k = 0; k < v.size(); ++k) {
      double n2 = 0.0;
      for (double e : v.state(k)) n2 += e * e;
      ASSERT_NEAR(std::sqrt(n2), 1.0, 1e-9);
      if (k > 0 && k + 1 < v.size()) ASSERT_NEAR(v.times[k] - v.times[k - 1], cfg.dt, 1e-12);
    }
    EXPECT_NEAR(v.times.back(), tmap.horizon(), 1e-12);
    EXPECT_LE(v.times.back() - v.times[v.size() - 2], cfg.dt + 1e-12);
  }
}

TEST(SkewProduct, EquatorFixtureIsIdentityTimeChange) {
  const auto z = equator_fixture(500, 1e-3);
  const EllipsoidParams p{2, 1.0};
  const auto y = skew::last_coordinate(z);
  const auto tmap = skew::build_time_change(y, p);
  const auto v = skew::extract_vhat(z, tmap);
  ASSERT_EQ(v.size(), z.size());
  for (std::size_t k = 0; k < z.size(); ++k)
    for (int i = 0; i < 2; ++i) ASSERT_NEAR(v.state(k)[i], z.state(k)[i], 1e-12);
}

TEST(SkewProduct, ConstantReconstructionFixture) {
  const EllipsoidParams p{3, 2.0};
  const auto y = constant_y(0.0, 10, 0.1);
  const auto tmap = skew::build_time_change(y, p);
  Trajectory v(3, 11);
  for (std::size_t k = 0; k <= 10; ++k) {
    const double e1[] = {1.0, 0.0, 0.0};
    v.push(0.1 * k, e1);
  }
  const auto x = skew::reconstruct_x(y, v, tmap, p);
  for (std::size_t k = 0; k < x.size(); ++k) {
    EXPECT_NEAR(x.state(k)[0], 1.0, 1e-15);
    EXPECT_EQ(x.state(k)[1], 0.0);
  }
  Trajectory wrong(2, 11);
  for (std::size_t k = 0; k <= 10; ++k) {
    const double e1[] = {1.0, 0.0};
    wrong.push(0.1 * k, e1);
  }
  EXPECT_THROW(skew::reconstruct_x(y, wrong, tmap, p), GridMismatchError);
  Trajectory short_v(3, 3);
  for (std::size_t k = 0; k < 3; ++k) {
    const double e1[] = {1.0, 0.0, 0.0};
    short_v.push(0.1 * k, e1);
  }
  EXPECT_THROW(skew::reconstruct_x(y, short_v, tmap, p), GridMismatchError);
}

TEST(SkewProduct, PathwiseIdentity) {
  for (auto [n, c] : {std::pair{2, 2.0}, {3, 0.5}, {4, 1.0}}) {
    const EllipsoidParams p{n, c};
    SimConfig cfg;
    cfg.paths = 30;
    cfg.seed = 8;
    for (const auto& ap : ellipsoid::simulate_z(p, cfg)) {
      ASSERT_LE(skew::pathwise_reconstruction_error(ap.path, p, {ChangedTimeGrid::kNative, 0.0}),
                1e-12);
      // Resampling on a uniform changed-time grid interpolates between
      // neighbouring states, so the error is bounded by the largest step.
      double max_step = 0.0;
      for (std::size_t k = 1; k < ap.path.size(); ++k) {
        double d2 = 0.0;
        for (int i = 0; i < n; ++i)
          d2 += std::pow(ap.path.state(k)[i] - ap.path.state(k - 1)[i], 2);
        max_step = std::max(max_step, std::sqrt(d2));
      }
      ASSERT_LE(skew::pathwise_reconstruction_error(ap.path, p, {}), 2.0 * max_step);
      // |X|^2 = (c^2 - Y^2)/c^2 along the path.
      for (std::size_t k = 0; k < ap.path.size(); ++k) {
        const auto z = ap.path.state(k);
        double x2 = 0.0;
        for (int i = 0; i < n; ++i) x2 += z[i] * z[i];
        ASSERT_NEAR(x2, (c * c - z[n] * z[n]) / (c * c), 1e-9);
      }
    }
  }
}

TEST(SkewProduct, VhatQuadraticVariation) {
  // d<V^i> = (1 - (V^i)^2) du on the sphere.
  const EllipsoidParams p{3, 2.0};
  SimConfig cfg;
  cfg.paths = 200;
  cfg.seed = 13;
  std::vector<double> qv(3, 0.0), target(3, 0.0);
  for (const auto& ap : ellipsoid::simulate_z(p, cfg)) {
    const auto tmap = skew::build_time_change(skew::last_coordinate(ap.path), p);
    const auto v = skew::extract_vhat(ap.path, tmap, {ChangedTimeGrid::kNative, 0.0});
    for (std::size_t k = 0; k + 1 < v.size(); ++k)
      for (int i = 0; i < 3; ++i) {
        const double d = v.state(k + 1)[i] - v.state(k)[i];
        qv[i] += d * d;
        target[i] += (1.0 - v.state(k)[i] * v.state(k)[i]) * (v.times[k + 1] - v.times[k]);
      }
  }
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(qv[i] / target[i], 1.0, 0.01);
}

TEST(SkewProduct, VhatDrift) {
  for (int n : {2, 4}) {
    const EllipsoidParams p{n, 2.0};
    SimConfig cfg;
    cfg.paths = 100;
    cfg.seed = 40 + n;
    std::vector<Trajectory> vhats;
    for (const auto& ap : ellipsoid::simulate_z(p, cfg)) {
      const auto tmap = skew::build_time_change(skew::last_coordinate(ap.path), p);
      vhats.push_back(skew::extract_vhat(ap.path, tmap, {ChangedTimeGrid::kNative, 0.0}));
    }
    const auto reg = verify::vhat_drift_regression(vhats);
    EXPECT_LE(std::abs(reg.slope + 0.5 * (n - 1)), 3.0 * reg.standard_error)
        << reg.slope << " +- " << reg.standard_error;
  }
}

TEST(SkewProduct, Independence) {
  const EllipsoidParams p{2, 2.0};
  SimConfig cfg;
  cfg.paths = 100;
  cfg.seed = 55;
  std::vector<std::vector<double>> dy, dv;
  for (const auto& ap : ellipsoid::simulate_z(p, cfg)) {
    const auto y = skew::last_coordinate(ap.path);
    const auto tmap = skew::build_time_change(y, p);
    const auto v = skew::extract_vhat(ap.path, tmap, {ChangedTimeGrid::kNative, 0.0});
    dy.push_back(stats::increments(y.values));
    dv.push_back(stats::increments(v.component(0)));
  }
  const int lags[] = {0, 1, 2};
  const auto rho = stats::lagged_increment_correlation(dv, dy, lags);
  for (double r : rho) EXPECT_LE(std::abs(r), 3.0 / std::sqrt(1e5));
}

TEST(SkewProduct, SphereBmStaysOnSphere) {
  const double v0[] = {0.0, 0.6, 0.8};
  const auto v = skew::simulate_sphere_bm(v0, 2.345, 1e-2, 1, 0);
  EXPECT_NEAR(v.times.back(), 2.345, 1e-12);
  for (std::size_t k = 0; k < v.size(); ++k) {
    double n2 = 0.0;
    for (double e : v.state(k)) n2 += e * e;
    ASSERT_NEAR(n2, 1.0, 1e-12);
  }
  EXPECT_THROW(skew::simulate_sphere_bm(std::vector<double>{0.5, 0.5}, 1.0, 0.1, 1, 0),
               ConfigError);
}

TEST(SkewProduct, GluedMatchesAmbientMarginal) {
  const EllipsoidParams p{3, 1.5};
  SimConfig cfg;
  cfg.paths = 4000;
  cfg.seed = 90;
  cfg.y0 = 0.4;
  const auto z = ellipsoid::sample_z_terminal(p, cfg);
  const auto g = skew::sample_glued_terminal_x(p, cfg);
  for (int i = 0; i < 3; ++i) {
    std::vector<double> a(cfg.paths), b(cfg.paths);
    for (std::size_t k = 0; k < cfg.paths; ++k) {
      a[k] = z[k * 4 + i];
      b[k] = g[k * 3 + i];
    }
    const auto r = stats::ks_two_sample({a, "ambient"}, {b, "glued"});
    EXPECT_TRUE(r.passed) << i << ": " << r.statistic << " > " << r.threshold;
  }
}
