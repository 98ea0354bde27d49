// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "ebm/ellipsoid_sde.hpp"
#include "ebm/errors.hpp"
#include "ebm/stat_verify.hpp"

using namespace ebm;
using ellipsoid::AmbientState;

namespace {

AmbientState random_on_surface(const EllipsoidParams& p, std::mt19937_64& gen) {
  std::normal_distribution<double> g;
  Eigen::VectorXd w(p.n + 1);
  for (auto& v : w) v = g(gen);
  w.normalize();
  AmbientState z;
  z.x = w.head(p.n);
  z.y = p.c * w[p.n];
  return z;
}

const std::vector<EllipsoidParams> kGrid{{2, 0.5}, {2, 1.0}, {2, 2.0}, {3, 0.5},
                                         {3, 2.0}, {5, 1.0}, {5, 10.0}};

}  // namespace

TEST(EllipsoidSde, Tangency) {
  std::mt19937_64 gen(1);
  for (const auto& p : kGrid)
    for (int k = 0; k < 1000; ++k) {
      const auto z = random_on_surface(p, gen);
      const auto s = ellipsoid::diffusion_matrix(z, p);
      ASSERT_LE((s * ellipsoid::unit_normal(z, p)).cwiseAbs().maxCoeff(), 1e-12);
      ASSERT_LE((s - s.transpose()).cwiseAbs().maxCoeff(), 0.0);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s);
      ASSERT_GE(eig.eigenvalues().minCoeff(), -1e-12);
      ASSERT_LE(eig.eigenvalues().maxCoeff(), 1.0 + 1e-12);
    }
}

TEST(EllipsoidSde, SphereReduction) {
  std::mt19937_64 gen(2);
  for (int n : {2, 3, 5}) {
    const EllipsoidParams p{n, 1.0};
    for (int k = 0; k < 200; ++k) {
      const auto z = random_on_surface(p, gen);
      const Eigen::VectorXd v = z.stacked();
      const Eigen::MatrixXd expect = Eigen::MatrixXd::Identity(n + 1, n + 1) - v * v.transpose();
      EXPECT_LE((ellipsoid::diffusion_matrix(z, p) - expect).cwiseAbs().maxCoeff(), 1e-14);
      EXPECT_LE((ellipsoid::drift_vector(z, p) + 0.5 * n * v).cwiseAbs().maxCoeff(), 1e-14);
    }
  }
}

TEST(EllipsoidSde, NamedExamples) {
  const EllipsoidParams p{2, 2.0};
  AmbientState eq{Eigen::Vector2d(1.0, 0.0), 0.0};
  Eigen::MatrixXd expect = Eigen::MatrixXd::Identity(3, 3);
  expect(0, 0) = 0.0;
  EXPECT_LE((ellipsoid::diffusion_matrix(eq, p) - expect).cwiseAbs().maxCoeff(), 1e-15);
  const auto b = ellipsoid::drift_vector(eq, p);
  EXPECT_NEAR(b[0], -0.625, 1e-15);
  EXPECT_EQ(b[1], 0.0);
  EXPECT_EQ(b[2], 0.0);

  // Pole of the stretched axis.
  for (int n : {2, 4})
    for (double c : {0.5, 3.0}) {
      const EllipsoidParams q{n, c};
      AmbientState pole{Eigen::VectorXd::Zero(n), c};
      EXPECT_NEAR(ellipsoid::drift_vector(pole, q)[n], -0.5 * n * c, 1e-14);
      const Eigen::MatrixXd s = ellipsoid::diffusion_matrix(pole, q);
      EXPECT_NEAR(s(n, n), 0.0, 1e-15);
      EXPECT_NEAR(s(0, 0), 1.0, 1e-15);
    }
}

TEST(EllipsoidSde, DriftParallelToScaledNormal) {
  std::mt19937_64 gen(3);
  for (const auto& p : kGrid)
    for (int k = 0; k < 100; ++k) {
      const auto z = random_on_surface(p, gen);
      const auto b = ellipsoid::drift_vector(z, p);
      const double c2 = p.c * p.c;
      Eigen::VectorXd dir(p.n + 1);
      dir << c2 * c2 * z.x, c2 * z.y;
      const double lambda = b.dot(dir) / dir.squaredNorm();
      EXPECT_LT(lambda, 0.0);
      EXPECT_LE((b - lambda * dir).norm(), 1e-12 * std::max(1.0, b.norm()));
    }
}

TEST(EllipsoidSde, RadiusIdentity) {
  std::mt19937_64 gen(4);
  for (const auto& p : kGrid)
    for (int k = 0; k < 1000; ++k) {
      const auto z = random_on_surface(p, gen);
      const double c = p.c, c2 = c * c, x2 = z.x.squaredNorm(), y2 = z.y * z.y;
      const double r = ellipsoid::radius(z, p);
      ASSERT_NEAR(r, std::sqrt(x2 * c2 * c2 + y2), 1e-12);
      ASSERT_NEAR(r, std::sqrt(y2 + c2 * c2 - y2 * c2), 1e-12);
      ASSERT_NEAR(r, std::sqrt((c2 * c2 - c2) * x2 + c2), 1e-12);
    }
}

TEST(EllipsoidSde, DriftOnlyStepStaysOnSurface) {
  const EllipsoidParams p{3, 2.0};
  auto z = ellipsoid::default_initial_state(p, 1.5).stacked();
  const std::vector<double> zero(4, 0.0);
  ellipsoid::euler_step({z.data(), 4}, zero, 1e-3, p);
  EXPECT_LE(std::abs(ellipsoid::membership_defect(
                ellipsoid::AmbientState::from_stacked({z.data(), 4}), p)),
            1e-12);
}

TEST(EllipsoidSde, MembershipAlongPaths) {
  for (const auto& p : kGrid) {
    SimConfig cfg;
    cfg.paths = 20;
    cfg.seed = 5;
    for (const auto& ap : ellipsoid::simulate_z(p, cfg)) {
      ASSERT_EQ(ap.path.size(), cfg.steps() + 1);
      ASSERT_EQ(ap.noise.size(), cfg.steps() * (p.n + 1));
      for (std::size_t k = 0; k < ap.path.size(); ++k)
        ASSERT_LE(std::abs(ellipsoid::membership_defect(
                      AmbientState::from_stacked(ap.path.state(k)), p)),
                  ellipsoid::kMembershipTolerance);
    }
  }
}

TEST(EllipsoidSde, InitialConditionValidation) {
  const EllipsoidParams p{2, 2.0};
  SimConfig cfg;
  cfg.z0 = std::vector<double>{0.0, 0.0, 2.0};
  EXPECT_THROW(ellipsoid::initial_state(p, cfg), ConfigError);
  cfg.z0 = std::vector<double>{0.5, 0.5, 0.3};
  EXPECT_THROW(ellipsoid::initial_state(p, cfg), ConfigError);
  cfg.z0 = std::vector<double>{0.6, 0.0, 1.6};
  EXPECT_NO_THROW(ellipsoid::initial_state(p, cfg));
  const auto d = ellipsoid::default_initial_state(p, 1.0);
  EXPECT_NEAR(d.x[0], std::sqrt(1.0 - 0.25), 1e-15);
}

TEST(EllipsoidSde, SphereMeanDecay) {
  // At c = 1 the last coordinate has linear drift, so E[Y_t] = y0 exp(-n t/2).
  const EllipsoidParams p{2, 1.0};
  SimConfig cfg;
  cfg.paths = 10000;
  cfg.seed = 17;
  cfg.y0 = 0.6;
  const auto z = ellipsoid::sample_z_terminal(p, cfg);
  std::vector<double> y(cfg.paths);
  for (std::size_t k = 0; k < cfg.paths; ++k) y[k] = z[k * 3 + 2];
  const auto m = stats::sample_moments(y);
  const double target = 0.6 * std::exp(-1.0);
  EXPECT_LE(std::abs(m.mean - target), 3.0 * std::sqrt(m.variance / cfg.paths));
}

TEST(EllipsoidSde, QuadraticVariationMatchesIntegratedDiffusion) {
  const EllipsoidParams p{3, 2.0};
  SimConfig cfg;
  cfg.paths = 200;
  cfg.seed = 23;
  for (const auto& ap : ellipsoid::simulate_z(p, cfg)) {
    for (int i = 0; i <= p.n; ++i) {
      const auto comp = ap.path.component(i);
      double integral = 0.0;
      for (std::size_t k = 0; k + 1 < ap.path.size(); ++k) {
        const auto s = ellipsoid::diffusion_matrix(AmbientState::from_stacked(ap.path.state(k)), p);
        integral += (s * s.transpose())(i, i) * cfg.dt;
      }
      const double qv = stats::realized_qv(comp);
      // Relative fluctuation of a realized QV over 1000 steps is about sqrt(2/1000).
      ASSERT_NEAR(qv, integral, 6.0 * std::sqrt(2.0 * cfg.dt) * std::max(integral, 0.05));
    }
  }
}

TEST(EllipsoidSde, ProjectionFailureIsNumericalError) {
  const EllipsoidParams p{2, 1.0};
  auto z = ellipsoid::default_initial_state(p).stacked();
  const std::vector<double> kick{0.0, 50.0, 0.0};
  EXPECT_THROW(ellipsoid::euler_step({z.data(), 3}, kick, 1.0, p), NumericalError);
}
