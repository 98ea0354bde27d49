// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "ebm/ellipsoid_sde.hpp"
#include "ebm/errors.hpp"
#include "ebm/stat_verify.hpp"
#include "ebm/y_marginal.hpp"
#include "oracles.hpp"

using namespace ebm;

TEST(YMarginal, CoefficientExamples) {
  for (double c : {0.3, 1.0, 7.0}) {
    const auto zero = ymarg::y_coefficients(0.0, {3, c});
    EXPECT_NEAR(zero.diffusion, 1.0, 1e-15);
    EXPECT_EQ(zero.drift, 0.0);
  }
  const auto sphere = ymarg::y_coefficients(0.5, {3, 1.0});
  EXPECT_NEAR(sphere.diffusion, std::sqrt(0.75), 1e-15);
  EXPECT_NEAR(sphere.drift, -0.75, 1e-15);
  const auto e = ymarg::y_coefficients(1.0, {2, 2.0});
  EXPECT_NEAR(e.diffusion, std::sqrt(12.0 / 13.0), 1e-15);
  EXPECT_NEAR(e.drift, -34.0 / 169.0, 1e-15);
  EXPECT_THROW(ymarg::y_coefficients(2.0, {2, 2.0}), DomainError);
  EXPECT_THROW(ymarg::y_coefficients(-2.5, {2, 2.0}), DomainError);
}

TEST(YMarginal, AgreesWithAmbientLastRow) {
  std::mt19937_64 gen(8);
  for (auto [n, c] : {std::pair{2, 0.5}, {3, 2.0}, {5, 10.0}}) {
    const EllipsoidParams p{n, c};
    std::uniform_real_distribution<double> yd(-c, c);
    for (int k = 0; k < 1000; ++k) {
      const double y = yd(gen);
      ellipsoid::AmbientState z{Eigen::VectorXd::Zero(n), y};
      z.x[0] = std::sqrt(1.0 - y * y / (c * c));
      const auto s = ellipsoid::diffusion_matrix(z, p);
      const auto b = ellipsoid::drift_vector(z, p);
      const auto yc = ymarg::y_coefficients(y, p);
      ASSERT_NEAR(yc.diffusion * yc.diffusion, s.row(n).squaredNorm(), 1e-12);
      ASSERT_NEAR(yc.drift, b[n], 1e-12);
      ASSERT_NEAR(yc.diffusion * yc.diffusion, oracle::y_diffusion_sq(y, c), 1e-12);
      ASSERT_NEAR(yc.drift, oracle::y_drift(y, c, n), 1e-12);
    }
  }
}

TEST(YMarginal, ScaleDensity) {
  for (int n : {2, 3, 4})
    for (double c : {0.5, 1.0, 2.0}) {
      const EllipsoidParams p{n, c};
      EXPECT_NEAR(ymarg::scale_density(0.0, p), std::pow(c, 1.0 - n), 1e-14);
      for (int k = 0; k < 1000; ++k) {
        const double xi = c * (1.0 - std::pow(10.0, -6.0 * k / 999.0)) * (k % 2 ? 1 : -1);
        const double s = ymarg::scale_density(xi, p);
        ASSERT_GT(s, 0.0);
        ASSERT_EQ(s, ymarg::scale_density(-xi, p));
        const double bound = std::min(c, c * c) / c * std::pow(c * c - xi * xi, -0.5 * n);
        ASSERT_GE(s, bound * (1.0 - 1e-10));
        ASSERT_NEAR(s, oracle::scale_density(xi, c, n), 1e-12 * s);
      }
    }
  for (double xi : {0.1, 0.7, -0.95})
    EXPECT_NEAR(ymarg::scale_density(xi, {3, 1.0}), std::pow(1.0 - xi * xi, -1.5), 1e-12);
  EXPECT_THROW(ymarg::scale_density(1.0, {3, 1.0}), DomainError);
}

TEST(YMarginal, NonattainabilityIntegral) {
  // n = 2, c = 1: the integrand is 1/(1 - xi^2), so the integral is
  // artanh(1 - eps) = log((2 - eps)/eps)/2.
  for (double eps : {0.5, 1e-2, 1e-4, 1e-8}) {
    const double ref = 0.5 * std::log((2.0 - eps) / eps);
    EXPECT_NEAR(ymarg::nonattainability_integral({2, 1.0}, eps), ref, 1e-12 * ref);
  }
  const double mid = ymarg::nonattainability_integral({3, 2.0}, 1.0);
  EXPECT_TRUE(std::isfinite(mid));
  EXPECT_GT(mid, 0.0);
  EXPECT_GE(ymarg::nonattainability_integral({4, 2.0}, 1e-3) /
                ymarg::nonattainability_integral({4, 2.0}, 1e-2),
            5.0);
  // Log growth for n = 2: each factor 100 in eps adds ln(100)/(2c) asymptotically.
  for (double c : {0.5, 1.0, 2.0}) {
    const EllipsoidParams p{2, c};
    const double d1 = ymarg::nonattainability_integral(p, 1e-6) -
                      ymarg::nonattainability_integral(p, 1e-4);
    EXPECT_NEAR(d1, std::log(100.0) / (2.0 * c), 1e-3);
  }
  EXPECT_THROW(ymarg::nonattainability_integral({2, 1.0}, 1.0), DomainError);
  EXPECT_THROW(ymarg::nonattainability_integral({2, 1.0}, 0.0), DomainError);
}

TEST(YMarginal, DriftOnlyFromCentre) {
  // y = 0 has zero drift; with zero noise the path stays put.
  const auto c = ymarg::y_coefficients(0.0, {4, 3.0});
  EXPECT_EQ(0.0 + c.drift * 1e-3, 0.0);
}

TEST(YMarginal, PathsStayInside) {
  for (double c : {0.5, 2.0}) {
    const EllipsoidParams p{2, c};
    SimConfig cfg;
    cfg.paths = 200;
    cfg.seed = 3;
    cfg.dt = 1e-2;
    cfg.y0 = 0.9 * c;
    for (const auto& path : ymarg::simulate_y(p, cfg)) {
      ASSERT_EQ(path.size(), cfg.steps() + 1);
      for (double y : path.values) ASSERT_LT(std::abs(y), c);
    }
  }
}

TEST(YMarginal, SummaryMatchesPaths) {
  const EllipsoidParams p{3, 1.5};
  SimConfig cfg;
  cfg.paths = 50;
  cfg.seed = 9;
  const auto paths = ymarg::simulate_y(p, cfg);
  const auto summary = ymarg::sample_y_summary(p, cfg);
  ASSERT_EQ(summary.size(), paths.size());
  for (std::size_t k = 0; k < paths.size(); ++k) {
    double m = 0.0;
    for (double y : paths[k].values) m = std::max(m, std::abs(y));
    EXPECT_EQ(summary[k].terminal, paths[k].values.back());
    EXPECT_EQ(summary[k].max_abs, m);
  }
}

TEST(YMarginal, NoiseRow) {
  std::mt19937_64 gen(12);
  std::normal_distribution<double> g;
  for (double c : {0.5, 1.0, 3.0})
    for (int k = 0; k < 1000; ++k) {
      Eigen::Vector4d w(g(gen), g(gen), g(gen), g(gen));
      w.normalize();
      std::vector<double> z{w[0], w[1], w[2], c * w[3]};
      const auto a = ymarg::noise_row(z, c);
      double s = 0.0;
      for (double v : a) s += v * v;
      ASSERT_NEAR(s, 1.0, 1e-12);
    }
  EXPECT_THROW(ymarg::noise_row(std::vector<double>{0.0, 0.0, 2.0}, 2.0), DegenerateError);
}

TEST(YMarginal, ReconstructedNoiseIsBrownian) {
  const EllipsoidParams p{3, 2.0};
  SimConfig cfg;
  cfg.paths = 50;
  cfg.seed = 31;
  std::vector<double> pooled;
  for (const auto& ap : ellipsoid::simulate_z(p, cfg)) {
    const auto b = ymarg::reconstruct_scalar_noise(ap);
    const double qv = stats::realized_qv(b);
    const double band = 5.0 / std::sqrt(static_cast<double>(cfg.steps()));
    ASSERT_GE(qv, 1.0 - band);
    ASSERT_LE(qv, 1.0 + band);
    for (double d : stats::increments(b.values)) pooled.push_back(d / std::sqrt(cfg.dt));
  }
  // 5e4 standardized increments: kurtosis SE is about sqrt(24/N) = 0.022.
  EXPECT_NEAR(stats::kurtosis(pooled), 3.0, 0.11);
  const auto r = stats::moment_check({pooled, "B~ increments"}, 0.0, 1.0);
  EXPECT_TRUE(r.passed) << r.statistic;
}

TEST(YMarginal, MatchesAmbientMarginal) {
  for (int n : {2, 3})
    for (double c : {0.5, 1.0, 2.0}) {
      const EllipsoidParams p{n, c};
      SimConfig cfg;
      cfg.paths = 4000;
      cfg.seed = 1000 + 10 * n + static_cast<int>(4 * c);
      cfg.y0 = 0.3 * c;
      const auto z = ellipsoid::sample_z_terminal(p, cfg);
      std::vector<double> yz(cfg.paths), yy;
      for (std::size_t k = 0; k < cfg.paths; ++k) yz[k] = z[k * (n + 1) + n];
      for (const auto& s : ymarg::sample_y_summary(p, cfg)) yy.push_back(s.terminal);
      const auto r = stats::ks_two_sample({yz, "ambient Y"}, {yy, "direct Y"});
      EXPECT_TRUE(r.passed) << "n=" << n << " c=" << c << " D=" << r.statistic;
    }
}

TEST(YMarginal, InvalidStart) {
  SimConfig cfg;
  cfg.y0 = 2.0;
  EXPECT_THROW(ymarg::simulate_y_path({2, 2.0}, cfg, 0), ConfigError);
}
