// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "ebm/elliptic.hpp"
#include "ebm/errors.hpp"
#include "oracles.hpp"

using namespace ebm::elliptic;

namespace {
constexpr double kHalfPi = std::numbers::pi / 2.0;

double rel(double got, double ref) { return std::abs(got - ref) / std::max(1.0, std::abs(ref)); }
}  // namespace

TEST(Elliptic, TrivialValues) {
  EXPECT_DOUBLE_EQ(ellip_e_inc(kHalfPi, 0.0), kHalfPi);
  EXPECT_NEAR(ellip_e_inc(0.7, 0.0), 0.7, 1e-15);
  EXPECT_EQ(ellip_e_inc(0.0, -3.0), 0.0);
  EXPECT_NEAR(ellip_e_complete(0.0), kHalfPi, 1e-15);
}

TEST(Elliptic, MatchesQuadratureAtNamedPoints) {
  EXPECT_LE(rel(ellip_e_inc(kHalfPi, 0.75), oracle::ellip_e(kHalfPi, 0.75)), 1e-12);
  EXPECT_LE(rel(ellip_e_inc(0.5, -3.0), oracle::ellip_e(0.5, -3.0)), 1e-12);
  EXPECT_LE(rel(ellip_e_complete(0.75), oracle::ellip_e(kHalfPi, 0.75)), 1e-12);
  EXPECT_LE(rel(ellip_e_complete(-3.0), oracle::ellip_e(kHalfPi, -3.0)), 1e-12);
}

TEST(Elliptic, OracleGrid) {
  std::vector<double> ms{-10.0, -1.0, 0.0, 0.5, 0.99};
  for (int j = 0; ms.size() < 20; ++j) ms.push_back(-9.5 + 10.4 * j / 14.0);
  for (double m : ms)
    for (int i = 0; i < 50; ++i) {
      const double phi = -kHalfPi + std::numbers::pi * i / 49.0;
      ASSERT_LE(rel(ellip_e_inc(phi, m), oracle::ellip_e(phi, m)), 1e-12) << phi << ' ' << m;
    }
}

TEST(Elliptic, Odd) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> phi(-kHalfPi, kHalfPi), m(-20.0, 0.999);
  for (int k = 0; k < 200; ++k) {
    const double p = phi(gen), mm = m(gen);
    EXPECT_NEAR(ellip_e_inc(-p, mm), -ellip_e_inc(p, mm), 1e-14);
  }
}

TEST(Elliptic, StrictlyIncreasing) {
  for (double m : {-10.0, 0.0, 0.75, 0.99}) {
    double prev = ellip_e_inc(-kHalfPi, m);
    for (int i = 1; i < 1000; ++i) {
      const double v = ellip_e_inc(-kHalfPi + std::numbers::pi * i / 999.0, m);
      ASSERT_GT(v, prev);
      prev = v;
    }
  }
}

TEST(Elliptic, CompleteEqualsIncompleteAtQuarterTurn) {
  for (double m : {-50.0, -3.0, 0.3, 0.9999}) {
    EXPECT_NEAR(ellip_e_complete(m), ellip_e_inc(kHalfPi, m), 1e-14 * ellip_e_complete(m));
    EXPECT_GT(ellip_e_complete(m), 0.0);
  }
}

TEST(Elliptic, InvertRoundTrip) {
  EXPECT_EQ(ellip_e_invert(0.0, 0.4), 0.0);
  EXPECT_NEAR(ellip_e_invert(kHalfPi, 0.0), kHalfPi, 1e-12);
  EXPECT_NEAR(ellip_e_invert(ellip_e_inc(0.9, 0.75), 0.75), 0.9, 1e-10);
  for (double m : {-10.0, -1.0, 0.0, 0.5, 0.99})
    for (int i = 0; i <= 400; ++i) {
      const double phi = -kHalfPi + std::numbers::pi * i / 400.0;
      const double target = ellip_e_inc(phi, m);
      const double back = ellip_e_invert(target, m);
      ASSERT_NEAR(back, phi, 1e-10) << m;
      ASSERT_LE(std::abs(ellip_e_inc(back, m) - target), 1e-12 * std::max(1.0, std::abs(target)));
    }
}

TEST(Elliptic, DomainErrors) {
  EXPECT_THROW(ellip_e_inc(0.3, 1.0), ebm::DomainError);
  EXPECT_THROW(ellip_e_inc(1.6, 0.2), ebm::DomainError);
  EXPECT_THROW(ellip_e_complete(1.5), ebm::DomainError);
  EXPECT_THROW(ellip_e_invert(ellip_e_complete(0.5) * 1.01, 0.5), ebm::DomainError);
}

TEST(Elliptic, CarlsonSpecialValues) {
  // R_F(x, x, x) = x^{-1/2}, R_D(x, x, x) = x^{-3/2}.
  EXPECT_NEAR(carlson_rf(4.0, 4.0, 4.0), 0.5, 1e-15);
  EXPECT_NEAR(carlson_rd(4.0, 4.0, 4.0), 0.125, 1e-15);
  // R_F(0, 1, 1) = pi/2.
  EXPECT_NEAR(carlson_rf(0.0, 1.0, 1.0), kHalfPi, 1e-14);
}
