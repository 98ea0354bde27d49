// SPDX-License-Identifier: Apache-2.0
#include "ebm/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "ebm/errors.hpp"

namespace ebm::elliptic {
namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kEps = std::numeric_limits<double>::epsilon();

void check_parameter(double m, const char* fn) {
  if (std::isnan(m) || !(m < 1.0))
    throw DomainError(std::string(fn) + ": parameter m must be < 1");
}

int zero_count(double x, double y, double z) {
  return (x == 0.0 ? 1 : 0) + (y == 0.0 ? 1 : 0) + (z == 0.0 ? 1 : 0);
}

}  // namespace

// Duplication algorithm of Carlson (1995) with the fifth-order tail; the
// stopping rule bounds the truncation error by about eps.
double carlson_rf(double x, double y, double z) {
  if (!(x >= 0.0 && y >= 0.0 && z >= 0.0) || zero_count(x, y, z) > 1)
    throw DomainError("carlson_rf: arguments must be >= 0 with at most one zero");

  const double a0 = (x + y + z) / 3.0;
  const double q = std::pow(3.0 * kEps, -1.0 / 6.0) *
                   std::max({std::abs(a0 - x), std::abs(a0 - y), std::abs(a0 - z)});
  const double x0 = x, y0 = y;
  double a = a0;
  double scale = 1.0;  // 4^{-k}
  while (q * scale >= std::abs(a)) {
    const double sx = std::sqrt(x), sy = std::sqrt(y), sz = std::sqrt(z);
    const double lambda = sx * sy + sy * sz + sz * sx;
    x = 0.25 * (x + lambda);
    y = 0.25 * (y + lambda);
    z = 0.25 * (z + lambda);
    a = 0.25 * (a + lambda);
    scale *= 0.25;
  }
  const double dx = (a0 - x0) * scale / a;
  const double dy = (a0 - y0) * scale / a;
  const double dz = -dx - dy;
  const double e2 = dx * dy - dz * dz;
  const double e3 = dx * dy * dz;
  return (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) /
         std::sqrt(a);
}

double carlson_rd(double x, double y, double z) {
  if (!(x >= 0.0 && y >= 0.0 && z > 0.0) || x + y == 0.0)
    throw DomainError("carlson_rd: need x, y >= 0, x + y > 0, z > 0");

  const double a0 = (x + y + 3.0 * z) / 5.0;
  const double q = std::pow(0.25 * kEps, -1.0 / 6.0) *
                   std::max({std::abs(a0 - x), std::abs(a0 - y), std::abs(a0 - z)});
  const double x0 = x, y0 = y;
  double a = a0;
  double scale = 1.0;
  double tail = 0.0;
  while (q * scale >= std::abs(a)) {
    const double sx = std::sqrt(x), sy = std::sqrt(y), sz = std::sqrt(z);
    const double lambda = sx * sy + sy * sz + sz * sx;
    tail += scale / (sz * (z + lambda));
    x = 0.25 * (x + lambda);
    y = 0.25 * (y + lambda);
    z = 0.25 * (z + lambda);
    a = 0.25 * (a + lambda);
    scale *= 0.25;
  }
  const double dx = (a0 - x0) * scale / a;
  const double dy = (a0 - y0) * scale / a;
  const double dz = -(dx + dy) / 3.0;
  const double xy = dx * dy;
  const double z2 = dz * dz;
  const double e2 = xy - 6.0 * z2;
  const double e3 = (3.0 * xy - 8.0 * z2) * dz;
  const double e4 = 3.0 * (xy - z2) * z2;
  const double e5 = xy * z2 * dz;
  const double series = 1.0 - 3.0 * e2 / 14.0 + e3 / 6.0 + 9.0 * e2 * e2 / 88.0 -
                        3.0 * e4 / 22.0 - 9.0 * e2 * e3 / 52.0 + 3.0 * e5 / 26.0;
  return 3.0 * tail + scale * series / (a * std::sqrt(a));
}

double ellip_e_inc(double phi, double m) {
  check_parameter(m, "ellip_e_inc");
  if (std::isnan(phi) || std::abs(phi) > kHalfPi)
    throw DomainError("ellip_e_inc: amplitude must lie in [-pi/2, pi/2]");
  if (phi == 0.0) return phi;

  const double s = std::sin(phi);
  const double c = std::cos(phi);
  const double s2 = s * s;
  const double delta2 = 1.0 - m * s2;
  return s * carlson_rf(c * c, delta2, 1.0) -
         (m / 3.0) * s * s2 * carlson_rd(c * c, delta2, 1.0);
}

double ellip_e_complete(double m) {
  check_parameter(m, "ellip_e_complete");
  if (m == 0.0) return kHalfPi;
  const double k2c = 1.0 - m;
  return carlson_rf(0.0, k2c, 1.0) - (m / 3.0) * carlson_rd(0.0, k2c, 1.0);
}

// Safeguarded Newton: E is strictly increasing in phi with derivative
// sqrt(1 - m sin^2 phi) > 0, so [lo, hi] always brackets the root.
double ellip_e_invert(double target, double m) {
  check_parameter(m, "ellip_e_invert");
  const double full = ellip_e_complete(m);
  if (std::isnan(target) || std::abs(target) > full * (1.0 + 4.0 * kEps))
    throw DomainError("ellip_e_invert: |target| exceeds the complete integral");
  if (target >= full) return kHalfPi;
  if (target <= -full) return -kHalfPi;
  if (target == 0.0) return 0.0;

  double lo = -kHalfPi, hi = kHalfPi;
  double phi = target / full * kHalfPi;
  for (int iter = 0; iter < 200; ++iter) {
    const double residual = ellip_e_inc(phi, m) - target;
    if (residual == 0.0) return phi;
    if (residual > 0.0)
      hi = phi;
    else
      lo = phi;
    const double s = std::sin(phi);
    double next = phi - residual / std::sqrt(1.0 - m * s * s);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - phi) <= 2.0 * kEps * std::max(1.0, std::abs(phi))) return next;
    phi = next;
  }
  return phi;
}

}  // namespace ebm::elliptic
