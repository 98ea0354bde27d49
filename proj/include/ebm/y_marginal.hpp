// SPDX-License-Identifier: Apache-2.0
#pragma once

// The last coordinate Y of the ellipsoid Brownian motion as a diffusion on
// (-c, c):
//
//   dY = sqrt(1 - Y^2/R^2) dB~ - (Y/2) c^2 ((n-1) R^2 + c^2) / R^4 dt,
//   R^2 = Y^2 + c^4 - Y^2 c^2.

#include <cstdint>
#include <vector>

#include "ebm/params.hpp"
#include "ebm/scalar_sde.hpp"
#include "ebm/trajectory.hpp"

namespace ebm::ymarg {

/// Throws DomainError unless |y| < c.
DriftDiffusion y_coefficients(double y, const EllipsoidParams& p);

Trajectory simulate_y_path(const EllipsoidParams& p, const SimConfig& cfg,
                           std::uint64_t path_index);
std::vector<Trajectory> simulate_y(const EllipsoidParams& p, const SimConfig& cfg);

struct PathSummary {
  double terminal = 0.0;
  double max_abs = 0.0;  // over every grid point of the path
};

/// Terminal value and running max |Y| per path, without storing the paths.
std::vector<PathSummary> sample_y_summary(const EllipsoidParams& p, const SimConfig& cfg);

/// s(xi) = (1/c) sqrt(c^4 - c^2 xi^2 + xi^2) (c^2 - xi^2)^{-n/2}.
double scale_density(double xi, const EllipsoidParams& p);

/// \int_0^{c - eps} s(xi) dxi. Grows without bound as eps -> 0, which is the
/// Feller-test witness that Y never reaches +c (and by symmetry -c).
double nonattainability_integral(const EllipsoidParams& p, double eps);

/// Row vector A = (-c^2 Y / (R^2 sqrt(1 - Y^2/R^2)) X^T, sqrt(1 - Y^2/R^2))
/// with R^2 = |X|^2 c^4 + Y^2, so that A A^T = 1 identically.
std::vector<double> noise_row(std::span<const double> z, double c);

/// B~_t = sum_k A(Z_{t_k}) dB_k along a simulated ambient path.
Trajectory reconstruct_scalar_noise(const AmbientPath& z_path);

}  // namespace ebm::ymarg
