// SPDX-License-Identifier: Apache-2.0
#pragma once

// Brownian motion on the hyperellipsoid |x|^2 + y^2/c^2 = 1, written as the
// Ito SDE dZ = sigma(Z) dB + b(Z) dt in R^{n+1} with
//
//   sigma(z) = I - nu nu^T,   nu = (c^2 x, y) / r,   r = sqrt(|x|^2 c^4 + y^2),
//   b(z)     = -1/2 ((n-1) r^2 + c^2) / r^4 * (c^4 x, c^2 y).

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "ebm/params.hpp"
#include "ebm/trajectory.hpp"

namespace ebm::ellipsoid {

/// Tolerance for |x|^2 + y^2/c^2 = 1.
inline constexpr double kMembershipTolerance = 1e-9;

struct AmbientState {
  Eigen::VectorXd x;
  double y = 0.0;

  /// Packs (x_1, ..., x_n, y).
  Eigen::VectorXd stacked() const;
  static AmbientState from_stacked(std::span<const double> z);
};

/// |x|^2 + y^2/c^2 - 1.
double membership_defect(const AmbientState& z, const EllipsoidParams& p);

/// sqrt(|x|^2 c^4 + y^2).
double radius(const AmbientState& z, const EllipsoidParams& p);

/// The scaled unit normal nu(z) = (c^2 x, y) / r.
Eigen::VectorXd unit_normal(const AmbientState& z, const EllipsoidParams& p);

Eigen::MatrixXd diffusion_matrix(const AmbientState& z, const EllipsoidParams& p);
Eigen::VectorXd drift_vector(const AmbientState& z, const EllipsoidParams& p);

/// Rescales (x, y/c) to unit length. Throws NumericalError if the point is
/// too far off the surface for a radial projection to be meaningful.
AmbientState project(const AmbientState& z, const EllipsoidParams& p);

/// x0 = (sqrt(1 - y0^2/c^2), 0, ..., 0), y = y0. Requires |y0| < c.
AmbientState default_initial_state(const EllipsoidParams& p, double y0 = 0.0);

/// Resolves cfg.z0 / cfg.y0 and checks the surface and X_0 != 0 conditions.
AmbientState initial_state(const EllipsoidParams& p, const SimConfig& cfg);

/// One Euler-Maruyama step followed by radial re-projection, in place on the
/// packed state z = (x, y). dB holds n+1 Brownian increments over dt.
void euler_step(std::span<double> z, std::span<const double> dB, double dt,
                const EllipsoidParams& p);

/// One path with its driving increments.
AmbientPath simulate_z_path(const EllipsoidParams& p, const SimConfig& cfg,
                            std::uint64_t path_index);

/// cfg.paths independent paths, ordered by path index.
std::vector<AmbientPath> simulate_z(const EllipsoidParams& p, const SimConfig& cfg);

/// Terminal states only, packed row-major as paths x (n+1).
std::vector<double> sample_z_terminal(const EllipsoidParams& p, const SimConfig& cfg);

}  // namespace ebm::ellipsoid
