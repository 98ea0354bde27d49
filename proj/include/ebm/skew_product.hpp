// SPDX-License-Identifier: Apache-2.0
#pragma once

// Skew-product structure of the ellipsoid Brownian motion: the random clock
//
//   S_t = \int_0^t c^2 / (c^2 - Y_s^2) ds,   T = S^{-1},
//
// the angular process Vhat_u = X_{T_u} / |X_{T_u}| (a Brownian motion on
// S^{n-1}), and the reconstruction X_t = sqrt(1 - Y_t^2/c^2) Vhat_{S_t}.

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "ebm/params.hpp"
#include "ebm/trajectory.hpp"

namespace ebm::skew {

/// S sampled on a path's time grid; T is its piecewise-linear inverse.
class TimeChangeMap {
 public:
  /// Both sequences strictly increasing and of equal length >= 2.
  TimeChangeMap(std::vector<double> grid, std::vector<double> s_values);

  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& s_values() const { return s_; }
  double horizon() const { return s_.back(); }

  /// S(t) for t in [grid.front(), grid.back()].
  double forward(double t) const;
  /// T(u) for u in [0, horizon()].
  double inverse(double u) const;

 private:
  std::vector<double> grid_;
  std::vector<double> s_;
};

/// Cumulative trapezoidal integral of c^2/(c^2 - Y^2). Throws DomainError if
/// the path touches +-c.
TimeChangeMap build_time_change(const Trajectory& y_path, const EllipsoidParams& p);

struct XCoefficients {
  Eigen::MatrixXd diffusion;
  Eigen::VectorXd drift;
};

/// Coefficients of the closed SDE for X written in terms of |X| alone:
///   diffusion = I - (1 - q)/|x|^2 x x^T,  q = sqrt((1 - |x|^2)/((c^2-1)|x|^2 + 1)),
///   drift     = -(x/2) ((n-1)(c^4-c^2)|x|^2 + n c^2) / ((c^2-1)|x|^2 + 1)^2.
/// Throws DegenerateError at x = 0, DomainError for |x| > 1.
XCoefficients x_coefficients(const Eigen::VectorXd& x, const EllipsoidParams& p);

enum class ChangedTimeGrid {
  kUniform,  // u_j = j du, X interpolated linearly at T(u_j)
  kNative,   // u_k = S(t_k), no interpolation
};

struct VhatOptions {
  ChangedTimeGrid grid = ChangedTimeGrid::kUniform;
  double du = 0.0;  // 0: use the path's dt
};

/// The Y column of an ambient path.
Trajectory last_coordinate(const Trajectory& z_path);

/// Vhat on a grid in changed time. Throws GridMismatchError if z_path and
/// tmap do not share a grid, DegenerateError if |X| vanishes.
Trajectory extract_vhat(const Trajectory& z_path, const TimeChangeMap& tmap,
                        VhatOptions options = {});

/// Vhat at changed time u: the stored state when u is a node, otherwise the
/// normalized linear interpolant of the neighbouring states.
Eigen::VectorXd vhat_at(const Trajectory& vhat, double u);

/// X on y_path's grid from sqrt(1 - Y_t^2/c^2) Vhat_{S_t}. Throws
/// GridMismatchError when y_path is not on tmap's grid or vhat does not
/// cover [0, S_end].
Trajectory reconstruct_x(const Trajectory& y_path, const Trajectory& vhat,
                         const TimeChangeMap& tmap, const EllipsoidParams& p);

/// max_k |X_k - reconstructed X_k| for a simulated ambient path.
double pathwise_reconstruction_error(const Trajectory& z_path, const EllipsoidParams& p,
                                     VhatOptions options);

/// Brownian motion on the unit sphere in R^dim (Stroock form, Euler step then
/// normalization) on [0, horizon] with spacing du; the last step is shortened
/// to land on horizon exactly.
Trajectory simulate_sphere_bm(std::span<const double> v0, double horizon, double du,
                              std::uint64_t seed, std::uint64_t path_index);

/// X_{t_end} built from an independently simulated Y path and an independent
/// spherical Brownian motion run for the clock S_{t_end} of that Y path.
/// Packed row-major as paths x n.
std::vector<double> sample_glued_terminal_x(const EllipsoidParams& p, const SimConfig& cfg);

}  // namespace ebm::skew
