// SPDX-License-Identifier: Apache-2.0
#pragma once

// The map f : [-c, c] -> [0, 1] turning Y into a Wright-Fisher type diffusion
//
//   dF = h(c) sqrt(F (1 - F)) dB~ + gamma(F) dt,   F = f(Y),
//
// with
//   h(c)  = pi / (2 c E(1 - 1/c^2)),
//   f(xi) = cos^2(pi/4 - (c/2) h(c) E(arcsin(xi/c) | 1 - 1/c^2)).

#include <cstdint>
#include <vector>

#include "ebm/params.hpp"
#include "ebm/scalar_sde.hpp"
#include "ebm/trajectory.hpp"

namespace ebm::wf {

/// Immutable per-c constants of the transform.
struct TransformSpec {
  double c = 1.0;
  double m = 0.0;  // elliptic parameter 1 - 1/c^2
  double h = 1.0;

  /// Throws DomainError unless c > 0.
  static TransformSpec make(double c);

  /// n h^2 / 4, the magnitude of the drift at either boundary.
  double boundary_drift(int n) const { return n * h * h / 4.0; }
};

double h_of_c(double c);

double f_transform(double xi, const TransformSpec& spec);

/// 1 - f(xi), evaluated without cancellation near xi = c.
double f_complement(double xi, const TransformSpec& spec);

/// The amplitude arcsin(f^{-1}(u) / c) in [-pi/2, pi/2].
double inverse_amplitude(double u, const TransformSpec& spec);

double f_inverse(double u, const TransformSpec& spec);

/// Closed-form derivative f'(xi) for |xi| < c.
double f_prime(double xi, const TransformSpec& spec);

/// r(u) = y / sqrt((y^2 + c^4 - y^2 c^2)(c^2 - y^2) u (1 - u)), y = f^{-1}(u).
/// Throws DomainError unless 0 < u < 1.
double r_factor(double u, const TransformSpec& spec);

/// gamma(u) = h^2/4 (1 - 2u) - (c h (n-1)/2) r(u) u (1 - u).
double gamma_drift(double u, const EllipsoidParams& p, const TransformSpec& spec);

/// f'(xi) sqrt((c^4 - xi^2 c^2)/(xi^2 + c^4 - xi^2 c^2)) - h sqrt(f (1 - f)).
double ode_residual(double xi, const TransformSpec& spec);

DriftDiffusion wf_coefficients(double u, const EllipsoidParams& p, const TransformSpec& spec);

/// Fast evaluation of gamma_drift for simulation. gamma is analytic in
/// sqrt(u) near u = 0 and in sqrt(1 - u) near u = 1, so each half of (0, 1)
/// is mapped to [0, 1/sqrt(2)] through the matching root and covered by
/// piecewise Chebyshev interpolants. The degree is raised until the table
/// agrees with gamma_drift to max_error (relative to max(1, n h^2/4)) at
/// off-node check points; construction throws NumericalError otherwise.
class GammaTable {
 public:
  GammaTable(const EllipsoidParams& p, const TransformSpec& spec, double max_error = 1e-12);

  double operator()(double u) const;

  std::size_t degree() const { return degree_; }
  /// Largest deviation from gamma_drift seen at the check points.
  double checked_error() const { return checked_error_; }

 private:
  static constexpr std::size_t kPieces = 8;

  double eval_half(const std::vector<double>& coeffs, double root) const;

  std::size_t degree_ = 0;
  std::vector<double> lower_;  // kPieces blocks of (degree_ + 1) coefficients
  std::vector<double> upper_;
  double checked_error_ = 0.0;
};

Trajectory simulate_wf_path(const EllipsoidParams& p, const TransformSpec& spec,
                            const SimConfig& cfg, std::uint64_t path_index);
std::vector<Trajectory> simulate_wf(const EllipsoidParams& p, const TransformSpec& spec,
                                    const SimConfig& cfg);

/// F at t_end for every path.
std::vector<double> sample_wf_terminal(const EllipsoidParams& p, const TransformSpec& spec,
                                       const SimConfig& cfg);

}  // namespace ebm::wf
