// SPDX-License-Identifier: Apache-2.0
#pragma once

// Elliptic integrals of the second kind in the parameter convention
//
//   E(phi | m) = \int_0^phi sqrt(1 - m sin^2 t) dt,   m < 1,
//
// evaluated through Carlson's symmetric forms, which stay valid for m < 0.

namespace ebm::elliptic {

/// Relative accuracy targeted by every routine in this header.
inline constexpr double kTolerance = 1e-12;

/// Carlson's R_F(x, y, z); at most one argument may be zero.
double carlson_rf(double x, double y, double z);

/// Carlson's R_D(x, y, z); x + y > 0, z > 0.
double carlson_rd(double x, double y, double z);

/// Incomplete integral E(phi | m) for |phi| <= pi/2, m < 1.
/// Throws DomainError outside that range.
double ellip_e_inc(double phi, double m);

/// Complete integral E(m) = E(pi/2 | m).
double ellip_e_complete(double m);

/// The amplitude phi in [-pi/2, pi/2] with E(phi | m) = target.
/// Throws DomainError if |target| > E(m).
double ellip_e_invert(double target, double m);

}  // namespace ebm::elliptic
