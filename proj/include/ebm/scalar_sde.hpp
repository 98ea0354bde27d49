// SPDX-License-Identifier: Apache-2.0
#pragma once

// Euler-Maruyama for scalar diffusions on an open interval (lo, hi) whose
// endpoints are never reached by the exact process. A step whose proposal
// leaves the interval is rejected and replaced by two half steps; the two
// half-step increments are drawn from the Brownian bridge conditioned on the
// original increment, so the driving path is refined rather than resampled.

#include <cmath>
#include <string>

#include "ebm/errors.hpp"
#include "ebm/rng.hpp"

namespace ebm {

/// Maximum number of successive halvings of one grid step.
inline constexpr int kMaxHalvings = 40;

struct DriftDiffusion {
  double diffusion;
  double drift;
};

/// Coefficients(x) must return DriftDiffusion for x in (lo, hi).
template <typename Coefficients>
double advance_in_interval(double x, double dt, double dw, double lo, double hi,
                           const Coefficients& coeffs, PathRng& rng, int depth = 0) {
  const DriftDiffusion cd = coeffs(x);
  const double proposal = x + cd.diffusion * dw + cd.drift * dt;
  if (proposal > lo && proposal < hi) return proposal;
  if (depth >= kMaxHalvings)
    throw NumericalError("step-size underflow: " + std::to_string(kMaxHalvings) +
                         " halvings could not keep the path inside the state space");
  const double half = 0.5 * dt;
  const double dw1 = 0.5 * dw + std::sqrt(0.25 * dt) * rng.normal();
  const double mid = advance_in_interval(x, half, dw1, lo, hi, coeffs, rng, depth + 1);
  return advance_in_interval(mid, half, dw - dw1, lo, hi, coeffs, rng, depth + 1);
}

}  // namespace ebm
