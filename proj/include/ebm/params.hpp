// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace ebm {

/// The hyperellipsoid |x|^2 + y^2/c^2 = 1 in R^{n+1}.
struct EllipsoidParams {
  int n = 3;
  double c = 1.0;

  /// Throws ConfigError unless n >= 2 and c is finite and positive.
  void validate() const;

  int ambient_dim() const { return n + 1; }
};

/// Discretization and sampling settings shared by every simulator.
struct SimConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  std::size_t paths = 10000;
  std::uint64_t seed = 0;
  unsigned workers = 0;  // 0: hardware concurrency

  // Initial conditions; each simulator uses the one it needs and falls back
  // to its default when unset.
  std::optional<std::vector<double>> z0;
  std::optional<double> y0;
  std::optional<double> xi0;

  void validate() const;

  /// Number of Euler steps covering [0, t_end].
  std::size_t steps() const;
};

}  // namespace ebm
