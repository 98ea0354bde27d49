// SPDX-License-Identifier: Apache-2.0
#include "ebm/params.hpp"

#include <cmath>
#include <string>

#include "ebm/errors.hpp"

namespace ebm {

void EllipsoidParams::validate() const {
  if (n < 2) throw ConfigError("n must be >= 2, got " + std::to_string(n));
  if (!std::isfinite(c) || c <= 0.0)
    throw ConfigError("c must be finite and > 0, got " + std::to_string(c));
}

void SimConfig::validate() const {
  if (!std::isfinite(dt) || dt <= 0.0) throw ConfigError("dt must be > 0");
  if (!std::isfinite(t_end) || t_end <= 0.0) throw ConfigError("t_end must be > 0");
  if (dt >= t_end) throw ConfigError("dt must be smaller than t_end");
  if (paths == 0) throw ConfigError("paths must be >= 1");
}

std::size_t SimConfig::steps() const {
  return static_cast<std::size_t>(std::llround(t_end / dt));
}

}  // namespace ebm
