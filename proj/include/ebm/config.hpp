// SPDX-License-Identifier: Apache-2.0
#pragma once

// Flat "key = value" run configuration. Lines starting with '#' and blank
// lines are ignored. Recognized keys:
//   n, c, dt, t_end, paths, seed, workers, y0, xi0, z0 (comma-separated)

#include <iosfwd>
#include <map>
#include <string>

#include "ebm/params.hpp"

namespace ebm {

struct RunSettings {
  EllipsoidParams params;
  SimConfig sim;

  /// Throws ConfigError on any invalid field.
  void validate() const;
};

using KeyValues = std::map<std::string, std::string>;

/// Throws ConfigError on malformed lines or duplicate keys.
KeyValues parse_key_values(std::istream& is);

/// Sets one field from its textual value with typed validation.
void apply_setting(RunSettings& settings, const std::string& key, const std::string& value);

void apply_settings(RunSettings& settings, const KeyValues& kv);

}  // namespace ebm
