// SPDX-License-Identifier: Apache-2.0
#pragma once

// Named verification suites driven by the `ebm verify` command. Each suite
// returns one TestReport per check; results depend only on the settings and
// seed, never on the worker count.

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ebm/config.hpp"
#include "ebm/stat_verify.hpp"
#include "ebm/trajectory.hpp"

namespace ebm::verify {

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<stats::TestReport> tests;

  bool passed() const;
};

void to_json(nlohmann::json& j, const SuiteReport& r);

/// coefficients, transform, boundary, skewprod, independence, sphere-collapse.
const std::vector<std::string>& suite_names();

/// Runs one suite, or every suite for "all". Throws ConfigError for an
/// unknown name.
SuiteReport run_suite(std::string_view name, const RunSettings& settings);

SuiteReport coefficients_suite(const RunSettings& s);
SuiteReport transform_suite(const RunSettings& s);
SuiteReport boundary_suite(const RunSettings& s);
SuiteReport skewprod_suite(const RunSettings& s);
SuiteReport independence_suite(const RunSettings& s);
SuiteReport sphere_collapse_suite(const RunSettings& s);

/// Weighted regression of dVhat on Vhat du over native changed-time grids:
/// slope = sum <dV, V> / sum du with a heteroscedasticity-robust standard
/// error. The SDE for Vhat predicts slope -(n-1)/2.
struct DriftRegression {
  double slope = 0.0;
  double standard_error = 0.0;
  std::size_t steps = 0;
};
DriftRegression vhat_drift_regression(const std::vector<Trajectory>& vhat_paths);

}  // namespace ebm::verify
