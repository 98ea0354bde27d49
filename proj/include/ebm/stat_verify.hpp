// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ebm/trajectory.hpp"

namespace ebm::stats {

struct SampleSet {
  std::vector<double> values;
  std::string label;

  /// Throws DomainError if empty or any value is not finite.
  void validate() const;
};

/// Outcome of one verification. passed == (statistic <= threshold).
struct TestReport {
  std::string name;
  std::string description;
  double statistic = 0.0;
  double threshold = 0.0;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  bool passed = false;
  std::uint64_t seed = 0;

  static TestReport make(std::string name, std::string description, double statistic,
                         double threshold, std::size_t n1 = 0, std::size_t n2 = 0,
                         std::uint64_t seed = 0);
};

void to_json(nlohmann::json& j, const TestReport& r);

/// c(alpha) = sqrt(-ln(alpha/2) / 2); c(0.01) = 1.6276.
double ks_critical_coefficient(double alpha);

/// sup_x |F_a(x) - F_b(x)| over the pooled sample.
double ks_statistic(std::span<const double> a, std::span<const double> b);

/// Asymptotic two-sample Kolmogorov-Smirnov test at level alpha.
TestReport ks_two_sample(const SampleSet& a, const SampleSet& b, double alpha = 0.01);

/// Sum of squared increments.
double realized_qv(std::span<const double> path);
double realized_qv(const Trajectory& path);

/// Pearson correlation of the pairs (da_k, db_{k+lag}) for every lag, where
/// da and db are increment sequences. Several independent segments (paths)
/// may be pooled; pairs never straddle two segments.
std::vector<double> lagged_increment_correlation(
    std::span<const std::vector<double>> a_increments,
    std::span<const std::vector<double>> b_increments, std::span<const int> lags);

/// Increment correlation of two scalar paths on the same grid.
std::vector<double> increment_cross_correlation(const Trajectory& a, const Trajectory& b,
                                                std::span<const int> lags);

/// First differences of a sequence.
std::vector<double> increments(std::span<const double> path);

/// Passes iff the sample mean is within 3 standard errors of target_mean and
/// the sample variance is within 3 normal-theory standard errors of
/// target_var. Requires at least 100 values.
TestReport moment_check(const SampleSet& s, double target_mean, double target_var);

struct Moments {
  double mean = 0.0;
  double variance = 0.0;  // unbiased
};
Moments sample_moments(std::span<const double> v);

/// Excess-free kurtosis E[(x - mean)^4] / var^2.
double kurtosis(std::span<const double> v);

}  // namespace ebm::stats
