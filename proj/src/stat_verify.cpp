// SPDX-License-Identifier: Apache-2.0
#include "ebm/stat_verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ebm/errors.hpp"

namespace ebm::stats {

void SampleSet::validate() const {
  if (values.empty()) throw DomainError("sample '" + label + "' is empty");
  if (!std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); }))
    throw DomainError("sample '" + label + "' contains non-finite values");
}

TestReport TestReport::make(std::string name, std::string description, double statistic,
                            double threshold, std::size_t n1, std::size_t n2,
                            std::uint64_t seed) {
  TestReport r;
  r.name = std::move(name);
  r.description = std::move(description);
  r.statistic = statistic;
  r.threshold = threshold;
  r.n1 = n1;
  r.n2 = n2;
  r.passed = statistic <= threshold;
  r.seed = seed;
  return r;
}

void to_json(nlohmann::json& j, const TestReport& r) {
  j = nlohmann::json{{"name", r.name},
                     {"description", r.description},
                     {"statistic", r.statistic},
                     {"threshold", r.threshold},
                     {"n1", r.n1},
                     {"n2", r.n2},
                     {"passed", r.passed},
                     {"seed", r.seed}};
}

double ks_critical_coefficient(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("KS level must lie in (0, 1)");
  return std::sqrt(-0.5 * std::log(0.5 * alpha));
}

double ks_statistic(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw DomainError("ks_statistic: empty sample");
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < sa.size() && j < sb.size()) {
    // Advance through every copy of the smaller value so ties are handled.
    const double x = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] == x) ++i;
    while (j < sb.size() && sb[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

TestReport ks_two_sample(const SampleSet& a, const SampleSet& b, double alpha) {
  a.validate();
  b.validate();
  const double n1 = static_cast<double>(a.values.size());
  const double n2 = static_cast<double>(b.values.size());
  const double threshold = ks_critical_coefficient(alpha) * std::sqrt((n1 + n2) / (n1 * n2));
  return TestReport::make("ks_two_sample",
                          "two-sample KS: " + a.label + " vs " + b.label,
                          ks_statistic(a.values, b.values), threshold, a.values.size(),
                          b.values.size());
}

double realized_qv(std::span<const double> path) {
  double qv = 0.0;
  for (std::size_t k = 1; k < path.size(); ++k) {
    const double d = path[k] - path[k - 1];
    qv += d * d;
  }
  return qv;
}

double realized_qv(const Trajectory& path) {
  double qv = 0.0;
  for (std::size_t k = 1; k < path.size(); ++k) {
    const auto a = path.state(k - 1);
    const auto b = path.state(k);
    for (std::size_t i = 0; i < path.dim; ++i) qv += (b[i] - a[i]) * (b[i] - a[i]);
  }
  return qv;
}

std::vector<double> increments(std::span<const double> path) {
  std::vector<double> out;
  if (path.size() < 2) return out;
  out.reserve(path.size() - 1);
  for (std::size_t k = 1; k < path.size(); ++k) out.push_back(path[k] - path[k - 1]);
  return out;
}

std::vector<double> lagged_increment_correlation(
    std::span<const std::vector<double>> a_increments,
    std::span<const std::vector<double>> b_increments, std::span<const int> lags) {
  if (a_increments.size() != b_increments.size())
    throw GridMismatchError("increment correlation: segment counts differ");
  for (std::size_t s = 0; s < a_increments.size(); ++s)
    if (a_increments[s].size() != b_increments[s].size())
      throw GridMismatchError("increment correlation: segment lengths differ");

  std::vector<double> out;
  out.reserve(lags.size());
  for (const int lag : lags) {
    if (lag < 0) throw DomainError("increment correlation: lags must be >= 0");
    const auto l = static_cast<std::size_t>(lag);
    // Two passes: means first, then centred moments.
    double sa = 0.0, sb = 0.0;
    std::size_t count = 0;
    for (std::size_t s = 0; s < a_increments.size(); ++s) {
      const auto& a = a_increments[s];
      const auto& b = b_increments[s];
      for (std::size_t k = 0; k + l < a.size(); ++k) {
        sa += a[k];
        sb += b[k + l];
        ++count;
      }
    }
    if (count < 2) throw DomainError("increment correlation: fewer than two pairs");
    const double ma = sa / static_cast<double>(count);
    const double mb = sb / static_cast<double>(count);
    double cab = 0.0, caa = 0.0, cbb = 0.0;
    for (std::size_t s = 0; s < a_increments.size(); ++s) {
      const auto& a = a_increments[s];
      const auto& b = b_increments[s];
      for (std::size_t k = 0; k + l < a.size(); ++k) {
        const double da = a[k] - ma;
        const double db = b[k + l] - mb;
        cab += da * db;
        caa += da * da;
        cbb += db * db;
      }
    }
    if (caa == 0.0 || cbb == 0.0) throw DomainError("increment correlation: constant increments");
    out.push_back(cab / std::sqrt(caa * cbb));
  }
  return out;
}

std::vector<double> increment_cross_correlation(const Trajectory& a, const Trajectory& b,
                                                std::span<const int> lags) {
  if (a.times.size() != b.times.size())
    throw GridMismatchError("increment_cross_correlation: grids differ in length");
  for (std::size_t k = 0; k < a.times.size(); ++k)
    if (a.times[k] != b.times[k])
      throw GridMismatchError("increment_cross_correlation: grids differ");
  const std::vector<std::vector<double>> da{increments(a.component(0))};
  const std::vector<std::vector<double>> db{increments(b.component(0))};
  return lagged_increment_correlation(da, db, lags);
}

Moments sample_moments(std::span<const double> v) {
  Moments m;
  if (v.empty()) return m;
  double sum = 0.0;
  for (double x : v) sum += x;
  m.mean = sum / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - m.mean) * (x - m.mean);
  m.variance = v.size() > 1 ? ss / static_cast<double>(v.size() - 1) : 0.0;
  return m;
}

double kurtosis(std::span<const double> v) {
  const Moments m = sample_moments(v);
  double m4 = 0.0, m2 = 0.0;
  for (double x : v) {
    const double d = (x - m.mean) * (x - m.mean);
    m2 += d;
    m4 += d * d;
  }
  const double n = static_cast<double>(v.size());
  m2 /= n;
  m4 /= n;
  return m4 / (m2 * m2);
}

TestReport moment_check(const SampleSet& s, double target_mean, double target_var) {
  s.validate();
  const std::size_t count = s.values.size();
  if (count < 100) throw DomainError("moment_check: need at least 100 values");
  const Moments m = sample_moments(s.values);
  if (m.variance == 0.0 && target_var != 0.0)
    throw DomainError("moment_check: degenerate sample with nonzero target variance");

  const double n = static_cast<double>(count);
  const auto z_score = [](double diff, double se) {
    if (se == 0.0) return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return std::abs(diff) / se;
  };
  const double z_mean = z_score(m.mean - target_mean, std::sqrt(m.variance / n));
  const double z_var =
      z_score(m.variance - target_var, target_var * std::sqrt(2.0 / (n - 1.0)));
  return TestReport::make("moment_check",
                          "mean and variance of " + s.label + " vs targets",
                          std::max(z_mean, z_var), 3.0, count, 0);
}

}  // namespace ebm::stats
