// SPDX-License-Identifier: Apache-2.0
#include "ebm/skew_product.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ebm/ellipsoid_sde.hpp"
#include "ebm/errors.hpp"
#include "ebm/parallel.hpp"
#include "ebm/rng.hpp"
#include "ebm/y_marginal.hpp"

namespace ebm::skew {
namespace {

constexpr double kNodeTolerance = 1e-12;
constexpr double kMinNorm = 1e-12;

bool strictly_increasing(const std::vector<double>& v) {
  return std::adjacent_find(v.begin(), v.end(), std::greater_equal<>()) == v.end();
}

// Locates u in an increasing sequence: returns k with v[k] <= u <= v[k+1].
std::size_t segment(const std::vector<double>& v, double u) {
  const auto it = std::upper_bound(v.begin(), v.end(), u);
  const auto k = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - v.begin() - 1, 0));
  return std::min(k, v.size() - 2);
}

void check_same_grid(const std::vector<double>& a, const std::vector<double>& b,
                     const char* what) {
  if (a.size() != b.size())
    throw GridMismatchError(std::string(what) + ": grid sizes differ");
  for (std::size_t k = 0; k < a.size(); ++k)
    if (std::abs(a[k] - b[k]) > kNodeTolerance * std::max(1.0, std::abs(a[k])))
      throw GridMismatchError(std::string(what) + ": grids differ at index " +
                              std::to_string(k));
}

}  // namespace

TimeChangeMap::TimeChangeMap(std::vector<double> grid, std::vector<double> s_values)
    : grid_(std::move(grid)), s_(std::move(s_values)) {
  if (grid_.size() < 2 || grid_.size() != s_.size())
    throw GridMismatchError("time change needs two equal-length sequences of >= 2 points");
  if (!strictly_increasing(grid_) || !strictly_increasing(s_))
    throw DomainError("time change grid and values must be strictly increasing");
}

double TimeChangeMap::forward(double t) const {
  const double tol = kNodeTolerance * std::max(1.0, std::abs(grid_.back()));
  if (t < grid_.front() - tol || t > grid_.back() + tol)
    throw DomainError("TimeChangeMap::forward: t outside the sampled grid");
  t = std::clamp(t, grid_.front(), grid_.back());
  const std::size_t k = segment(grid_, t);
  const double w = (t - grid_[k]) / (grid_[k + 1] - grid_[k]);
  return s_[k] + w * (s_[k + 1] - s_[k]);
}

double TimeChangeMap::inverse(double u) const {
  const double tol = kNodeTolerance * std::max(1.0, std::abs(s_.back()));
  if (u < s_.front() - tol || u > s_.back() + tol)
    throw DomainError("TimeChangeMap::inverse: u outside [S_0, S_end]");
  u = std::clamp(u, s_.front(), s_.back());
  const std::size_t k = segment(s_, u);
  const double w = (u - s_[k]) / (s_[k + 1] - s_[k]);
  return grid_[k] + w * (grid_[k + 1] - grid_[k]);
}

TimeChangeMap build_time_change(const Trajectory& y_path, const EllipsoidParams& p) {
  const double c = p.c;
  const double c2 = c * c;
  const auto rate = [&](double y) {
    if (!(std::abs(y) < c)) throw DomainError("build_time_change: path touches the boundary");
    return c2 / ((c - y) * (c + y));
  };
  std::vector<double> s(y_path.size());
  double prev = rate(y_path.scalar(0));
  s[0] = 0.0;
  for (std::size_t k = 1; k < y_path.size(); ++k) {
    const double cur = rate(y_path.scalar(k));
    s[k] = s[k - 1] + 0.5 * (y_path.times[k] - y_path.times[k - 1]) * (prev + cur);
    prev = cur;
  }
  std::vector<double> grid = y_path.times;
  if (grid.front() != 0.0)
    for (auto& t : grid) t -= y_path.times.front();
  return {std::move(grid), std::move(s)};
}

XCoefficients x_coefficients(const Eigen::VectorXd& x, const EllipsoidParams& p) {
  const double x2 = x.squaredNorm();
  if (x2 == 0.0) throw DegenerateError("x_coefficients: undefined at x = 0");
  if (x2 > 1.0 + 1e-12) throw DomainError("x_coefficients: need |x| <= 1");
  const double c2 = p.c * p.c;
  const double denom = (c2 - 1.0) * x2 + 1.0;
  const double q = std::sqrt(std::max(0.0, 1.0 - x2) / denom);
  const auto d = x.size();
  XCoefficients out;
  out.diffusion = Eigen::MatrixXd::Identity(d, d) - ((1.0 - q) / x2) * (x * x.transpose());
  out.drift = (-0.5 * ((p.n - 1) * (c2 * c2 - c2) * x2 + p.n * c2) / (denom * denom)) * x;
  return out;
}

Trajectory last_coordinate(const Trajectory& z_path) {
  Trajectory out(1, z_path.size());
  out.params = z_path.params;
  out.seed = z_path.seed;
  out.path_index = z_path.path_index;
  out.dt = z_path.dt;
  for (std::size_t k = 0; k < z_path.size(); ++k)
    out.push(z_path.times[k], z_path.state(k)[z_path.dim - 1]);
  return out;
}

Trajectory extract_vhat(const Trajectory& z_path, const TimeChangeMap& tmap,
                        VhatOptions options) {
  check_same_grid(z_path.times, tmap.grid(), "extract_vhat");
  const std::size_t n = z_path.dim - 1;

  Trajectory out(n, 0);
  out.params = z_path.params;
  out.seed = z_path.seed;
  out.path_index = z_path.path_index;
  std::vector<double> v(n);

  const auto emit = [&](double u, std::span<const double> a, std::span<const double> b,
                        double w) {
    double norm2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = a[i] + w * (b[i] - a[i]);
      norm2 += v[i] * v[i];
    }
    const double norm = std::sqrt(norm2);
    if (!(norm > kMinNorm)) throw DegenerateError("extract_vhat: |X| vanished");
    for (auto& e : v) e /= norm;
    out.push(u, v);
  };

  if (options.grid == ChangedTimeGrid::kNative) {
    out.dt = 0.0;
    for (std::size_t k = 0; k < z_path.size(); ++k) {
      const auto x = z_path.state(k).first(n);
      emit(tmap.s_values()[k], x, x, 0.0);
    }
    return out;
  }

  const double du = options.du > 0.0 ? options.du : z_path.dt;
  if (!(du > 0.0)) throw DomainError("extract_vhat: changed-time step must be > 0");
  out.dt = du;
  const auto& s = tmap.s_values();
  const auto count = static_cast<std::size_t>(std::floor(tmap.horizon() / du * (1.0 + 1e-12))) + 1;
  std::size_t k = 0;
  const auto emit_at = [&](double u) {
    while (k + 2 < s.size() && s[k + 1] <= u) ++k;
    const double w = (u - s[k]) / (s[k + 1] - s[k]);
    emit(u, z_path.state(k).first(n), z_path.state(k + 1).first(n), w);
  };
  for (std::size_t j = 0; j < count; ++j)
    emit_at(std::min(static_cast<double>(j) * du, tmap.horizon()));
  // Close the grid at the horizon with one shortened step.
  if (out.times.back() < tmap.horizon() - kNodeTolerance * std::max(1.0, tmap.horizon()))
    emit_at(tmap.horizon());
  return out;
}

Eigen::VectorXd vhat_at(const Trajectory& vhat, double u) {
  const auto& grid = vhat.times;
  const double tol = kNodeTolerance * std::max(1.0, std::abs(u));
  if (grid.empty() || u < grid.front() - tol || u > grid.back() + tol)
    throw GridMismatchError("vhat path does not cover the requested changed time");
  const auto d = static_cast<Eigen::Index>(vhat.dim);
  const auto node = [&](std::size_t k) {
    return Eigen::Map<const Eigen::VectorXd>(vhat.state(k).data(), d);
  };
  if (grid.size() == 1) return node(0);
  const std::size_t k = segment(grid, u);
  if (std::abs(u - grid[k]) <= tol) return node(k);
  if (std::abs(u - grid[k + 1]) <= tol) return node(k + 1);
  const double w = (u - grid[k]) / (grid[k + 1] - grid[k]);
  Eigen::VectorXd v = (1.0 - w) * node(k) + w * node(k + 1);
  const double norm = v.norm();
  if (!(norm > kMinNorm)) throw DegenerateError("vhat_at: antipodal neighbours");
  return v / norm;
}

Trajectory reconstruct_x(const Trajectory& y_path, const Trajectory& vhat,
                         const TimeChangeMap& tmap, const EllipsoidParams& p) {
  std::vector<double> shifted = y_path.times;
  for (auto& t : shifted) t -= y_path.times.front();
  check_same_grid(shifted, tmap.grid(), "reconstruct_x");
  if (vhat.dim != static_cast<std::size_t>(p.n))
    throw GridMismatchError("reconstruct_x: vhat dimension does not match n");

  const double c = p.c;
  Trajectory out(vhat.dim, y_path.size());
  out.params = p;
  out.seed = y_path.seed;
  out.path_index = y_path.path_index;
  out.dt = y_path.dt;
  for (std::size_t k = 0; k < y_path.size(); ++k) {
    const double y = y_path.scalar(k);
    const double radial = std::sqrt(std::max(0.0, (c - y) * (c + y))) / c;
    const Eigen::VectorXd x = radial * vhat_at(vhat, tmap.s_values()[k]);
    out.push(y_path.times[k], {x.data(), vhat.dim});
  }
  return out;
}

double pathwise_reconstruction_error(const Trajectory& z_path, const EllipsoidParams& p,
                                     VhatOptions options) {
  const Trajectory y = last_coordinate(z_path);
  const TimeChangeMap tmap = build_time_change(y, p);
  const Trajectory vhat = extract_vhat(z_path, tmap, options);
  const Trajectory x = reconstruct_x(y, vhat, tmap, p);
  double worst = 0.0;
  for (std::size_t k = 0; k < z_path.size(); ++k) {
    const auto a = z_path.state(k);
    const auto b = x.state(k);
    double err2 = 0.0;
    for (std::size_t i = 0; i < x.dim; ++i) err2 += (a[i] - b[i]) * (a[i] - b[i]);
    worst = std::max(worst, std::sqrt(err2));
  }
  return worst;
}

Trajectory simulate_sphere_bm(std::span<const double> v0, double horizon, double du,
                              std::uint64_t seed, std::uint64_t path_index) {
  if (!(du > 0.0) || !(horizon >= 0.0)) throw ConfigError("sphere BM needs du > 0, horizon >= 0");
  const std::size_t d = v0.size();
  if (d < 2) throw ConfigError("sphere BM needs dimension >= 2");
  std::vector<double> v(v0.begin(), v0.end());
  double norm = 0.0;
  for (double e : v) norm += e * e;
  norm = std::sqrt(norm);
  if (std::abs(norm - 1.0) > 1e-9) throw ConfigError("sphere BM start must be a unit vector");

  const auto full = static_cast<std::size_t>(std::floor(horizon / du * (1.0 + 1e-12)));
  Trajectory out(d, full + 2);
  out.seed = seed;
  out.path_index = path_index;
  out.dt = du;
  out.push(0.0, v);

  PathRng rng(seed, Stream::kSphere, path_index);
  std::vector<double> dw(d);
  double t = 0.0;
  const double half_drift = 0.5 * static_cast<double>(d - 1);
  while (t < horizon) {
    const double h = std::min(du, horizon - t);
    if (h <= kNodeTolerance * std::max(1.0, horizon)) {
      out.times.back() = horizon;
      break;
    }
    const double sq = std::sqrt(h);
    double proj = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      dw[i] = sq * rng.normal();
      proj += v[i] * dw[i];
    }
    double n2 = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      v[i] += dw[i] - proj * v[i] - half_drift * v[i] * h;
      n2 += v[i] * v[i];
    }
    const double inv = 1.0 / std::sqrt(n2);
    for (auto& e : v) e *= inv;
    t = (h == du) ? t + du : horizon;
    out.push(t, v);
  }
  return out;
}

std::vector<double> sample_glued_terminal_x(const EllipsoidParams& p, const SimConfig& cfg) {
  p.validate();
  cfg.validate();
  const auto z0 = ellipsoid::initial_state(p, cfg);
  const Eigen::VectorXd v0 = z0.x / z0.x.norm();
  SimConfig ycfg = cfg;
  ycfg.y0 = z0.y;
  ycfg.z0.reset();
  const std::size_t n = static_cast<std::size_t>(p.n);

  std::vector<double> out(cfg.paths * n);
  parallel_for(cfg.paths, cfg.workers, [&](std::size_t i) {
    const Trajectory y = ymarg::simulate_y_path(p, ycfg, i);
    const TimeChangeMap tmap = build_time_change(y, p);
    const Trajectory vhat = simulate_sphere_bm({v0.data(), n}, tmap.horizon(), cfg.dt,
                                               cfg.seed, i);
    // Only the terminal point of reconstruct_x is needed here.
    const double y_end = y.scalar(y.size() - 1);
    const double radial = std::sqrt((p.c - y_end) * (p.c + y_end)) / p.c;
    const Eigen::VectorXd x = radial * vhat_at(vhat, tmap.horizon());
    std::copy(x.data(), x.data() + n, out.begin() + static_cast<std::ptrdiff_t>(i * n));
  });
  return out;
}

}  // namespace ebm::skew
