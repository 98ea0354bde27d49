// SPDX-License-Identifier: Apache-2.0
#include "ebm/y_marginal.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <string>

#include "ebm/errors.hpp"
#include "ebm/parallel.hpp"

namespace ebm::ymarg {
namespace {

double initial_y(const EllipsoidParams& p, const SimConfig& cfg) {
  double y0 = cfg.y0.value_or(0.0);
  if (cfg.z0 && !cfg.y0) y0 = cfg.z0->back();
  if (!(std::abs(y0) < p.c)) throw ConfigError("initial y0 must satisfy |y0| < c");
  return y0;
}

template <typename Visit>
void run_path(const EllipsoidParams& p, const SimConfig& cfg, std::uint64_t path_index,
              Visit&& visit) {
  const std::size_t steps = cfg.steps();
  const double sqdt = std::sqrt(cfg.dt);
  const auto coeffs = [&p](double y) { return y_coefficients(y, p); };
  PathRng rng(cfg.seed, Stream::kYMarginal, path_index);
  double y = initial_y(p, cfg);
  visit(std::size_t{0}, y);
  for (std::size_t k = 0; k < steps; ++k) {
    y = advance_in_interval(y, cfg.dt, sqdt * rng.normal(), -p.c, p.c, coeffs, rng);
    visit(k + 1, y);
  }
}

}  // namespace

DriftDiffusion y_coefficients(double y, const EllipsoidParams& p) {
  const double c = p.c;
  if (!(std::abs(y) < c)) throw DomainError("y_coefficients: need |y| < c");
  const double c2 = c * c;
  const double y2 = y * y;
  const double r2 = y2 + c2 * c2 - y2 * c2;
  // 1 - y^2/R^2 = c^2 (c^2 - y^2) / R^2, written without the cancellation.
  const double diffusion = c * std::sqrt((c - y) * (c + y) / r2);
  const double drift = -0.5 * y * c2 * ((p.n - 1) * r2 + c2) / (r2 * r2);
  return {diffusion, drift};
}

Trajectory simulate_y_path(const EllipsoidParams& p, const SimConfig& cfg,
                           std::uint64_t path_index) {
  Trajectory out(1, cfg.steps() + 1);
  out.params = p;
  out.seed = cfg.seed;
  out.path_index = path_index;
  out.dt = cfg.dt;
  run_path(p, cfg, path_index, [&](std::size_t k, double y) {
    out.push(static_cast<double>(k) * cfg.dt, y);
  });
  return out;
}

std::vector<Trajectory> simulate_y(const EllipsoidParams& p, const SimConfig& cfg) {
  p.validate();
  cfg.validate();
  std::vector<Trajectory> out(cfg.paths);
  parallel_for(cfg.paths, cfg.workers,
               [&](std::size_t i) { out[i] = simulate_y_path(p, cfg, i); });
  return out;
}

std::vector<PathSummary> sample_y_summary(const EllipsoidParams& p, const SimConfig& cfg) {
  p.validate();
  cfg.validate();
  std::vector<PathSummary> out(cfg.paths);
  parallel_for(cfg.paths, cfg.workers, [&](std::size_t i) {
    PathSummary s;
    run_path(p, cfg, i, [&](std::size_t, double y) {
      s.terminal = y;
      s.max_abs = std::max(s.max_abs, std::abs(y));
    });
    out[i] = s;
  });
  return out;
}

double scale_density(double xi, const EllipsoidParams& p) {
  const double c = p.c;
  if (!(std::abs(xi) < c)) throw DomainError("scale_density: need |xi| < c");
  const double c2 = c * c;
  const double xi2 = xi * xi;
  return std::sqrt(c2 * c2 - c2 * xi2 + xi2) / c *
         std::pow((c - xi) * (c + xi), -0.5 * p.n);
}

// Integrated in the variable w = c - xi on a log scale, where the integrand
// w s(c - w) is smooth even when eps is many orders below c.
double nonattainability_integral(const EllipsoidParams& p, double eps) {
  const double c = p.c;
  if (!(eps > 0.0 && eps < c)) throw DomainError("nonattainability_integral: need 0 < eps < c");
  const auto integrand = [&](double log_w) {
    const double w = std::exp(log_w);
    return w * scale_density(c - w, p);
  };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      integrand, std::log(eps), std::log(c), 15, 1e-13);
}

std::vector<double> noise_row(std::span<const double> z, double c) {
  const std::size_t n = z.size() - 1;
  double x2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) x2 += z[i] * z[i];
  if (x2 == 0.0) throw DegenerateError("noise row undefined at |X| = 0");
  const double c2 = c * c;
  const double y = z[n];
  const double r2 = x2 * c2 * c2 + y * y;
  // sqrt(1 - Y^2/R^2) = c^2 |X| / R
  const double root = c2 * std::sqrt(x2 / r2);
  std::vector<double> a(n + 1);
  const double k = -c2 * y / (r2 * root);
  for (std::size_t i = 0; i < n; ++i) a[i] = k * z[i];
  a[n] = root;
  return a;
}

Trajectory reconstruct_scalar_noise(const AmbientPath& z_path) {
  const Trajectory& path = z_path.path;
  const std::size_t d = path.dim;
  if (path.size() < 2 || z_path.noise.size() != (path.size() - 1) * d)
    throw GridMismatchError("ambient path does not carry its driving increments");
  Trajectory out(1, path.size());
  out.params = path.params;
  out.seed = path.seed;
  out.path_index = path.path_index;
  out.dt = path.dt;
  double acc = 0.0;
  out.push(path.times[0], acc);
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    const auto a = noise_row(path.state(k), path.params.c);
    const auto db = z_path.increment(k);
    for (std::size_t j = 0; j < d; ++j) acc += a[j] * db[j];
    out.push(path.times[k + 1], acc);
  }
  return out;
}

}  // namespace ebm::ymarg
