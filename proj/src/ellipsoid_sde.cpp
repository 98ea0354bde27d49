// SPDX-License-Identifier: Apache-2.0
#include "ebm/ellipsoid_sde.hpp"

#include <cmath>
#include <string>

#include "ebm/errors.hpp"
#include "ebm/parallel.hpp"
#include "ebm/rng.hpp"

namespace ebm::ellipsoid {
namespace {

// Largest relative radial correction accepted from the projection step.
constexpr double kMaxProjectionCorrection = 0.5;

void project_packed(std::span<double> z, double c) {
  const std::size_t n = z.size() - 1;
  double norm2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) norm2 += z[i] * z[i];
  const double ys = z[n] / c;
  norm2 += ys * ys;
  const double norm = std::sqrt(norm2);
  if (!std::isfinite(norm) || std::abs(norm - 1.0) > kMaxProjectionCorrection)
    throw NumericalError("ellipsoid projection failed: step left the surface by " +
                         std::to_string(norm - 1.0) + "; reduce dt");
  const double inv = 1.0 / norm;
  for (std::size_t i = 0; i < n; ++i) z[i] *= inv;
  z[n] = c * (ys * inv);
}

}  // namespace

Eigen::VectorXd AmbientState::stacked() const {
  Eigen::VectorXd z(x.size() + 1);
  z.head(x.size()) = x;
  z(x.size()) = y;
  return z;
}

AmbientState AmbientState::from_stacked(std::span<const double> z) {
  AmbientState s;
  s.x = Eigen::Map<const Eigen::VectorXd>(z.data(), static_cast<Eigen::Index>(z.size() - 1));
  s.y = z.back();
  return s;
}

double membership_defect(const AmbientState& z, const EllipsoidParams& p) {
  return z.x.squaredNorm() + z.y * z.y / (p.c * p.c) - 1.0;
}

double radius(const AmbientState& z, const EllipsoidParams& p) {
  const double c2 = p.c * p.c;
  return std::sqrt(z.x.squaredNorm() * c2 * c2 + z.y * z.y);
}

Eigen::VectorXd unit_normal(const AmbientState& z, const EllipsoidParams& p) {
  const double r = radius(z, p);
  Eigen::VectorXd nu(z.x.size() + 1);
  nu.head(z.x.size()) = (p.c * p.c / r) * z.x;
  nu(z.x.size()) = z.y / r;
  return nu;
}

Eigen::MatrixXd diffusion_matrix(const AmbientState& z, const EllipsoidParams& p) {
  const Eigen::VectorXd nu = unit_normal(z, p);
  const auto d = nu.size();
  return Eigen::MatrixXd::Identity(d, d) - nu * nu.transpose();
}

Eigen::VectorXd drift_vector(const AmbientState& z, const EllipsoidParams& p) {
  const double c2 = p.c * p.c;
  const double r2 = z.x.squaredNorm() * c2 * c2 + z.y * z.y;
  const double k = -0.5 * ((p.n - 1) * r2 + c2) / (r2 * r2);
  Eigen::VectorXd b(z.x.size() + 1);
  b.head(z.x.size()) = (k * c2 * c2) * z.x;
  b(z.x.size()) = k * c2 * z.y;
  return b;
}

AmbientState project(const AmbientState& z, const EllipsoidParams& p) {
  Eigen::VectorXd packed = z.stacked();
  project_packed({packed.data(), static_cast<std::size_t>(packed.size())}, p.c);
  return AmbientState::from_stacked({packed.data(), static_cast<std::size_t>(packed.size())});
}

AmbientState default_initial_state(const EllipsoidParams& p, double y0) {
  if (!(std::abs(y0) < p.c))
    throw ConfigError("initial y0 must satisfy |y0| < c so that X_0 != 0");
  AmbientState z;
  z.x = Eigen::VectorXd::Zero(p.n);
  z.x(0) = std::sqrt((p.c - y0) * (p.c + y0)) / p.c;
  z.y = y0;
  return z;
}

AmbientState initial_state(const EllipsoidParams& p, const SimConfig& cfg) {
  if (!cfg.z0) return default_initial_state(p, cfg.y0.value_or(0.0));
  const auto& v = *cfg.z0;
  if (v.size() != static_cast<std::size_t>(p.n + 1))
    throw ConfigError("z0 must have n+1 = " + std::to_string(p.n + 1) + " entries");
  AmbientState z = AmbientState::from_stacked(v);
  if (std::abs(membership_defect(z, p)) > kMembershipTolerance)
    throw ConfigError("z0 is not on the ellipsoid");
  if (z.x.norm() == 0.0) throw ConfigError("z0 must have X_0 != 0");
  return z;
}

void euler_step(std::span<double> z, std::span<const double> dB, double dt,
                const EllipsoidParams& p) {
  const std::size_t n = z.size() - 1;
  const double c2 = p.c * p.c;
  double x2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) x2 += z[i] * z[i];
  const double y = z[n];
  const double r2 = x2 * c2 * c2 + y * y;
  const double r = std::sqrt(r2);

  // sigma dB = dB - nu (nu . dB)
  double nu_dot = 0.0;
  for (std::size_t i = 0; i < n; ++i) nu_dot += c2 * z[i] * dB[i];
  nu_dot = (nu_dot + y * dB[n]) / r;
  const double k = -0.5 * ((p.n - 1) * r2 + c2) / (r2 * r2) * dt;
  const double proj = nu_dot / r;
  for (std::size_t i = 0; i < n; ++i)
    z[i] += dB[i] - proj * c2 * z[i] + k * c2 * c2 * z[i];
  z[n] = y + dB[n] - proj * y + k * c2 * y;
  project_packed(z, p.c);
}

AmbientPath simulate_z_path(const EllipsoidParams& p, const SimConfig& cfg,
                            std::uint64_t path_index) {
  const std::size_t steps = cfg.steps();
  const std::size_t d = static_cast<std::size_t>(p.n) + 1;
  const double sqdt = std::sqrt(cfg.dt);

  AmbientPath out;
  out.path = Trajectory(d, steps + 1);
  out.path.params = p;
  out.path.seed = cfg.seed;
  out.path.path_index = path_index;
  out.path.dt = cfg.dt;
  out.noise.resize(steps * d);

  Eigen::VectorXd z = initial_state(p, cfg).stacked();
  std::span<double> zs(z.data(), d);
  out.path.push(0.0, zs);

  PathRng rng(cfg.seed, Stream::kEllipsoid, path_index);
  for (std::size_t k = 0; k < steps; ++k) {
    std::span<double> db(out.noise.data() + k * d, d);
    for (auto& v : db) v = sqdt * rng.normal();
    euler_step(zs, db, cfg.dt, p);
    out.path.push(static_cast<double>(k + 1) * cfg.dt, zs);
  }
  return out;
}

std::vector<AmbientPath> simulate_z(const EllipsoidParams& p, const SimConfig& cfg) {
  p.validate();
  cfg.validate();
  std::vector<AmbientPath> out(cfg.paths);
  parallel_for(cfg.paths, cfg.workers,
               [&](std::size_t i) { out[i] = simulate_z_path(p, cfg, i); });
  return out;
}

std::vector<double> sample_z_terminal(const EllipsoidParams& p, const SimConfig& cfg) {
  p.validate();
  cfg.validate();
  const std::size_t d = static_cast<std::size_t>(p.n) + 1;
  const std::size_t steps = cfg.steps();
  const double sqdt = std::sqrt(cfg.dt);
  const Eigen::VectorXd z0 = initial_state(p, cfg).stacked();

  std::vector<double> out(cfg.paths * d);
  parallel_for(cfg.paths, cfg.workers, [&](std::size_t i) {
    std::vector<double> z(z0.data(), z0.data() + d);
    std::vector<double> db(d);
    PathRng rng(cfg.seed, Stream::kEllipsoid, i);
    for (std::size_t k = 0; k < steps; ++k) {
      for (auto& v : db) v = sqdt * rng.normal();
      euler_step(z, db, cfg.dt, p);
    }
    std::copy(z.begin(), z.end(), out.begin() + static_cast<std::ptrdiff_t>(i * d));
  });
  return out;
}

}  // namespace ebm::ellipsoid
