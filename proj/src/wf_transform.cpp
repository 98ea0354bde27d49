// SPDX-License-Identifier: Apache-2.0
#include "ebm/wf_transform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "ebm/elliptic.hpp"
#include "ebm/errors.hpp"
#include "ebm/parallel.hpp"

namespace ebm::wf {
namespace {

constexpr double kQuarterPi = std::numbers::pi / 4.0;

void check_xi(double xi, const TransformSpec& spec, const char* fn) {
  if (std::isnan(xi) || std::abs(xi) > spec.c)
    throw DomainError(std::string(fn) + ": need |xi| <= c");
}

// theta(xi) = (c/2) h E(arcsin(xi/c) | m), ranging over [-pi/4, pi/4].
double theta(double xi, const TransformSpec& spec) {
  const double phi = std::asin(std::clamp(xi / spec.c, -1.0, 1.0));
  return 0.5 * spec.c * spec.h * elliptic::ellip_e_inc(phi, spec.m);
}

double initial_u(const EllipsoidParams& p, const TransformSpec& spec, const SimConfig& cfg) {
  double u = 0.5;
  if (cfg.xi0)
    u = *cfg.xi0;
  else if (cfg.y0)
    u = f_transform(*cfg.y0, spec);
  (void)p;
  if (!(u > 0.0 && u < 1.0)) throw ConfigError("initial xi0 must lie in (0, 1)");
  return u;
}

std::vector<double> chebyshev_coefficients(const std::vector<double>& values) {
  const std::size_t count = values.size();
  std::vector<double> coeffs(count, 0.0);
  for (std::size_t j = 0; j < count; ++j) {
    double sum = 0.0;
    for (std::size_t k = 0; k < count; ++k)
      sum += values[k] * std::cos(std::numbers::pi * static_cast<double>(j) *
                                  (static_cast<double>(k) + 0.5) / static_cast<double>(count));
    coeffs[j] = 2.0 * sum / static_cast<double>(count);
  }
  coeffs[0] *= 0.5;
  return coeffs;
}

template <typename Visit>
void run_path(const EllipsoidParams& p, const TransformSpec& spec, const GammaTable& gamma,
              const SimConfig& cfg, std::uint64_t path_index, Visit&& visit) {
  const std::size_t steps = cfg.steps();
  const double sqdt = std::sqrt(cfg.dt);
  const double h = spec.h;
  const auto coeffs = [&](double u) {
    return DriftDiffusion{h * std::sqrt(u * (1.0 - u)), gamma(u)};
  };
  PathRng rng(cfg.seed, Stream::kWrightFisher, path_index);
  double u = initial_u(p, spec, cfg);
  visit(std::size_t{0}, u);
  for (std::size_t k = 0; k < steps; ++k) {
    u = advance_in_interval(u, cfg.dt, sqdt * rng.normal(), 0.0, 1.0, coeffs, rng);
    visit(k + 1, u);
  }
}

}  // namespace

TransformSpec TransformSpec::make(double c) {
  TransformSpec spec;
  spec.c = c;
  spec.h = h_of_c(c);
  spec.m = 1.0 - 1.0 / (c * c);
  return spec;
}

double h_of_c(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("h_of_c: need c > 0");
  return std::numbers::pi / (2.0 * c * elliptic::ellip_e_complete(1.0 - 1.0 / (c * c)));
}

// cos^2(pi/4 - theta) = (1 + sin 2 theta) / 2; the complement is
// sin^2(pi/4 - theta), used directly where sin 2 theta is close to 1.
double f_transform(double xi, const TransformSpec& spec) {
  check_xi(xi, spec, "f_transform");
  const double a = kQuarterPi - theta(xi, spec);
  const double ca = std::cos(a);
  return ca * ca;
}

double f_complement(double xi, const TransformSpec& spec) {
  check_xi(xi, spec, "f_complement");
  const double a = kQuarterPi - theta(xi, spec);
  const double sa = std::sin(a);
  return sa * sa;
}

// arccos(sqrt(u)) is computed as atan2(sqrt(1-u), sqrt(u)), which keeps full
// relative accuracy at both ends of [0, 1].
double inverse_amplitude(double u, const TransformSpec& spec) {
  if (std::isnan(u) || u < 0.0 || u > 1.0) throw DomainError("f_inverse: need u in [0, 1]");
  const double acos_root = std::atan2(std::sqrt(1.0 - u), std::sqrt(u));
  const double target = (kQuarterPi - acos_root) * 2.0 / (spec.c * spec.h);
  return elliptic::ellip_e_invert(target, spec.m);
}

double f_inverse(double u, const TransformSpec& spec) {
  if (u == 1.0) return spec.c;
  if (u == 0.0) return -spec.c;
  return spec.c * std::sin(inverse_amplitude(u, spec));
}

double f_prime(double xi, const TransformSpec& spec) {
  const double c = spec.c;
  if (!(std::abs(xi) < c)) throw DomainError("f_prime: need |xi| < c");
  const double a = kQuarterPi - theta(xi, spec);
  const double c2 = c * c;
  const double xi2 = xi * xi;
  return std::sin(2.0 * a) * 0.5 * c * spec.h * std::sqrt(c2 * c2 - c2 * xi2 + xi2) /
         (c2 * std::sqrt((c - xi) * (c + xi)));
}

// With y = c sin(phi), the factor c^2 - y^2 is evaluated as c^2 cos^2(phi),
// which keeps its relative accuracy as y approaches +-c.
double r_factor(double u, const TransformSpec& spec) {
  if (!(u > 0.0 && u < 1.0)) throw DomainError("r_factor: need u in (0, 1)");
  const double phi = inverse_amplitude(u, spec);
  const double c = spec.c;
  const double c2 = c * c;
  const double y = c * std::sin(phi);
  const double r2 = y * y + c2 * c2 - y * y * c2;
  return y / (std::sqrt(r2) * c * std::cos(phi) * std::sqrt(u * (1.0 - u)));
}

// r(u) u (1 - u) = tan(phi) sqrt(u (1 - u)) / R stays bounded at both ends, so
// the product is formed directly instead of multiplying r back out.
double gamma_drift(double u, const EllipsoidParams& p, const TransformSpec& spec) {
  if (!(u > 0.0 && u < 1.0)) throw DomainError("gamma_drift: need u in (0, 1)");
  const double phi = inverse_amplitude(u, spec);
  const double c = spec.c;
  const double c2 = c * c;
  const double y = c * std::sin(phi);
  const double r = std::sqrt(y * y + c2 * c2 - y * y * c2);
  const double r_uu = std::tan(phi) * std::sqrt(u * (1.0 - u)) / r;
  const double h2q = 0.25 * spec.h * spec.h;
  return h2q * (1.0 - u) - h2q * u - 0.5 * c * spec.h * (p.n - 1) * r_uu;
}

double ode_residual(double xi, const TransformSpec& spec) {
  const double c = spec.c;
  if (!(std::abs(xi) < c)) throw DomainError("ode_residual: need |xi| < c");
  const double c2 = c * c;
  const double xi2 = xi * xi;
  const double lhs = f_prime(xi, spec) *
                     std::sqrt((c2 * c2 - xi2 * c2) / (xi2 + c2 * c2 - xi2 * c2));
  const double f = f_transform(xi, spec);
  const double g = f_complement(xi, spec);
  return lhs - spec.h * std::sqrt(f * g);
}

DriftDiffusion wf_coefficients(double u, const EllipsoidParams& p, const TransformSpec& spec) {
  return {spec.h * std::sqrt(u * (1.0 - u)), gamma_drift(u, p, spec)};
}

namespace {

constexpr double kRootSpan = std::numbers::sqrt2 / 2.0;

// Chebyshev coefficients of g on [lo, hi] from count first-kind nodes.
template <typename G>
std::vector<double> fit_piece(const G& g, double lo, double hi, std::size_t count) {
  std::vector<double> values(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double x = std::cos(std::numbers::pi * (static_cast<double>(k) + 0.5) /
                              static_cast<double>(count));
    values[k] = g(lo + 0.5 * (hi - lo) * (x + 1.0));
  }
  return chebyshev_coefficients(values);
}

}  // namespace

GammaTable::GammaTable(const EllipsoidParams& p, const TransformSpec& spec, double max_error) {
  const double scale = std::max(1.0, spec.boundary_drift(p.n));
  const auto lower = [&](double root) { return gamma_drift(root * root, p, spec); };
  const auto upper = [&](double root) { return gamma_drift(1.0 - root * root, p, spec); };
  const double width = kRootSpan / kPieces;

  for (std::size_t count = 8; count <= 128; count *= 2) {
    degree_ = count - 1;
    lower_.clear();
    upper_.clear();
    checked_error_ = 0.0;
    for (std::size_t piece = 0; piece < kPieces; ++piece) {
      // The first piece starts just inside the boundary, where gamma_drift
      // itself is undefined; first-kind nodes never touch the endpoint.
      const double lo = width * static_cast<double>(piece);
      const double hi = lo + width;
      const auto cl = fit_piece(lower, lo, hi, count);
      const auto cu = fit_piece(upper, lo, hi, count);
      lower_.insert(lower_.end(), cl.begin(), cl.end());
      upper_.insert(upper_.end(), cu.begin(), cu.end());
    }
    for (std::size_t piece = 0; piece < kPieces; ++piece)
      for (int j = 1; j <= 7; ++j) {
        const double root = width * (static_cast<double>(piece) + j / 8.0);
        checked_error_ = std::max({checked_error_,
                                   std::abs(eval_half(lower_, root) - lower(root)),
                                   std::abs(eval_half(upper_, root) - upper(root))});
      }
    if (checked_error_ <= max_error * scale) return;
  }
  throw NumericalError("GammaTable: Chebyshev interpolant did not converge");
}

double GammaTable::eval_half(const std::vector<double>& coeffs, double root) const {
  constexpr double inv_width = kPieces / kRootSpan;
  const double pos = root * inv_width;
  const auto piece = std::min(static_cast<std::size_t>(pos), kPieces - 1);
  const double x = 2.0 * (pos - static_cast<double>(piece)) - 1.0;
  const double* c = coeffs.data() + piece * (degree_ + 1);
  double b1 = 0.0, b2 = 0.0;
  for (std::size_t j = degree_; j >= 1; --j) {
    const double b0 = 2.0 * x * b1 - b2 + c[j];
    b2 = b1;
    b1 = b0;
  }
  return x * b1 - b2 + c[0];
}

double GammaTable::operator()(double u) const {
  return u <= 0.5 ? eval_half(lower_, std::sqrt(u)) : eval_half(upper_, std::sqrt(1.0 - u));
}

Trajectory simulate_wf_path(const EllipsoidParams& p, const TransformSpec& spec,
                            const SimConfig& cfg, std::uint64_t path_index) {
  Trajectory out(1, cfg.steps() + 1);
  out.params = p;
  out.seed = cfg.seed;
  out.path_index = path_index;
  out.dt = cfg.dt;
  const GammaTable gamma(p, spec);
  run_path(p, spec, gamma, cfg, path_index, [&](std::size_t k, double u) {
    out.push(static_cast<double>(k) * cfg.dt, u);
  });
  return out;
}

std::vector<Trajectory> simulate_wf(const EllipsoidParams& p, const TransformSpec& spec,
                                    const SimConfig& cfg) {
  p.validate();
  cfg.validate();
  const GammaTable gamma(p, spec);
  std::vector<Trajectory> out(cfg.paths);
  parallel_for(cfg.paths, cfg.workers, [&](std::size_t i) {
    Trajectory path(1, cfg.steps() + 1);
    path.params = p;
    path.seed = cfg.seed;
    path.path_index = i;
    path.dt = cfg.dt;
    run_path(p, spec, gamma, cfg, i, [&](std::size_t k, double u) {
      path.push(static_cast<double>(k) * cfg.dt, u);
    });
    out[i] = std::move(path);
  });
  return out;
}

std::vector<double> sample_wf_terminal(const EllipsoidParams& p, const TransformSpec& spec,
                                       const SimConfig& cfg) {
  p.validate();
  cfg.validate();
  const GammaTable gamma(p, spec);
  std::vector<double> out(cfg.paths);
  parallel_for(cfg.paths, cfg.workers, [&](std::size_t i) {
    run_path(p, spec, gamma, cfg, i, [&](std::size_t, double u) { out[i] = u; });
  });
  return out;
}

}  // namespace ebm::wf
