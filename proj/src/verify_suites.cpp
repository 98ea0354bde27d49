// SPDX-License-Identifier: Apache-2.0
#include "ebm/verify_suites.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ebm/elliptic.hpp"
#include "ebm/ellipsoid_sde.hpp"
#include "ebm/errors.hpp"
#include "ebm/rng.hpp"
#include "ebm/skew_product.hpp"
#include "ebm/wf_transform.hpp"
#include "ebm/y_marginal.hpp"

namespace ebm::verify {
namespace {

using stats::TestReport;

constexpr double kAlpha = 0.01;

ellipsoid::AmbientState random_state(const EllipsoidParams& p, PathRng& rng) {
  ellipsoid::AmbientState z;
  z.y = p.c * (2.0 * rng.uniform() - 1.0) * 0.999;
  z.x.resize(p.n);
  for (int i = 0; i < p.n; ++i) z.x(i) = rng.normal();
  z.x *= std::sqrt((p.c - z.y) * (p.c + z.y)) / p.c / z.x.norm();
  return z;
}

std::vector<double> column(const std::vector<double>& packed, std::size_t stride,
                           std::size_t i) {
  std::vector<double> out(packed.size() / stride);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = packed[k * stride + i];
  return out;
}

}  // namespace

bool SuiteReport::passed() const {
  return std::all_of(tests.begin(), tests.end(), [](const auto& t) { return t.passed; });
}

void to_json(nlohmann::json& j, const SuiteReport& r) {
  j = nlohmann::json{{"suite", r.suite}, {"seed", r.seed}, {"passed", r.passed()},
                     {"tests", r.tests}};
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"coefficients", "transform",    "boundary",
                                              "skewprod",     "independence", "sphere-collapse"};
  return names;
}

SuiteReport run_suite(std::string_view name, const RunSettings& settings) {
  settings.validate();
  if (name == "coefficients") return coefficients_suite(settings);
  if (name == "transform") return transform_suite(settings);
  if (name == "boundary") return boundary_suite(settings);
  if (name == "skewprod") return skewprod_suite(settings);
  if (name == "independence") return independence_suite(settings);
  if (name == "sphere-collapse") return sphere_collapse_suite(settings);
  if (name == "all") {
    SuiteReport all{"all", settings.sim.seed, {}};
    for (const auto& sub : suite_names()) {
      auto r = run_suite(sub, settings);
      for (auto& t : r.tests) {
        t.name = sub + "/" + t.name;
        all.tests.push_back(std::move(t));
      }
    }
    return all;
  }
  throw ConfigError("unknown verify suite '" + std::string(name) + "'");
}

SuiteReport coefficients_suite(const RunSettings& s) {
  const auto& p = s.params;
  SuiteReport out{"coefficients", s.sim.seed, {}};
  PathRng rng(s.sim.seed, Stream::kTest, 0);
  const double c2 = p.c * p.c;

  double tangency = 0.0, symmetry = 0.0, eigen_violation = 0.0, r_identity = 0.0,
         y_row = 0.0, a_norm = 0.0, x_block = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto z = random_state(p, rng);
    const Eigen::MatrixXd sigma = ellipsoid::diffusion_matrix(z, p);
    const Eigen::VectorXd b = ellipsoid::drift_vector(z, p);
    const Eigen::VectorXd nu = ellipsoid::unit_normal(z, p);
    tangency = std::max(tangency, (sigma * nu).cwiseAbs().maxCoeff());
    symmetry = std::max(symmetry, (sigma - sigma.transpose()).cwiseAbs().maxCoeff());
    const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(sigma).eigenvalues();
    eigen_violation = std::max({eigen_violation, -ev.minCoeff() - 1e-12, ev.maxCoeff() - 1.0 - 1e-12, 0.0});

    const double x2 = z.x.squaredNorm();
    const double r1 = std::sqrt(x2 * c2 * c2 + z.y * z.y);
    const double r2 = std::sqrt(z.y * z.y + c2 * c2 - z.y * z.y * c2);
    const double r3 = std::sqrt((c2 * c2 - c2) * x2 + c2);
    r_identity = std::max({r_identity, std::abs(r1 - r2), std::abs(r1 - r3)});

    // The Y equation is the last row of the ambient system.
    const auto yc = ymarg::y_coefficients(z.y, p);
    const double row_norm = sigma.row(p.n).norm();
    y_row = std::max({y_row, std::abs(row_norm - yc.diffusion), std::abs(b(p.n) - yc.drift)});

    const Eigen::VectorXd zs = z.stacked();
    const auto a = ymarg::noise_row({zs.data(), static_cast<std::size_t>(zs.size())}, p.c);
    double aa = 0.0;
    for (double v : a) aa += v * v;
    a_norm = std::max(a_norm, std::abs(aa - 1.0));

    // X equation: M M^T equals the X block of sigma sigma^T, drift equals b_x.
    const auto xc = skew::x_coefficients(z.x, p);
    const Eigen::MatrixXd block = (sigma * sigma.transpose()).topLeftCorner(p.n, p.n);
    x_block = std::max({x_block,
                        (xc.diffusion * xc.diffusion.transpose() - block).cwiseAbs().maxCoeff(),
                        (xc.drift - b.head(p.n)).cwiseAbs().maxCoeff()});
  }
  out.tests.push_back(TestReport::make("tangency", "max |sigma(z) nu(z)|", tangency, 1e-12));
  out.tests.push_back(TestReport::make("symmetry", "max |sigma - sigma^T|", symmetry, 1e-14));
  out.tests.push_back(TestReport::make("eigenvalues", "eigenvalues of sigma outside [0,1]",
                                       eigen_violation, 0.0));
  out.tests.push_back(TestReport::make("r_identity", "three expressions for r agree",
                                       r_identity, 1e-12));
  out.tests.push_back(TestReport::make("y_row", "Y coefficients equal last row of sigma, b",
                                       y_row, 1e-12));
  out.tests.push_back(TestReport::make("noise_row_norm", "|A A^T - 1|", a_norm, 1e-12));
  out.tests.push_back(TestReport::make("x_equation", "X coefficients match the ambient block",
                                       x_block, 1e-12));
  for (auto& t : out.tests) t.seed = s.sim.seed;
  return out;
}

SuiteReport transform_suite(const RunSettings& s) {
  const auto spec = wf::TransformSpec::make(s.params.c);
  const double c = spec.c;
  SuiteReport out{"transform", s.sim.seed, {}};

  double residual = 0.0, round_trip = 0.0;
  bool monotone = true;
  double prev = -1.0;
  for (int k = 1; k <= 1000; ++k) {
    const double xi = -c + 2.0 * c * k / 1001.0;
    residual = std::max(residual, std::abs(wf::ode_residual(xi, spec)));
    const double f = wf::f_transform(xi, spec);
    round_trip = std::max(round_trip, std::abs(wf::f_inverse(f, spec) - xi));
    monotone = monotone && f > prev;
    prev = f;
  }
  out.tests.push_back(TestReport::make("ode_residual", "max |ODE residual| over 1000 points",
                                       residual, 1e-10));
  out.tests.push_back(TestReport::make("round_trip", "max |f^{-1}(f(xi)) - xi|", round_trip,
                                       1e-9));
  out.tests.push_back(TestReport::make("monotone", "f strictly increasing on the grid",
                                       monotone ? 0.0 : 1.0, 0.0));
  const double endpoints =
      std::max({std::abs(wf::f_transform(-c, spec)), std::abs(wf::f_transform(0.0, spec) - 0.5),
                std::abs(wf::f_transform(c, spec) - 1.0)});
  out.tests.push_back(TestReport::make("endpoints", "f(-c)=0, f(0)=1/2, f(c)=1", endpoints,
                                       1e-14));
  const double e_full = elliptic::ellip_e_complete(spec.m);
  out.tests.push_back(TestReport::make(
      "h_definition", "(c/2) h E(m) = pi/4",
      std::abs(0.5 * c * spec.h * e_full - std::numbers::pi / 4.0), 1e-14));
  for (auto& t : out.tests) t.seed = s.sim.seed;
  return out;
}

SuiteReport boundary_suite(const RunSettings& s) {
  const auto& p = s.params;
  const auto spec = wf::TransformSpec::make(p.c);
  const double limit = spec.boundary_drift(p.n);
  SuiteReport out{"boundary", s.sim.seed, {}};

  const double offsets[] = {1e-3, 1e-4, 1e-5};
  double gaps_hi[3], gaps_lo[3];
  for (int i = 0; i < 3; ++i) {
    gaps_hi[i] = std::abs(wf::gamma_drift(1.0 - offsets[i], p, spec) + limit);
    gaps_lo[i] = std::abs(wf::gamma_drift(offsets[i], p, spec) - limit);
  }
  const bool monotone = gaps_hi[1] < gaps_hi[0] && gaps_hi[2] < gaps_hi[1] &&
                        gaps_lo[1] < gaps_lo[0] && gaps_lo[2] < gaps_lo[1];
  out.tests.push_back(TestReport::make("gamma_limit_upper",
                                       "|gamma(1-1e-5) + n h^2/4| / (n h^2/4)",
                                       gaps_hi[2] / limit, 1e-3));
  out.tests.push_back(TestReport::make("gamma_limit_lower",
                                       "|gamma(1e-5) - n h^2/4| / (n h^2/4)",
                                       gaps_lo[2] / limit, 1e-3));
  out.tests.push_back(TestReport::make("gamma_limit_monotone",
                                       "gaps shrink along 1e-3, 1e-4, 1e-5",
                                       monotone ? 0.0 : 1.0, 0.0));

  const double i2 = ymarg::nonattainability_integral(p, 1e-2 * p.c);
  const double i4 = ymarg::nonattainability_integral(p, 1e-4 * p.c);
  const double factor = p.n == 2 ? 2.0 : 5.0;
  out.tests.push_back(TestReport::make("scale_integral_growth",
                                       "required growth factor / observed growth",
                                       factor / (i4 / i2), 1.0));

  const auto summary = ymarg::sample_y_summary(p, s.sim);
  double max_abs = 0.0;
  for (const auto& ps : summary) max_abs = std::max(max_abs, ps.max_abs);
  out.tests.push_back(TestReport::make("no_boundary_hits", "max |Y| over every path and step",
                                       max_abs, p.c - 1e-6, summary.size(), 0));
  for (auto& t : out.tests) t.seed = s.sim.seed;
  return out;
}

SuiteReport skewprod_suite(const RunSettings& s) {
  const auto& p = s.params;
  const auto& cfg = s.sim;
  SuiteReport out{"skewprod", cfg.seed, {}};

  // Pathwise identity on shared grids.
  SimConfig small = cfg;
  small.paths = std::min<std::size_t>(cfg.paths, 100);
  const auto zpaths = ellipsoid::simulate_z(p, small);
  double worst = 0.0;
  for (const auto& zp : zpaths)
    worst = std::max(worst, skew::pathwise_reconstruction_error(
                                zp.path, p, {skew::ChangedTimeGrid::kNative, 0.0}));
  out.tests.push_back(TestReport::make("pathwise_reconstruction",
                                       "max |X_t - sqrt(1-Y_t^2/c^2) Vhat_{S_t}|", worst, 1e-6,
                                       zpaths.size(), 0, cfg.seed));

  // Distributional gluing of independent Y and spherical BM.
  const auto zterm = ellipsoid::sample_z_terminal(p, cfg);
  const auto glued = skew::sample_glued_terminal_x(p, cfg);
  const auto d = static_cast<std::size_t>(p.n);
  for (std::size_t i = 0; i < d; ++i) {
    auto r = stats::ks_two_sample({column(zterm, d + 1, i), "ellipsoid X" + std::to_string(i + 1)},
                                  {column(glued, d, i), "glued X" + std::to_string(i + 1)}, kAlpha);
    r.name = "glued_x" + std::to_string(i + 1);
    r.seed = cfg.seed;
    out.tests.push_back(std::move(r));
  }

  // f(Y_T) from the ambient process against direct Wright-Fisher simulation.
  const auto spec = wf::TransformSpec::make(p.c);
  std::vector<double> fy(cfg.paths);
  for (std::size_t k = 0; k < cfg.paths; ++k) fy[k] = wf::f_transform(zterm[k * (d + 1) + d], spec);
  SimConfig wcfg = cfg;
  if (!wcfg.xi0) wcfg.xi0 = wf::f_transform(ellipsoid::initial_state(p, cfg).y, spec);
  auto wfr = stats::ks_two_sample({fy, "f(Y_T) from ellipsoid"},
                                  {wf::sample_wf_terminal(p, spec, wcfg), "F_T Wright-Fisher"},
                                  kAlpha);
  wfr.name = "wright_fisher_marginal";
  wfr.seed = cfg.seed;
  out.tests.push_back(std::move(wfr));

  // Reconstructed scalar noise and the Vhat drift.
  const double bound = 5.0 * std::sqrt(2.0 * cfg.dt);
  double qv_gap = 0.0;
  std::vector<Trajectory> vhats;
  for (const auto& zp : zpaths) {
    const auto btilde = ymarg::reconstruct_scalar_noise(zp);
    qv_gap = std::max(qv_gap, std::abs(stats::realized_qv(btilde) / cfg.t_end - 1.0));
    const auto tmap = skew::build_time_change(skew::last_coordinate(zp.path), p);
    vhats.push_back(skew::extract_vhat(zp.path, tmap, {skew::ChangedTimeGrid::kNative, 0.0}));
  }
  out.tests.push_back(TestReport::make("btilde_qv", "max |QV(B~)/t - 1| over paths", qv_gap,
                                       bound, zpaths.size(), 0, cfg.seed));
  const auto reg = vhat_drift_regression(vhats);
  out.tests.push_back(TestReport::make(
      "vhat_drift", "|slope + (n-1)/2| / standard error",
      std::abs(reg.slope + 0.5 * (p.n - 1)) / reg.standard_error, 3.0, reg.steps, 0, cfg.seed));
  return out;
}

SuiteReport independence_suite(const RunSettings& s) {
  const auto& p = s.params;
  SuiteReport out{"independence", s.sim.seed, {}};
  const auto zpaths = ellipsoid::simulate_z(p, s.sim);
  const std::size_t n = static_cast<std::size_t>(p.n);

  std::vector<std::vector<double>> y_inc;
  std::vector<std::vector<std::vector<double>>> v_inc(n);
  for (const auto& zp : zpaths) {
    const auto y = skew::last_coordinate(zp.path);
    const auto tmap = skew::build_time_change(y, p);
    const auto vhat = skew::extract_vhat(zp.path, tmap, {skew::ChangedTimeGrid::kNative, 0.0});
    y_inc.push_back(stats::increments(y.values));
    for (std::size_t i = 0; i < n; ++i) v_inc[i].push_back(stats::increments(vhat.component(i)));
  }
  const std::vector<int> lags{0, 1, 2};
  std::size_t pairs = 0;
  for (const auto& v : y_inc) pairs += v.size();
  const double bound = 3.0 / std::sqrt(static_cast<double>(pairs));
  for (std::size_t i = 0; i < n; ++i) {
    const auto rho = stats::lagged_increment_correlation(v_inc[i], y_inc, lags);
    for (std::size_t l = 0; l < lags.size(); ++l)
      out.tests.push_back(TestReport::make(
          "corr_v" + std::to_string(i + 1) + "_lag" + std::to_string(lags[l]),
          "|corr(dVhat^i, dY)| at the given lag", std::abs(rho[l]), bound, pairs, pairs,
          s.sim.seed));
  }
  return out;
}

SuiteReport sphere_collapse_suite(const RunSettings& s) {
  SuiteReport out{"sphere-collapse", s.sim.seed, {}};
  PathRng rng(s.sim.seed, Stream::kTest, 1);
  for (const int n : {2, 3, 5}) {
    const EllipsoidParams p{n, 1.0};
    double sigma_gap = 0.0, drift_gap = 0.0, y_gap = 0.0;
    for (int k = 0; k < 1000; ++k) {
      const auto z = random_state(p, rng);
      const Eigen::VectorXd zs = z.stacked();
      const Eigen::MatrixXd expect =
          Eigen::MatrixXd::Identity(n + 1, n + 1) - zs * zs.transpose();
      sigma_gap = std::max(sigma_gap,
                           (ellipsoid::diffusion_matrix(z, p) - expect).cwiseAbs().maxCoeff());
      drift_gap = std::max(drift_gap,
                           (ellipsoid::drift_vector(z, p) + 0.5 * n * zs).cwiseAbs().maxCoeff());
      const double y = -1.0 + 2.0 * (k + 0.5) / 1000.0;
      const auto yc = ymarg::y_coefficients(y, p);
      y_gap = std::max({y_gap, std::abs(yc.diffusion - std::sqrt(1.0 - y * y)),
                        std::abs(yc.drift + 0.5 * n * y)});
    }
    const auto spec = wf::TransformSpec::make(1.0);
    double f_gap = 0.0, gamma_gap = 0.0;
    for (int k = 0; k < 1000; ++k) {
      const double xi = -1.0 + 2.0 * (k + 0.5) / 1000.0;
      f_gap = std::max(f_gap, std::abs(wf::f_transform(xi, spec) - 0.5 * (xi + 1.0)));
      const double u = (k + 0.5) / 1000.0;
      gamma_gap = std::max(gamma_gap,
                           std::abs(wf::gamma_drift(u, p, spec) - n * (1.0 - 2.0 * u) / 4.0));
    }
    const std::string suffix = "_n" + std::to_string(n);
    out.tests.push_back(TestReport::make("sigma" + suffix, "sigma = I - z z^T", sigma_gap, 1e-12));
    out.tests.push_back(TestReport::make("drift" + suffix, "b = -(n/2) z", drift_gap, 1e-12));
    out.tests.push_back(TestReport::make("y_sde" + suffix, "(sqrt(1-y^2), -(n/2) y)", y_gap, 1e-12));
    out.tests.push_back(TestReport::make("h" + suffix, "h(1) = 1", std::abs(spec.h - 1.0), 1e-12));
    out.tests.push_back(TestReport::make("f" + suffix, "f(xi) = (xi+1)/2", f_gap, 1e-12));
    out.tests.push_back(TestReport::make("gamma" + suffix, "gamma = n(1-2u)/4", gamma_gap, 1e-12));
  }
  for (auto& t : out.tests) t.seed = s.sim.seed;
  return out;
}

DriftRegression vhat_drift_regression(const std::vector<Trajectory>& vhat_paths) {
  double sum_dot = 0.0, sum_du = 0.0;
  std::size_t steps = 0;
  for (const auto& v : vhat_paths)
    for (std::size_t k = 0; k + 1 < v.size(); ++k) {
      const auto a = v.state(k);
      const auto b = v.state(k + 1);
      for (std::size_t i = 0; i < v.dim; ++i) sum_dot += (b[i] - a[i]) * a[i];
      sum_du += v.times[k + 1] - v.times[k];
      ++steps;
    }
  if (steps == 0 || sum_du <= 0.0) throw DomainError("vhat_drift_regression: no increments");
  DriftRegression reg;
  reg.steps = steps;
  reg.slope = sum_dot / sum_du;
  double var = 0.0;
  for (const auto& v : vhat_paths)
    for (std::size_t k = 0; k + 1 < v.size(); ++k) {
      const auto a = v.state(k);
      const auto b = v.state(k + 1);
      double dot = 0.0;
      for (std::size_t i = 0; i < v.dim; ++i) dot += (b[i] - a[i]) * a[i];
      const double e = dot - reg.slope * (v.times[k + 1] - v.times[k]);
      var += e * e;
    }
  reg.standard_error = std::sqrt(var) / sum_du;
  return reg;
}

}  // namespace ebm::verify
