// SPDX-License-Identifier: Apache-2.0
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "ebm/config.hpp"
#include "ebm/ellipsoid_sde.hpp"
#include "ebm/elliptic.hpp"
#include "ebm/errors.hpp"
#include "ebm/skew_product.hpp"
#include "ebm/stat_verify.hpp"
#include "ebm/verify_suites.hpp"
#include "ebm/wf_transform.hpp"
#include "ebm/y_marginal.hpp"

namespace py = pybind11;
using namespace ebm;

namespace {

using Array = py::array_t<double>;

EllipsoidParams make_params(int n, double c) {
  EllipsoidParams p{n, c};
  p.validate();
  return p;
}

SimConfig make_config(double dt, double t_end, std::size_t paths, std::uint64_t seed,
                      unsigned workers, std::optional<double> y0,
                      std::optional<double> xi0) {
  SimConfig cfg;
  cfg.dt = dt;
  cfg.t_end = t_end;
  cfg.paths = paths;
  cfg.seed = seed;
  cfg.workers = workers;
  cfg.y0 = y0;
  cfg.xi0 = xi0;
  cfg.validate();
  return cfg;
}

// Paths on a shared grid become (times, values[paths, points, dim]).
py::tuple stack(const std::vector<Trajectory>& paths) {
  if (paths.empty()) return py::make_tuple(Array(0), Array(std::vector<py::ssize_t>{0, 0, 0}));
  const auto& first = paths.front();
  const auto points = static_cast<py::ssize_t>(first.size());
  const auto dim = static_cast<py::ssize_t>(first.dim);
  Array times(points, first.times.data());
  Array values({static_cast<py::ssize_t>(paths.size()), points, dim});
  double* out = values.mutable_data();
  for (const auto& p : paths) {
    if (static_cast<py::ssize_t>(p.size()) != points) throw GridMismatchError("ragged paths");
    out = std::copy(p.values.begin(), p.values.end(), out);
  }
  return py::make_tuple(times, values);
}

Array to_array(const std::vector<double>& v, py::ssize_t cols = 0) {
  if (cols == 0) return Array(static_cast<py::ssize_t>(v.size()), v.data());
  Array a({static_cast<py::ssize_t>(v.size()) / cols, cols});
  std::copy(v.begin(), v.end(), a.mutable_data());
  return a;
}

std::vector<double> to_vector(const Array& a) {
  auto flat = py::array_t<double, py::array::c_style | py::array::forcecast>::ensure(a);
  return {flat.data(), flat.data() + flat.size()};
}

py::object to_python(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Brownian motion on a hyperellipsoid: simulators, transforms and checks";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception<DegenerateError>(m, "DegenerateError", PyExc_ArithmeticError);
  py::register_exception<GridMismatchError>(m, "GridMismatchError", PyExc_ValueError);

  // Elliptic integrals.
  m.def("carlson_rf", &elliptic::carlson_rf, py::arg("x"), py::arg("y"), py::arg("z"));
  m.def("carlson_rd", &elliptic::carlson_rd, py::arg("x"), py::arg("y"), py::arg("z"));
  m.def("ellip_e", &elliptic::ellip_e_inc, py::arg("phi"), py::arg("m"),
        "Incomplete E(phi | m) for |phi| <= pi/2, m < 1.");
  m.def("ellip_e_complete", &elliptic::ellip_e_complete, py::arg("m"));
  m.def("ellip_e_invert", &elliptic::ellip_e_invert, py::arg("target"), py::arg("m"));

  // Ambient coefficients.
  m.def(
      "ellipsoid_coefficients",
      [](const Array& z, int n, double c) {
        const auto p = make_params(n, c);
        const auto v = to_vector(z);
        if (v.size() != static_cast<std::size_t>(n + 1))
          throw DomainError("state must have n + 1 entries");
        const auto s = ellipsoid::AmbientState::from_stacked(v);
        const Eigen::MatrixXd sigma = ellipsoid::diffusion_matrix(s, p);
        const Eigen::VectorXd b = ellipsoid::drift_vector(s, p);
        Array sa({n + 1, n + 1});
        for (int i = 0; i <= n; ++i)
          for (int j = 0; j <= n; ++j) sa.mutable_at(i, j) = sigma(i, j);
        return py::make_tuple(sa, Array(n + 1, b.data()));
      },
      py::arg("z"), py::arg("n"), py::arg("c"), "(diffusion matrix, drift) at z = (x, y).");
  m.def(
      "y_coefficients",
      [](double y, int n, double c) {
        const auto d = ymarg::y_coefficients(y, make_params(n, c));
        return py::make_tuple(d.diffusion, d.drift);
      },
      py::arg("y"), py::arg("n"), py::arg("c"));
  m.def(
      "scale_density",
      [](double xi, int n, double c) { return ymarg::scale_density(xi, make_params(n, c)); },
      py::arg("xi"), py::arg("n"), py::arg("c"));
  m.def(
      "nonattainability_integral",
      [](int n, double c, double eps) {
        return ymarg::nonattainability_integral(make_params(n, c), eps);
      },
      py::arg("n"), py::arg("c"), py::arg("eps"));

  // Transform.
  py::class_<wf::TransformSpec>(m, "Transform")
      .def(py::init(&wf::TransformSpec::make), py::arg("c"))
      .def_readonly("c", &wf::TransformSpec::c)
      .def_readonly("m", &wf::TransformSpec::m)
      .def_readonly("h", &wf::TransformSpec::h)
      .def("boundary_drift", &wf::TransformSpec::boundary_drift, py::arg("n"))
      .def("f", [](const wf::TransformSpec& s, double xi) { return wf::f_transform(xi, s); })
      .def("f_complement",
           [](const wf::TransformSpec& s, double xi) { return wf::f_complement(xi, s); })
      .def("f_inverse",
           [](const wf::TransformSpec& s, double u) { return wf::f_inverse(u, s); })
      .def("f_prime", [](const wf::TransformSpec& s, double xi) { return wf::f_prime(xi, s); })
      .def("r_factor",
           [](const wf::TransformSpec& s, double u) { return wf::r_factor(u, s); })
      .def("ode_residual",
           [](const wf::TransformSpec& s, double xi) { return wf::ode_residual(xi, s); })
      .def(
          "gamma",
          [](const wf::TransformSpec& s, double u, int n) {
            return wf::gamma_drift(u, make_params(n, s.c), s);
          },
          py::arg("u"), py::arg("n"));
  m.def("h_of_c", &wf::h_of_c, py::arg("c"));

  // Simulators.
  m.def(
      "simulate_ellipsoid",
      [](int n, double c, double dt, double t_end, std::size_t paths, std::uint64_t seed,
         unsigned workers, std::optional<double> y0) {
        const auto p = make_params(n, c);
        const auto cfg = make_config(dt, t_end, paths, seed, workers, y0, std::nullopt);
        std::vector<Trajectory> out;
        {
          py::gil_scoped_release release;
          for (auto& ap : ellipsoid::simulate_z(p, cfg)) out.push_back(std::move(ap.path));
        }
        return stack(out);
      },
      py::arg("n") = 3, py::arg("c") = 1.0, py::arg("dt") = 1e-3, py::arg("t_end") = 1.0,
      py::arg("paths") = 100, py::arg("seed") = 0, py::arg("workers") = 0,
      py::arg("y0") = py::none(), "(times, states[paths, points, n + 1]).");
  m.def(
      "simulate_y",
      [](int n, double c, double dt, double t_end, std::size_t paths, std::uint64_t seed,
         unsigned workers, std::optional<double> y0) {
        const auto p = make_params(n, c);
        const auto cfg = make_config(dt, t_end, paths, seed, workers, y0, std::nullopt);
        std::vector<Trajectory> out;
        {
          py::gil_scoped_release release;
          out = ymarg::simulate_y(p, cfg);
        }
        return stack(out);
      },
      py::arg("n") = 3, py::arg("c") = 1.0, py::arg("dt") = 1e-3, py::arg("t_end") = 1.0,
      py::arg("paths") = 100, py::arg("seed") = 0, py::arg("workers") = 0,
      py::arg("y0") = py::none());
  m.def(
      "simulate_wf",
      [](int n, double c, double dt, double t_end, std::size_t paths, std::uint64_t seed,
         unsigned workers, std::optional<double> xi0) {
        const auto p = make_params(n, c);
        const auto spec = wf::TransformSpec::make(c);
        const auto cfg = make_config(dt, t_end, paths, seed, workers, std::nullopt, xi0);
        std::vector<Trajectory> out;
        {
          py::gil_scoped_release release;
          out = wf::simulate_wf(p, spec, cfg);
        }
        return stack(out);
      },
      py::arg("n") = 3, py::arg("c") = 1.0, py::arg("dt") = 1e-3, py::arg("t_end") = 1.0,
      py::arg("paths") = 100, py::arg("seed") = 0, py::arg("workers") = 0,
      py::arg("xi0") = py::none());
  m.def(
      "sample_glued_terminal_x",
      [](int n, double c, double dt, double t_end, std::size_t paths, std::uint64_t seed,
         unsigned workers) {
        const auto p = make_params(n, c);
        const auto cfg = make_config(dt, t_end, paths, seed, workers, std::nullopt, std::nullopt);
        std::vector<double> out;
        {
          py::gil_scoped_release release;
          out = skew::sample_glued_terminal_x(p, cfg);
        }
        return to_array(out, n);
      },
      py::arg("n") = 3, py::arg("c") = 1.0, py::arg("dt") = 1e-3, py::arg("t_end") = 1.0,
      py::arg("paths") = 100, py::arg("seed") = 0, py::arg("workers") = 0,
      "X at t_end rebuilt from independent Y paths and spherical Brownian motions.");
  m.def(
      "pathwise_reconstruction_error",
      [](int n, double c, double dt, double t_end, std::uint64_t seed, std::uint64_t path) {
        const auto p = make_params(n, c);
        const auto cfg = make_config(dt, t_end, 1, seed, 1, std::nullopt, std::nullopt);
        const auto ap = ellipsoid::simulate_z_path(p, cfg, path);
        return skew::pathwise_reconstruction_error(
            ap.path, p, {skew::ChangedTimeGrid::kNative, 0.0});
      },
      py::arg("n") = 3, py::arg("c") = 1.0, py::arg("dt") = 1e-3, py::arg("t_end") = 1.0,
      py::arg("seed") = 0, py::arg("path") = 0);

  // Statistics.
  m.def("ks_statistic", [](const Array& a, const Array& b) {
    const auto va = to_vector(a), vb = to_vector(b);
    return stats::ks_statistic(va, vb);
  });
  m.def("ks_critical_coefficient", &stats::ks_critical_coefficient, py::arg("alpha"));
  m.def(
      "ks_two_sample",
      [](const Array& a, const Array& b, double alpha) {
        const stats::SampleSet sa{to_vector(a), "a"}, sb{to_vector(b), "b"};
        nlohmann::json j = stats::ks_two_sample(sa, sb, alpha);
        return to_python(j);
      },
      py::arg("a"), py::arg("b"), py::arg("alpha") = 0.01);

  m.def("suite_names", &verify::suite_names);
  m.def(
      "verify",
      [](const std::string& suite, const std::map<std::string, std::string>& settings) {
        RunSettings rs;
        apply_settings(rs, KeyValues(settings.begin(), settings.end()));
        rs.validate();
        nlohmann::json j;
        {
          py::gil_scoped_release release;
          j = verify::run_suite(suite, rs);
        }
        return to_python(j);
      },
      py::arg("suite"), py::arg("settings") = std::map<std::string, std::string>{},
      "Runs a named suite; settings use the config-file keys as strings.");
}
