// SPDX-License-Identifier: Apache-2.0
//
// ebm: simulate Brownian motion on a hyperellipsoid and its skew-product
// pieces, run verification suites, and emit figure data.
//
// Exit codes: 0 success, 1 verification failure, 2 invalid configuration,
// 3 numerical failure.

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ebm/config.hpp"
#include "ebm/ellipsoid_sde.hpp"
#include "ebm/errors.hpp"
#include "ebm/skew_product.hpp"
#include "ebm/trajectory_io.hpp"
#include "ebm/verify_suites.hpp"
#include "ebm/wf_transform.hpp"
#include "ebm/y_marginal.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

// Flags are collected as strings and applied through the same typed
// validation as config-file entries, after the file, so flags win.
struct SimFlags {
  std::vector<std::pair<std::string, std::string>> given;
  std::string n, c, dt, t_end, paths, y0, xi0, z0;

  void add(CLI::App* app) {
    app->add_option("--n", n, "ellipsoid dimension (>= 2)");
    app->add_option("--c", c, "axis parameter c > 0");
    app->add_option("--dt", dt, "time step");
    app->add_option("--t-end", t_end, "time horizon");
    app->add_option("--paths", paths, "number of independent paths");
    app->add_option("--y0", y0, "initial last coordinate");
    app->add_option("--xi0", xi0, "initial Wright-Fisher state");
    app->add_option("--z0", z0, "initial ambient point, comma-separated");
  }

  void apply(ebm::RunSettings& s) const {
    const std::pair<const char*, const std::string*> fields[] = {
        {"n", &n},   {"c", &c},       {"dt", &dt},    {"t_end", &t_end},
        {"paths", &paths}, {"y0", &y0}, {"xi0", &xi0}, {"z0", &z0}};
    for (const auto& [key, value] : fields)
      if (!value->empty()) ebm::apply_setting(s, key, *value);
  }
};

struct GlobalFlags {
  std::string config;
  std::string seed;
  std::string workers;
};

ebm::RunSettings load_settings(const GlobalFlags& g, const SimFlags& f) {
  ebm::RunSettings s;
  if (!g.config.empty()) {
    std::ifstream in(g.config);
    if (!in) throw ebm::ConfigError("cannot open config file '" + g.config + "'");
    ebm::apply_settings(s, ebm::parse_key_values(in));
  }
  f.apply(s);
  if (!g.seed.empty()) ebm::apply_setting(s, "seed", g.seed);
  if (!g.workers.empty()) ebm::apply_setting(s, "workers", g.workers);
  s.validate();
  return s;
}

std::ostream& open_output(const std::string& path, std::ofstream& file, bool binary) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path, binary ? std::ios::binary : std::ios::out);
  if (!file) throw ebm::ConfigError("cannot open output file '" + path + "'");
  return file;
}

int cmd_simulate(const std::string& kind, const ebm::RunSettings& s, const std::string& out,
                 const std::string& format, double du) {
  using ebm::io::TrajectoryKind;
  const auto start = std::chrono::steady_clock::now();
  const auto& p = s.params;
  const auto& cfg = s.sim;

  std::vector<ebm::Trajectory> paths;
  TrajectoryKind tk{};
  if (kind == "ellipsoid") {
    tk = TrajectoryKind::kEllipsoid;
    for (auto& ap : ebm::ellipsoid::simulate_z(p, cfg)) paths.push_back(std::move(ap.path));
  } else if (kind == "y") {
    tk = TrajectoryKind::kY;
    paths = ebm::ymarg::simulate_y(p, cfg);
  } else if (kind == "wf") {
    tk = TrajectoryKind::kWrightFisher;
    paths = ebm::wf::simulate_wf(p, ebm::wf::TransformSpec::make(p.c), cfg);
  } else if (kind == "sphere-vhat") {
    tk = TrajectoryKind::kSphereVhat;
    for (const auto& ap : ebm::ellipsoid::simulate_z(p, cfg)) {
      const auto tmap = ebm::skew::build_time_change(ebm::skew::last_coordinate(ap.path), p);
      paths.push_back(ebm::skew::extract_vhat(
          ap.path, tmap, {ebm::skew::ChangedTimeGrid::kUniform, du}));
    }
  } else {
    throw ebm::ConfigError("unknown simulation kind '" + kind + "'");
  }

  const bool binary = format == "bin";
  std::ofstream file;
  std::ostream& os = open_output(out, file, binary);
  if (binary)
    ebm::io::write_binary(os, tk, p, cfg.dt, paths);
  else
    ebm::io::write_csv(os, tk, paths);
  os.flush();

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ostream& log = (&os == &std::cout) ? std::cerr : std::cout;
  log << "simulate " << kind << ": paths=" << paths.size() << " steps=" << cfg.steps()
      << " wall=" << wall << "s\n";
  return kExitOk;
}

int cmd_verify(const std::string& suite, const ebm::RunSettings& s) {
  const auto report = ebm::verify::run_suite(suite, s);
  std::cout << nlohmann::json(report).dump(2) << '\n';
  if (!report.passed()) {
    for (const auto& t : report.tests)
      if (!t.passed)
        std::cerr << "FAILED " << t.name << ": statistic " << t.statistic << " > threshold "
                  << t.threshold << '\n';
    return kExitVerifyFailed;
  }
  return kExitOk;
}

std::vector<double> parse_reals(const std::vector<std::string>& items) {
  std::vector<double> out;
  for (const auto& item : items) {
    std::stringstream ss(item);
    std::string piece;
    while (std::getline(ss, piece, ',')) {
      ebm::RunSettings scratch;
      ebm::apply_setting(scratch, "c", piece);
      out.push_back(scratch.params.c);
    }
  }
  return out;
}

int cmd_figures(const std::string& which, const std::vector<std::string>& c_items, double c_min,
                double c_max, int points, const std::string& out) {
  using ebm::io::format_real;
  if (points == 0) points = which == "r-factor" ? 199 : 201;
  if (points < 2) throw ebm::ConfigError("--points must be >= 2");
  std::ofstream file;
  std::ostream& os = open_output(out, file, false);
  if (which == "r-factor") {
    std::vector<double> cs = c_items.empty() ? std::vector<double>{20.0, 30.0} : parse_reals(c_items);
    os << "c,xi,r\n";
    for (const double c : cs) {
      if (!(c > 0.0)) throw ebm::ConfigError("c must be > 0");
      const auto spec = ebm::wf::TransformSpec::make(c);
      for (int k = 1; k <= points; ++k) {
        const double xi = static_cast<double>(k) / (points + 1);
        os << format_real(c) << ',' << format_real(xi) << ','
           << format_real(ebm::wf::r_factor(xi, spec)) << '\n';
      }
    }
  } else if (which == "h-squared") {
    if (!(c_min > 0.0 && c_max > c_min)) throw ebm::ConfigError("need 0 < c-min < c-max");
    const double lo = std::log10(c_min), hi = std::log10(c_max);
    os << "c,h2_over_4\n";
    for (int k = 0; k < points; ++k) {
      const double c = std::pow(10.0, lo + (hi - lo) * k / (points - 1));
      const double h = ebm::wf::h_of_c(c);
      os << format_real(c) << ',' << format_real(h * h / 4.0) << '\n';
    }
  } else {
    throw ebm::ConfigError("unknown figure '" + which + "'");
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Brownian motion on hyperellipsoids: simulation, skew-product decomposition "
               "and verification"};
  app.require_subcommand(1);
  GlobalFlags global;
  app.add_option("--config", global.config, "key = value configuration file");
  app.add_option("--seed", global.seed, "64-bit seed");
  app.add_option("--workers", global.workers, "worker threads (0: all cores)");

  SimFlags sim_flags;
  std::string kind, out, format = "csv";
  double du = 0.0;
  auto* simulate = app.add_subcommand("simulate", "simulate trajectories");
  simulate->fallthrough();
  simulate->add_option("kind", kind, "ellipsoid | y | wf | sphere-vhat")->required();
  simulate->add_option("--out,-o", out, "output path ('-' for stdout)");
  simulate->add_option("--format", format, "csv | bin")
      ->check(CLI::IsMember({"csv", "bin"}));
  simulate->add_option("--du", du, "changed-time step for sphere-vhat (default dt)");
  sim_flags.add(simulate);

  SimFlags verify_flags;
  std::string suite;
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->fallthrough();
  verify->add_option("suite", suite,
                     "coefficients | transform | boundary | skewprod | independence | "
                     "sphere-collapse | all")
      ->required();
  verify_flags.add(verify);

  std::string which, fig_out;
  std::vector<std::string> c_items;
  double c_min = 1e-2, c_max = 1e3;
  int points = 0;
  auto* figures = app.add_subcommand("figures", "emit figure data as CSV");
  figures->add_option("which", which, "r-factor | h-squared")->required();
  figures->add_option("--c", c_items, "c values for r-factor (default 20,30)");
  figures->add_option("--c-min", c_min, "smallest c for h-squared");
  figures->add_option("--c-max", c_max, "largest c for h-squared");
  figures->add_option("--points", points, "grid points (default 199 for r-factor, 201 for h-squared)");
  figures->add_option("--out,-o", fig_out, "output path ('-' for stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (simulate->parsed())
      return cmd_simulate(kind, load_settings(global, sim_flags), out, format, du);
    if (verify->parsed()) return cmd_verify(suite, load_settings(global, verify_flags));
    if (figures->parsed()) return cmd_figures(which, c_items, c_min, c_max, points, fig_out);
  } catch (const ebm::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ebm::DomainError& e) {
    std::cerr << "invalid parameter: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ebm::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const ebm::DegenerateError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitOk;
}
