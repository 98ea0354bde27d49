// SPDX-License-Identifier: Apache-2.0
#include "ebm/config.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <vector>

#include "ebm/errors.hpp"

namespace ebm {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_real(const std::string& key, const std::string& text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end || !std::isfinite(v))
    throw ConfigError("'" + key + "': expected a real number, got '" + text + "'");
  return v;
}

template <typename Int>
Int parse_int(const std::string& key, const std::string& text) {
  Int v = 0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end)
    throw ConfigError("'" + key + "': expected an integer, got '" + text + "'");
  return v;
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto piece = trim(text.substr(start, comma == std::string::npos ? std::string::npos
                                                                          : comma - start));
    out.push_back(parse_real(key, piece));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

void RunSettings::validate() const {
  params.validate();
  sim.validate();
  if (sim.y0 && !(std::abs(*sim.y0) < params.c)) throw ConfigError("y0 must satisfy |y0| < c");
  if (sim.xi0 && !(*sim.xi0 > 0.0 && *sim.xi0 < 1.0)) throw ConfigError("xi0 must lie in (0, 1)");
  if (sim.z0 && sim.z0->size() != static_cast<std::size_t>(params.n + 1))
    throw ConfigError("z0 must have n+1 entries");
}

KeyValues parse_key_values(std::istream& is) {
  KeyValues kv;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string t = trim(line.substr(0, line.find('#')));
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("config line " + std::to_string(lineno) + ": empty key or value");
    if (!kv.emplace(key, value).second)
      throw ConfigError("config line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
  }
  return kv;
}

void apply_setting(RunSettings& s, const std::string& key, const std::string& value) {
  if (key == "n") {
    s.params.n = parse_int<int>(key, value);
  } else if (key == "c") {
    s.params.c = parse_real(key, value);
  } else if (key == "dt") {
    s.sim.dt = parse_real(key, value);
  } else if (key == "t_end" || key == "t-end") {
    s.sim.t_end = parse_real(key, value);
  } else if (key == "paths") {
    s.sim.paths = parse_int<std::size_t>(key, value);
  } else if (key == "seed") {
    s.sim.seed = parse_int<std::uint64_t>(key, value);
  } else if (key == "workers") {
    s.sim.workers = parse_int<unsigned>(key, value);
  } else if (key == "y0") {
    s.sim.y0 = parse_real(key, value);
  } else if (key == "xi0") {
    s.sim.xi0 = parse_real(key, value);
  } else if (key == "z0") {
    s.sim.z0 = parse_list(key, value);
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

void apply_settings(RunSettings& s, const KeyValues& kv) {
  for (const auto& [key, value] : kv) apply_setting(s, key, value);
}

}  // namespace ebm
