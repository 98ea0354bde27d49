// SPDX-License-Identifier: Apache-2.0
#include "ebm/trajectory_io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace ebm::io {
namespace {

static_assert(std::endian::native == std::endian::little,
              "binary trajectory format assumes a little-endian host");

template <typename T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  T v{};
  if (!is.read(reinterpret_cast<char*>(&v), sizeof(T)))
    throw std::runtime_error("truncated trajectory file");
  return v;
}

std::uint32_t state_dim(TrajectoryKind kind, int n) {
  switch (kind) {
    case TrajectoryKind::kEllipsoid: return static_cast<std::uint32_t>(n + 1);
    case TrajectoryKind::kSphereVhat: return static_cast<std::uint32_t>(n);
    default: return 1;
  }
}

}  // namespace

std::string format_real(double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return {buf.data(), res.ptr};
}

std::vector<std::string> column_names(TrajectoryKind kind, int n) {
  std::vector<std::string> cols;
  switch (kind) {
    case TrajectoryKind::kEllipsoid:
      cols.push_back("t");
      for (int i = 1; i <= n; ++i) cols.push_back("x" + std::to_string(i));
      cols.push_back("y");
      break;
    case TrajectoryKind::kY:
      cols = {"t", "y"};
      break;
    case TrajectoryKind::kWrightFisher:
      cols = {"t", "xi"};
      break;
    case TrajectoryKind::kSphereVhat:
      cols.push_back("u");
      for (int i = 1; i <= n; ++i) cols.push_back("v" + std::to_string(i));
      break;
  }
  return cols;
}

void write_csv(std::ostream& os, TrajectoryKind kind, const std::vector<Trajectory>& paths) {
  const int n = paths.empty() ? 2 : paths.front().params.n;
  const auto cols = column_names(kind, n);
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << '\n';
  for (const auto& path : paths) {
    os << "# path " << path.path_index << '\n';
    for (std::size_t k = 0; k < path.size(); ++k) {
      os << format_real(path.times[k]);
      for (double v : path.state(k)) os << ',' << format_real(v);
      os << '\n';
    }
  }
}

void write_binary(std::ostream& os, TrajectoryKind kind, const EllipsoidParams& p, double dt,
                  const std::vector<Trajectory>& paths) {
  const std::uint32_t dim = state_dim(kind, p.n);
  os.write(kMagic, 4);
  put(os, kVersion);
  put(os, static_cast<std::uint32_t>(kind));
  put(os, static_cast<std::uint32_t>(p.n));
  put(os, p.c);
  put(os, dt);
  put(os, static_cast<std::uint64_t>(paths.size()));
  put(os, dim);
  put(os, std::uint32_t{0});
  for (const auto& path : paths) {
    if (path.dim != dim) throw std::invalid_argument("path dimension does not match kind");
    put(os, static_cast<std::uint64_t>(path.size()));
    for (std::size_t k = 0; k < path.size(); ++k) {
      put(os, path.times[k]);
      for (double v : path.state(k)) put(os, v);
    }
  }
}

BinaryFile read_binary(std::istream& is) {
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error("not a trajectory file (bad magic)");
  BinaryFile file;
  auto& h = file.header;
  h.version = get<std::uint32_t>(is);
  if (h.version != kVersion) throw std::runtime_error("unsupported trajectory file version");
  h.kind = static_cast<TrajectoryKind>(get<std::uint32_t>(is));
  h.n = get<std::uint32_t>(is);
  h.c = get<double>(is);
  h.dt = get<double>(is);
  h.path_count = get<std::uint64_t>(is);
  h.dim = get<std::uint32_t>(is);
  get<std::uint32_t>(is);
  if (h.dim != state_dim(h.kind, static_cast<int>(h.n)))
    throw std::runtime_error("trajectory file dimension does not match its kind");

  file.paths.reserve(h.path_count);
  for (std::uint64_t i = 0; i < h.path_count; ++i) {
    const auto m = get<std::uint64_t>(is);
    Trajectory path(h.dim, m);
    path.params = {static_cast<int>(h.n), h.c};
    path.dt = h.dt;
    path.path_index = i;
    std::vector<double> state(h.dim);
    for (std::uint64_t k = 0; k < m; ++k) {
      const double t = get<double>(is);
      for (auto& v : state) v = get<double>(is);
      path.push(t, state);
    }
    file.paths.push_back(std::move(path));
  }
  return file;
}

}  // namespace ebm::io
