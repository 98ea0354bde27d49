// SPDX-License-Identifier: Apache-2.0
#pragma once

// Trajectory files.
//
// CSV: one header row naming the columns, then for every path a comment line
// "# path <index>" followed by one row per grid point. Reals are written in
// shortest round-trip decimal form, so identical runs give identical bytes.
//
// Binary (little-endian):
//   char[4]  magic "EBMT"
//   u32      version (1)
//   u32      kind (TrajectoryKind)
//   u32      n
//   f64      c
//   f64      dt
//   u64      path count
//   u32      state dimension d
//   u32      reserved (0)
//   then per path:  u64 point count m, followed by m records of (t, s_1..s_d) f64.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ebm/trajectory.hpp"

namespace ebm::io {

enum class TrajectoryKind : std::uint32_t {
  kEllipsoid = 1,  // t, x1..xn, y
  kY = 2,          // t, y
  kWrightFisher = 3,  // t, xi
  kSphereVhat = 4,    // u, v1..vn
};

inline constexpr char kMagic[4] = {'E', 'B', 'M', 'T'};
inline constexpr std::uint32_t kVersion = 1;

/// Shortest decimal string that parses back to exactly v.
std::string format_real(double v);

std::vector<std::string> column_names(TrajectoryKind kind, int n);

void write_csv(std::ostream& os, TrajectoryKind kind, const std::vector<Trajectory>& paths);

struct BinaryHeader {
  TrajectoryKind kind = TrajectoryKind::kEllipsoid;
  std::uint32_t version = kVersion;
  std::uint32_t n = 0;
  double c = 0.0;
  double dt = 0.0;
  std::uint64_t path_count = 0;
  std::uint32_t dim = 0;
};

void write_binary(std::ostream& os, TrajectoryKind kind, const EllipsoidParams& p, double dt,
                  const std::vector<Trajectory>& paths);

struct BinaryFile {
  BinaryHeader header;
  std::vector<Trajectory> paths;
};

/// Throws std::runtime_error on a malformed stream.
BinaryFile read_binary(std::istream& is);

}  // namespace ebm::io
