// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ebm/params.hpp"

namespace ebm {

/// A sampled path: times[k] paired with a state vector of fixed dimension.
/// States are stored row-major in one buffer.
struct Trajectory {
  std::vector<double> times;
  std::vector<double> values;
  std::size_t dim = 1;

  // Provenance.
  EllipsoidParams params{};
  std::uint64_t seed = 0;
  std::uint64_t path_index = 0;
  double dt = 0.0;

  Trajectory() = default;
  Trajectory(std::size_t dim, std::size_t points) : dim(dim) {
    times.reserve(points);
    values.reserve(points * dim);
  }

  std::size_t size() const { return times.size(); }
  bool empty() const { return times.empty(); }

  std::span<const double> state(std::size_t k) const {
    return {values.data() + k * dim, dim};
  }
  std::span<double> state(std::size_t k) { return {values.data() + k * dim, dim}; }

  /// Scalar view for one-dimensional paths.
  double scalar(std::size_t k) const { return values[k * dim]; }

  void push(double t, std::span<const double> s) {
    times.push_back(t);
    values.insert(values.end(), s.begin(), s.end());
  }
  void push(double t, double s) {
    times.push_back(t);
    values.push_back(s);
  }

  /// Component `i` of every state as its own sequence.
  std::vector<double> component(std::size_t i) const {
    std::vector<double> out(size());
    for (std::size_t k = 0; k < size(); ++k) out[k] = values[k * dim + i];
    return out;
  }
};

/// A path of the ambient process together with the Brownian increments that
/// drove it. noise holds (n+1) entries per step.
struct AmbientPath {
  Trajectory path;
  std::vector<double> noise;

  std::span<const double> increment(std::size_t step) const {
    const std::size_t d = path.dim;
    return {noise.data() + step * d, d};
  }
};

}  // namespace ebm
