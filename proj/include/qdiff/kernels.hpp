#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "qdiff/qcore.hpp"

namespace qdiff {

// Parallel paths fill per-index slots and reduce serially in index order,
// so both policies return bitwise identical results.
enum class Exec { serial, parallel };

/// Runs body(i) for i in [0, n). If any call throws, the exception of the
/// lowest failing index is rethrown after the loop.
void for_each_index(std::size_t n, const std::function<void(std::size_t)>& body, Exec exec);

using CircleFn = std::function<double(cplx)>;

/// phi(r e^{i theta_j}) at the midpoint nodes theta_j = 2 pi (j + 1/2) / M.
/// Midpoints keep the real axis, where lattice zeros tend to sit, off the
/// node set.
std::vector<double> sample_circle(const CircleFn& phi, double r, int nodes, Exec exec);

struct CircleMean {
  double value = 0.0;
  /// |Q_M - Q_{M/2}|
  double error = 0.0;
};

/// (1/2pi) int phi(r e^{it}) dt by the trapezoid rule on M and M/2 nodes.
CircleMean circle_mean(const CircleFn& phi, double r, int nodes, Exec exec = Exec::parallel);

}  // namespace qdiff
