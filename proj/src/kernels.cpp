#include "qdiff/kernels.hpp"

#include <cmath>
#include <exception>
#include <numbers>

namespace qdiff {

void for_each_index(std::size_t n, const std::function<void(std::size_t)>& body, Exec exec) {
  std::vector<std::exception_ptr> failures(n);
  const auto run = [&](std::size_t i) {
    try {
      body(i);
    } catch (...) {
      failures[i] = std::current_exception();
    }
  };
  if (exec == Exec::parallel) {
    const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < count; ++i) run(static_cast<std::size_t>(i));
  } else {
    for (std::size_t i = 0; i < n; ++i) run(i);
  }
  for (const auto& e : failures) {
    if (e) std::rethrow_exception(e);
  }
}

std::vector<double> sample_circle(const CircleFn& phi, double r, int nodes, Exec exec) {
  if (nodes < 1) throw Error(ErrorCode::domain_error, "circle needs at least one node");
  const auto m = static_cast<std::size_t>(nodes);
  std::vector<double> out(m);
  const double h = 2.0 * std::numbers::pi / nodes;
  for_each_index(
      m, [&](std::size_t j) { out[j] = phi(std::polar(r, h * (static_cast<double>(j) + 0.5))); }, exec);
  return out;
}

namespace {

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

CircleMean circle_mean(const CircleFn& phi, double r, int nodes, Exec exec) {
  if (nodes < 2 || nodes % 2 != 0) {
    throw Error(ErrorCode::domain_error, "node count must be even and at least 2");
  }
  const double fine = mean(sample_circle(phi, r, nodes, exec));
  const double coarse = mean(sample_circle(phi, r, nodes / 2, exec));
  return {fine, std::abs(fine - coarse)};
}

}  // namespace qdiff
