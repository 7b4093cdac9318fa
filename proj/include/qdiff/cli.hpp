#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "qdiff/qcore.hpp"

namespace qdiff {

struct GridSpec {
  double r_min = 1e2;
  double r_max = 1e6;
  int points = 13;
  bool log_spaced = true;
};

/// "rmin:rmax:points"; log-spaced, at least 4 points, 0 < rmin < rmax.
GridSpec parse_grid(std::string_view text);

enum class OutputFormat { csv, json };

struct RunConfig {
  std::string command;
  cplx q{2.0, 0.0};
  int N = 48;
  GridSpec grid;
  int nodes = 1024;
  double tol = 1e-8;
  std::uint64_t seed = 1;
  std::string out;  // empty: the output stream
  OutputFormat format = OutputFormat::csv;
};

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command line (without the program name). Results go to `out` or
/// the --out file, diagnostics to `err`.
///
///   eval NAME (--z Z | --grid G) [--q Q] [--N N] [--path series|product]
///   solve PROBLEM.json [--N N] [--tol T]
///   order MODEL [--q Q] [--grid G] [--nodes M] [--N N]
///   verify SUITE|all [--seed S] [--tol SCALE]
///   sample MODEL [--q Q] [--grid G] [--nodes M]
///
/// MODEL is etilde_q, E_q, exp_q, sin_q, cos_q, poly (with --coeffs) or a
/// model file.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qdiff
