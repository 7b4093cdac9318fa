#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace qdiff {

struct Check {
  std::string name;
  double value = 0.0;
  std::string relation;  // "<", "<=" or ">="
  double limit = 0.0;
  bool passed = false;
};

struct SuiteReport {
  std::string suite;
  std::vector<Check> checks;
  bool passed() const;
};

struct VerifyOptions {
  std::uint64_t seed = 1;
  /// Multiplies every upper tolerance of the numeric checks.
  double tol_scale = 1.0;
};

/// identities, operator-rules, casorati, solver, jensen, sft, defects,
/// wiman-valiron, logderiv.
const std::vector<std::string>& suite_names();

/// Throws unknown_function for a name not in suite_names(). Results depend
/// only on the options.
SuiteReport run_suite(std::string_view name, const VerifyOptions& options = {});

}  // namespace qdiff
