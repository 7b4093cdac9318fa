#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qdiff {

enum class ErrorCode {
  domain_error,
  divisor_singular,
  outside_safe_radius,
  origin_singular,
  outside_domain,
  nonconvergent_sample,
  denominator_pochhammer_zero,
  coefficient_pole_at_origin,
  bracket_underflow,
  pole_on_circle,
  target_unsupported,
  root_finding_failed,
  multiplicity_ambiguous,
  insufficient_grid,
  truncation_too_short,
  max_modulus_ambiguous,
  degenerate_model,
  unknown_function,
  regime_mismatch,
  schema_error,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every library failure surfaces as this exception; `code()` is the stable
// discriminator, `what()` is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace qdiff
