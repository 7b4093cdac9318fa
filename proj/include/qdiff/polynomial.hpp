#pragma once

#include <vector>

#include "qdiff/qcore.hpp"

namespace qdiff {

struct Root {
  cplx z;
  int multiplicity = 1;
};

/// Dense polynomial, coefficients in ascending order. Exact trailing zeros
/// are trimmed so that degree() is the index of the last nonzero entry; the
/// zero polynomial has degree -1.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<cplx> coeffs);
  Polynomial(std::initializer_list<cplx> coeffs) : Polynomial(std::vector<cplx>(coeffs)) {}

  static Polynomial constant(cplx c) { return Polynomial(std::vector<cplx>{c}); }
  static Polynomial monomial(int power, cplx c = 1.0);
  static Polynomial from_roots(const std::vector<Root>& roots, cplx lead = 1.0);

  int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const noexcept { return c_.empty(); }
  const std::vector<cplx>& coeffs() const noexcept { return c_; }
  cplx operator[](int n) const {
    return (n >= 0 && n < static_cast<int>(c_.size())) ? c_[static_cast<std::size_t>(n)] : cplx(0.0);
  }
  cplx lead() const { return c_.empty() ? cplx(0.0) : c_.back(); }
  double max_abs() const;

  cplx eval(cplx z) const;
  Polynomial derivative() const;
  /// p(c z)
  Polynomial scaled_arg(cplx c) const;
  /// p(z + a)
  Polynomial taylor_shift(cplx a) const;
  /// Order of the zero at the origin (exact coefficients); -1 for zero poly.
  int valuation() const;
  /// Drops the lowest m coefficients, i.e. p(z) / z^m for m <= valuation.
  Polynomial divide_by_z_power(int m) const;
  /// Quotient by (z - r) via synthetic division; the remainder is discarded.
  Polynomial deflate(cplx r) const;

  /// Roots with multiplicities. Exact zeros at the origin are split off
  /// first, the rest come from companion-matrix eigenvalues, Newton polish
  /// and cluster confirmation.
  ///
  /// Throws root_finding_failed if the eigensolver fails or yields nonfinite
  /// values and multiplicity_ambiguous if a cluster can be neither confirmed
  /// as one multiple root nor separated at the 1e-7 relative scale.
  std::vector<Root> roots() const;

  /// Multiplicity of z0 as a root, judged from the Taylor coefficients at z0
  /// against their natural scale.
  int order_at(cplx z0, double rel_tol = 1e-9) const;

 private:
  std::vector<cplx> c_;
};

Polynomial operator+(const Polynomial& a, const Polynomial& b);
Polynomial operator-(const Polynomial& a, const Polynomial& b);
Polynomial operator*(const Polynomial& a, const Polynomial& b);
Polynomial operator*(cplx s, const Polynomial& a);

/// Roots of a polynomial as an unordered multiset, flattened.
int total_multiplicity(const std::vector<Root>& roots);

/// |a - b| <= rel * max(|a|, |b|), with an absolute floor for points at the
/// origin.
bool roots_close(cplx a, cplx b, double rel);

}  // namespace qdiff
