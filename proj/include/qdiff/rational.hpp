#pragma once

#include <vector>

#include "qdiff/polynomial.hpp"
#include "qdiff/qcore.hpp"
#include "qdiff/sampler.hpp"

namespace qdiff {

/// P1 / P2 with cached zero and pole lists.
///
/// The constructor finds the roots of both polynomials and rejects the pair
/// if a zero and a pole coincide within 1e-8 relative (not coprime).
class RationalFunction {
 public:
  RationalFunction() : RationalFunction(Polynomial(), Polynomial::constant(1.0)) {}
  explicit RationalFunction(Polynomial num, Polynomial den = Polynomial::constant(1.0));

  /// scale * prod (z - zero) / prod (z - pole); the lists are taken as exact.
  static RationalFunction from_roots(std::vector<Root> zeros, std::vector<Root> poles,
                                     cplx scale = 1.0);
  /// Like the constructor but cancels common roots instead of rejecting them.
  static RationalFunction reduced(const Polynomial& num, const Polynomial& den);

  const Polynomial& num() const noexcept { return num_; }
  const Polynomial& den() const noexcept { return den_; }
  const std::vector<Root>& zeros() const noexcept { return zeros_; }
  const std::vector<Root>& poles() const noexcept { return poles_; }

  bool is_zero() const noexcept { return num_.is_zero(); }
  bool is_polynomial() const noexcept { return den_.degree() == 0; }
  bool is_constant() const noexcept { return num_.degree() <= 0 && den_.degree() == 0; }
  /// max(deg P1, deg P2)
  int degree() const noexcept { return std::max(num_.degree(), den_.degree()); }

  /// Value at z; infinite at poles.
  cplx eval(cplx z) const;
  Sampler sampler() const;

  /// f(z) = c z^lambda (1 + O(z)) near the origin: returns lambda.
  int order_at_origin() const;
  /// The coefficient c above.
  cplx leading_origin_coefficient() const;

  /// Taylor coefficients about the origin; coefficient_pole_at_origin if
  /// P2(0) = 0.
  TruncatedSeries origin_series(int order) const;

  RationalFunction reciprocal() const;
  /// f - a, roots recomputed.
  RationalFunction minus_constant(cplx a) const;

 private:
  RationalFunction(Polynomial num, Polynomial den, std::vector<Root> zeros, std::vector<Root> poles)
      : num_(std::move(num)), den_(std::move(den)), zeros_(std::move(zeros)), poles_(std::move(poles)) {}

  Polynomial num_;
  Polynomial den_;
  std::vector<Root> zeros_;
  std::vector<Root> poles_;
};

/// Jackson derivative of a rational function, reduced:
/// [P(qz)Q(z) - P(z)Q(qz)] / [(q - 1) z Q(qz) Q(z)].
RationalFunction dq_rational(const RationalFunction& f, const QParam& qp);

}  // namespace qdiff
