#pragma once

#include <utility>
#include <vector>

#include "qdiff/qcore.hpp"
#include "qdiff/sampler.hpp"

namespace qdiff {

/// Parameters of r_phi_s(alpha; beta; q, z).
struct PhiParams {
  std::vector<cplx> alpha;
  std::vector<cplx> beta;
  QParam qp;
};

/// Coefficients t_j = prod(alpha;q)_j / prod(beta;q)_j
///                    * [(-1)^j q^{j(j-1)/2}]^{1+s-r} / (q;q)_j,  j = 0..N.
/// Throws denominator_pochhammer_zero when some (beta_i; q)_j vanishes.
TruncatedSeries phi_rs(const PhiParams& params, int order);

/// c_n = 1 / [n]_q!, n >= 0. Solves D_q f = f with f(0) = 1.
TruncatedSeries exp_q(const QParam& qp, int order);
/// c_n = 1 / (q;q)_n.
TruncatedSeries etilde_q(const QParam& qp, int order);
/// c_n = q^{n(n-1)/2} / (q;q)_n.
TruncatedSeries E_q(const QParam& qp, int order);
/// (sin_q, cos_q) built from exp_q(iz) and exp_q(-iz).
std::pair<TruncatedSeries, TruncatedSeries> sinq_cosq(const QParam& qp, int order);

/// Points anchor * step^n, n >= 0, each with the same multiplicity.
struct QLattice {
  cplx anchor;
  cplx step;
  int multiplicity = 1;

  /// Lattice points with modulus <= r, in increasing modulus (|step| > 1).
  std::vector<cplx> points_within(double r) const;
};

/// prod_{n>=1} (1 - q^{-n} z) for |q| > 1; domain_error otherwise.
cplx etilde_product(cplx z, const QParam& qp, double tol = 1e-16);
/// prod_{n>=0} (1 + q^n z) for |q| < 1; domain_error otherwise.
cplx E_q_product(cplx z, const QParam& qp, double tol = 1e-16);

/// Zeros of the product forms: {q^n : n >= 1} and {-q^{-n} : n >= 0}.
QLattice etilde_zero_lattice(const QParam& qp);
QLattice E_q_zero_lattice(const QParam& qp);

Sampler etilde_product_sampler(const QParam& qp, double tol = 1e-16);
Sampler E_q_product_sampler(const QParam& qp, double tol = 1e-16);

}  // namespace qdiff
