#pragma once

#include <vector>

#include "qdiff/polynomial.hpp"
#include "qdiff/qcore.hpp"
#include "qdiff/rational.hpp"
#include "qdiff/sampler.hpp"

namespace qdiff {

/// D_q^k f + A f = B with f(z) = sum c_n z^n and c_0..c_{k-1} given.
struct QdeProblem {
  int k = 1;
  RationalFunction A;
  RationalFunction B;  // the zero function for homogeneous equations
  QParam qp{2.0};
  std::vector<cplx> initial;
};

struct QdeSolution {
  TruncatedSeries f;
  /// |q| < 1 with a nonzero polynomial A: no nonzero entire solution
  /// exists, the coefficients only define a formal series.
  bool formal = false;
  /// Indices n whose divisor prod_j [n-k+j]_q fell below 1e-6.
  std::vector<int> ill_conditioned;
};

/// Coefficients from c_{n+k} prod_{j=1}^k [n+j]_q = b_n - sum_m a_m c_{n-m},
/// with A and B expanded about the origin to order N + k + 5.
///
/// Throws coefficient_pole_at_origin if A or B has a pole at 0 and
/// bracket_underflow if some [n]_q, n <= N, hits the root-of-unity guard.
QdeSolution solve_series(const QdeProblem& prob, int order);

struct ResidualReport {
  TruncatedSeries series;  // D_q^k f + A f - B, order N - k
  double max_abs = 0.0;
  double scale = 0.0;  // max |c_n| of f
};
ResidualReport residual(const QdeProblem& prob, const TruncatedSeries& f);

struct PointResidual {
  cplx z;
  double absolute;
  /// absolute / max(|D_q^k f|, |A f|, |B|)
  double relative;
};
/// Residual of the equation at each point, D_q^k f from the closed form.
std::vector<PointResidual> verify_pointwise(const QdeProblem& prob, const Sampler& f,
                                            const std::vector<cplx>& points);

struct DegreeCondition {
  int deg_num = 0;
  int deg_den = 0;
  int k = 1;
  /// deg P2 - deg P1 = k; otherwise every nonzero solution is transcendental.
  bool polynomial_admissible = false;
};
/// Requires B = 0 (domain_error otherwise).
DegreeCondition polynomial_degree_condition(const QdeProblem& prob);

/// f(0) prod_{j>=0} (1 + (1-q) q^j z P(q^j z)), the entire solution of
/// D_q f = P(z) f(qz) for |q| < 1.
cplx product_solution(const Polynomial& P, const QParam& qp, cplx z, cplx f0 = 1.0,
                      double tol = 1e-16);

/// D_q^k f + A(z) f(q^k z) = 0 solved by its own recurrence
/// c_{n+k} prod_j [n+j]_q = -sum_m a_m q^{k(n-m)} c_{n-m}.
TruncatedSeries solve_shifted_direct(const RationalFunction& A, const QParam& qp, int k,
                                     const std::vector<cplx>& initial, int order);
/// Same equation through D_q^k f(z) = q^{k(k-1)/2} D_{1/q}^k f(q^k z): with
/// w = q^k z it becomes D_{1/q}^k f(w) + q^{-k(k-1)/2} A(q^{-k} w) f(w) = 0,
/// which solve_series handles in base 1/q.
TruncatedSeries solve_shifted_transformed(const RationalFunction& A, const QParam& qp, int k,
                                          const std::vector<cplx>& initial, int order);

}  // namespace qdiff
