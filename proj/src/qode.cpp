#include "qdiff/qode.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qdiff/qoperator.hpp"

namespace qdiff {

namespace {

constexpr int kExpansionMargin = 5;
constexpr double kConditioningFloor = 1e-6;

void check_problem(const QdeProblem& prob, int order) {
  if (prob.k < 1) throw Error(ErrorCode::domain_error, "equation order k must be >= 1");
  if (static_cast<int>(prob.initial.size()) != prob.k) {
    throw Error(ErrorCode::domain_error, "need exactly k initial coefficients");
  }
  if (order < prob.k) throw Error(ErrorCode::domain_error, "truncation order must be >= k");
}

TruncatedSeries expand(const RationalFunction& f, int order) {
  if (f.is_zero()) return TruncatedSeries::constant(0.0, order);
  return f.origin_series(order);
}

// Shared recurrence: c_{n+k} prod_j [n+j] = b_n - sum_m a_m w(n, m) c_{n-m}.
template <typename Weight>
QdeSolution run_recurrence(const QParam& qp, int k, const TruncatedSeries& a,
                           const TruncatedSeries& b, const std::vector<cplx>& initial, int order,
                           Weight weight) {
  qp.require_order(order);
  std::vector<cplx> c(static_cast<std::size_t>(order) + 1, cplx(0.0));
  std::copy(initial.begin(), initial.end(), c.begin());
  QdeSolution out;
  for (int n = 0; n + k <= order; ++n) {
    cplx rhs = b[n];
    for (int m = 0; m <= n; ++m) rhs -= a[m] * weight(n, m) * c[static_cast<std::size_t>(n - m)];
    cplx div(1.0);
    bool weak = false;
    for (int j = 1; j <= k; ++j) {
      const cplx br = q_bracket(n + j, qp);
      weak = weak || std::abs(br) < kConditioningFloor;
      div *= br;
    }
    if (weak) out.ill_conditioned.push_back(n + k);
    c[static_cast<std::size_t>(n + k)] = rhs / div;
  }
  out.f = TruncatedSeries::certified(std::move(c));
  return out;
}

}  // namespace

QdeSolution solve_series(const QdeProblem& prob, int order) {
  check_problem(prob, order);
  const int ext = order + prob.k + kExpansionMargin;
  const TruncatedSeries a = expand(prob.A, ext);
  const TruncatedSeries b = expand(prob.B, ext);
  QdeSolution out = run_recurrence(prob.qp, prob.k, a, b, prob.initial, order,
                                   [](int, int) { return cplx(1.0); });
  out.formal = prob.qp.inside_unit_disc() && prob.A.is_polynomial() && !prob.A.is_zero();
  return out;
}

ResidualReport residual(const QdeProblem& prob, const TruncatedSeries& f) {
  if (f.order() < prob.k) {
    throw Error(ErrorCode::truncation_too_short, "series shorter than the equation order");
  }
  const int n = f.order() - prob.k;
  const int ext = f.order() + prob.k + kExpansionMargin;
  const TruncatedSeries a = expand(prob.A, ext);
  const TruncatedSeries b = expand(prob.B, ext);
  std::vector<cplx> fc(f.coeffs().begin(), f.coeffs().begin() + n + 1);
  const TruncatedSeries af = a.truncated(n) * TruncatedSeries(fc);
  ResidualReport rep;
  rep.series = dqk_series(f, prob.qp, prob.k) + af - b.truncated(n);
  rep.max_abs = rep.series.max_abs();
  rep.scale = f.max_abs();
  return rep;
}

std::vector<PointResidual> verify_pointwise(const QdeProblem& prob, const Sampler& f,
                                            const std::vector<cplx>& points) {
  std::vector<PointResidual> out;
  out.reserve(points.size());
  for (const auto& z : points) {
    const cplx dk = dqk_closed_form(f, z, prob.qp, prob.k);
    const cplx af = prob.A.eval(z) * f(z);
    const cplx bz = prob.B.is_zero() ? cplx(0.0) : prob.B.eval(z);
    const double abs_res = std::abs(dk + af - bz);
    const double scale = std::max({std::abs(dk), std::abs(af), std::abs(bz)});
    out.push_back({z, abs_res, scale > 0.0 ? abs_res / scale : abs_res});
  }
  return out;
}

DegreeCondition polynomial_degree_condition(const QdeProblem& prob) {
  if (!prob.B.is_zero()) {
    throw Error(ErrorCode::domain_error, "the degree condition is stated for B = 0");
  }
  if (prob.A.is_zero()) throw Error(ErrorCode::domain_error, "A must be nonzero");
  DegreeCondition d;
  d.deg_num = prob.A.num().degree();
  d.deg_den = prob.A.den().degree();
  d.k = prob.k;
  d.polynomial_admissible = d.deg_den - d.deg_num == prob.k;
  return d;
}

cplx product_solution(const Polynomial& P, const QParam& qp, cplx z, cplx f0, double tol) {
  if (!qp.inside_unit_disc()) {
    throw Error(ErrorCode::domain_error, "the product solution needs |q| < 1");
  }
  const cplx q = qp.value();
  const double cutoff = tol * (1.0 - qp.modulus());
  cplx acc = f0;
  cplx w = z;
  constexpr int kMaxFactors = 1'000'000;
  for (int j = 0; j < kMaxFactors; ++j) {
    const cplx term = (1.0 - q) * w * P.eval(w);
    if (std::abs(w) <= 1.0 && std::abs(term) < cutoff) return acc;
    acc *= 1.0 + term;
    w *= q;
  }
  throw Error(ErrorCode::nonconvergent_sample, "product did not reach its cutoff");
}

TruncatedSeries solve_shifted_direct(const RationalFunction& A, const QParam& qp, int k,
                                     const std::vector<cplx>& initial, int order) {
  QdeProblem shape{k, A, RationalFunction(), qp, initial};
  check_problem(shape, order);
  const TruncatedSeries a = expand(A, order + k + kExpansionMargin);
  const TruncatedSeries zero = TruncatedSeries::constant(0.0, order + k + kExpansionMargin);
  const cplx q = qp.value();
  return run_recurrence(qp, k, a, zero, initial, order,
                        [q, k](int n, int m) { return ipow(q, static_cast<long long>(k) * (n - m)); })
      .f;
}

TruncatedSeries solve_shifted_transformed(const RationalFunction& A, const QParam& qp, int k,
                                          const std::vector<cplx>& initial, int order) {
  const cplx q = qp.value();
  const cplx s = ipow(q, -k);
  const cplx c = ipow(q, -static_cast<long long>(k) * (k - 1) / 2);
  // A~(w) = c A(s w): scale the numerator by c, both polynomials' argument by s.
  const RationalFunction At = RationalFunction::reduced(c * A.num().scaled_arg(s), A.den().scaled_arg(s));
  QdeProblem prob{k, At, RationalFunction(), qp.inverse(), initial};
  return solve_series(prob, order).f;
}

}  // namespace qdiff
