#include "qdiff/qspecial.hpp"

#include <cmath>
#include <string>

#include "qdiff/qcore.hpp"

namespace qdiff {

namespace {

// Series from the ratio c_{n+1} / c_n, c_0 = 1.
template <typename Ratio>
TruncatedSeries from_ratio(int order, Ratio ratio) {
  if (order < 0) throw Error(ErrorCode::domain_error, "negative truncation order");
  std::vector<cplx> c(static_cast<std::size_t>(order) + 1);
  c[0] = 1.0;
  for (int n = 0; n < order; ++n) c[static_cast<std::size_t>(n) + 1] = c[static_cast<std::size_t>(n)] * ratio(n);
  return TruncatedSeries::certified(std::move(c));
}

}  // namespace

TruncatedSeries phi_rs(const PhiParams& params, int order) {
  const QParam& qp = params.qp;
  qp.require_order(order);
  const cplx q = qp.value();
  const int r = static_cast<int>(params.alpha.size());
  const int s = static_cast<int>(params.beta.size());
  const int e = 1 + s - r;
  return from_ratio(order, [&](int j) {
    const cplx qj = ipow(q, j);
    cplx num(1.0);
    for (const auto& a : params.alpha) num *= 1.0 - a * qj;
    cplx den(1.0);
    for (const auto& b : params.beta) {
      const cplx f = 1.0 - b * qj;
      if (std::abs(f) <= 1e-13) {
        throw Error(ErrorCode::denominator_pochhammer_zero,
                    "(beta; q)_" + std::to_string(j + 1) + " vanishes");
      }
      den *= f;
    }
    return num / den * ipow(-qj, e) / (1.0 - qj * q);
  });
}

TruncatedSeries exp_q(const QParam& qp, int order) {
  qp.require_order(order);
  return from_ratio(order, [&](int n) { return 1.0 / q_bracket(n + 1, qp); });
}

TruncatedSeries etilde_q(const QParam& qp, int order) {
  qp.require_order(order);
  const cplx q = qp.value();
  return from_ratio(order, [&](int n) { return 1.0 / (1.0 - ipow(q, n + 1)); });
}

TruncatedSeries E_q(const QParam& qp, int order) {
  qp.require_order(order);
  const cplx q = qp.value();
  // q^n / (1 - q^{n+1}) avoids forming q^{n(n-1)/2} and (q;q)_n separately
  return from_ratio(order, [&](int n) { return ipow(q, n) / (1.0 - ipow(q, n + 1)); });
}

std::pair<TruncatedSeries, TruncatedSeries> sinq_cosq(const QParam& qp, int order) {
  const TruncatedSeries e = exp_q(qp, order);
  const cplx i(0.0, 1.0);
  std::vector<cplx> s(static_cast<std::size_t>(order) + 1);
  std::vector<cplx> c(static_cast<std::size_t>(order) + 1);
  for (int n = 0; n <= order; ++n) {
    const cplx ip = ipow(i, n);
    const cplx im = ipow(-i, n);
    s[static_cast<std::size_t>(n)] = (ip - im) / (2.0 * i) * e[n];
    c[static_cast<std::size_t>(n)] = (ip + im) / 2.0 * e[n];
  }
  return {TruncatedSeries::certified(std::move(s)), TruncatedSeries::certified(std::move(c))};
}

std::vector<cplx> QLattice::points_within(double r) const {
  std::vector<cplx> pts;
  if (std::abs(step) <= 1.0) throw Error(ErrorCode::domain_error, "lattice step must exceed 1 in modulus");
  cplx p = anchor;
  while (std::abs(p) <= r) {
    pts.push_back(p);
    p *= step;
  }
  return pts;
}

cplx etilde_product(cplx z, const QParam& qp, double tol) {
  if (qp.inside_unit_disc()) {
    throw Error(ErrorCode::domain_error, "the product form of etilde_q needs |q| > 1");
  }
  const QParam inv = qp.inverse();
  return q_pochhammer_inf(z * inv.value(), inv, tol);
}

cplx E_q_product(cplx z, const QParam& qp, double tol) {
  if (!qp.inside_unit_disc()) {
    throw Error(ErrorCode::domain_error, "the product form of E_q needs |q| < 1");
  }
  return q_pochhammer_inf(-z, qp, tol);
}

QLattice etilde_zero_lattice(const QParam& qp) {
  if (qp.inside_unit_disc()) throw Error(ErrorCode::domain_error, "etilde_q lattice needs |q| > 1");
  return {qp.value(), qp.value(), 1};
}

QLattice E_q_zero_lattice(const QParam& qp) {
  if (!qp.inside_unit_disc()) throw Error(ErrorCode::domain_error, "E_q lattice needs |q| < 1");
  return {-1.0, 1.0 / qp.value(), 1};
}

Sampler etilde_product_sampler(const QParam& qp, double tol) {
  if (qp.inside_unit_disc()) throw Error(ErrorCode::domain_error, "etilde_q product needs |q| > 1");
  return Sampler([qp, tol](cplx z) { return etilde_product(z, qp, tol); });
}

Sampler E_q_product_sampler(const QParam& qp, double tol) {
  if (!qp.inside_unit_disc()) throw Error(ErrorCode::domain_error, "E_q product needs |q| < 1");
  return Sampler([qp, tol](cplx z) { return E_q_product(z, qp, tol); });
}

}  // namespace qdiff
