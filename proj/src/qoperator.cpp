#include "qdiff/qoperator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qdiff {

namespace {

TruncatedSeries with_radius_of(std::vector<cplx> coeffs, const TruncatedSeries& src) {
  const auto r = src.safe_radius();
  if (r && std::isinf(*r)) return TruncatedSeries::polynomial(std::move(coeffs));
  if (r) return TruncatedSeries::certified(std::move(coeffs));
  return TruncatedSeries(std::move(coeffs));
}

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

TruncatedSeries dq_series(const TruncatedSeries& f, const QParam& qp) {
  return dqk_series(f, qp, 1);
}

TruncatedSeries dqk_series(const TruncatedSeries& f, const QParam& qp, int k) {
  if (k < 1) throw Error(ErrorCode::domain_error, "operator order must be >= 1");
  const int n_out = f.order() - k;
  if (n_out < 0) {
    throw Error(ErrorCode::truncation_too_short,
                "series of order " + std::to_string(f.order()) + " cannot take D_q^" + std::to_string(k));
  }
  qp.require_order(f.order());
  std::vector<cplx> b(static_cast<std::size_t>(n_out) + 1);
  for (int n = 0; n <= n_out; ++n) {
    cplx w = f[n + k];
    for (int j = 1; j <= k; ++j) w *= q_bracket(n + j, qp);
    b[static_cast<std::size_t>(n)] = w;
  }
  return with_radius_of(std::move(b), f);
}

cplx dq_sample(const Sampler& f, cplx z, const QParam& qp) {
  if (z == cplx(0.0)) {
    throw Error(ErrorCode::origin_singular, "the difference quotient is 0/0 at the origin");
  }
  const cplx q = qp.value();
  return (f(q * z) - f(z)) / ((q - 1.0) * z);
}

cplx dqk_closed_form(const Sampler& f, cplx z, const QParam& qp, int k) {
  if (k < 1) throw Error(ErrorCode::domain_error, "operator order must be >= 1");
  if (z == cplx(0.0)) {
    throw Error(ErrorCode::origin_singular, "the difference quotient is 0/0 at the origin");
  }
  const cplx q = qp.value();
  cplx sum(0.0);
  for (int j = 0; j <= k; ++j) {
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    sum += sign * q_binomial(k, j, qp) * ipow(q, static_cast<long long>(j) * (j - 1) / 2) *
           f(ipow(q, k - j) * z);
  }
  return sum / (ipow(q - 1.0, k) * ipow(z, k) * ipow(q, static_cast<long long>(k) * (k - 1) / 2));
}

cplx dqk_iterated(const Sampler& f, cplx z, const QParam& qp, int k) {
  if (k < 1) throw Error(ErrorCode::domain_error, "operator order must be >= 1");
  if (k == 1) return dq_sample(f, z, qp);
  if (z == cplx(0.0)) {
    throw Error(ErrorCode::origin_singular, "the difference quotient is 0/0 at the origin");
  }
  const cplx q = qp.value();
  return (dqk_iterated(f, q * z, qp, k - 1) - dqk_iterated(f, z, qp, k - 1)) / ((q - 1.0) * z);
}

Sampler dqk_sampler(const Sampler& f, const QParam& qp, int k) {
  const double reach = std::pow(std::max(1.0, qp.modulus()), k);
  return Sampler([f, qp, k](cplx z) { return dqk_closed_form(f, z, qp, k); },
                 f.domain_radius() / reach);
}

cplx jackson_integral(const Sampler& f, cplx a, cplx z, const QParam& qp, double tol) {
  if (!qp.inside_unit_disc()) {
    throw Error(ErrorCode::domain_error, "the Jackson integral needs |q| < 1");
  }
  if (!(tol > 0.0)) throw Error(ErrorCode::domain_error, "tolerance must be positive");
  const cplx q = qp.value();
  const double aq = qp.modulus();
  const cplx h = z - a;
  if (h == cplx(0.0)) return 0.0;

  constexpr int kSupSamples = 200;
  constexpr int kMaxTerms = 100000;
  std::vector<cplx> head;
  head.reserve(kSupSamples);
  double sup = 0.0;
  cplx qj(1.0);
  for (int j = 0; j < kSupSamples; ++j) {
    const cplx v = f(a + qj * h);
    if (!finite(v)) {
      throw Error(ErrorCode::nonconvergent_sample, "f is not finite on the integration orbit");
    }
    head.push_back(v);
    sup = std::max(sup, std::abs(v));
    qj *= q;
  }
  // tail after term j is at most |1-q| |q|^j sup / (1 - |q|) per unit |h|
  const double tail_factor = std::abs(1.0 - q) / (1.0 - aq);
  cplx sum(0.0);
  qj = 1.0;
  double qj_abs = 1.0;
  for (int j = 0; j < kMaxTerms; ++j) {
    if (qj_abs * sup * tail_factor < tol) return h * (1.0 - q) * sum;
    const cplx v = j < kSupSamples ? head[static_cast<std::size_t>(j)] : f(a + qj * h);
    if (!finite(v)) {
      throw Error(ErrorCode::nonconvergent_sample, "f is not finite on the integration orbit");
    }
    if (j >= kSupSamples && std::abs(v) > sup) {
      // the sup estimate was too small: the orbit values keep growing
      if (std::abs(v) * qj_abs > sup) {
        throw Error(ErrorCode::nonconvergent_sample, "f grows along the integration orbit");
      }
      sup = std::abs(v);
    }
    sum += qj * v;
    qj *= q;
    qj_abs *= aq;
  }
  throw Error(ErrorCode::nonconvergent_sample, "Jackson sum did not reach its tolerance");
}

TruncatedSeries casorati(const TruncatedSeries& f1, const TruncatedSeries& f2, const QParam& qp) {
  return f1 * dq_series(f2, qp) - f2 * dq_series(f1, qp);
}

Sampler casorati(const Sampler& f1, const Sampler& f2, const QParam& qp) {
  const double radius = std::min(f1.domain_radius(), f2.domain_radius()) / std::max(1.0, qp.modulus());
  return Sampler(
      [f1, f2, qp](cplx z) { return f1(z) * dq_sample(f2, z, qp) - f2(z) * dq_sample(f1, z, qp); },
      radius);
}

bool kernel_check(const TruncatedSeries& f, const QParam& qp, double tol) {
  const double scale = std::max(1.0, f.max_abs());
  const auto d = dq_series(f, qp);
  return std::all_of(d.coeffs().begin(), d.coeffs().end(),
                     [&](cplx c) { return std::abs(c) < tol * scale; });
}

}  // namespace qdiff
