#pragma once

#include "qdiff/qcore.hpp"
#include "qdiff/sampler.hpp"

namespace qdiff {

/// D_q on coefficients: b_n = [n+1]_q c_{n+1}, order N-1.
TruncatedSeries dq_series(const TruncatedSeries& f, const QParam& qp);
/// k-fold dq_series: b_n = c_{n+k} prod_{j=1}^k [n+j]_q, order N-k.
TruncatedSeries dqk_series(const TruncatedSeries& f, const QParam& qp, int k);

/// (f(qz) - f(z)) / ((q-1) z). Throws origin_singular at z = 0; the value
/// at the origin is only available through dq_series.
cplx dq_sample(const Sampler& f, cplx z, const QParam& qp);

/// D_q^k f(z) from the k+1 lattice values f(q^{k-j} z):
/// (q-1)^-k z^-k q^{-k(k-1)/2} sum_j (-1)^j [k,j]_q q^{j(j-1)/2} f(q^{k-j} z).
cplx dqk_closed_form(const Sampler& f, cplx z, const QParam& qp, int k);
/// D_q applied k times by nesting dq_sample (2^k evaluations).
cplx dqk_iterated(const Sampler& f, cplx z, const QParam& qp, int k);
/// z -> D_q^k f(z) through the closed form.
Sampler dqk_sampler(const Sampler& f, const QParam& qp, int k);

/// Jackson integral from a to z: (z-a)(1-q) sum_j q^j f(a + q^j (z-a)),
/// |q| < 1. The sum stops once the remaining geometric tail, estimated with
/// the sup of |f| over the first 200 orbit points, is below tol |z-a|.
///
/// Throws domain_error for |q| >= 1 and nonconvergent_sample when f is not
/// finite on the orbit or the terms fail to decay.
cplx jackson_integral(const Sampler& f, cplx a, cplx z, const QParam& qp, double tol = 1e-14);

/// C_J(f1, f2) = f1 D_q f2 - f2 D_q f1.
TruncatedSeries casorati(const TruncatedSeries& f1, const TruncatedSeries& f2, const QParam& qp);
Sampler casorati(const Sampler& f1, const Sampler& f2, const QParam& qp);

/// True iff every coefficient of D_q f is below tol max(1, max |c_n|).
bool kernel_check(const TruncatedSeries& f, const QParam& qp, double tol = 1e-12);

}  // namespace qdiff
