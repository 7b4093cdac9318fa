#include <doctest.h>

#include <cmath>
#include <random>

#include "qdiff/polynomial.hpp"
#include "qdiff/qoperator.hpp"
#include "qdiff/qspecial.hpp"

using namespace qdiff;

namespace {

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

Polynomial random_poly(std::mt19937_64& rng, int degree) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<cplx> c(static_cast<std::size_t>(degree) + 1);
  for (auto& x : c) x = {u(rng), u(rng)};
  if (std::abs(c.back()) < 0.1) c.back() = 1.0;
  return Polynomial(std::move(c));
}

cplx random_point(std::mt19937_64& rng, double rmin, double rmax) {
  std::uniform_real_distribution<double> r(rmin, rmax);
  std::uniform_real_distribution<double> t(-M_PI, M_PI);
  return std::polar(r(rng), t(rng));
}

}  // namespace

TEST_CASE("dq_series on monomials and constants") {
  const QParam q2(2.0);
  const auto c = dq_series(TruncatedSeries::constant(3.0, 6), q2);
  for (const auto& x : c.coeffs()) CHECK(x == cplx(0.0));
  // ((2z)^3 - z^3) / z = 7 z^2
  const auto d = dq_series(TruncatedSeries::monomial(3, 6), q2);
  CHECK(d.order() == 5);
  CHECK(std::abs(d[2] - 7.0) < 1e-15);
  CHECK(std::abs(d[0]) + std::abs(d[1]) + std::abs(d[3]) == 0.0);
}

TEST_CASE("exp_q is a fixed point of dq_series") {
  for (cplx q : {cplx(0.5), cplx(2.0), cplx(1.0, 0.5)}) {
    const QParam qp(q);
    const auto e = exp_q(qp, 30);
    const auto d = dq_series(e, qp);
    CHECK(coefficient_distance(d, e.truncated(29)) < 1e-14);
  }
}

TEST_CASE("dq_sample values and errors") {
  const QParam q2(2.0);
  const Sampler id([](cplx z) { return z; });
  CHECK(std::abs(dq_sample(id, cplx(0.3, 2.0), q2) - 1.0) < 1e-15);
  const Sampler p5([](cplx z) { return std::pow(z, 5) + 1.0; });
  CHECK(std::abs(dq_sample(p5, 1.0, q2) - 31.0) < 1e-13);
  const Sampler k([](cplx) { return cplx(4.0); });
  CHECK(dq_sample(k, 2.0, q2) == cplx(0.0));
  try {
    dq_sample(id, 0.0, q2);
    FAIL("origin accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::origin_singular);
  }
  const Sampler bounded([](cplx z) { return z; }, 1.0);
  try {
    dq_sample(bounded, 0.75, q2);
    FAIL("domain ignored");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::outside_domain);
  }
}

TEST_CASE("closed form, iterated and series D_q^k agree") {
  std::mt19937_64 rng(23);
  const QParam q2(2.0);
  const auto p = random_poly(rng, 10);
  const Sampler f = Sampler::from_polynomial(p);
  CHECK(rel(dqk_closed_form(f, 1.0, q2, 1), dq_sample(f, 1.0, q2)) < 1e-14);
  CHECK(rel(dqk_closed_form(f, 1.0, q2, 3), dqk_iterated(f, 1.0, q2, 3)) < 1e-9);

  for (int trial = 0; trial < 60; ++trial) {
    const int deg = 1 + trial % 12;
    const int k = 1 + trial % 5;
    const QParam qp(trial % 2 ? cplx(0.5) : cplx(2.0));
    const auto poly = random_poly(rng, deg);
    const Sampler s = Sampler::from_polynomial(poly);
    const auto series = dqk_series(TruncatedSeries::polynomial(
                                       [&] {
                                         auto c = poly.coeffs();
                                         c.resize(static_cast<std::size_t>(std::max(deg, k)) + 1);
                                         return c;
                                       }()),
                                   qp, k);
    const cplx z = random_point(rng, 0.5, 1.5);
    const cplx closed = dqk_closed_form(s, z, qp, k);
    const cplx iter = dqk_iterated(s, z, qp, k);
    const cplx ser = series.eval(z);
    // measure against the size of the summands in the closed form
    double scale = 0.0;
    for (int j = 0; j <= k; ++j) scale = std::max(scale, std::abs(poly.eval(ipow(qp.value(), j) * z)));
    scale *= std::pow(std::abs(qp.value() - 1.0) * std::abs(z), -k);
    const double tol = 1e-9 * std::max(std::abs(ser), 1e-3 * scale);
    CHECK(std::abs(closed - ser) <= tol);
    CHECK(std::abs(iter - ser) <= tol);
  }
}

TEST_CASE("D_q^k annihilates polynomials of degree below k") {
  std::mt19937_64 rng(29);
  for (int k = 2; k <= 5; ++k) {
    const QParam qp(2.0);
    const auto p = random_poly(rng, k - 1);
    const Sampler s = Sampler::from_polynomial(p);
    double orbit_max = 0.0;
    for (int j = 0; j <= k; ++j) orbit_max = std::max(orbit_max, std::abs(p.eval(std::pow(2.0, j))));
    CHECK(std::abs(dqk_closed_form(s, 1.0, qp, k)) < 1e-10 * orbit_max);
  }
}

TEST_CASE("D_q lowers degree by exactly one") {
  std::mt19937_64 rng(31);
  const QParam qp(cplx(0.7, 0.4));
  for (int d = 1; d <= 10; ++d) {
    auto c = random_poly(rng, d).coeffs();
    const auto f = TruncatedSeries::polynomial(c);
    const auto g = dq_series(f, qp);
    CHECK(rel(g[d - 1], q_bracket(d, qp) * c.back()) < 1e-14);
    CHECK(g[d - 1] != cplx(0.0));
  }
}

TEST_CASE("Jackson integral") {
  const QParam qh(0.5);
  const Sampler one([](cplx) { return cplx(1.0); });
  const Sampler id([](cplx z) { return z; });
  const cplx z(1.3, -0.4);
  CHECK(std::abs(jackson_integral(one, 0.0, z, qh) - z) < 1e-13);
  // (1-q) sum q^{2j} z^2 = z^2 / (1+q)
  CHECK(std::abs(jackson_integral(id, 0.0, z, qh) - z * z / 1.5) < 1e-13);

  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = random_poly(rng, 1 + trial % 8);
    const Sampler f = Sampler::from_polynomial(p);
    const Sampler F([f, qh](cplx w) { return jackson_integral(f, 0.0, w, qh); });
    const cplx w = random_point(rng, 0.3, 2.0);
    CHECK(std::abs(dq_sample(F, w, qh) - p.eval(w)) < 1e-10 * std::max(1.0, std::abs(p.eval(w))));
  }
  CHECK_THROWS_AS(jackson_integral(one, 0.0, 1.0, QParam(2.0)), Error);
  const Sampler inv([](cplx t) { return 1.0 / (t * t); });
  try {
    jackson_integral(inv, 0.0, 1.0, qh);
    FAIL("divergent sum accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::nonconvergent_sample);
  }
}

TEST_CASE("operator rules on random polynomials") {
  std::mt19937_64 rng(41);
  for (cplx q : {cplx(0.5), cplx(2.0), cplx(0.6, 0.3)}) {
    const QParam qp(q);
    for (int trial = 0; trial < 20; ++trial) {
      const auto pf = random_poly(rng, 1 + trial % 6);
      const auto pg = random_poly(rng, 1 + (trial + 3) % 6);
      const Sampler f = Sampler::from_polynomial(pf);
      const Sampler g = Sampler::from_polynomial(pg);
      const cplx z = random_point(rng, 0.2, 2.0);
      const cplx dfz = dq_sample(f, z, qp);
      const cplx dgz = dq_sample(g, z, qp);

      // product rule, both forms
      const Sampler fg([&](cplx w) { return f(w) * g(w); });
      const cplx dfg = dq_sample(fg, z, qp);
      const double sc = std::abs(g(q * z) * dfz) + std::abs(f(z) * dgz) + 1e-300;
      CHECK(std::abs(dfg - (g(q * z) * dfz + f(z) * dgz)) < 1e-10 * sc);
      CHECK(std::abs(dfg - (f(q * z) * dgz + g(z) * dfz)) < 1e-10 * sc);

      // quotient rule
      if (std::abs(g(z) * g(q * z)) > 1e-6) {
        const Sampler ratio([&](cplx w) { return f(w) / g(w); });
        const cplx lhs = dq_sample(ratio, z, qp);
        const cplx rhs = (g(z) * dfz - f(z) * dgz) / (g(q * z) * g(z));
        CHECK(std::abs(lhs - rhs) < 1e-9 * std::max(1.0, std::abs(rhs)));
      }

      // chain rule; skipped where g(qz) = g(z)
      const cplx gap = g(q * z) - g(z);
      if (std::abs(gap) > 1e-8 * std::max(1.0, std::abs(g(z)))) {
        const Sampler comp([&](cplx w) { return f(g(w)); });
        const cplx lhs = dq_sample(comp, z, qp);
        const cplx rhs = (f(g(q * z)) - f(g(z))) / gap * dgz;
        CHECK(std::abs(lhs - rhs) < 1e-9 * std::max(1.0, std::abs(rhs)));
      }
    }
  }
}

TEST_CASE("inverse rule on monomials") {
  // y = z^m, inverse y^(1/m) on the positive axis. The divided difference of
  // the inverse over the image lattice is 1 / D_q y; a factor q would be off.
  const QParam qp(0.5);
  for (int m = 1; m <= 5; ++m) {
    for (double z : {0.3, 1.0, 2.7}) {
      const double y0 = std::pow(z, m);
      const double y1 = std::pow(0.5 * z, m);
      const double inv_dd = (std::pow(y1, 1.0 / m) - std::pow(y0, 1.0 / m)) / (y1 - y0);
      const Sampler f([m](cplx w) { return std::pow(w, m); });
      const cplx dy = dq_sample(f, z, qp);
      CHECK(std::abs(inv_dd - 1.0 / dy) < 1e-12 * std::abs(1.0 / dy));
      if (m > 1) CHECK(std::abs(inv_dd - 0.5 / dy) > 1e-3);
    }
  }
}

TEST_CASE("integration by parts on [0, 1]") {
  std::mt19937_64 rng(43);
  const QParam qp(0.5);
  for (int trial = 0; trial < 10; ++trial) {
    const auto pf = random_poly(rng, 1 + trial % 5);
    const auto pg = random_poly(rng, 1 + (trial + 2) % 5);
    const Sampler f = Sampler::from_polynomial(pf);
    const Sampler g = Sampler::from_polynomial(pg);
    const Sampler lhs_integrand([&](cplx w) { return f(w) * dq_sample(g, w, qp); });
    const Sampler rhs_integrand([&](cplx w) { return g(0.5 * w) * dq_sample(f, w, qp); });
    const cplx lhs = jackson_integral(lhs_integrand, 0.0, 1.0, qp);
    const cplx rhs = f(1.0) * g(1.0) - f(0.0) * g(0.0) - jackson_integral(rhs_integrand, 0.0, 1.0, qp);
    CHECK(std::abs(lhs - rhs) < 1e-8);
  }
}

TEST_CASE("Casorati determinant") {
  const QParam q2(2.0);
  const auto [s, c] = sinq_cosq(q2, 40);
  const auto f = etilde_q(q2, 30);
  const auto cj = casorati(f, cplx(3.0) * f, q2);
  for (const auto& x : cj.coeffs()) CHECK(std::abs(x) < 1e-14);
  const auto unit = casorati(TruncatedSeries::constant(1.0, 5), TruncatedSeries::monomial(1, 5), q2);
  CHECK(unit[0] == cplx(1.0));
  for (int n = 1; n <= unit.order(); ++n) CHECK(unit[n] == cplx(0.0));

  const auto w = casorati(s, c, q2);
  CHECK_FALSE(kernel_check(w, q2));
  // D_q C_J - (q-1) z C_J = 0 for D_q^2 f + f = 0
  const auto lhs = dq_series(w, q2);
  const auto rhs = cplx(q2.value() - 1.0) * series_shift_up(w, 1);
  CHECK(coefficient_distance(lhs, rhs.truncated(lhs.order())) < 1e-8);

  const Sampler fs = Sampler::from_series(s);
  const Sampler fc = Sampler::from_series(c);
  const Sampler cs = casorati(fs, fc, q2);
  const cplx z(0.3, 0.2);
  CHECK(std::abs(cs(z) - w.eval(z)) < 1e-12);
}

TEST_CASE("kernel check") {
  const QParam q2(2.0);
  CHECK(kernel_check(TruncatedSeries::constant(5.0, 8), q2));
  CHECK_FALSE(kernel_check(TruncatedSeries::monomial(1, 8), q2));
}
