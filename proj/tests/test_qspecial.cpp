#include <doctest.h>

#include <cmath>
#include <random>

#include "qdiff/qoperator.hpp"
#include "qdiff/qspecial.hpp"

using namespace qdiff;

namespace {

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

TruncatedSeries negate_arg(const TruncatedSeries& f) { return series_scale_arg(f, -1.0); }

double max_tail(const TruncatedSeries& s, int from) {
  double m = 0.0;
  for (int n = from; n <= s.order(); ++n) m = std::max(m, std::abs(s[n]));
  return m;
}

}  // namespace

TEST_CASE("phi_rs special cases") {
  const QParam qh(0.5);
  const auto e0 = phi_rs({{}, {}, qh}, 20);
  const auto big_e = E_q(qh, 20);
  for (int j = 0; j <= 20; ++j) {
    // _0phi_0 in the variable -z has coefficients q^{j(j-1)/2}/(q;q)_j
    const cplx expect = std::pow(0.5, j * (j - 1) / 2.0) / q_pochhammer(0.5, qh, j);
    CHECK(rel(e0[j] * ipow(-1.0, j), expect) < 1e-13);
    CHECK(rel(big_e[j], expect) < 1e-13);
  }
  const auto e10 = phi_rs({{0.0}, {}, qh}, 20);
  const auto et = etilde_q(qh, 20);
  for (int j = 0; j <= 20; ++j) {
    CHECK(rel(e10[j], 1.0 / q_pochhammer(0.5, qh, j)) < 1e-13);
    CHECK(e10[j] == et[j]);
  }
  const auto gen = phi_rs({{cplx(0.3, 0.1), 2.0}, {cplx(-0.4)}, QParam(cplx(0.4, 0.2))}, 10);
  CHECK(gen[0] == cplx(1.0));

  // beta = q^{-2} makes (beta; q)_3 vanish
  try {
    phi_rs({{0.5}, {4.0}, qh}, 10);
    FAIL("zero denominator accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::denominator_pochhammer_zero);
  }
}

TEST_CASE("exp_q coefficients") {
  for (cplx q : {cplx(0.5), cplx(2.0), cplx(1.0, 0.5)}) {
    const QParam qp(q);
    const auto e = exp_q(qp, 30);
    CHECK(e[0] == cplx(1.0));
    CHECK(e[1] == cplx(1.0));
    for (int n = 0; n <= 30; ++n) {
      CHECK(rel(e[n], ipow(1.0 - q, n) / q_pochhammer(q, qp, n)) < 1e-12);
    }
    // e_q(z) = etilde_q((1-q) z)
    const auto scaled = series_scale_arg(etilde_q(qp, 30), 1.0 - q);
    for (int n = 0; n <= 30; ++n) CHECK(rel(scaled[n], e[n]) < 1e-12);
  }
}

TEST_CASE("etilde_q solves D_q f + f/(q-1) = 0 for q = 2") {
  const QParam q2(2.0);
  const auto f = etilde_q(q2, 40);
  CHECK(f[0] == cplx(1.0));
  const auto res = dq_series(f, q2) + cplx(1.0 / (2.0 - 1.0)) * f.truncated(39);
  CHECK(res.max_abs() < 1e-10);
}

TEST_CASE("E_q basics and etilde_q * E_q(-z) = 1") {
  for (cplx q : {cplx(0.5), cplx(2.0), cplx(1.0, 0.5)}) {
    const QParam qp(q);
    const auto big_e = E_q(qp, 30);
    CHECK(big_e[0] == cplx(1.0));
    CHECK(rel(big_e[1], 1.0 / (1.0 - q)) < 1e-15);
    const auto prod = etilde_q(qp, 30) * negate_arg(big_e);
    CHECK(std::abs(prod[0] - 1.0) < 1e-15);
    CHECK(max_tail(prod, 1) < 1e-10);
  }
}

TEST_CASE("exp_q(z) exp_{1/q}(-z) = 1") {
  const QParam q2(2.0);
  const auto prod = exp_q(q2, 30) * negate_arg(exp_q(q2.inverse(), 30));
  CHECK(std::abs(prod[0] - 1.0) < 1e-15);
  CHECK(max_tail(prod, 1) < 1e-9);
}

TEST_CASE("etilde_q(z) etilde_{1/q}(z/q) = 1") {
  const QParam q2(2.0);
  const auto prod = etilde_q(q2, 30) * series_scale_arg(etilde_q(q2.inverse(), 30), 0.5);
  CHECK(std::abs(prod[0] - 1.0) < 1e-15);
  CHECK(max_tail(prod, 1) < 1e-9);
}

TEST_CASE("sin_q and cos_q") {
  for (cplx q : {cplx(0.5), cplx(2.0), cplx(1.0, 0.5)}) {
    const QParam qp(q);
    const auto [s, c] = sinq_cosq(qp, 30);
    for (int n = 0; n <= 30; n += 2) CHECK(s[n] == cplx(0.0));
    for (int n = 1; n <= 30; n += 2) CHECK(c[n] == cplx(0.0));
    CHECK(s.eval(0.0) == cplx(0.0));
    CHECK(c.eval(0.0) == cplx(1.0));
    CHECK(coefficient_distance(dq_series(s, qp), c.truncated(29)) < 1e-12);
    CHECK(coefficient_distance(dq_series(c, qp), cplx(-1.0) * s.truncated(29)) < 1e-12);
    CHECK((dqk_series(s, qp, 2) + s.truncated(28)).max_abs() < 1e-10);
    CHECK((dqk_series(c, qp, 2) + c.truncated(28)).max_abs() < 1e-10);
  }
}

TEST_CASE("product forms") {
  const QParam q2(2.0);
  const QParam qh(0.5);
  CHECK(etilde_product(0.0, q2) == cplx(1.0));
  CHECK(etilde_product(2.0, q2) == cplx(0.0));
  CHECK(E_q_product(0.0, qh) == cplx(1.0));
  CHECK(E_q_product(-1.0, qh) == cplx(0.0));
  CHECK_THROWS_AS(etilde_product(1.0, qh), Error);
  CHECK_THROWS_AS(E_q_product(1.0, q2), Error);

  const auto et = etilde_q(q2, 44);
  const auto big_e = E_q(qh, 44);
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> r(0.0, 1.5);
  std::uniform_real_distribution<double> t(-M_PI, M_PI);
  for (int i = 0; i < 50; ++i) {
    const cplx z = std::polar(r(rng), t(rng));
    CHECK(std::abs(etilde_product(z, q2) - et.eval(z)) < 1e-9);
    CHECK(std::abs(E_q_product(z, qh) - big_e.eval(z)) < 1e-9);
  }

  const auto lat = E_q_zero_lattice(qh);
  const auto pts = lat.points_within(10.0);
  REQUIRE(pts.size() == 4);
  CHECK(pts[0] == cplx(-1.0));
  CHECK(pts[3] == cplx(-8.0));
  for (const auto& p : pts) CHECK(std::abs(E_q_product(p, qh)) < 1e-14);
  const auto et_pts = etilde_zero_lattice(q2).points_within(100.0);
  REQUIRE(et_pts.size() == 6);
  CHECK(et_pts.front() == cplx(2.0));
}

TEST_CASE("E_q product solves its first-order equation") {
  const QParam qh(0.5);
  const Sampler f = E_q_product_sampler(qh);
  std::mt19937_64 rng(59);
  std::uniform_real_distribution<double> r(0.1, 5.0);
  std::uniform_real_distribution<double> t(-M_PI, M_PI);
  for (int i = 0; i < 20; ++i) {
    const cplx z = std::polar(r(rng), t(rng));
    const cplx res = dq_sample(f, z, qh) + f(z) / ((0.5 - 1.0) * (z + 1.0));
    CHECK(std::abs(res) < 1e-9 * std::max(1.0, std::abs(f(z))));
  }
}
