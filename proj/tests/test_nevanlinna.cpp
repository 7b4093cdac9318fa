#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "qdiff/nevanlinna.hpp"
#include "qdiff/qoperator.hpp"
#include "qdiff/qspecial.hpp"

using namespace qdiff;

namespace {

constexpr double pi = std::numbers::pi;

MeroModel poly_model(std::vector<cplx> c, std::optional<QParam> qp = std::nullopt) {
  return MeroModel::rational(RationalFunction(Polynomial(std::move(c))), qp);
}

MeroModel ratio_model(std::vector<cplx> num, std::vector<cplx> den, std::optional<QParam> qp = std::nullopt) {
  return MeroModel::rational(RationalFunction(Polynomial(std::move(num)), Polynomial(std::move(den))), qp);
}

// (1/2pi) int_0^{2pi} g, adaptive Gauss-Kronrod split at the given angles
double gk_mean(const std::function<double(double)>& g, std::vector<double> cuts = {}) {
  cuts.insert(cuts.begin(), 0.0);
  cuts.push_back(2.0 * pi);
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    s += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(g, cuts[i], cuts[i + 1], 15, 1e-13);
  }
  return s / (2.0 * pi);
}

// Random rational function with simple zeros and poles whose moduli stay 10%
// away from the radii in `avoid`.
RationalFunction random_rational(std::mt19937_64& rng, int deg_num, int deg_den, const std::vector<double>& avoid) {
  std::uniform_real_distribution<double> lm(std::log(0.1), std::log(300.0));
  std::uniform_real_distribution<double> ang(-pi, pi);
  const auto draw = [&](int n) {
    std::vector<Root> out;
    while (static_cast<int>(out.size()) < n) {
      const double m = std::exp(lm(rng));
      bool ok = true;
      for (double r : avoid) ok = ok && std::abs(m / r - 1.0) > 0.1;
      for (const auto& x : out) ok = ok && std::abs(std::abs(x.z) / m - 1.0) > 0.05;
      if (ok) out.push_back({std::polar(m, ang(rng)), 1});
    }
    return out;
  };
  return RationalFunction::from_roots(draw(deg_num), draw(deg_den), std::polar(1.5, ang(rng)));
}

}  // namespace

TEST_CASE("model construction") {
  CHECK_THROWS_AS(MeroModel::rational(RationalFunction()), Error);
  CHECK_THROWS_AS(MeroModel::series(TruncatedSeries(std::vector<cplx>(10, cplx(1.0)))), Error);
  const auto e = E_q_model(QParam(0.5));
  CHECK(e.kind() == MeroModel::Kind::q_product);
  CHECK(std::abs(e.eval(-2.0)) < 1e-14);
  CHECK_THROWS_AS(E_q_model(QParam(2.0)), Error);
  CHECK_THROWS_AS(etilde_model(QParam(0.5)), Error);
  const auto s = MeroModel::series(etilde_q(QParam(2.0), 44));
  CHECK(s.kind() == MeroModel::Kind::entire_series);
  CHECK(s.evaluable_radius() > 1e6);
}

TEST_CASE("radial grid") {
  const auto g = RadialGrid::log_spaced(1e2, 1e6, 13, 256);
  REQUIRE(g.radii.size() == 13);
  CHECK(g.radii.front() == 1e2);
  CHECK(g.radii.back() == 1e6);
  CHECK(std::abs(g.radii[3] - 1e3) < 1e-9);
  CHECK_THROWS_AS(RadialGrid::log_spaced(1e2, 1e6, 13, 32), Error);
  CHECK_THROWS_AS(RadialGrid::log_spaced(1e2, 1e1, 13), Error);

  // 2^7 = 128 sits on a lattice modulus of E_q, q = 0.5
  RadialGrid h{{10.0, 128.0, 1000.0}, 128};
  const auto n = h.nudged(E_q_model(QParam(0.5)));
  CHECK(n.radii[0] == 10.0);
  CHECK(n.radii[1] == doctest::Approx(128.0 * (1.0 + 1e-5)).epsilon(1e-14));
  CHECK(n.radii[2] == 1000.0);
}

TEST_CASE("proximity function") {
  const auto z = poly_model({0.0, 1.0});
  CHECK(std::abs(proximity(z, 10.0, 256).m - std::log(10.0)) < 1e-10);
  CHECK(proximity(z, 0.5, 256).m == 0.0);

  // |f| = 1 on the imaginary axis: split the oracle there
  const auto mob = ratio_model({-1.0, 1.0}, {1.0, 1.0});
  const double oracle = gk_mean(
      [](double t) {
        const cplx w = std::polar(5.0, t);
        return std::max(0.0, std::log(std::abs((w - 1.0) / (w + 1.0))));
      },
      {pi / 2.0, 3.0 * pi / 2.0});
  const auto p = proximity(mob, 5.0, 4096);
  CHECK(std::abs(p.m - oracle) < 1e-6);
  CHECK(p.error < 1e-5);

  try {
    proximity(ratio_model({1.0}, {-2.0, 1.0}), 2.0, 256);
    FAIL("pole on the circle accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::pole_on_circle);
  }
  const auto small = MeroModel::series(exp_q(QParam(0.5), 20));
  CHECK_THROWS_AS(proximity(small, 1e9, 256), Error);
}

TEST_CASE("counting functions") {
  const auto z = poly_model({0.0, 1.0});
  CHECK(std::abs(counting_N(z, std::numbers::e, Target::at(0.0)) - 1.0) < 1e-15);
  CHECK(counting_N(z, 5.0, Target::infinity()) == 0.0);

  const auto e = E_q_model(QParam(0.5));
  const double lattice = std::log(10.0) + std::log(5.0) + std::log(2.5) + std::log(1.25);
  CHECK(std::abs(counting_N(e, 10.0, Target::at(0.0)) - lattice) < 1e-13);
  CHECK(counting_n(e, 10.0, Target::at(0.0)) == 4);
  CHECK_THROWS_AS(counting_N(e, 10.0, Target::at(1.0)), Error);

  const auto mob = ratio_model({-1.0, 1.0}, {1.0, 1.0});
  CHECK(std::abs(counting_N(mob, 2.0, Target::infinity()) - std::log(2.0)) < 1e-13);
  // f = 3 at z = -2
  CHECK(std::abs(counting_N(mob, 4.0, Target::at(3.0)) - std::log(2.0)) < 1e-12);

  const auto s = MeroModel::series(etilde_q(QParam(2.0), 44));
  CHECK(counting_N(s, 50.0, Target::infinity()) == 0.0);
  CHECK_THROWS_AS(counting_N(s, 50.0, Target::at(1.0)), Error);
}

TEST_CASE("N is nondecreasing and n is a step function") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    const auto m = MeroModel::rational(random_rational(rng, 3, 2, {}));
    double prev_N = 0.0;
    int prev_n = 0;
    for (double r = 0.05; r < 1000.0; r *= 1.3) {
      const double N = counting_N(m, r, Target::at(0.0));
      const int n = counting_n(m, r, Target::at(0.0));
      CHECK(N >= prev_N);
      CHECK(n >= prev_n);
      prev_N = N;
      prev_n = n;
    }
    CHECK(prev_n == 3);
  }
}

TEST_CASE("argument principle matches exact lattices") {
  const QParam q2(2.0);
  const QParam qh(0.5);
  const auto et = etilde_q(q2, 44);
  const auto eq = E_q(qh, 44);
  CHECK(argument_principle_count(et, 100.0) == 6);
  CHECK(argument_principle_count(eq, 10.0) == 4);
  CHECK(argument_principle_count(et, 1.5) == 0);

  const auto et_model = MeroModel::series(et);
  const auto et_prod = etilde_model(q2);
  for (double r : {3.0, 30.0, 100.0, 1000.0}) {
    CHECK(counting_n(et_model, r, Target::at(0.0)) == counting_n(et_prod, r, Target::at(0.0)));
    CHECK(std::abs(counting_N(et_model, r, Target::at(0.0)) - counting_N(et_prod, r, Target::at(0.0))) < 1e-9);
  }
  const auto eq_model = MeroModel::series(eq);
  const auto eq_prod = E_q_model(qh);
  CHECK(std::abs(counting_N(eq_model, 10.0, Target::at(0.0)) - counting_N(eq_prod, 10.0, Target::at(0.0))) < 1e-9);

  // sin_q: zero at the origin plus symmetric pairs of equal modulus
  const auto s = sinq_cosq(q2, 60).first;
  const auto zs = series_zeros(s, 20.0);
  int at_origin = 0;
  for (const auto& z : zs) {
    if (z.z == cplx(0.0)) at_origin += z.multiplicity;
    else CHECK(std::abs(s.eval(z.z)) < 1e-9 * std::max(1.0, std::abs(s.eval(std::abs(z.z)))));
  }
  CHECK(at_origin == 1);
  CHECK(total_multiplicity(zs) == argument_principle_count(s, 20.0));
  CHECK(total_multiplicity(zs) % 2 == 1);
}

TEST_CASE("characteristic") {
  for (int d : {1, 2, 3}) {
    std::vector<cplx> c(static_cast<std::size_t>(d) + 1, cplx(0.0));
    c[0] = 2.0;
    c.back() = cplx(0.8, 0.6);
    const auto p = poly_model(c);
    for (double r : {1e3, 1e4, 1e5}) {
      const auto s = characteristic(p, r, 1024);
      CHECK(std::abs(s.T / (d * std::log(r)) - 1.0) < 0.05);
      CHECK(s.T == s.m + s.N_inf);
    }
  }
  const auto z = characteristic(poly_model({0.0, 1.0}), 10.0, 256);
  CHECK(std::abs(z.T - std::log(10.0)) < 1e-12);
  CHECK(z.N_inf == 0.0);
  CHECK_FALSE(z.nJ_0.has_value());

  const auto et = etilde_q(QParam(2.0), 44);
  const auto s = characteristic(MeroModel::series(et), 1.0, 4096);
  const double oracle = gk_mean([&](double t) { return std::max(0.0, std::log(std::abs(et.eval(std::polar(1.0, t))))); });
  CHECK(std::isfinite(s.T));
  CHECK(s.T == s.m);
  CHECK(std::abs(s.T - oracle) < 1e-6);
}

TEST_CASE("first fundamental theorem bound") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 6; ++trial) {
    const auto f = random_rational(rng, 2 + trial % 3, 1 + trial % 2, {10.0, 100.0, 1000.0, 10000.0});
    const auto model = MeroModel::rational(f);
    for (cplx a : {cplx(0.0), cplx(2.0, -1.0)}) {
      const auto g = MeroModel::rational(f.minus_constant(a).reciprocal());
      const double bound =
          std::max(0.0, std::log(std::abs(a))) + std::abs(std::log(std::abs(f.eval(0.0) - a))) + 1.0;
      for (double r : {10.0, 100.0, 1000.0, 10000.0}) {
        const double diff = characteristic(g, r, 2048).T - characteristic(model, r, 2048).T;
        CHECK(std::abs(diff) <= bound);
      }
    }
  }
}

TEST_CASE("quadrature error estimate bounds a doubling of nodes") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 8; ++trial) {
    const auto m = MeroModel::rational(random_rational(rng, 3, 2, {7.0}));
    const auto p = proximity(m, 7.0, 1024);
    const auto fine = proximity(m, 7.0, 2048);
    CHECK(std::abs(fine.m - p.m) <= p.error + 1e-12);
  }
}

TEST_CASE("Jensen residual") {
  CHECK(jensen_residual(poly_model({-2.0, 1.0}), 1.0, 256) < 1e-10);
  CHECK(jensen_residual(ratio_model({3.0, -4.0, 1.0}, {2.0, 1.0}), 5.0, 4096) < 1e-6);
  CHECK(jensen_residual(E_q_model(QParam(0.5)), 10.0, 4096) < 1e-5);
  // zero and pole at the origin enter through c_lambda and n(0) log r
  CHECK(jensen_residual(ratio_model({0.0, 0.0, 3.0, 1.0}, {-1.0, 1.0}), 4.0, 4096) < 1e-8);
  CHECK(jensen_residual(ratio_model({3.0, 1.0}, {0.0, -1.0, 1.0}), 4.0, 4096) < 1e-8);
  CHECK(jensen_residual(MeroModel::series(etilde_q(QParam(2.0), 44)), 20.0, 4096) < 1e-8);
}

TEST_CASE("Jackson truncated counting") {
  const QParam q2(2.0);
  // D_q z^2 = [2]_q z: h = 2, k' = 1
  const auto sq = poly_model({0.0, 0.0, 1.0});
  const auto j = jackson_truncated_counting(sq, 10.0, Target::at(0.0), q2);
  CHECK(j.n == 2);
  CHECK(j.ntilde == 1);
  CHECK(std::abs(j.Ntilde - std::log(10.0)) < 1e-14);
  for (int d = 1; d <= 6; ++d) {
    std::vector<cplx> c(static_cast<std::size_t>(d) + 1, cplx(0.0));
    c.back() = 1.0;
    CHECK(jackson_truncated_counting(poly_model(c), 1e3, Target::at(0.0), QParam(0.5)).ntilde == 1);
  }
  // Away from the origin a-points of z^2 are simple and D_q z^2 does not
  // vanish there, so the count is 2 rather than 1.
  const auto ones = jackson_truncated_counting(sq, 10.0, Target::at(1.0), q2);
  CHECK(ones.n == 2);
  CHECK(ones.ntilde == 2);

  // simple a-points off the zeros of D_q f: ntilde = n
  const auto cubic = poly_model({-1.0, 2.0, 0.5, 1.0});
  for (Target a : {Target::at(0.0), Target::at(cplx(1.0, 2.0))}) {
    const auto c = jackson_truncated_counting(cubic, 100.0, a, q2);
    CHECK(c.n == 3);
    CHECK(c.ntilde == 3);
  }

  // pole of order 2 at the origin: D_q(1/f) = D_q(z^2) vanishes once there
  const auto inv = ratio_model({1.0}, {0.0, 0.0, 1.0});
  const auto ji = jackson_truncated_counting(inv, 5.0, Target::infinity(), q2);
  CHECK(ji.n == 2);
  CHECK(ji.ntilde == 1);
  CHECK_THROWS_AS(jackson_truncated_counting(E_q_model(QParam(0.5)), 5.0, Target::at(0.0), q2), Error);
}

TEST_CASE("0 <= ntilde_J <= n on random rational functions") {
  std::mt19937_64 rng(37);
  const QParam qh(0.5);
  for (int trial = 0; trial < 10; ++trial) {
    const auto m = MeroModel::rational(random_rational(rng, 1 + trial % 4, trial % 3, {}));
    for (Target a : {Target::at(0.0), Target::infinity(), Target::at(1.0), Target::at(-1.0)}) {
      for (double r : {1.0, 10.0, 1000.0}) {
        const auto c = jackson_truncated_counting(m, r, a, qh);
        CHECK(c.ntilde >= 0);
        CHECK(c.ntilde <= c.n);
        CHECK(c.Ntilde <= counting_N(m, r, a) + 1e-12);
      }
    }
  }
}

TEST_CASE("defect proxies") {
  const QParam qh(0.5);
  const auto grid = RadialGrid::log_spaced(10.0, 1e4, 7, 1024);
  const auto p = poly_model({1.0, -2.0, 0.0, 1.0}, qh);
  const auto dp = defect_estimates(p, grid, {Target::infinity()});
  CHECK(dp[0].delta == doctest::Approx(1.0));
  CHECK_FALSE(dp[0].delta_out_of_range);

  const auto z = poly_model({0.0, 1.0}, qh);
  const auto dz = defect_estimates(z, grid, {Target::at(0.0)});
  CHECK(std::abs(dz[0].delta) < 1e-12);

  // f = z^3 against {0, 1, -1, inf}: Theta_J sums to 2 - 1/3
  const auto cube = poly_model({0.0, 0.0, 0.0, 1.0}, qh);
  double sum = 0.0;
  for (const auto& d : defect_estimates(cube, grid, {Target::at(0.0), Target::at(1.0), Target::at(-1.0), Target::infinity()})) {
    sum += d.raw_theta_J;
  }
  CHECK(sum == doctest::Approx(2.0 - 1.0 / 3.0).epsilon(1e-6));
  CHECK(sum <= 2.1);
  CHECK_THROWS_AS(defect_estimates(E_q_model(qh), grid, {Target::at(0.0)}), Error);
}

TEST_CASE("logarithmic order from T and N") {
  const auto grid = RadialGrid::log_spaced(1e2, 1e6, 13, 1024);
  const auto cubic = poly_model({1.0, 0.0, -3.0, 1.0});
  const auto pc = log_order_from_T(sample_sweep(cubic, grid));
  CHECK(std::abs(pc.sigma - 1.0) < 0.1);
  CHECK(pc.points == 7);

  const auto e = E_q_model(QParam(0.5));
  const auto samples = sample_sweep(e, grid.nudged(e));
  const auto pn = log_order_from_N(samples);
  CHECK(std::abs(pn.sigma - 2.0) < 0.2);
  const auto pt = log_order_from_T(samples);
  CHECK(std::abs(pt.sigma - 2.0) < 0.2);

  try {
    log_order_from_T(sample_sweep(poly_model({5.0}), grid));
    FAIL("constant accepted");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::degenerate_model);
  }
  const auto short_grid = RadialGrid::log_spaced(1e2, 1e4, 8, 256);
  CHECK_THROWS_AS(log_order_from_T(sample_sweep(cubic, short_grid)), Error);
}

TEST_CASE("maximum term and central index") {
  const auto lin = TruncatedSeries::polynomial({1.0, 1.0});
  const auto s = max_term_central_index(lin, 2.0);
  CHECK(s.nu == 1);
  CHECK(std::abs(s.mu - 2.0) < 1e-14);

  const auto et = etilde_q(QParam(2.0), 44);
  const auto w = max_term_central_index(et, 100.0);
  // direct scan of n log r - sum_{j<=n} log(2^j - 1)
  int best = 0;
  double best_v = 0.0;
  double acc = 0.0;
  for (int n = 1; n <= 40; ++n) {
    acc += std::log(std::pow(2.0, n) - 1.0);
    const double v = n * std::log(100.0) - acc;
    if (v >= best_v) {
      best_v = v;
      best = n;
    }
  }
  CHECK(w.nu == best);
  CHECK((w.nu == 6 || w.nu == 7));
  CHECK(std::abs(w.log_mu - best_v) < 1e-10);

  const auto geo = TruncatedSeries::certified(std::vector<cplx>(30, cplx(1.0)), 1e-13);
  const auto g = TruncatedSeries(std::vector<cplx>(30, cplx(1.0)));
  CHECK(max_term_central_index(geo, 0.5).nu == 0);
  try {
    max_term_central_index(g, 2.0);
    FAIL("boundary central index accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::truncation_too_short);
  }
}

TEST_CASE("logarithmic order from the central index") {
  const auto grid = RadialGrid::log_spaced(1e2, 1e6, 13);
  const auto et = log_order_from_nu(etilde_q(QParam(2.0), 44), grid.radii);
  CHECK(std::abs(et.sigma - 2.0) < 0.2);

  const auto poly = log_order_from_nu(TruncatedSeries::polynomial({1.0, 2.0, 0.0, 1.0}), grid.radii);
  CHECK(poly.sigma == 1.0);

  // f(0) exp_{1/q}(a z), the entire solution of D_q f = a f(qz) for q = 1/2
  const auto ex = series_scale_arg(exp_q(QParam(2.0), 44), 1.5);
  const auto pe = log_order_from_nu(ex, grid.radii);
  CHECK(std::abs(pe.sigma - 2.0) < 0.2);
  // and it does solve that equation
  const QParam qh(0.5);
  const auto lhs = dq_series(ex, qh);
  const auto rhs = cplx(1.5) * series_scale_arg(ex, 0.5);
  CHECK(coefficient_distance(lhs, rhs.truncated(lhs.order())) < 1e-12);

  CHECK_THROWS_AS(log_order_from_nu(etilde_q(QParam(2.0), 20), grid.radii), Error);
}

TEST_CASE("logarithmic difference lemma table") {
  const QParam q2(2.0);
  const auto grid = RadialGrid::log_spaced(10.0, 1e4, 10, 1024);
  const auto rat = ratio_model({1.0, 0.0, -2.0, 1.0}, {3.0, 1.0});
  const auto t = logderiv_lemma_check(rat, q2, 1, grid.nudged(rat));
  CHECK(t.rows.back().ratio <= t.rows.front().ratio);
  CHECK(t.rows.back().ratio < 0.2);

  const QParam qh(0.5);
  const auto e = E_q_model(qh);
  const auto te = logderiv_lemma_check(e, qh, 1, grid.nudged(e));
  CHECK(te.rows.back().ratio < 0.2);
  CHECK(te.decreasing_top_decade);
  // D_q E_q / E_q = -1 / ((q - 1)(1 + z)): m is about log+ (2 / r)
  CHECK(te.rows.back().m < 1e-12);

  CHECK_THROWS_AS(logderiv_lemma_check(poly_model({2.0}), q2, 1, grid), Error);
}

TEST_CASE("second main theorem margins") {
  const QParam qh(0.5);
  const auto grid = RadialGrid::log_spaced(10.0, 1e4, 7, 1024);
  const auto z = poly_model({0.0, 1.0});
  const auto rows = sft_check(z, {Target::at(0.0), Target::at(1.0), Target::infinity()}, qh, grid);
  for (const auto& r : rows) CHECK(r.margin >= -1.0);

  const auto f = ratio_model({-1.0, 0.0, 1.0}, {0.0, 1.0});
  const auto g = RadialGrid::log_spaced(10.0, 1e3, 4, 1024);
  const auto fr = sft_check(f, {Target::at(0.0), Target::infinity(), Target::at(1.0), Target::at(-1.0)}, qh, g.nudged(f));
  CHECK(fr.back().margin >= -5.0);

  CHECK_THROWS_AS(sft_check(z, {Target::at(0.0), Target::infinity()}, qh, grid), Error);
  CHECK_THROWS_AS(sft_check(z, {Target::at(0.0), Target::at(0.0), Target::infinity()}, qh, grid), Error);
}

TEST_CASE("Wiman-Valiron check") {
  const auto et = etilde_q(QParam(2.0), 44);
  const auto grid = RadialGrid::log_spaced(1e2, 1e6, 13);
  const auto t = wiman_valiron_check(et, QParam(0.5), 1, grid.radii);
  CHECK(t.rows.back().deviation < 0.3);
  CHECK(t.deviation_decreasing(3));
  // zeros on the positive axis, alternating coefficient signs: the maximum
  // modulus sits on the negative axis
  CHECK(std::abs(std::abs(std::arg(t.rows.back().z)) - pi) < 1e-5);

  // z^3: f(q^k z) / f(z) = q^{3k} exactly
  const auto cube = TruncatedSeries::polynomial({0.0, 0.0, 0.0, 1.0});
  for (int k : {1, 2}) {
    const auto c = wiman_valiron_check(cube, QParam(0.5), k, {10.0, 100.0});
    for (const auto& row : c.rows) {
      CHECK(row.nu == 3);
      CHECK(std::abs(row.log_ratio - 3.0 * k * std::log(0.5)) < 1e-12);
      CHECK(row.deviation < 1e-12);
    }
  }

  // k = 2 against two k = 1 steps
  const auto t2 = wiman_valiron_check(et, QParam(0.5), 2, grid.radii);
  for (std::size_t i = 0; i < t2.rows.size(); ++i) {
    CHECK(t2.rows[i].predicted == doctest::Approx(2.0 * t.rows[i].predicted));
    const cplx z = t.rows[i].z;
    const double two_steps = std::log(std::abs(et.eval(0.25 * z) / et.eval(0.5 * z))) + t.rows[i].log_ratio;
    CHECK(std::abs(two_steps - t2.rows[i].log_ratio) < 1e-9 * std::abs(two_steps));
  }
  CHECK(t2.rows.back().deviation < 0.3);
}

TEST_CASE("growth lower bound") {
  const QParam q2(2.0);
  const auto grid = RadialGrid::log_spaced(1e2, 1e6, 13, 1024);

  // D_q f + f/(q-1) = 0 with f = etilde_2
  const auto A = MeroModel::rational(RationalFunction(Polynomial::constant(1.0)));
  const auto f = etilde_model(q2);
  const auto rep = growth_lower_bound_check(A, f, q2, 1, grid.nudged(f));
  CHECK_FALSE(rep.skipped);
  CHECK(rep.sigma_A.sigma == 1.0);
  CHECK(std::abs(rep.gap) < 0.2);
  CHECK(rep.max_residual < 1e-10);

  // polynomial solution z^5 + 1 of the first-order equation
  const auto P = Polynomial({1.0, 0.0, 0.0, 0.0, 0.0, 1.0});
  const cplx q = q2.value();
  const auto A5 = MeroModel::rational(RationalFunction(Polynomial::monomial(4, -(ipow(q, 5) - 1.0) / (q - 1.0)), P));
  const auto skip = growth_lower_bound_check(A5, MeroModel::rational(RationalFunction(P)), q2, 1, grid);
  CHECK(skip.skipped);

  // the wrong equation is rejected
  const auto bad = MeroModel::rational(RationalFunction(Polynomial::constant(2.0)));
  CHECK_THROWS_AS(growth_lower_bound_check(bad, f, q2, 1, grid.nudged(f)), Error);
}

TEST_CASE("synthetic coefficient of logarithmic order two") {
  // A = E_{1/2}(z), entire with sigma_log = 2 and no poles. For q = 2,
  // f(z) = prod_{j>=1} (1 - (q-1) q^{-j} z A(q^{-j} z)) solves
  // D_q f + A f = 0, and its logarithmic order is expected to be 3.
  const QParam q2(2.0);
  const QParam qh(0.5);
  const auto log_factor_sum = [qh](cplx z) {
    cplx total(0.0);
    for (int j = 1; j < 400; ++j) {
      const cplx w = z * std::pow(0.5, j);
      const cplx t = w * E_q_product(w, qh);
      total += std::log(1.0 - t);
      if (std::abs(w) < 1.0 && std::abs(t) < 1e-18) break;
    }
    return total;
  };
  const auto f = MeroModel::product({{}, {},
                                     Sampler([log_factor_sum](cplx z) { return std::exp(log_factor_sum(z)); }),
                                     [log_factor_sum](cplx z) { return std::real(log_factor_sum(z)); }});
  const auto A = E_q_model(qh);
  const auto grid = RadialGrid::log_spaced(10.0, 1e5, 9, 1024).nudged(A);
  const auto rep = growth_lower_bound_check(A, f, q2, 1, grid);
  CHECK(std::abs(rep.sigma_A.sigma - 2.0) < 0.2);
  CHECK(rep.gap >= -0.3);
  MESSAGE("sigma_A = " << rep.sigma_A.sigma << ", sigma_f = " << rep.sigma_f.sigma << ", gap = " << rep.gap);
}

TEST_CASE("sample sweep and CSV") {
  const auto m = ratio_model({0.0, 0.0, 1.0}, {1.0, 1.0}, QParam(0.5));
  const auto grid = RadialGrid::log_spaced(2.0, 200.0, 5, 256);
  const auto serial = sample_sweep(m, grid, Exec::serial);
  const auto parallel = sample_sweep(m, grid, Exec::parallel);
  std::ostringstream a;
  std::ostringstream b;
  write_samples_csv(a, serial);
  write_samples_csv(b, parallel);
  CHECK(a.str() == b.str());
  const std::string csv = a.str();
  CHECK(csv.rfind("r,m,N_0,N_inf,T,nJ_0,nJ_inf,quad_err\n", 0) == 0);
  CHECK(serial[0].nJ_0.has_value());
  CHECK(*serial[0].nJ_0 == 1.0);
  CHECK(*serial[0].nJ_inf == 1.0);
  CHECK(csv.find("2.0000000000000000e+00,") != std::string::npos);

  std::ostringstream c;
  write_samples_csv(c, sample_sweep(E_q_model(QParam(0.5)), grid));
  CHECK(c.str().find(",nan,nan,") != std::string::npos);
}
