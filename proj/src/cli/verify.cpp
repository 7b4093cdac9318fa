#include "qdiff/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <random>

#include "qdiff/nevanlinna.hpp"
#include "qdiff/qode.hpp"
#include "qdiff/qoperator.hpp"
#include "qdiff/qspecial.hpp"

namespace qdiff {

namespace {

constexpr double pi = std::numbers::pi;

class Recorder {
 public:
  Recorder(SuiteReport& report, double scale) : report_(report), scale_(scale) {}

  void below(std::string name, double value, double limit) {
    const double lim = limit * scale_;
    report_.checks.push_back({std::move(name), value, "<", lim, value < lim});
  }
  // lower bounds are structural, not tolerances, and are not scaled
  void at_least(std::string name, double value, double limit) {
    report_.checks.push_back({std::move(name), value, ">=", limit, value >= limit});
  }
  void holds(std::string name, bool ok) {
    report_.checks.push_back({std::move(name), ok ? 1.0 : 0.0, ">=", 1.0, ok});
  }

 private:
  SuiteReport& report_;
  double scale_;
};

std::string qname(cplx q) {
  if (q.imag() == 0.0) return "q=" + std::to_string(q.real()).substr(0, 4);
  return "q=" + std::to_string(q.real()).substr(0, 4) + "+" + std::to_string(q.imag()).substr(0, 4) + "i";
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// max |p_0 - 1|, |p_n| (n >= 1)
double unit_residual(const TruncatedSeries& p) {
  double worst = std::abs(p[0] - 1.0);
  for (int n = 1; n <= p.order(); ++n) worst = std::max(worst, std::abs(p[n]));
  return worst;
}

TruncatedSeries negate_arg(const TruncatedSeries& f) { return series_scale_arg(f, -1.0); }

Polynomial random_poly(std::mt19937_64& rng, int degree) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<cplx> c(static_cast<std::size_t>(degree) + 1);
  for (auto& x : c) x = {u(rng), u(rng)};
  if (std::abs(c.back()) < 0.1) c.back() = 1.0;
  return Polynomial(std::move(c));
}

cplx random_point(std::mt19937_64& rng, double rmin, double rmax) {
  std::uniform_real_distribution<double> r(rmin, rmax);
  std::uniform_real_distribution<double> t(-pi, pi);
  return std::polar(r(rng), t(rng));
}

// Zeros and poles log-uniform in modulus over [0.1, 300], kept 10% away from
// the radii in `avoid` and 5% from each other.
RationalFunction random_rational(std::mt19937_64& rng, int deg_num, int deg_den, const std::vector<double>& avoid) {
  std::uniform_real_distribution<double> lm(std::log(0.1), std::log(300.0));
  std::uniform_real_distribution<double> ang(-pi, pi);
  std::vector<Root> taken;
  const auto draw = [&](int n) {
    std::vector<Root> out;
    while (static_cast<int>(out.size()) < n) {
      const double m = std::exp(lm(rng));
      bool ok = true;
      for (double r : avoid) ok = ok && std::abs(m / r - 1.0) > 0.1;
      for (const auto& x : taken) ok = ok && std::abs(std::abs(x.z) / m - 1.0) > 0.05;
      if (ok) {
        out.push_back({std::polar(m, ang(rng)), 1});
        taken.push_back(out.back());
      }
    }
    return out;
  };
  auto zeros = draw(deg_num);
  auto poles = draw(deg_den);
  return RationalFunction::from_roots(std::move(zeros), std::move(poles), std::polar(1.5, ang(rng)));
}

std::vector<RationalFunction> rational_test_set(std::mt19937_64& rng, int count, int max_degree,
                                                const std::vector<double>& avoid) {
  std::uniform_int_distribution<int> deg(0, max_degree);
  std::vector<RationalFunction> out;
  while (static_cast<int>(out.size()) < count) {
    const int dn = deg(rng);
    const int dd = deg(rng);
    if (dn == 0 && dd == 0) continue;
    out.push_back(random_rational(rng, dn, dd, avoid));
  }
  return out;
}

RationalFunction constant_fn(cplx c) { return RationalFunction(Polynomial::constant(c)); }

// -- suites -----------------------------------------------------------------

void identities(Recorder& rec, std::mt19937_64&) {
  const int n = 30;
  for (cplx q : {cplx(2.0), cplx(0.5), cplx(1.0, 0.5)}) {
    const QParam qp(q);
    rec.below("exp_q(z) exp_1/q(-z) = 1, " + qname(q),
              unit_residual(exp_q(qp, n) * negate_arg(exp_q(qp.inverse(), n))), 1e-9);
    rec.below("etilde_q(z) E_q(-z) = 1, " + qname(q), unit_residual(etilde_q(qp, n) * negate_arg(E_q(qp, n))),
              1e-9);
    const auto [s, c] = sinq_cosq(qp, n);
    rec.below("D_q sin_q = cos_q, " + qname(q), coefficient_distance(dq_series(s, qp), c.truncated(n - 1)), 1e-9);
    rec.below("D_q cos_q = -sin_q, " + qname(q),
              coefficient_distance(dq_series(c, qp), cplx(-1.0) * s.truncated(n - 1)), 1e-9);
  }
  const QParam q2(2.0);
  rec.below("etilde_q(z) etilde_1/q(z/q) = 1, q=2",
            unit_residual(etilde_q(q2, n) * series_scale_arg(etilde_q(q2.inverse(), n), 0.5)), 1e-9);
  const QParam qh(0.5);
  double worst = 0.0;
  for (int m = 0; m <= n; ++m) {
    worst = std::max(worst, rel(exp_q(qh, n)[m], ipow(0.5, m) / q_pochhammer(0.5, qh, m)));
  }
  rec.below("exp_q(z) = etilde_q((1-q) z), q=0.5", worst, 1e-12);
}

void operator_rules(Recorder& rec, std::mt19937_64& rng) {
  for (cplx q : {cplx(0.5), cplx(2.0), cplx(0.6, 0.3)}) {
    const QParam qp(q);
    double product = 0.0, quotient = 0.0, chain = 0.0, linear = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      const auto pf = random_poly(rng, 1 + trial % 6);
      const auto pg = random_poly(rng, 1 + (trial + 3) % 6);
      const Sampler f = Sampler::from_polynomial(pf);
      const Sampler g = Sampler::from_polynomial(pg);
      const cplx z = random_point(rng, 0.2, 2.0);
      const cplx dfz = dq_sample(f, z, qp);
      const cplx dgz = dq_sample(g, z, qp);

      const Sampler fg([&](cplx w) { return f(w) * g(w); });
      const cplx dfg = dq_sample(fg, z, qp);
      const double sc = std::abs(g(q * z) * dfz) + std::abs(f(z) * dgz) + 1e-300;
      product = std::max(product, std::abs(dfg - (g(q * z) * dfz + f(z) * dgz)) / sc);
      product = std::max(product, std::abs(dfg - (f(q * z) * dgz + g(z) * dfz)) / sc);

      if (std::abs(g(z) * g(q * z)) > 1e-6) {
        const Sampler ratio([&](cplx w) { return f(w) / g(w); });
        const cplx rhs = (g(z) * dfz - f(z) * dgz) / (g(q * z) * g(z));
        quotient = std::max(quotient, std::abs(dq_sample(ratio, z, qp) - rhs) / std::max(1.0, std::abs(rhs)));
      }

      const cplx gap = g(q * z) - g(z);
      if (std::abs(gap) > 1e-8 * std::max(1.0, std::abs(g(z)))) {
        const Sampler comp([&](cplx w) { return f(g(w)); });
        const cplx rhs = (f(g(q * z)) - f(g(z))) / gap * dgz;
        chain = std::max(chain, std::abs(dq_sample(comp, z, qp) - rhs) / std::max(1.0, std::abs(rhs)));
      }

      const cplx a(0.3, -1.2), b(2.0, 0.5);
      const Sampler lin([&](cplx w) { return a * f(w) + b * g(w); });
      const cplx rhs = a * dfz + b * dgz;
      linear = std::max(linear, std::abs(dq_sample(lin, z, qp) - rhs) / std::max(1.0, std::abs(rhs)));
    }
    rec.below("product rule, " + qname(q), product, 1e-10);
    rec.below("quotient rule, " + qname(q), quotient, 1e-9);
    rec.below("chain rule, " + qname(q), chain, 1e-9);
    rec.below("linearity, " + qname(q), linear, 1e-12);
  }

  // divided difference of the inverse of z^m over the image lattice
  const QParam qh(0.5);
  double inverse = 0.0;
  for (int m = 1; m <= 5; ++m) {
    for (double z : {0.3, 1.0, 2.7}) {
      const double y0 = std::pow(z, m);
      const double y1 = std::pow(0.5 * z, m);
      const double inv_dd = (std::pow(y1, 1.0 / m) - std::pow(y0, 1.0 / m)) / (y1 - y0);
      const Sampler f([m](cplx w) { return std::pow(w, m); });
      const cplx dy = dq_sample(f, z, qh);
      inverse = std::max(inverse, rel(inv_dd, 1.0 / dy));
    }
  }
  rec.below("inverse rule, q=0.5", inverse, 1e-12);

  double closed = 0.0, iterated = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    std::uniform_int_distribution<int> deg_d(1, 12);
    const int deg = deg_d(rng);
    const int k = std::uniform_int_distribution<int>(1, std::min(5, deg))(rng);
    const QParam qp(trial % 2 ? cplx(0.5) : cplx(2.0));
    const auto poly = random_poly(rng, deg);
    const Sampler s = Sampler::from_polynomial(poly);
    const cplx z = random_point(rng, 0.5, 1.5);
    const cplx ser = dqk_series(TruncatedSeries::polynomial(poly.coeffs()), qp, k).eval(z);
    closed = std::max(closed, rel(dqk_closed_form(s, z, qp, k), ser));
    iterated = std::max(iterated, rel(dqk_iterated(s, z, qp, k), ser));
  }
  rec.below("closed form D_q^k = series D_q^k", closed, 1e-9);
  rec.below("iterated D_q^k = series D_q^k", iterated, 1e-9);

  // D_q of the Jackson integral from 0 gives the integrand back
  double fundamental = 0.0, parts = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const auto pf = random_poly(rng, 1 + trial % 5);
    const auto pg = random_poly(rng, 1 + (trial + 2) % 5);
    const Sampler f = Sampler::from_polynomial(pf);
    const Sampler g = Sampler::from_polynomial(pg);
    const Sampler F([&](cplx w) { return jackson_integral(f, 0.0, w, qh); });
    const cplx z = random_point(rng, 0.3, 1.5);
    fundamental = std::max(fundamental, std::abs(dq_sample(F, z, qh) - f(z)) / std::max(1.0, std::abs(f(z))));

    const Sampler lhs_integrand([&](cplx w) { return f(w) * dq_sample(g, w, qh); });
    const Sampler rhs_integrand([&](cplx w) { return g(0.5 * w) * dq_sample(f, w, qh); });
    const cplx lhs = jackson_integral(lhs_integrand, 0.0, 1.0, qh);
    const cplx rhs = f(1.0) * g(1.0) - f(0.0) * g(0.0) - jackson_integral(rhs_integrand, 0.0, 1.0, qh);
    parts = std::max(parts, std::abs(lhs - rhs));
  }
  rec.below("D_q of the Jackson integral, q=0.5", fundamental, 1e-9);
  rec.below("integration by parts on [0, 1], q=0.5", parts, 1e-8);
}

void casorati_suite(Recorder& rec, std::mt19937_64& rng) {
  for (cplx q : {cplx(2.0), cplx(0.5)}) {
    const QParam qp(q);
    const auto [s, c] = sinq_cosq(qp, 40);
    const auto w = casorati(s, c, qp);
    rec.holds("C_J(sin_q, cos_q) outside the kernel, " + qname(q), !kernel_check(w, qp));
    const auto lhs = dq_series(w, qp);
    const auto rhs = cplx(q - 1.0) * series_shift_up(w, 1);
    rec.below("D_q C_J = (q-1) z C_J for A = 1, " + qname(q), coefficient_distance(lhs, rhs.truncated(lhs.order())),
              1e-8);
  }

  // A = 1 + z, random independent initial data
  std::normal_distribution<double> g(0.0, 1.0);
  const QParam q2(2.0);
  const RationalFunction A(Polynomial{1.0, 1.0});
  const std::vector<cplx> u{{g(rng), g(rng)}, {g(rng), g(rng)}};
  const std::vector<cplx> v{{g(rng), g(rng)}, {g(rng), g(rng)}};
  const auto f1 = solve_series({2, A, RationalFunction(), q2, u}, 40).f;
  const auto f2 = solve_series({2, A, RationalFunction(), q2, v}, 40).f;
  const auto w = casorati(f1, f2, q2);
  rec.holds("independent initial data: C_J outside the kernel", !kernel_check(w, q2));
  const auto lhs = dq_series(w, q2);
  const auto rhs = cplx(q2.value() - 1.0) * (series_shift_up(A.origin_series(w.order()), 1) * w);
  rec.below("D_q C_J = A (q-1) z C_J for A = 1 + z, q=2",
            coefficient_distance(lhs, rhs.truncated(lhs.order())) / std::max(1.0, w.max_abs()), 1e-8);

  const std::vector<cplx> u2{2.5 * u[0], 2.5 * u[1]};
  const auto f3 = solve_series({2, A, RationalFunction(), q2, u2}, 40).f;
  const auto w0 = casorati(f1, f3, q2);
  rec.below("parallel initial data: C_J vanishes", w0.max_abs() / std::max(1.0, f1.max_abs() * f3.max_abs()), 1e-12);
}

void solver_suite(Recorder& rec, std::mt19937_64& rng) {
  for (cplx q : {cplx(0.5), cplx(2.0)}) {
    const QParam qp(q);
    const auto f = solve_series({1, constant_fn(-1.0), RationalFunction(), qp, {1.0}}, 30).f;
    double worst = 0.0;
    for (int n = 0; n <= 30; ++n) worst = std::max(worst, rel(f[n], ipow(1.0 - q, n) / q_pochhammer(q, qp, n)));
    rec.below("D_q f = f gives (1-q)^n/(q;q)_n, " + qname(q), worst, 1e-12);

    const auto [s, c] = sinq_cosq(qp, 30);
    const auto fs = solve_series({2, constant_fn(1.0), RationalFunction(), qp, {0.0, 1.0}}, 30).f;
    const auto fc = solve_series({2, constant_fn(1.0), RationalFunction(), qp, {1.0, 0.0}}, 30).f;
    rec.below("D_q^2 f + f = 0 gives sin_q, cos_q, " + qname(q),
              std::max(coefficient_distance(fs, s), coefficient_distance(fc, c)), 1e-12);

    // z^5 + 1 from its first- and second-order equations
    const RationalFunction A1(Polynomial::monomial(4, -(ipow(q, 5) - 1.0) / (q - 1.0)),
                              Polynomial{1.0, 0.0, 0.0, 0.0, 0.0, 1.0});
    const cplx c2 = -(ipow(q, 9) - ipow(q, 5) - ipow(q, 4) + 1.0) / ((q - 1.0) * (q - 1.0));
    const RationalFunction A2(Polynomial::monomial(3, c2), Polynomial{1.0, 0.0, 0.0, 0.0, 0.0, 1.0});
    double stray = 0.0;
    for (const auto& p : {QdeProblem{1, A1, RationalFunction(), qp, {1.0}},
                          QdeProblem{2, A2, RationalFunction(), qp, {1.0, 0.0}}}) {
      const auto sol = solve_series(p, 20).f;
      stray = std::max({stray, std::abs(sol[0] - 1.0), std::abs(sol[5] - 1.0)});
      for (int n = 1; n <= 20; ++n) {
        if (n != 5) stray = std::max(stray, std::abs(sol[n]));
      }
      std::vector<cplx> pts;
      while (pts.size() < 20) {
        const cplx z = random_point(rng, 0.05, 2.0);
        if (std::abs(std::pow(z, 5) + 1.0) > 1e-3) pts.push_back(z);
      }
      const Sampler quintic([](cplx z) { return std::pow(z, 5) + 1.0; });
      double pw = 0.0;
      for (const auto& r : verify_pointwise(p, quintic, pts)) pw = std::max(pw, r.relative);
      rec.below("z^5 + 1 pointwise residual, k=" + std::to_string(p.k) + ", " + qname(q), pw, 1e-9);
    }
    rec.below("z^5 + 1 recovered, " + qname(q), stray, 1e-12);
  }

  // linearity in the initial data and the series residual
  std::normal_distribution<double> g(0.0, 1.0);
  const QParam qp(cplx(1.5, 0.5));
  const RationalFunction A(Polynomial{1.0, -0.5, 0.25}, Polynomial{1.0, 0.2});
  const std::vector<cplx> u{{g(rng), g(rng)}, {g(rng), g(rng)}};
  const std::vector<cplx> v{{g(rng), g(rng)}, {g(rng), g(rng)}};
  const QdeProblem pu{2, A, RationalFunction(), qp, u};
  const auto fu = solve_series(pu, 30).f;
  const auto fv = solve_series({2, A, RationalFunction(), qp, v}, 30).f;
  const auto fw = solve_series({2, A, RationalFunction(), qp, {u[0] + v[0], u[1] + v[1]}}, 30).f;
  rec.below("linearity in the initial data",
            coefficient_distance(fw, fu + fv) / std::max(1.0, fw.max_abs()), 1e-12);
  const auto res = residual(pu, fu);
  rec.below("series residual of a solver output", res.max_abs / std::max(1.0, res.scale), 1e-10);

  auto perturbed = fu.coeffs();
  perturbed[7] += 1e-3;
  rec.at_least("residual detects a 1e-3 perturbation", residual(pu, TruncatedSeries(perturbed)).max_abs, 1e-4);

  const RationalFunction As(Polynomial{1.0, 1.0});
  double shifted = 0.0;
  for (int k : {1, 2}) {
    std::vector<cplx> init;
    for (int j = 0; j < k; ++j) init.emplace_back(g(rng), g(rng));
    const auto direct = solve_shifted_direct(As, QParam(2.0), k, init, 25);
    const auto transformed = solve_shifted_transformed(As, QParam(2.0), k, init, 25);
    shifted = std::max(shifted, coefficient_distance(direct, transformed) / std::max(1.0, direct.max_abs()));
  }
  rec.below("A(z) f(q^k z) equation: direct = transformed", shifted, 1e-10);
}

void jensen_suite(Recorder& rec, std::mt19937_64& rng) {
  const std::vector<double> radii{2.0, 10.0, 100.0};
  const auto set = rational_test_set(rng, 20, 4, radii);
  double worst = 0.0;
  for (const auto& f : set) {
    const auto model = MeroModel::rational(f);
    for (double r : radii) worst = std::max(worst, jensen_residual(model, r, 4096));
  }
  rec.below("rational test set, r in {2, 10, 100}, M=4096", worst, 1e-6);
  rec.below("E_q product, q=0.5, r=10", jensen_residual(E_q_model(QParam(0.5)), 10.0, 4096), 1e-5);
}

const std::vector<Target>& four_targets() {
  static const std::vector<Target> t{Target::at(0.0), Target::at(1.0), Target::at(-1.0), Target::infinity()};
  return t;
}

void sft_suite(Recorder& rec, std::mt19937_64& rng) {
  const QParam qh(0.5);
  const auto grid = RadialGrid::log_spaced(10.0, 1e4, 10, 1024);
  const auto set = rational_test_set(rng, 10, 4, grid.radii);
  double lowest = kInfinity, top = kInfinity;
  for (const auto& f : set) {
    const auto model = MeroModel::rational(f, qh);
    const auto rows = sft_check(model, four_targets(), qh, grid.nudged(model));
    for (const auto& row : rows) lowest = std::min(lowest, row.margin);
    top = std::min(top, rows.back().margin / rows.back().T);
  }
  rec.at_least("margin over r in [10, 1e4]", lowest, -10.0);
  rec.at_least("margin / T at r = 1e4", top, -0.05);
}

void defect_suite(Recorder& rec, std::mt19937_64& rng) {
  const auto grid = RadialGrid::log_spaced(10.0, 1e4, 10, 1024);
  const auto set = rational_test_set(rng, 10, 4, grid.radii);
  double worst = 0.0;
  for (const auto& f : set) {
    const auto model = MeroModel::rational(f, QParam(0.5));
    double sum = 0.0;
    for (const auto& d : defect_estimates(model, grid.nudged(model), four_targets())) sum += d.theta_J;
    worst = std::max(worst, sum);
  }
  rec.below("sum of Theta_J proxies, targets {0, 1, -1, inf}", worst, 2.1);
}

struct SeriesCase {
  std::string name;
  TruncatedSeries f;
  QParam qp;
};

std::vector<SeriesCase> q_series_test_set() {
  return {{"etilde_2, q=0.5", etilde_q(QParam(2.0), 44), QParam(0.5)},
          {"etilde_3, q=1/3", etilde_q(QParam(3.0), 44), QParam(1.0 / 3.0)},
          {"E_0.5, q=0.5", E_q(QParam(0.5), 44), QParam(0.5)}};
}

// nu is a step function, so on a generic grid the relative deviation is a
// sawtooth in log r whose envelope decays like 1/nu. Radii r_0 |q|^-j sit at
// one phase of the steps and follow the envelope.
std::vector<double> lattice_phase_radii(const QParam& qp, double r0, double r_max) {
  std::vector<double> radii;
  for (double r = r0; r <= r_max; r /= qp.modulus()) radii.push_back(r);
  return radii;
}

void wiman_valiron_suite(Recorder& rec, std::mt19937_64&) {
  const auto grid = RadialGrid::log_spaced(1e2, 1e6, 13);
  for (const auto& c : q_series_test_set()) {
    const auto t = wiman_valiron_check(c.f, c.qp, 1, grid.radii);
    rec.below("final deviation, log grid 1e2..1e6, " + c.name, t.rows.back().deviation, 0.3);
    const auto tl = wiman_valiron_check(c.f, c.qp, 1, lattice_phase_radii(c.qp, 1e2, 1e6));
    rec.below("final deviation, lattice-phase radii, " + c.name, tl.rows.back().deviation, 0.3);
    rec.holds("deviation decreasing over the top three lattice-phase radii, " + c.name, tl.deviation_decreasing(3));
  }
}

struct ModelCase {
  std::string name;
  MeroModel model;
  QParam qp;
};

std::vector<ModelCase> zero_order_test_set() {
  const QParam q2(2.0), qh(0.5), q3(3.0);
  return {{"E_0.5, q=0.5", E_q_model(qh), qh},
          {"E_0.5, q=2", E_q_model(qh), q2},
          {"etilde_2, q=2", etilde_model(q2), q2},
          {"etilde_2, q=0.5", etilde_model(q2), qh},
          {"etilde_3, q=3", etilde_model(q3), q3},
          {"(z^3 - 2z^2 + 1)/(z + 3), q=2",
           MeroModel::rational(RationalFunction(Polynomial{1.0, 0.0, -2.0, 1.0}, Polynomial{3.0, 1.0})), q2}};
}

void logderiv_suite(Recorder& rec, std::mt19937_64&) {
  const auto grid = RadialGrid::log_spaced(10.0, 1e4, 10, 1024);
  for (const auto& c : zero_order_test_set()) {
    const auto t = logderiv_lemma_check(c.model, c.qp, 1, grid.nudged(c.model));
    rec.below("m(r, D_q f / f) / T at r = 1e4, " + c.name, t.rows.back().ratio, 0.2);
  }
}

using SuiteFn = std::function<void(Recorder&, std::mt19937_64&)>;

const std::map<std::string, SuiteFn, std::less<>>& registry() {
  static const std::map<std::string, SuiteFn, std::less<>> r{
      {"identities", identities},   {"operator-rules", operator_rules},
      {"casorati", casorati_suite}, {"solver", solver_suite},
      {"jensen", jensen_suite},     {"sft", sft_suite},
      {"defects", defect_suite},    {"wiman-valiron", wiman_valiron_suite},
      {"logderiv", logderiv_suite}};
  return r;
}

}  // namespace

bool SuiteReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"identities", "operator-rules", "casorati", "solver",  "jensen",
                                              "sft",        "defects",        "wiman-valiron", "logderiv"};
  return names;
}

SuiteReport run_suite(std::string_view name, const VerifyOptions& options) {
  const auto it = registry().find(name);
  if (it == registry().end()) throw Error(ErrorCode::unknown_function, "unknown suite '" + std::string(name) + "'");
  if (!(options.tol_scale > 0.0)) throw Error(ErrorCode::domain_error, "tolerance scale must be positive");
  SuiteReport report{std::string(name), {}};
  Recorder rec(report, options.tol_scale);
  std::mt19937_64 rng(options.seed);
  it->second(rec, rng);
  return report;
}

}  // namespace qdiff
