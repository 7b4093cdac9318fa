#include "qdiff/nevanlinna.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include "qdiff/qoperator.hpp"

namespace qdiff {

namespace {

constexpr double kCircleMargin = 1e-6;
constexpr double kNudge = 1e-5;

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

cplx horner(const std::vector<cplx>& c, cplx z) {
  cplx acc(0.0);
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
  return acc;
}

std::vector<cplx> derivative_coeffs(const std::vector<cplx>& c) {
  std::vector<cplx> d(c.size() > 1 ? c.size() - 1 : 1, cplx(0.0));
  for (std::size_t n = 1; n < c.size(); ++n) d[n - 1] = static_cast<double>(n) * c[n];
  return d;
}

std::vector<Root> lattice_roots(const std::vector<QLattice>& lattices, double r) {
  std::vector<Root> out;
  for (const auto& lat : lattices) {
    for (const cplx p : lat.points_within(r)) out.push_back({p, lat.multiplicity});
  }
  return out;
}

std::vector<Root> within(const std::vector<Root>& pts, double r) {
  std::vector<Root> out;
  for (const auto& p : pts) {
    if (std::abs(p.z) <= r) out.push_back(p);
  }
  return out;
}

struct Fit {
  double slope = 0.0;
  double se = 0.0;
};

Fit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw Error(ErrorCode::insufficient_grid, "regression abscissae coincide");
  Fit fit;
  fit.slope = sxy / sxx;
  if (x.size() > 2) {
    double ss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double e = y[i] - my - fit.slope * (x[i] - mx);
      ss += e * e;
    }
    fit.se = std::sqrt(ss / (n - 2.0) / sxx);
  }
  return fit;
}

// Regression of log+ value against log log r over the top half of the radii.
OrderEstimate order_regression(const std::vector<double>& radii, const std::vector<double>& values,
                               double offset, bool reject_flat) {
  if (radii.size() < 6 || radii.back() < radii.front() * 1e3 * (1.0 - 1e-9)) {
    throw Error(ErrorCode::insufficient_grid, "need at least 6 radii spanning 3 decades");
  }
  const std::size_t start = radii.size() / 2;
  std::vector<double> x;
  std::vector<double> y;
  for (std::size_t i = start; i < radii.size(); ++i) {
    if (radii[i] <= std::numbers::e) {
      throw Error(ErrorCode::insufficient_grid, "log log r needs r > e on the fitted radii");
    }
    x.push_back(std::log(std::log(radii[i])));
    y.push_back(values[i] > 1.0 ? std::log(values[i]) : 0.0);
  }
  const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
  if (*hi == 0.0 || (reject_flat && *hi - *lo <= 1e-12 * std::max(1.0, std::abs(*hi)))) {
    throw Error(ErrorCode::degenerate_model, "growth quantity is flat; no order to estimate");
  }
  const Fit fit = least_squares(x, y);
  return {fit.slope + offset, 2.0 * fit.se, static_cast<int>(x.size())};
}

void check_circle(const MeroModel& model, double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw Error(ErrorCode::domain_error, "radius must be positive");
  if (r > model.evaluable_radius()) {
    throw Error(ErrorCode::outside_safe_radius, "circle leaves the disc the model is valid on");
  }
  for (const auto& p : model.poles_within(r * (1.0 + 2.0 * kCircleMargin))) {
    if (std::abs(std::abs(p.z) - r) <= kCircleMargin * r) {
      throw Error(ErrorCode::pole_on_circle, "a pole lies on the integration circle");
    }
  }
}

void check_mean(double v) {
  if (std::isnan(v)) throw Error(ErrorCode::nonconvergent_sample, "circle mean is not a number");
  if (std::isinf(v)) throw Error(ErrorCode::pole_on_circle, "infinite value on the integration circle");
}

// ---- argument principle ----------------------------------------------------

std::optional<int> winding_at(const std::vector<cplx>& c, double t) {
  for (int m = 256; m <= (1 << 16); m *= 2) {
    const double h = 2.0 * std::numbers::pi / m;
    const cplx first = horner(c, t);
    if (!std::isfinite(std::abs(first)) || first == cplx(0.0)) return std::nullopt;
    cplx prev = first;
    double total = 0.0;
    bool resolved = true;
    for (int j = 1; j <= m; ++j) {
      const cplx cur = j == m ? first : horner(c, std::polar(t, h * j));
      if (!std::isfinite(std::abs(cur)) || cur == cplx(0.0)) return std::nullopt;
      const double step = std::arg(cur / prev);
      if (std::abs(step) > std::numbers::pi / 4.0) {
        resolved = false;
        break;
      }
      total += step;
      prev = cur;
    }
    if (resolved) {
      const double w = total / (2.0 * std::numbers::pi);
      const long n = std::lround(w);
      if (std::abs(w - static_cast<double>(n)) < 1e-2) return static_cast<int>(n);
    }
  }
  return std::nullopt;
}

// Winding count on a circle that may be moved slightly off a zero.
std::pair<double, int> winding_near(const std::vector<cplx>& c, double t) {
  for (double f : {1.0, 1.0 + 1e-3, 1.0 - 1e-3, 1.0 + 3e-3, 1.0 - 3e-3}) {
    if (const auto w = winding_at(c, t * f)) return {t * f, *w};
  }
  throw Error(ErrorCode::root_finding_failed, "winding number did not resolve near this circle");
}

// p_k = (1/2 pi i) int z^k f'/f dz over |z| = t, k = 1..count.
std::vector<cplx> disc_power_sums(const std::vector<cplx>& c, const std::vector<cplx>& dc, double t,
                                  int count) {
  std::vector<cplx> prev;
  for (int m = 512; m <= (1 << 16); m *= 2) {
    std::vector<cplx> p(static_cast<std::size_t>(count), cplx(0.0));
    const double h = 2.0 * std::numbers::pi / m;
    for (int j = 0; j < m; ++j) {
      const cplx z = std::polar(t, h * (j + 0.5));
      const cplx g = z * horner(dc, z) / horner(c, z);
      cplx zk = 1.0;
      for (int k = 0; k < count; ++k) {
        zk *= z;
        p[static_cast<std::size_t>(k)] += zk * g;
      }
    }
    for (auto& x : p) x /= static_cast<double>(m);
    if (!prev.empty()) {
      double diff = 0.0;
      double size = 0.0;
      for (std::size_t k = 0; k < p.size(); ++k) {
        diff = std::max(diff, std::abs(p[k] - prev[k]) / std::pow(t, static_cast<double>(k + 1)));
        size = std::max(size, std::abs(p[k]) / std::pow(t, static_cast<double>(k + 1)));
      }
      if (diff <= 1e-10 * std::max(1.0, size)) return p;
    }
    prev = std::move(p);
  }
  return prev;
}

cplx polish(const std::vector<cplx>& c, const std::vector<cplx>& dc, cplx z, int multiplicity) {
  for (int it = 0; it < 30; ++it) {
    const cplx d = horner(dc, z);
    if (d == cplx(0.0)) break;
    const cplx step = static_cast<double>(multiplicity) * horner(c, z) / d;
    if (!std::isfinite(std::abs(step))) break;
    z -= step;
    if (std::abs(step) <= 1e-15 * std::abs(z)) break;
  }
  return z;
}

void annulus_zeros(const std::vector<cplx>& c, const std::vector<cplx>& dc, double tl, double th,
                   int count, std::vector<Root>& out) {
  const auto outer = disc_power_sums(c, dc, th, count);
  const auto inner = disc_power_sums(c, dc, tl, count);
  std::vector<cplx> p(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    p[static_cast<std::size_t>(k)] = outer[static_cast<std::size_t>(k)] - inner[static_cast<std::size_t>(k)];
  }
  // Newton's identities: power sums to elementary symmetric functions.
  std::vector<cplx> e(static_cast<std::size_t>(count) + 1, cplx(0.0));
  e[0] = 1.0;
  for (int k = 1; k <= count; ++k) {
    cplx s(0.0);
    for (int i = 1; i <= k; ++i) {
      const double sign = i % 2 == 1 ? 1.0 : -1.0;
      s += sign * e[static_cast<std::size_t>(k - i)] * p[static_cast<std::size_t>(i - 1)];
    }
    e[static_cast<std::size_t>(k)] = s / static_cast<double>(k);
  }
  std::vector<cplx> poly(static_cast<std::size_t>(count) + 1);
  for (int j = 0; j <= count; ++j) {
    poly[static_cast<std::size_t>(count - j)] = (j % 2 == 0 ? 1.0 : -1.0) * e[static_cast<std::size_t>(j)];
  }
  for (const auto& root : Polynomial(poly).roots()) {
    cplx z = polish(c, dc, root.z, root.multiplicity);
    const double lo = tl * (1.0 - 1e-6);
    const double hi = th * (1.0 + 1e-6);
    if (std::abs(z) < lo || std::abs(z) > hi) z = root.z;
    out.push_back({z, root.multiplicity});
  }
}

void split_annulus(const std::vector<cplx>& c, const std::vector<cplx>& dc, double tl, int cl,
                   double th, int ch, std::vector<Root>& out) {
  const int count = ch - cl;
  if (count <= 0) return;
  if (count <= 4 || th < tl * (1.0 + 1e-6)) {
    annulus_zeros(c, dc, tl, th, count, out);
    return;
  }
  const auto [tm, cm] = winding_near(c, std::sqrt(tl * th));
  split_annulus(c, dc, tl, cl, tm, cm, out);
  split_annulus(c, dc, tm, cm, th, ch, out);
}

int leading_index(const std::vector<cplx>& c) {
  int v = 0;
  while (v < static_cast<int>(c.size()) && c[static_cast<std::size_t>(v)] == cplx(0.0)) ++v;
  return v;
}

void require_series_radius(const TruncatedSeries& f, double r) {
  const auto R = f.safe_radius();
  if (!R || r > *R) throw Error(ErrorCode::outside_safe_radius, "radius beyond the certified disc");
}

// ---- shared per-radius pieces ----------------------------------------------

double characteristic_T(const MeroModel& model, double r, int nodes, Exec exec) {
  return proximity(model, r, nodes, exec).m + counting_N(model, r, Target::infinity());
}

bool same_target(const Target& a, const Target& b) {
  if (a.infinite || b.infinite) return a.infinite == b.infinite;
  return std::abs(a.value - b.value) <= 1e-14 * std::max(1.0, std::abs(a.value));
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : "nan"; }

}  // namespace

// ---- MeroModel ---------------------------------------------------------------

MeroModel MeroModel::rational(RationalFunction f, std::optional<QParam> qp) {
  if (f.is_zero()) throw Error(ErrorCode::degenerate_model, "the zero function has no characteristic");
  return MeroModel(Data(std::in_place_index<0>, std::move(f)), std::move(qp));
}

MeroModel MeroModel::series(TruncatedSeries f, std::optional<QParam> qp) {
  if (!f.safe_radius() || !(*f.safe_radius() > 0.0)) {
    throw Error(ErrorCode::domain_error, "series model needs a certified safe radius");
  }
  if (f.max_abs() == 0.0) throw Error(ErrorCode::degenerate_model, "the zero function has no characteristic");
  return MeroModel(Data(std::in_place_index<1>, std::move(f)), std::move(qp));
}

MeroModel MeroModel::product(ProductModel p, std::optional<QParam> qp) {
  return MeroModel(Data(std::in_place_index<2>, std::move(p)), std::move(qp));
}

cplx MeroModel::eval(cplx z) const {
  return std::visit(Overloaded{[&](const RationalFunction& f) { return f.eval(z); },
                               [&](const TruncatedSeries& f) { return f.eval(z); },
                               [&](const ProductModel& p) { return p.f(z); }},
                    data_);
}

double MeroModel::log_abs(cplx z) const {
  return std::visit(
      Overloaded{[&](const RationalFunction& f) {
                   return std::log(std::abs(f.num().eval(z))) - std::log(std::abs(f.den().eval(z)));
                 },
                 [&](const TruncatedSeries& f) { return std::log(std::abs(f.eval(z))); },
                 [&](const ProductModel& p) {
                   return p.log_abs ? p.log_abs(z) : std::log(std::abs(p.f(z)));
                 }},
      data_);
}

Sampler MeroModel::sampler() const {
  return std::visit(Overloaded{[](const RationalFunction& f) { return f.sampler(); },
                               [](const TruncatedSeries& f) { return Sampler::from_series(f); },
                               [](const ProductModel& p) { return p.f; }},
                    data_);
}

double MeroModel::evaluable_radius() const {
  return std::visit(Overloaded{[](const RationalFunction&) { return kInfinity; },
                               [](const TruncatedSeries& f) { return *f.safe_radius(); },
                               [](const ProductModel& p) { return p.f.domain_radius(); }},
                    data_);
}

bool MeroModel::is_constant() const {
  return std::visit(Overloaded{[](const RationalFunction& f) { return f.is_constant(); },
                               [](const TruncatedSeries& f) {
                                 for (int n = 1; n <= f.order(); ++n) {
                                   if (f[n] != cplx(0.0)) return false;
                                 }
                                 return true;
                               },
                               [](const ProductModel& p) { return p.zeros.empty() && p.poles.empty(); }},
                    data_);
}

std::vector<double> MeroModel::singular_moduli(double r) const {
  std::vector<Root> pts;
  if (const auto* f = rational_function()) {
    pts = within(f->zeros(), r);
    const auto poles = within(f->poles(), r);
    pts.insert(pts.end(), poles.begin(), poles.end());
  } else if (const auto* p = product_data()) {
    pts = lattice_roots(p->zeros, r);
    const auto poles = lattice_roots(p->poles, r);
    pts.insert(pts.end(), poles.begin(), poles.end());
  }
  std::vector<double> out;
  for (const auto& x : pts) {
    if (x.z != cplx(0.0)) out.push_back(std::abs(x.z));
  }
  return out;
}

std::vector<Root> MeroModel::poles_within(double r) const {
  if (const auto* f = rational_function()) return within(f->poles(), r);
  if (const auto* p = product_data()) return lattice_roots(p->poles, r);
  return {};
}

MeroModel E_q_model(const QParam& qp) {
  if (!qp.inside_unit_disc()) throw Error(ErrorCode::domain_error, "E_q product model needs |q| < 1");
  return MeroModel::product({{E_q_zero_lattice(qp)}, {}, E_q_product_sampler(qp), {}}, qp);
}

MeroModel etilde_model(const QParam& qp) {
  if (qp.inside_unit_disc()) throw Error(ErrorCode::domain_error, "etilde_q product model needs |q| > 1");
  return MeroModel::product({{etilde_zero_lattice(qp)}, {}, etilde_product_sampler(qp), {}}, qp);
}

// ---- grid ----------------------------------------------------------------------

RadialGrid RadialGrid::log_spaced(double r_min, double r_max, int points, int nodes) {
  if (points < 2 || !(r_min > 0.0) || !(r_max > r_min)) {
    throw Error(ErrorCode::domain_error, "grid needs 0 < r_min < r_max and at least 2 points");
  }
  RadialGrid g;
  g.nodes = nodes;
  const double a = std::log(r_min);
  const double b = std::log(r_max);
  for (int i = 0; i < points; ++i) {
    g.radii.push_back(i == 0            ? r_min
                      : i == points - 1 ? r_max
                                        : std::exp(a + (b - a) * i / (points - 1)));
  }
  g.validate();
  return g;
}

RadialGrid RadialGrid::nudged(const MeroModel& model) const {
  validate();
  RadialGrid g = *this;
  const auto moduli = model.singular_moduli(radii.back() * 1.01);
  for (auto& r : g.radii) {
    for (int pass = 0; pass < 16; ++pass) {
      bool moved = false;
      for (double rho : moduli) {
        if (std::abs(r - rho) <= kCircleMargin * rho) {
          r = rho * (1.0 + kNudge);
          moved = true;
        }
      }
      if (!moved) break;
    }
  }
  g.validate();
  return g;
}

void RadialGrid::validate() const {
  if (radii.empty()) throw Error(ErrorCode::insufficient_grid, "empty radial grid");
  if (nodes < 64 || nodes % 2 != 0) throw Error(ErrorCode::domain_error, "angular nodes must be even and >= 64");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0) || !std::isfinite(radii[i]) || (i > 0 && !(radii[i] > radii[i - 1]))) {
      throw Error(ErrorCode::domain_error, "radii must be positive and strictly increasing");
    }
  }
}

// ---- proximity and counting -----------------------------------------------------

Proximity proximity(const MeroModel& model, double r, int nodes, Exec exec) {
  check_circle(model, r);
  const auto cm = circle_mean([&](cplx z) { return std::max(0.0, model.log_abs(z)); }, r, nodes, exec);
  check_mean(cm.value);
  return {cm.value, cm.error};
}

std::vector<Root> a_points(const MeroModel& model, double r, Target a) {
  if (const auto* f = model.rational_function()) {
    if (a.infinite) return within(f->poles(), r);
    if (a.value == cplx(0.0)) return within(f->zeros(), r);
    const RationalFunction g = f->minus_constant(a.value);
    if (g.is_zero()) throw Error(ErrorCode::degenerate_model, "f is identically equal to the target");
    return within(g.zeros(), r);
  }
  if (const auto* p = model.product_data()) {
    if (a.infinite) return lattice_roots(p->poles, r);
    if (a.value == cplx(0.0)) return lattice_roots(p->zeros, r);
    throw Error(ErrorCode::target_unsupported, "product models know only their zeros and poles");
  }
  const auto& f = *model.series_function();
  if (a.infinite) return {};
  if (a.value == cplx(0.0)) return series_zeros(f, r);
  throw Error(ErrorCode::target_unsupported, "series models count zeros only");
}

int counting_n(const MeroModel& model, double r, Target a) {
  return total_multiplicity(a_points(model, r, a));
}

double integrated_count(const std::vector<Root>& points, double r) {
  double n = 0.0;
  for (const auto& p : points) {
    const double m = std::abs(p.z);
    if (m > r) continue;
    n += p.multiplicity * (m == 0.0 ? std::log(r) : std::log(r / m));
  }
  return n;
}

double counting_N(const MeroModel& model, double r, Target a) {
  return integrated_count(a_points(model, r, a), r);
}

int argument_principle_count(const TruncatedSeries& f, double r) {
  require_series_radius(f, r);
  const auto w = winding_at(f.coeffs(), r);
  if (!w) throw Error(ErrorCode::root_finding_failed, "winding number did not resolve on this circle");
  return *w;
}

std::vector<Root> series_zeros(const TruncatedSeries& f, double r) {
  require_series_radius(f, r);
  const auto& c = f.coeffs();
  const int v = leading_index(c);
  if (v == static_cast<int>(c.size())) throw Error(ErrorCode::degenerate_model, "zero series");
  std::vector<Root> out;
  if (v > 0) out.push_back({cplx(0.0), v});
  const int total = argument_principle_count(f, r) - v;
  if (total <= 0) return out;

  const auto dc = derivative_coeffs(c);
  double t0 = r;
  int c0 = total;
  for (int i = 0; i < 40 && c0 > 0; ++i) {
    const auto [t, w] = winding_near(c, t0 * 1e-2);
    t0 = t;
    c0 = w - v;
  }
  if (c0 != 0) throw Error(ErrorCode::root_finding_failed, "no zero-free disc found around the origin");
  split_annulus(c, dc, t0, 0, r, total, out);
  return out;
}

// ---- characteristic and Jensen --------------------------------------------------

NevanlinnaSample characteristic(const MeroModel& model, double r, int nodes, Exec exec) {
  NevanlinnaSample s;
  s.r = r;
  const auto p = proximity(model, r, nodes, exec);
  s.m = p.m;
  s.quad_err = p.error;
  s.N_inf = counting_N(model, r, Target::infinity());
  s.T = s.m + s.N_inf;
  s.N_0 = counting_N(model, r, Target::at(0.0));
  if (model.rational_function() && model.qp() && !model.is_constant()) {
    const auto j0 = jackson_truncated_counting(model, r, Target::at(0.0), *model.qp());
    const auto ji = jackson_truncated_counting(model, r, Target::infinity(), *model.qp());
    s.nJ_0 = j0.ntilde;
    s.NJ_0 = j0.Ntilde;
    s.nJ_inf = ji.ntilde;
    s.NJ_inf = ji.Ntilde;
  }
  return s;
}

double jensen_residual(const MeroModel& model, double r, int nodes, Exec exec) {
  check_circle(model, r);
  const auto cm = circle_mean([&](cplx z) { return model.log_abs(z); }, r, nodes, exec);
  check_mean(cm.value);
  double log_lead = 0.0;
  if (const auto* f = model.rational_function()) {
    log_lead = std::log(std::abs(f->leading_origin_coefficient()));
  } else if (const auto* s = model.series_function()) {
    const int v = leading_index(s->coeffs());
    log_lead = std::log(std::abs((*s)[v]));
  } else {
    log_lead = model.log_abs(0.0);
    if (!std::isfinite(log_lead)) {
      throw Error(ErrorCode::domain_error, "product model must be finite and nonzero at the origin");
    }
  }
  const double zeros = counting_N(model, r, Target::at(0.0));
  const double poles = counting_N(model, r, Target::infinity());
  return std::abs(cm.value - log_lead - zeros + poles);
}

// ---- Jackson truncated counting ---------------------------------------------------

std::vector<JacksonPoint> jackson_points(const RationalFunction& f, Target a, const QParam& qp) {
  if (f.is_constant()) throw Error(ErrorCode::degenerate_model, "constant function");
  std::vector<Root> pts;
  RationalFunction g;
  if (a.infinite) {
    pts = f.poles();
    g = dq_rational(f.reciprocal(), qp);
  } else {
    if (a.value == cplx(0.0)) {
      pts = f.zeros();
    } else {
      const RationalFunction shifted = f.minus_constant(a.value);
      if (shifted.is_zero()) throw Error(ErrorCode::degenerate_model, "f is identically equal to the target");
      pts = shifted.zeros();
    }
    g = dq_rational(f, qp);
  }
  std::vector<JacksonPoint> out;
  for (const auto& p : pts) {
    int kp = 0;
    if (!g.is_zero() && g.den().order_at(p.z) == 0) kp = g.num().order_at(p.z);
    out.push_back({p.z, p.multiplicity, kp});
  }
  return out;
}

JacksonCount jackson_truncated_counting(const MeroModel& model, double r, Target a, const QParam& qp) {
  const auto* f = model.rational_function();
  if (!f) throw Error(ErrorCode::target_unsupported, "Jackson counting needs a rational model");
  JacksonCount out;
  std::vector<Root> reduced;
  for (const auto& p : jackson_points(*f, a, qp)) {
    if (std::abs(p.z) > r) continue;
    const int c = p.h - std::min(p.h, p.k_prime);
    out.n += p.h;
    out.ntilde += c;
    if (c > 0) reduced.push_back({p.z, c});
  }
  out.Ntilde = integrated_count(reduced, r);
  return out;
}

// ---- defects ------------------------------------------------------------------------

std::vector<DefectReport> defect_estimates(const MeroModel& model, const RadialGrid& grid,
                                           const std::vector<Target>& targets, Exec exec) {
  grid.validate();
  if (!model.rational_function() || !model.qp()) {
    throw Error(ErrorCode::target_unsupported, "defect proxies need a rational model with q");
  }
  const auto& radii = grid.radii;
  const std::size_t nt = targets.size();
  std::vector<double> T(radii.size());
  std::vector<double> N(radii.size() * nt);
  std::vector<double> NJ(radii.size() * nt);
  for_each_index(
      radii.size(),
      [&](std::size_t i) {
        T[i] = characteristic_T(model, radii[i], grid.nodes, Exec::serial);
        for (std::size_t t = 0; t < nt; ++t) {
          N[i * nt + t] = counting_N(model, radii[i], targets[t]);
          NJ[i * nt + t] = jackson_truncated_counting(model, radii[i], targets[t], *model.qp()).Ntilde;
        }
      },
      exec);

  std::vector<std::size_t> top;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (radii[i] >= radii.back() / 10.0 * (1.0 - 1e-12)) top.push_back(i);
  }
  const std::size_t last = radii.size() - 1;
  const auto clamp = [](double v) { return std::clamp(v, -0.1, 1.1); };
  const auto outside = [](double v) { return v < 0.0 || v > 1.0; };
  std::vector<DefectReport> out;
  for (std::size_t t = 0; t < nt; ++t) {
    DefectReport d;
    d.target = targets[t];
    d.r = radii[last];
    d.raw_delta = 1.0 - N[last * nt + t] / T[last];
    d.raw_theta_J = 1.0 - NJ[last * nt + t] / T[last];
    d.raw_vartheta_J = (N[last * nt + t] - NJ[last * nt + t]) / T[last];
    d.delta = clamp(d.raw_delta);
    d.theta_J = clamp(d.raw_theta_J);
    d.vartheta_J = clamp(d.raw_vartheta_J);
    d.delta_out_of_range = outside(d.raw_delta);
    d.theta_out_of_range = outside(d.raw_theta_J);
    d.vartheta_out_of_range = outside(d.raw_vartheta_J);
    if (top.size() >= 2) {
      std::vector<double> x;
      std::vector<double> yd;
      std::vector<double> yt;
      for (std::size_t i : top) {
        x.push_back(std::log(radii[i]));
        yd.push_back(1.0 - N[i * nt + t] / T[i]);
        yt.push_back(1.0 - NJ[i * nt + t] / T[i]);
      }
      d.delta_slope = least_squares(x, yd).slope;
      d.theta_slope = least_squares(x, yt).slope;
    }
    out.push_back(d);
  }
  return out;
}

// ---- logarithmic order ------------------------------------------------------------

OrderEstimate log_order_from_T(const std::vector<NevanlinnaSample>& samples) {
  std::vector<double> r;
  std::vector<double> v;
  for (const auto& s : samples) {
    r.push_back(s.r);
    v.push_back(s.T);
  }
  return order_regression(r, v, 0.0, true);
}

OrderEstimate log_order_from_N(const std::vector<NevanlinnaSample>& samples) {
  std::vector<double> r;
  std::vector<double> v;
  for (const auto& s : samples) {
    if (!s.N_0) throw Error(ErrorCode::target_unsupported, "samples lack N(r, f = 0)");
    r.push_back(s.r);
    v.push_back(*s.N_0);
  }
  return order_regression(r, v, 0.0, true);
}

WimanValironSample max_term_central_index(const TruncatedSeries& f, double r) {
  if (!(r > 0.0)) throw Error(ErrorCode::domain_error, "radius must be positive");
  const double lr = std::log(r);
  double best = -kInfinity;
  int nu = -1;
  for (int n = 0; n <= f.order(); ++n) {
    if (f[n] == cplx(0.0)) continue;
    const double v = std::log(std::abs(f[n])) + n * lr;
    const double tol = 1e-12 * std::max(1.0, std::abs(best));
    if (nu < 0 || v > best + tol) {
      best = v;
      nu = n;
    } else if (v >= best - tol) {
      best = std::max(best, v);
      nu = n;
    }
  }
  if (nu < 0) throw Error(ErrorCode::degenerate_model, "zero series has no maximum term");
  const auto R = f.safe_radius();
  const bool terminating = R && std::isinf(*R);
  if (!terminating && 2 * nu >= f.order()) {
    throw Error(ErrorCode::truncation_too_short, "central index is not interior to the stored coefficients");
  }
  WimanValironSample s;
  s.r = r;
  s.nu = nu;
  s.log_mu = best;
  s.mu = std::exp(best);
  return s;
}

OrderEstimate log_order_from_nu(const TruncatedSeries& f, const std::vector<double>& radii) {
  for (std::size_t i = 1; i < radii.size(); ++i) {
    if (!(radii[i] > radii[i - 1])) throw Error(ErrorCode::domain_error, "radii must increase");
  }
  std::vector<double> nus;
  for (double r : radii) nus.push_back(max_term_central_index(f, r).nu);
  return order_regression(radii, nus, 1.0, false);
}

// ---- theorem checks ---------------------------------------------------------------

LogDerivTable logderiv_lemma_check(const MeroModel& model, const QParam& qp, int k,
                                   const RadialGrid& grid, Exec exec) {
  grid.validate();
  if (k < 1) throw Error(ErrorCode::domain_error, "k must be positive");
  if (model.is_constant()) throw Error(ErrorCode::degenerate_model, "a nonconstant function is required");
  const Sampler f = model.sampler();
  const double reach = std::max(1.0, std::pow(qp.modulus(), k));
  LogDerivTable table;
  table.rows.resize(grid.radii.size());
  for_each_index(
      grid.radii.size(),
      [&](std::size_t i) {
        const double r = grid.radii[i];
        if (r * reach > model.evaluable_radius()) {
          throw Error(ErrorCode::outside_safe_radius, "q-scaled circle leaves the evaluable disc");
        }
        const auto cm = circle_mean(
            [&](cplx z) {
              return std::max(0.0, std::log(std::abs(dqk_closed_form(f, z, qp, k))) - model.log_abs(z));
            },
            r, grid.nodes, Exec::serial);
        check_mean(cm.value);
        const double T = characteristic_T(model, r, grid.nodes, Exec::serial);
        table.rows[i] = {r, cm.value, T, cm.value / T};
      },
      exec);
  const double floor = grid.radii.back() / 10.0 * (1.0 - 1e-12);
  table.decreasing_top_decade = true;
  for (std::size_t i = 1; i < table.rows.size(); ++i) {
    if (table.rows[i - 1].r >= floor && table.rows[i].ratio > table.rows[i - 1].ratio) {
      table.decreasing_top_decade = false;
    }
  }
  return table;
}

std::vector<SftRow> sft_check(const MeroModel& model, const std::vector<Target>& targets,
                              const QParam& qp, const RadialGrid& grid, Exec exec) {
  grid.validate();
  const auto* f = model.rational_function();
  if (!f) throw Error(ErrorCode::domain_error, "the second main theorem check needs a rational model");
  if (targets.size() < 3) throw Error(ErrorCode::domain_error, "need at least 3 targets");
  for (std::size_t i = 0; i < targets.size(); ++i) {
    for (std::size_t j = i + 1; j < targets.size(); ++j) {
      if (same_target(targets[i], targets[j])) throw Error(ErrorCode::domain_error, "targets must be distinct");
    }
  }
  if (f->is_constant()) throw Error(ErrorCode::degenerate_model, "constant function");
  const RationalFunction dq = dq_rational(*f, qp);
  const double p = static_cast<double>(targets.size());
  std::vector<SftRow> rows(grid.radii.size());
  for_each_index(
      grid.radii.size(),
      [&](std::size_t i) {
        const double r = grid.radii[i];
        SftRow row;
        row.r = r;
        row.T = characteristic_T(model, r, grid.nodes, Exec::serial);
        for (const auto& a : targets) {
          row.sum_Ntilde += jackson_truncated_counting(model, r, a, qp).Ntilde;
          row.sum_N += counting_N(model, r, a);
        }
        row.margin = row.sum_Ntilde - (p - 2.0) * row.T;
        row.N_J = 2.0 * counting_N(model, r, Target::infinity()) - integrated_count(dq.poles(), r) +
                  integrated_count(dq.zeros(), r);
        row.sharp_margin = row.sum_N - row.N_J - std::log(r) - (p - 2.0) * row.T;
        rows[i] = row;
      },
      exec);
  return rows;
}

namespace {

double golden_max(const std::function<double(double)>& g, double a, double b) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double gc = g(c);
  double gd = g(d);
  while (b - a > 1e-12) {
    if (gc >= gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - inv_phi * (b - a);
      gc = g(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + inv_phi * (b - a);
      gd = g(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

bool WimanValironTable::deviation_decreasing(std::size_t count) const {
  if (count < 2 || count > rows.size()) return false;
  for (std::size_t i = rows.size() - count + 1; i < rows.size(); ++i) {
    if (!(rows[i].deviation < rows[i - 1].deviation)) return false;
  }
  return true;
}

WimanValironTable wiman_valiron_check(const TruncatedSeries& f, const QParam& qp, int k,
                                      const std::vector<double>& radii) {
  if (k < 1) throw Error(ErrorCode::domain_error, "k must be positive");
  const cplx qk = ipow(qp.value(), k);
  const double reach = std::max(1.0, std::abs(qk));
  WimanValironTable table;
  for (double r : radii) {
    require_series_radius(f, r * reach);
    const auto wv = max_term_central_index(f, r);
    const auto log_f = [&](double t) { return std::log(std::abs(f.eval(std::polar(r, t)))); };
    const auto log_ratio_at = [&](double t) {
      const cplx z = std::polar(r, t);
      return std::log(std::abs(f.eval(qk * z))) - std::log(std::abs(f.eval(z)));
    };

    constexpr int scan = 2048;
    const double h = 2.0 * std::numbers::pi / scan;
    std::vector<double> vals(scan);
    for (int j = 0; j < scan; ++j) vals[static_cast<std::size_t>(j)] = log_f(h * j);
    const auto best = static_cast<int>(std::max_element(vals.begin(), vals.end()) - vals.begin());
    const double peak = vals[static_cast<std::size_t>(best)];
    const double theta = golden_max(log_f, h * (best - 1), h * (best + 1));
    const double ratio = log_ratio_at(theta);

    int checked = 0;
    for (int j = 0; j < scan && checked < 8; ++j) {
      const int dist = std::min(std::abs(j - best), scan - std::abs(j - best));
      if (dist <= 2) continue;
      const double v = vals[static_cast<std::size_t>(j)];
      const double left = vals[static_cast<std::size_t>((j + scan - 1) % scan)];
      const double right = vals[static_cast<std::size_t>((j + 1) % scan)];
      if (v < left || v < right || v < peak - 1e-9 * std::max(1.0, std::abs(peak))) continue;
      ++checked;
      const double other = log_ratio_at(golden_max(log_f, h * (j - 1), h * (j + 1)));
      if (std::abs(other - ratio) > 1e-6 * std::max(1.0, std::abs(ratio))) {
        throw Error(ErrorCode::max_modulus_ambiguous, "separated maxima give different ratios");
      }
    }

    WimanValironRow row;
    row.r = r;
    row.nu = wv.nu;
    row.z = std::polar(r, theta);
    row.log_ratio = ratio;
    row.predicted = k * wv.nu * std::log(qp.modulus());
    row.literal = std::real((qk - 1.0) * static_cast<double>(wv.nu));
    row.deviation = row.predicted != 0.0 ? std::abs(ratio - row.predicted) / std::abs(row.predicted)
                                         : std::abs(ratio);
    table.rows.push_back(row);
  }
  return table;
}

GrowthReport growth_lower_bound_check(const MeroModel& A, const MeroModel& f, const QParam& qp, int k,
                                      const RadialGrid& grid, Exec exec) {
  grid.validate();
  GrowthReport rep;
  if (f.rational_function()) {
    rep.skipped = true;
    rep.reason = "f is rational, hence not transcendental";
    return rep;
  }

  const Sampler fs = f.sampler();
  std::vector<double> worst(grid.radii.size(), 0.0);
  for_each_index(
      grid.radii.size(),
      [&](std::size_t i) {
        for (int j = 0; j < 16; ++j) {
          const cplx z = std::polar(grid.radii[i], 2.0 * std::numbers::pi * (j + 0.25) / 16.0);
          const cplx d = dqk_closed_form(fs, z, qp, k);
          const cplx af = A.eval(z) * fs(z);
          const double scale = std::max(std::abs(d), std::abs(af));
          worst[i] = std::max(worst[i], scale > 0.0 ? std::abs(d + af) / scale : 0.0);
        }
      },
      exec);
  rep.max_residual = *std::max_element(worst.begin(), worst.end());
  if (!(rep.max_residual <= 1e-6)) {
    throw Error(ErrorCode::domain_error, "f does not satisfy the equation to 1e-6 on the grid circles");
  }

  const auto T_of = [&](const MeroModel& m) {
    std::vector<NevanlinnaSample> s(grid.radii.size());
    for_each_index(
        grid.radii.size(),
        [&](std::size_t i) {
          s[i].r = grid.radii[i];
          s[i].T = characteristic_T(m, grid.radii[i], grid.nodes, Exec::serial);
        },
        exec);
    return s;
  };
  if (A.rational_function()) {
    rep.sigma_A = {1.0, 0.0, 0};
  } else {
    rep.sigma_A = log_order_from_T(T_of(A));
  }
  rep.sigma_f = log_order_from_T(T_of(f));
  rep.gap = rep.sigma_f.sigma - rep.sigma_A.sigma - 1.0;
  rep.gap_half_width = std::hypot(rep.sigma_f.half_width, rep.sigma_A.half_width);
  return rep;
}

// ---- sweep ------------------------------------------------------------------------------

std::vector<NevanlinnaSample> sample_sweep(const MeroModel& model, const RadialGrid& grid, Exec exec) {
  grid.validate();
  std::vector<NevanlinnaSample> out(grid.radii.size());
  for_each_index(
      grid.radii.size(),
      [&](std::size_t i) { out[i] = characteristic(model, grid.radii[i], grid.nodes, Exec::serial); },
      exec);
  return out;
}

void write_samples_csv(std::ostream& out, const std::vector<NevanlinnaSample>& samples) {
  out << "r,m,N_0,N_inf,T,nJ_0,nJ_inf,quad_err\n";
  for (const auto& s : samples) {
    out << fmt(s.r) << ',' << fmt(s.m) << ',' << fmt(s.N_0) << ',' << fmt(s.N_inf) << ',' << fmt(s.T) << ','
        << fmt(s.nJ_0) << ',' << fmt(s.nJ_inf) << ',' << fmt(s.quad_err) << '\n';
  }
}

}  // namespace qdiff
