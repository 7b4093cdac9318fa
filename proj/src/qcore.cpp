#include "qdiff/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/multiprecision/cpp_complex.hpp>

namespace qdiff {

namespace {

using wide = boost::multiprecision::cpp_complex_50;

wide widen(cplx z) { return wide(z.real(), z.imag()); }

cplx narrow(const wide& z) {
  return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

wide wide_pow(const wide& base, long long n) {
  wide result(1);
  wide b = base;
  while (n > 0) {
    if (n & 1) result *= b;
    b *= b;
    n >>= 1;
  }
  return result;
}

}  // namespace

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::domain_error: return "DomainError";
    case ErrorCode::divisor_singular: return "DivisorSingular";
    case ErrorCode::outside_safe_radius: return "OutsideSafeRadius";
    case ErrorCode::origin_singular: return "OriginSingular";
    case ErrorCode::outside_domain: return "OutsideDomain";
    case ErrorCode::nonconvergent_sample: return "NonconvergentSample";
    case ErrorCode::denominator_pochhammer_zero: return "DenominatorPochhammerZero";
    case ErrorCode::coefficient_pole_at_origin: return "CoefficientPoleAtOrigin";
    case ErrorCode::bracket_underflow: return "BracketUnderflow";
    case ErrorCode::pole_on_circle: return "PoleOnCircle";
    case ErrorCode::target_unsupported: return "TargetUnsupported";
    case ErrorCode::root_finding_failed: return "RootFindingFailed";
    case ErrorCode::multiplicity_ambiguous: return "MultiplicityAmbiguous";
    case ErrorCode::insufficient_grid: return "InsufficientGrid";
    case ErrorCode::truncation_too_short: return "TruncationTooShort";
    case ErrorCode::max_modulus_ambiguous: return "MaxModulusAmbiguous";
    case ErrorCode::degenerate_model: return "DegenerateModel";
    case ErrorCode::unknown_function: return "UnknownFunction";
    case ErrorCode::regime_mismatch: return "RegimeMismatch";
    case ErrorCode::schema_error: return "SchemaError";
  }
  return "Error";
}

cplx ipow(cplx base, long long n) {
  if (n < 0) return 1.0 / ipow(base, -n);
  cplx result(1.0, 0.0);
  while (n > 0) {
    if (n & 1) result *= base;
    base *= base;
    n >>= 1;
  }
  return result;
}

// ---------------------------------------------------------------- QParam

QParam::QParam(cplx q, int order) : q_(q), order_(0) {
  if (!std::isfinite(q.real()) || !std::isfinite(q.imag()) || std::abs(q) == 0.0) {
    throw Error(ErrorCode::domain_error, "q must be finite and nonzero");
  }
  if (std::abs(q) == 1.0) {
    throw Error(ErrorCode::domain_error, "|q| = 1 is excluded");
  }
  require_order(std::max(order, 1));
  order_ = std::max(order, 1);
}

void QParam::require_order(int n) const {
  cplx p = ipow(q_, order_);
  for (int m = order_ + 1; m <= n; ++m) {
    p *= q_;
    if (std::abs(p - 1.0) <= kRootOfUnityGuard) {
      throw Error(ErrorCode::bracket_underflow,
                  "|q^" + std::to_string(m) + " - 1| is below the root-of-unity guard");
    }
  }
}

// ---------------------------------------------------------------- q-numbers

cplx q_bracket(int n, const QParam& qp, Precision precision) {
  if (n < 0) throw Error(ErrorCode::domain_error, "q_bracket needs n >= 0");
  if (n == 0) return 0.0;
  const cplx q = qp.value();
  if (precision == Precision::extended) {
    const wide wq = widen(q);
    return narrow((wide_pow(wq, n) - wide(1)) / (wq - wide(1)));
  }
  return (ipow(q, n) - 1.0) / (q - 1.0);
}

cplx q_factorial(int n, const QParam& qp, Precision precision) {
  if (n < 0) throw Error(ErrorCode::domain_error, "q_factorial needs n >= 0");
  if (precision == Precision::extended) {
    const wide wq = widen(qp.value());
    wide acc(1);
    wide power(1);
    const wide denom = wq - wide(1);
    for (int j = 1; j <= n; ++j) {
      power *= wq;
      acc *= (power - wide(1)) / denom;
    }
    return narrow(acc);
  }
  cplx acc(1.0, 0.0);
  for (int j = 1; j <= n; ++j) acc *= q_bracket(j, qp);
  return acc;
}

cplx q_pochhammer(cplx a, const QParam& qp, int n, Precision precision) {
  if (n < 0) throw Error(ErrorCode::domain_error, "q_pochhammer needs n >= 0");
  if (precision == Precision::extended) {
    const wide wq = widen(qp.value());
    wide term = widen(a);
    wide acc(1);
    for (int j = 0; j < n; ++j) {
      acc *= wide(1) - term;
      term *= wq;
    }
    return narrow(acc);
  }
  const cplx q = qp.value();
  cplx term = a;
  cplx acc(1.0, 0.0);
  for (int j = 0; j < n; ++j) {
    acc *= 1.0 - term;
    term *= q;
  }
  return acc;
}

cplx q_pochhammer_inf(cplx a, const QParam& qp, double tol) {
  if (!qp.inside_unit_disc()) {
    throw Error(ErrorCode::domain_error, "(a;q)_inf requires |q| < 1");
  }
  if (!(tol > 0.0)) throw Error(ErrorCode::domain_error, "tolerance must be positive");
  const cplx q = qp.value();
  const double cutoff = tol * (1.0 - std::abs(q));
  cplx term = a;
  cplx acc(1.0, 0.0);
  constexpr int kMaxFactors = 1'000'000;
  for (int n = 0; n < kMaxFactors; ++n) {
    if (std::abs(term) < cutoff) return acc;
    acc *= 1.0 - term;
    term *= q;
  }
  throw Error(ErrorCode::nonconvergent_sample, "(a;q)_inf did not reach its cutoff");
}

cplx q_binomial(int n, int j, const QParam& qp, Precision precision) {
  if (j < 0 || j > n) {
    throw Error(ErrorCode::domain_error, "q_binomial needs 0 <= j <= n");
  }
  const int m = std::min(j, n - j);
  if (precision == Precision::extended) {
    const wide wq = widen(qp.value());
    wide acc(1);
    for (int i = 1; i <= m; ++i) {
      acc *= (wide(1) - wide_pow(wq, n - m + i)) / (wide(1) - wide_pow(wq, i));
    }
    return narrow(acc);
  }
  const cplx q = qp.value();
  cplx acc(1.0, 0.0);
  for (int i = 1; i <= m; ++i) {
    acc *= (1.0 - ipow(q, n - m + i)) / (1.0 - ipow(q, i));
  }
  return acc;
}

// ---------------------------------------------------------------- series

namespace {

// log of the tail estimate |c_a| R^a (rho R)^(N+1-a) / (1 - rho R)
double log_tail(double log_ca, int anchor, int order, double rho, double log_r) {
  const double rho_r = rho * std::exp(log_r);
  if (rho_r >= 1.0) return kInfinity;
  return log_ca + anchor * log_r + (order + 1 - anchor) * (std::log(rho) + log_r) -
         std::log1p(-rho_r);
}

double log_max_term(const std::vector<cplx>& c, double log_r) {
  double best = -kInfinity;
  for (std::size_t n = 0; n < c.size(); ++n) {
    const double a = std::abs(c[n]);
    if (a > 0.0) best = std::max(best, std::log(a) + static_cast<double>(n) * log_r);
  }
  return best;
}

}  // namespace

TruncatedSeries::TruncatedSeries(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) coeffs_.push_back(0.0);
}

TruncatedSeries TruncatedSeries::polynomial(std::vector<cplx> coeffs) {
  TruncatedSeries s(std::move(coeffs));
  s.safe_radius_ = kInfinity;
  s.tail_ratio_ = 0.0;
  return s;
}

TruncatedSeries TruncatedSeries::constant(cplx c, int order) {
  std::vector<cplx> v(static_cast<std::size_t>(std::max(order, 0)) + 1, cplx(0.0, 0.0));
  v[0] = c;
  return polynomial(std::move(v));
}

TruncatedSeries TruncatedSeries::monomial(int power, int order, cplx c) {
  std::vector<cplx> v(static_cast<std::size_t>(std::max(order, 0)) + 1, cplx(0.0, 0.0));
  if (power <= order) v[static_cast<std::size_t>(power)] = c;
  return polynomial(std::move(v));
}

TruncatedSeries TruncatedSeries::certified(std::vector<cplx> coeffs, double tail_tol) {
  TruncatedSeries s(std::move(coeffs));
  return s.recertified(tail_tol);
}

TruncatedSeries TruncatedSeries::recertified(double tail_tol) const {
  TruncatedSeries s(coeffs_);
  const int n_max = order();
  for (const auto& c : coeffs_) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return s;
  }
  int start = n_max - std::max(n_max / 4, 1);
  start = std::max(start, 0);
  auto nonzero_from = [&](int from) {
    std::vector<int> idx;
    for (int n = from; n <= n_max; ++n) {
      if (std::abs(coeffs_[static_cast<std::size_t>(n)]) > 0.0) idx.push_back(n);
    }
    return idx;
  };
  std::vector<int> idx = nonzero_from(start);
  if (idx.empty()) {
    // Last quarter identically zero: the stored coefficients terminate.
    s.safe_radius_ = kInfinity;
    s.tail_ratio_ = 0.0;
    return s;
  }
  while (idx.size() < 2 && start > 0) {
    --start;
    idx = nonzero_from(start);
  }
  if (idx.size() < 2) {
    s.safe_radius_ = kInfinity;
    s.tail_ratio_ = 0.0;
    return s;
  }
  double rho = 0.0;
  for (std::size_t i = 0; i + 1 < idx.size(); ++i) {
    const double ratio = std::abs(coeffs_[static_cast<std::size_t>(idx[i + 1])]) /
                         std::abs(coeffs_[static_cast<std::size_t>(idx[i])]);
    rho = std::max(rho, std::pow(ratio, 1.0 / (idx[i + 1] - idx[i])));
  }
  if (!(rho < 1.0) || !std::isfinite(rho)) return s;  // no decay: unknown

  const int anchor = idx.back();
  const double log_ca = std::log(std::abs(coeffs_[static_cast<std::size_t>(anchor)]));
  const double log_tol = std::log(tail_tol);
  auto excess = [&](double log_r) {
    return log_tail(log_ca, anchor, n_max, rho, log_r) - log_tol -
           std::max(0.0, log_max_term(coeffs_, log_r));
  };
  double lo = -700.0;
  double hi = -std::log(rho) - 1e-12;
  if (excess(lo) > 0.0) return s;
  if (excess(hi) <= 0.0) {
    lo = hi;
  } else {
    for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, std::abs(hi)); ++it) {
      const double mid = 0.5 * (lo + hi);
      (excess(mid) <= 0.0 ? lo : hi) = mid;
    }
  }
  const double radius = std::exp(lo);
  if (radius < 1e-12) return s;
  s.safe_radius_ = radius;
  s.tail_ratio_ = rho;
  s.tail_anchor_ = anchor;
  return s;
}

TruncatedSeries TruncatedSeries::truncated(int new_order) const {
  if (new_order < 0) throw Error(ErrorCode::domain_error, "negative truncation order");
  std::vector<cplx> c(coeffs_.begin(),
                      coeffs_.begin() + std::min<std::ptrdiff_t>(new_order + 1, std::ssize(coeffs_)));
  return TruncatedSeries(std::move(c));
}

double TruncatedSeries::tail_bound(double radius) const {
  if (!safe_radius_) return kInfinity;
  if (tail_ratio_ == 0.0) return 0.0;
  if (radius <= 0.0) return 0.0;
  const double log_ca = std::log(std::abs(coeffs_[static_cast<std::size_t>(tail_anchor_)]));
  return std::exp(log_tail(log_ca, tail_anchor_, order(), tail_ratio_, std::log(radius)));
}

cplx TruncatedSeries::eval(cplx z) const {
  if (safe_radius_ && std::abs(z) > *safe_radius_ * (1.0 + 1e-12)) {
    throw Error(ErrorCode::outside_safe_radius,
                "|z| = " + std::to_string(std::abs(z)) + " exceeds safe radius " +
                    std::to_string(*safe_radius_));
  }
  cplx acc(0.0, 0.0);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

double TruncatedSeries::max_abs() const {
  double m = 0.0;
  for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

TruncatedSeries series_add(const TruncatedSeries& a, const TruncatedSeries& b) {
  const int n = std::min(a.order(), b.order());
  std::vector<cplx> c(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) c[static_cast<std::size_t>(i)] = a[i] + b[i];
  return TruncatedSeries(std::move(c));
}

TruncatedSeries series_sub(const TruncatedSeries& a, const TruncatedSeries& b) {
  const int n = std::min(a.order(), b.order());
  std::vector<cplx> c(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) c[static_cast<std::size_t>(i)] = a[i] - b[i];
  return TruncatedSeries(std::move(c));
}

TruncatedSeries series_scale(const TruncatedSeries& a, cplx factor) {
  std::vector<cplx> c = a.coeffs();
  for (auto& x : c) x *= factor;
  return TruncatedSeries(std::move(c));
}

TruncatedSeries series_mul(const TruncatedSeries& a, const TruncatedSeries& b) {
  const int n = std::min(a.order(), b.order());
  const auto& ac = a.coeffs();
  const auto& bc = b.coeffs();
  std::vector<cplx> c(static_cast<std::size_t>(n) + 1, cplx(0.0, 0.0));
  for (int i = 0; i <= n; ++i) {
    cplx acc(0.0, 0.0);
    for (int j = 0; j <= i; ++j) {
      acc += ac[static_cast<std::size_t>(j)] * bc[static_cast<std::size_t>(i - j)];
    }
    c[static_cast<std::size_t>(i)] = acc;
  }
  return TruncatedSeries(std::move(c));
}

TruncatedSeries series_div(const TruncatedSeries& a, const TruncatedSeries& b) {
  const cplx b0 = b[0];
  if (std::abs(b0) <= 1e-14 * std::max(b.max_abs(), 1e-300)) {
    throw Error(ErrorCode::divisor_singular, "divisor has vanishing constant term");
  }
  const int n = std::min(a.order(), b.order());
  std::vector<cplx> c(static_cast<std::size_t>(n) + 1, cplx(0.0, 0.0));
  for (int i = 0; i <= n; ++i) {
    cplx acc = a[i];
    for (int j = 1; j <= i; ++j) acc -= b[j] * c[static_cast<std::size_t>(i - j)];
    c[static_cast<std::size_t>(i)] = acc / b0;
  }
  return TruncatedSeries(std::move(c));
}

TruncatedSeries series_scale_arg(const TruncatedSeries& f, cplx factor) {
  std::vector<cplx> c = f.coeffs();
  cplx p(1.0, 0.0);
  for (auto& x : c) {
    x *= p;
    p *= factor;
  }
  TruncatedSeries s(std::move(c));
  if (f.safe_radius_ && std::abs(factor) > 0.0) {
    s.safe_radius_ = *f.safe_radius_ / std::abs(factor);
    s.tail_ratio_ = f.tail_ratio_ * std::abs(factor);
    s.tail_anchor_ = f.tail_anchor_;
  }
  return s;
}

TruncatedSeries series_shift_up(const TruncatedSeries& f, int m) {
  if (m < 0) throw Error(ErrorCode::domain_error, "negative shift");
  std::vector<cplx> c(static_cast<std::size_t>(f.order()) + 1, cplx(0.0, 0.0));
  for (int i = m; i <= f.order(); ++i) c[static_cast<std::size_t>(i)] = f[i - m];
  return TruncatedSeries(std::move(c));
}

cplx series_eval(const TruncatedSeries& f, cplx z) { return f.eval(z); }

SeriesValue series_eval_with_error(const TruncatedSeries& f, cplx z) {
  const cplx v = f.eval(z);
  double abs_sum = 0.0;
  double p = 1.0;
  for (const auto& c : f.coeffs()) {
    abs_sum += std::abs(c) * p;
    p *= std::abs(z);
  }
  const double rounding = 2.0 * (f.order() + 1) * std::numeric_limits<double>::epsilon() * abs_sum;
  return {v, f.tail_bound(std::abs(z)) + rounding};
}

double coefficient_distance(const TruncatedSeries& a, const TruncatedSeries& b) {
  const int n = std::min(a.order(), b.order());
  double d = 0.0;
  for (int i = 0; i <= n; ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace qdiff
