#pragma once

#include <complex>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "qdiff/error.hpp"

namespace qdiff {

using cplx = std::complex<double>;

inline constexpr double kRootOfUnityGuard = 1e-9;
inline constexpr double kDefaultTailTol = 1e-13;
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Integer power by repeated squaring; std::pow(complex, int) goes through
// exp/log and loses exactness for real q.
cplx ipow(cplx base, long long n);

/// The base q of the Jackson calculus.
///
/// Construction rejects q = 0, |q| = 1 and any q for which |q^n - 1| falls
/// under the root-of-unity guard for 1 <= n <= order; those are exactly the
/// bases where some [n]_q vanishes and the series recurrences divide by zero.
class QParam {
 public:
  explicit QParam(cplx q, int order = 64);

  cplx value() const noexcept { return q_; }
  double modulus() const noexcept { return std::abs(q_); }
  int checked_order() const noexcept { return order_; }
  bool inside_unit_disc() const noexcept { return std::abs(q_) < 1.0; }

  /// Same guard applied up to a larger order; throws bracket_underflow.
  void require_order(int n) const;

  QParam inverse() const { return QParam(1.0 / q_, order_); }

 private:
  cplx q_;
  int order_;
};

enum class Precision { standard, extended };

struct ClassicalLimit {};

/// [n]_q = (q^n - 1)/(q - 1).
cplx q_bracket(int n, const QParam& qp, Precision precision = Precision::standard);
/// The q -> 1 limit of the bracket, i.e. n itself.
inline cplx q_bracket(int n, ClassicalLimit) { return cplx(static_cast<double>(n), 0.0); }

/// [n]_q! = prod_{j=1}^n [j]_q.
cplx q_factorial(int n, const QParam& qp, Precision precision = Precision::standard);

/// (a; q)_n = prod_{j=0}^{n-1} (1 - a q^j).
cplx q_pochhammer(cplx a, const QParam& qp, int n, Precision precision = Precision::standard);

/// (a; q)_inf for |q| < 1. The product stops once |a q^n| < tol (1 - |q|),
/// which keeps the result within a factor exp(+-2 tol) of the limit.
cplx q_pochhammer_inf(cplx a, const QParam& qp, double tol = 1e-16);

/// Gaussian binomial [n, j]_q via the multiplicative recurrence
/// prod_{i=1}^{j} (1 - q^{n-j+i}) / (1 - q^i).
cplx q_binomial(int n, int j, const QParam& qp, Precision precision = Precision::standard);

/// Coefficients c_0..c_N of a power series about the origin.
///
/// A series may carry a certified safe radius R: for |z| <= R the neglected
/// tail sum_{n>N} |c_n| |z|^n is estimated below tail_tol * max(1, mu(|z|)),
/// mu being the maximum term. The estimate extrapolates the worst
/// coefficient ratio seen over the last quarter of the stored coefficients.
class TruncatedSeries {
 public:
  TruncatedSeries() : coeffs_(1, cplx(0.0, 0.0)) {}
  explicit TruncatedSeries(std::vector<cplx> coeffs);

  /// Runs the ratio-test certificate; the radius is unknown if the
  /// coefficients give no decay information.
  static TruncatedSeries certified(std::vector<cplx> coeffs, double tail_tol = kDefaultTailTol);
  /// Terminating series: safe everywhere.
  static TruncatedSeries polynomial(std::vector<cplx> coeffs);
  static TruncatedSeries constant(cplx c, int order);
  static TruncatedSeries monomial(int power, int order, cplx c = 1.0);

  int order() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<cplx>& coeffs() const noexcept { return coeffs_; }
  cplx operator[](int n) const { return coeffs_.at(static_cast<std::size_t>(n)); }
  std::optional<double> safe_radius() const noexcept { return safe_radius_; }

  TruncatedSeries truncated(int order) const;
  TruncatedSeries recertified(double tail_tol = kDefaultTailTol) const;

  /// Horner evaluation; throws outside_safe_radius when a radius is set and
  /// |z| exceeds it.
  cplx eval(cplx z) const;
  double tail_bound(double radius) const;
  double max_abs() const;

 private:
  std::vector<cplx> coeffs_;
  std::optional<double> safe_radius_;
  double tail_ratio_ = kInfinity;
  int tail_anchor_ = -1;

  friend TruncatedSeries series_scale_arg(const TruncatedSeries&, cplx);
};

struct SeriesValue {
  cplx value;
  double error;  // tail estimate plus rounding bound
};

TruncatedSeries series_add(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries series_sub(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries series_scale(const TruncatedSeries& a, cplx factor);
/// Cauchy product truncated at the smaller order.
TruncatedSeries series_mul(const TruncatedSeries& a, const TruncatedSeries& b);
/// a / b; requires b_0 != 0 (divisor_singular otherwise).
TruncatedSeries series_div(const TruncatedSeries& a, const TruncatedSeries& b);
/// f(c z): c_n -> c^n c_n. The safe radius, if any, scales by 1/|c|.
TruncatedSeries series_scale_arg(const TruncatedSeries& f, cplx c);
/// z^m f(z), keeping the order of f.
TruncatedSeries series_shift_up(const TruncatedSeries& f, int m);
cplx series_eval(const TruncatedSeries& f, cplx z);
SeriesValue series_eval_with_error(const TruncatedSeries& f, cplx z);

inline TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b) {
  return series_add(a, b);
}
inline TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b) {
  return series_sub(a, b);
}
inline TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
  return series_mul(a, b);
}
inline TruncatedSeries operator*(cplx s, const TruncatedSeries& a) { return series_scale(a, s); }
inline TruncatedSeries operator/(const TruncatedSeries& a, const TruncatedSeries& b) {
  return series_div(a, b);
}

/// max_n |a_n - b_n| over the common orders.
double coefficient_distance(const TruncatedSeries& a, const TruncatedSeries& b);

}  // namespace qdiff
