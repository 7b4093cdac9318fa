#include "qdiff/rational.hpp"

#include <algorithm>
#include <limits>

namespace qdiff {

namespace {

constexpr double kCoprimeTol = 1e-8;
constexpr double kCancelTol = 1e-7;

}  // namespace

RationalFunction::RationalFunction(Polynomial num, Polynomial den)
    : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw Error(ErrorCode::domain_error, "zero denominator");
  if (!num_.is_zero()) zeros_ = num_.roots();
  poles_ = den_.roots();
  for (const auto& z : zeros_) {
    for (const auto& p : poles_) {
      if (roots_close(z.z, p.z, kCoprimeTol)) {
        throw Error(ErrorCode::domain_error, "numerator and denominator share a root");
      }
    }
  }
}

RationalFunction RationalFunction::from_roots(std::vector<Root> zeros, std::vector<Root> poles,
                                              cplx scale) {
  if (scale == cplx(0.0)) {
    return RationalFunction(Polynomial(), Polynomial::constant(1.0), {}, {});
  }
  Polynomial num = Polynomial::from_roots(zeros, scale);
  Polynomial den = Polynomial::from_roots(poles, 1.0);
  for (const auto& z : zeros) {
    for (const auto& p : poles) {
      if (roots_close(z.z, p.z, kCoprimeTol)) {
        throw Error(ErrorCode::domain_error, "zero and pole lists overlap");
      }
    }
  }
  return RationalFunction(std::move(num), std::move(den), std::move(zeros), std::move(poles));
}

RationalFunction RationalFunction::reduced(const Polynomial& num, const Polynomial& den) {
  if (den.is_zero()) throw Error(ErrorCode::domain_error, "zero denominator");
  if (num.is_zero()) return RationalFunction(Polynomial(), Polynomial::constant(1.0), {}, {});
  std::vector<Root> zeros = num.roots();
  std::vector<Root> poles = den.roots();
  Polynomial n = num;
  Polynomial d = den;
  for (auto& z : zeros) {
    for (auto& p : poles) {
      if (z.multiplicity == 0 || p.multiplicity == 0) continue;
      if (!roots_close(z.z, p.z, kCancelTol)) continue;
      const int m = std::min(z.multiplicity, p.multiplicity);
      for (int i = 0; i < m; ++i) {
        n = n.deflate(z.z);
        d = d.deflate(p.z);
      }
      z.multiplicity -= m;
      p.multiplicity -= m;
    }
  }
  std::erase_if(zeros, [](const Root& r) { return r.multiplicity == 0; });
  std::erase_if(poles, [](const Root& r) { return r.multiplicity == 0; });
  return RationalFunction(std::move(n), std::move(d), std::move(zeros), std::move(poles));
}

cplx RationalFunction::eval(cplx z) const {
  const cplx d = den_.eval(z);
  if (d == cplx(0.0)) return {std::numeric_limits<double>::infinity(), 0.0};
  return num_.eval(z) / d;
}

Sampler RationalFunction::sampler() const {
  RationalFunction self = *this;
  return Sampler([self](cplx z) { return self.eval(z); }, kInfinity, poles_);
}

int RationalFunction::order_at_origin() const {
  if (num_.is_zero()) throw Error(ErrorCode::domain_error, "order of the zero function");
  return num_.valuation() - den_.valuation();
}

cplx RationalFunction::leading_origin_coefficient() const {
  if (num_.is_zero()) return 0.0;
  return num_[num_.valuation()] / den_[den_.valuation()];
}

TruncatedSeries RationalFunction::origin_series(int order) const {
  if (den_[0] == cplx(0.0)) {
    throw Error(ErrorCode::coefficient_pole_at_origin, "denominator vanishes at the origin");
  }
  std::vector<cplx> a(static_cast<std::size_t>(order) + 1, cplx(0.0));
  std::vector<cplx> b(static_cast<std::size_t>(order) + 1, cplx(0.0));
  for (int i = 0; i <= order; ++i) {
    a[static_cast<std::size_t>(i)] = num_[i];
    b[static_cast<std::size_t>(i)] = den_[i];
  }
  const TruncatedSeries s = TruncatedSeries(a) / TruncatedSeries(b);
  if (den_.degree() == 0 && num_.degree() <= order) return TruncatedSeries::polynomial(s.coeffs());
  return TruncatedSeries::certified(s.coeffs());
}

RationalFunction RationalFunction::reciprocal() const {
  if (num_.is_zero()) throw Error(ErrorCode::domain_error, "reciprocal of the zero function");
  return RationalFunction(den_, num_, poles_, zeros_);
}

RationalFunction RationalFunction::minus_constant(cplx a) const {
  return RationalFunction(num_ - a * den_, den_);
}

RationalFunction dq_rational(const RationalFunction& f, const QParam& qp) {
  const cplx q = qp.value();
  const Polynomial& p = f.num();
  const Polynomial& d = f.den();
  Polynomial n = p.scaled_arg(q) * d - p * d.scaled_arg(q);
  if (n.is_zero()) return RationalFunction();
  // The constant term cancels exactly: both products start with p_0 d_0.
  n = n.divide_by_z_power(1);
  const Polynomial den = (q - 1.0) * (d.scaled_arg(q) * d);
  if (f.is_polynomial()) return RationalFunction(n, den);
  return RationalFunction::reduced(n, den);
}

}  // namespace qdiff
