#pragma once

#include <functional>
#include <vector>

#include "qdiff/polynomial.hpp"
#include "qdiff/qcore.hpp"

namespace qdiff {

/// A black-box function z -> f(z) with the disc it may be evaluated on.
class Sampler {
 public:
  using Fn = std::function<cplx(cplx)>;

  explicit Sampler(Fn fn, double domain_radius = kInfinity, std::vector<Root> poles = {})
      : fn_(std::move(fn)), domain_radius_(domain_radius), poles_(std::move(poles)) {}

  static Sampler from_series(const TruncatedSeries& f);
  static Sampler from_polynomial(const Polynomial& p);

  /// Throws outside_domain for |z| beyond the domain radius.
  cplx operator()(cplx z) const;

  double domain_radius() const noexcept { return domain_radius_; }
  const std::vector<Root>& poles() const noexcept { return poles_; }
  bool contains(cplx z) const noexcept { return std::abs(z) <= domain_radius_; }

 private:
  Fn fn_;
  double domain_radius_;
  std::vector<Root> poles_;
};

}  // namespace qdiff
