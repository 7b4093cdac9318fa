#include "qdiff/sampler.hpp"

#include <string>

namespace qdiff {

Sampler Sampler::from_series(const TruncatedSeries& f) {
  return Sampler([f](cplx z) { return f.eval(z); }, f.safe_radius().value_or(kInfinity));
}

Sampler Sampler::from_polynomial(const Polynomial& p) {
  return Sampler([p](cplx z) { return p.eval(z); });
}

cplx Sampler::operator()(cplx z) const {
  if (!contains(z)) {
    throw Error(ErrorCode::outside_domain, "|z| = " + std::to_string(std::abs(z)) +
                                               " exceeds domain radius " +
                                               std::to_string(domain_radius_));
  }
  return fn_(z);
}

}  // namespace qdiff
