#include "qdiff/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Eigenvalues>

namespace qdiff {

namespace {

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Single-linkage clustering under roots_close at the given tolerance.
std::vector<std::vector<cplx>> cluster(const std::vector<cplx>& pts, double rel) {
  std::vector<std::size_t> parent(pts.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      if (roots_close(pts[i], pts[j], rel)) parent[find(i)] = find(j);
    }
  }
  std::vector<std::vector<cplx>> groups;
  std::vector<long> slot(pts.size(), -1);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const std::size_t r = find(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<long>(groups.size());
      groups.emplace_back();
    }
    groups[static_cast<std::size_t>(slot[r])].push_back(pts[i]);
  }
  return groups;
}

cplx newton_polish(const Polynomial& p, const Polynomial& dp, cplx z, int iters) {
  double best = std::abs(p.eval(z));
  for (int it = 0; it < iters && best > 0.0; ++it) {
    const cplx d = dp.eval(z);
    if (std::abs(d) == 0.0) break;
    const cplx next = z - p.eval(z) / d;
    const double val = std::abs(p.eval(next));
    if (!finite(next) || !(val < best)) break;
    z = next;
    best = val;
  }
  return z;
}

// Taylor coefficients of p at z0 together with the scale they would have if
// every term added in phase; |t_j| small against that scale means t_j is
// zero up to rounding.
std::pair<std::vector<cplx>, std::vector<double>> taylor_with_scale(const Polynomial& p,
                                                                    cplx z0) {
  const auto t = p.taylor_shift(z0).coeffs();
  std::vector<cplx> absc;
  absc.reserve(p.coeffs().size());
  for (const auto& c : p.coeffs()) absc.emplace_back(std::abs(c), 0.0);
  const auto s = Polynomial(absc).taylor_shift(std::abs(z0)).coeffs();
  std::vector<cplx> tt(p.coeffs().size(), cplx(0.0));
  std::copy(t.begin(), t.end(), tt.begin());
  std::vector<double> ss(p.coeffs().size(), 0.0);
  for (std::size_t j = 0; j < s.size(); ++j) ss[j] = s[j].real();
  return {tt, ss};
}

bool confirms_multiplicity(const Polynomial& p, cplx z0, int h, double rel_tol) {
  const auto [t, s] = taylor_with_scale(p, z0);
  for (int j = 0; j < h; ++j) {
    if (std::abs(t[static_cast<std::size_t>(j)]) > rel_tol * s[static_cast<std::size_t>(j)]) {
      return false;
    }
  }
  return true;
}

void resolve_cluster(const Polynomial& p, const std::vector<cplx>& members, double rel,
                     std::vector<Root>& out) {
  const int h = static_cast<int>(members.size());
  if (h == 1) {
    out.push_back({members.front(), 1});
    return;
  }
  cplx centre = std::accumulate(members.begin(), members.end(), cplx(0.0)) / static_cast<double>(h);
  double spread = 0.0;
  for (const auto& m : members) spread = std::max(spread, std::abs(m - centre));

  // A root of multiplicity h is a simple root of p^(h-1).
  Polynomial g = p;
  for (int j = 0; j < h - 1; ++j) g = g.derivative();
  const cplx refined = newton_polish(g, g.derivative(), centre, 30);
  if (std::abs(refined - centre) <= 10.0 * spread + 1e-14 * std::abs(centre)) centre = refined;

  // Noise of a few ulps in the coefficients splits an h-fold root into a
  // ring of radius about (eps S_0 / |t_h|)^(1/h). A wider cluster is a set
  // of distinct roots even if the Taylor test cannot tell.
  const auto [t, scale] = taylor_with_scale(p, centre);
  const double th = std::abs(t[static_cast<std::size_t>(h)]);
  const double noise = 4.0 * (p.degree() + 1) * std::numeric_limits<double>::epsilon() * scale[0];
  const double ring = th > 0.0 ? std::pow(noise / th, 1.0 / h) : kInfinity;
  if (spread <= 10.0 * ring && confirms_multiplicity(p, centre, h, 1e-10)) {
    out.push_back({centre, h});
    return;
  }
  const double tighter = rel / 10.0;
  if (tighter < 1e-7 * (1.0 - 1e-9)) {
    throw Error(ErrorCode::multiplicity_ambiguous,
                "cluster of " + std::to_string(h) + " roots near (" +
                    std::to_string(centre.real()) + "," + std::to_string(centre.imag()) +
                    ") is neither one multiple root nor separable");
  }
  for (const auto& sub : cluster(members, tighter)) resolve_cluster(p, sub, tighter, out);
}

}  // namespace

bool roots_close(cplx a, cplx b, double rel) {
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

int total_multiplicity(const std::vector<Root>& roots) {
  int n = 0;
  for (const auto& r : roots) n += r.multiplicity;
  return n;
}

Polynomial::Polynomial(std::vector<cplx> coeffs) : c_(std::move(coeffs)) {
  while (!c_.empty() && c_.back() == cplx(0.0)) c_.pop_back();
}

Polynomial Polynomial::monomial(int power, cplx c) {
  std::vector<cplx> v(static_cast<std::size_t>(power) + 1, cplx(0.0));
  v.back() = c;
  return Polynomial(std::move(v));
}

Polynomial Polynomial::from_roots(const std::vector<Root>& roots, cplx lead) {
  std::vector<cplx> c{lead};
  for (const auto& r : roots) {
    for (int m = 0; m < r.multiplicity; ++m) {
      std::vector<cplx> next(c.size() + 1, cplx(0.0));
      for (std::size_t i = 0; i < c.size(); ++i) {
        next[i + 1] += c[i];
        next[i] -= r.z * c[i];
      }
      c = std::move(next);
    }
  }
  return Polynomial(std::move(c));
}

double Polynomial::max_abs() const {
  double m = 0.0;
  for (const auto& c : c_) m = std::max(m, std::abs(c));
  return m;
}

cplx Polynomial::eval(cplx z) const {
  cplx acc(0.0);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (c_.size() <= 1) return Polynomial();
  std::vector<cplx> d(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = static_cast<double>(i) * c_[i];
  return Polynomial(std::move(d));
}

Polynomial Polynomial::scaled_arg(cplx c) const {
  std::vector<cplx> d = c_;
  cplx p(1.0);
  for (auto& x : d) {
    x *= p;
    p *= c;
  }
  return Polynomial(std::move(d));
}

Polynomial Polynomial::taylor_shift(cplx a) const {
  std::vector<cplx> d = c_;
  const std::size_t n = d.size();
  for (std::size_t k = 0; k + 1 < n; ++k) {
    for (std::size_t i = n - 1; i > k; --i) d[i - 1] += a * d[i];
  }
  return Polynomial(std::move(d));
}

int Polynomial::valuation() const {
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] != cplx(0.0)) return static_cast<int>(i);
  }
  return -1;
}

Polynomial Polynomial::divide_by_z_power(int m) const {
  if (m <= 0) return *this;
  if (m >= static_cast<int>(c_.size())) return Polynomial();
  return Polynomial(std::vector<cplx>(c_.begin() + m, c_.end()));
}

Polynomial Polynomial::deflate(cplx r) const {
  if (c_.size() <= 1) return Polynomial();
  std::vector<cplx> q(c_.size() - 1);
  cplx carry = c_.back();
  for (std::size_t i = c_.size() - 1; i-- > 0;) {
    q[i] = carry;
    carry = c_[i] + r * carry;
  }
  return Polynomial(std::move(q));
}

int Polynomial::order_at(cplx z0, double rel_tol) const {
  if (is_zero()) return -1;
  const auto [t, s] = taylor_with_scale(*this, z0);
  int h = 0;
  while (h < degree() && std::abs(t[static_cast<std::size_t>(h)]) <= rel_tol * s[static_cast<std::size_t>(h)]) {
    ++h;
  }
  return h;
}

std::vector<Root> Polynomial::roots() const {
  if (is_zero()) throw Error(ErrorCode::domain_error, "roots of the zero polynomial");
  std::vector<cplx> c = c_;
  const double scale = max_abs();
  while (c.size() > 1 && std::abs(c.back()) <= 1e-14 * scale) c.pop_back();

  std::vector<Root> out;
  std::size_t v = 0;
  while (v < c.size() && c[v] == cplx(0.0)) ++v;
  if (v > 0) out.push_back({cplx(0.0), static_cast<int>(v)});
  const Polynomial p(std::vector<cplx>(c.begin() + static_cast<std::ptrdiff_t>(v), c.end()));
  const int d = p.degree();
  if (d <= 0) return out;

  std::vector<cplx> raw;
  if (d == 1) {
    raw.push_back(-p[0] / p[1]);
  } else {
    // Rescale z = s w so the monic coefficients are O(1).
    const cplx lead = p.lead();
    double s = 0.0;
    for (int i = 0; i < d; ++i) {
      const double a = std::abs(p[i] / lead);
      if (a > 0.0) s = std::max(s, std::pow(a, 1.0 / (d - i)));
    }
    if (!(s > 0.0) || !std::isfinite(s)) s = 1.0;
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(d, d);
    for (int i = 1; i < d; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < d; ++i) comp(i, d - 1) = -(p[i] / lead) * std::pow(s, i - d);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(comp, false);
    if (solver.info() != Eigen::Success) {
      throw Error(ErrorCode::root_finding_failed, "companion eigenvalue iteration failed");
    }
    for (int i = 0; i < d; ++i) raw.push_back(s * solver.eigenvalues()(i));
  }
  const Polynomial dp = p.derivative();
  for (auto& z : raw) {
    if (!finite(z)) throw Error(ErrorCode::root_finding_failed, "nonfinite root estimate");
    z = newton_polish(p, dp, z, 8);
  }
  constexpr double kFirstCluster = 1e-3;
  for (const auto& group : cluster(raw, kFirstCluster)) resolve_cluster(p, group, kFirstCluster, out);
  return out;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  std::vector<cplx> c(std::max(a.coeffs().size(), b.coeffs().size()), cplx(0.0));
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a[static_cast<int>(i)] + b[static_cast<int>(i)];
  return Polynomial(std::move(c));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + cplx(-1.0) * b; }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return Polynomial();
  std::vector<cplx> c(a.coeffs().size() + b.coeffs().size() - 1, cplx(0.0));
  for (std::size_t i = 0; i < a.coeffs().size(); ++i) {
    for (std::size_t j = 0; j < b.coeffs().size(); ++j) c[i + j] += a.coeffs()[i] * b.coeffs()[j];
  }
  return Polynomial(std::move(c));
}

Polynomial operator*(cplx s, const Polynomial& a) {
  std::vector<cplx> c = a.coeffs();
  for (auto& x : c) x *= s;
  return Polynomial(std::move(c));
}

}  // namespace qdiff
