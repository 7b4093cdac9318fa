#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qdiff/kernels.hpp"
#include "qdiff/qspecial.hpp"
#include "qdiff/rational.hpp"
#include "qdiff/sampler.hpp"

namespace qdiff {

/// A value a in C, or the point at infinity.
struct Target {
  cplx value{0.0, 0.0};
  bool infinite = false;

  static Target at(cplx a) { return {a, false}; }
  static Target infinity() { return {cplx(0.0, 0.0), true}; }
};

/// Entire or meromorphic function known through an evaluator and exact
/// zero/pole lattices.
struct ProductModel {
  std::vector<QLattice> zeros;
  std::vector<QLattice> poles;
  Sampler f;
  /// log|f(z)|; when empty, log|f(z)| is taken from the sampler. Supplying it
  /// keeps functions whose values overflow a double usable.
  std::function<double(cplx)> log_abs;
};

/// The function under study in the Nevanlinna routines.
///
/// Rational models carry exact zero and pole lists, product models exact
/// lattices, series models a certified safe radius; zeros of a series are
/// located by the argument principle.
class MeroModel {
 public:
  enum class Kind { rational, entire_series, q_product };

  static MeroModel rational(RationalFunction f, std::optional<QParam> qp = std::nullopt);
  /// domain_error without a certified safe radius.
  static MeroModel series(TruncatedSeries f, std::optional<QParam> qp = std::nullopt);
  static MeroModel product(ProductModel p, std::optional<QParam> qp = std::nullopt);

  Kind kind() const noexcept { return static_cast<Kind>(data_.index()); }
  const RationalFunction* rational_function() const { return std::get_if<RationalFunction>(&data_); }
  const TruncatedSeries* series_function() const { return std::get_if<TruncatedSeries>(&data_); }
  const ProductModel* product_data() const { return std::get_if<ProductModel>(&data_); }
  const std::optional<QParam>& qp() const noexcept { return qp_; }

  cplx eval(cplx z) const;
  double log_abs(cplx z) const;
  Sampler sampler() const;
  double evaluable_radius() const;
  bool is_constant() const;

  /// Moduli of the stored zeros and poles up to r (none for series).
  std::vector<double> singular_moduli(double r) const;
  std::vector<Root> poles_within(double r) const;

 private:
  using Data = std::variant<RationalFunction, TruncatedSeries, ProductModel>;
  MeroModel(Data data, std::optional<QParam> qp) : data_(std::move(data)), qp_(std::move(qp)) {}

  Data data_;
  std::optional<QParam> qp_;
};

/// Product models of E_q (|q| < 1) and etilde_q (|q| > 1) with their exact
/// zero lattices.
MeroModel E_q_model(const QParam& qp);
MeroModel etilde_model(const QParam& qp);

struct RadialGrid {
  std::vector<double> radii;
  int nodes = 1024;

  static RadialGrid log_spaced(double r_min, double r_max, int points, int nodes = 1024);
  /// Radii within 1e-6 relative of a stored zero/pole modulus move outward
  /// by 1e-5 relative, so counting functions are never read at a jump.
  RadialGrid nudged(const MeroModel& model) const;
  /// Radii positive and strictly increasing, nodes >= 64 and even.
  void validate() const;
};

struct Proximity {
  double m = 0.0;
  double error = 0.0;
};

/// m(r, f) = (1/2pi) int log+ |f(r e^{it})| dt.
Proximity proximity(const MeroModel& model, double r, int nodes, Exec exec = Exec::parallel);

/// Points where f = a, with multiplicity, up to modulus r. Series models
/// return their zeros only (a = 0) and nothing for a = infinity.
std::vector<Root> a_points(const MeroModel& model, double r, Target a);

/// n(r, f = a): a-points in |z| <= r with multiplicity.
int counting_n(const MeroModel& model, double r, Target a);
/// N(r, f = a) = sum_{0 < |z_i| <= r} log(r / |z_i|) + n(0) log r.
double counting_N(const MeroModel& model, double r, Target a);
/// The same transform applied to an arbitrary weighted point list.
double integrated_count(const std::vector<Root>& points, double r);

/// Zeros of a series in |z| <= r: winding numbers on sub-circles split the
/// disc into annuli, power sums of the zeros in each annulus give a small
/// polynomial whose roots are polished by Newton steps on the series.
std::vector<Root> series_zeros(const TruncatedSeries& f, double r);
/// Winding number of f around |z| = r, i.e. the zero count including any
/// zeros at the origin.
int argument_principle_count(const TruncatedSeries& f, double r);

struct NevanlinnaSample {
  double r = 0.0;
  double m = 0.0;
  std::optional<double> N_0;
  double N_inf = 0.0;
  double T = 0.0;
  /// Jackson truncated counts ntilde_J(r, f = a) and their integrated forms.
  std::optional<double> nJ_0;
  std::optional<double> nJ_inf;
  std::optional<double> NJ_0;
  std::optional<double> NJ_inf;
  double quad_err = 0.0;
};

/// T = m + N(r, f). The Jackson columns are filled for rational models
/// that carry a q.
NevanlinnaSample characteristic(const MeroModel& model, double r, int nodes,
                                Exec exec = Exec::parallel);

/// |(1/2pi) int log|f| - log|c_lambda| - N(r, 1/f) + N(r, f)| with
/// f = c_lambda z^lambda (1 + O(z)).
double jensen_residual(const MeroModel& model, double r, int nodes, Exec exec = Exec::parallel);

struct JacksonPoint {
  cplx z;
  int h = 1;        // multiplicity of f = a
  int k_prime = 0;  // multiplicity of D_q f = 0 (D_q(1/f) = 0 at poles)
};

/// a-points of a rational f with the Jackson reduction at each.
std::vector<JacksonPoint> jackson_points(const RationalFunction& f, Target a, const QParam& qp);

struct JacksonCount {
  int n = 0;       // n(r, f = a)
  int ntilde = 0;  // sum of h - min(h, k') over |z| <= r
  double Ntilde = 0.0;
};

/// Rational models only (target_unsupported otherwise).
JacksonCount jackson_truncated_counting(const MeroModel& model, double r, Target a,
                                        const QParam& qp);

struct DefectReport {
  Target target;
  double r = 0.0;  // radius the proxies are read at
  // 1 - N/T, 1 - Ntilde_J/T and (N - Ntilde_J)/T, clamped to [-0.1, 1.1]
  double delta = 0.0;
  double theta_J = 0.0;
  double vartheta_J = 0.0;
  double raw_delta = 0.0;
  double raw_theta_J = 0.0;
  double raw_vartheta_J = 0.0;
  /// Raw value outside [0, 1].
  bool delta_out_of_range = false;
  bool theta_out_of_range = false;
  bool vartheta_out_of_range = false;
  /// d(proxy)/d(log r) over the top decade of the grid.
  double delta_slope = 0.0;
  double theta_slope = 0.0;
};

/// Finite-r proxies of the defect, ramification and multiplicity indices at
/// the largest grid radius. Needs a rational model with a q.
std::vector<DefectReport> defect_estimates(const MeroModel& model, const RadialGrid& grid,
                                           const std::vector<Target>& targets,
                                           Exec exec = Exec::parallel);

struct OrderEstimate {
  double sigma = 0.0;
  double half_width = 0.0;  // two standard errors of the slope
  int points = 0;
};

/// Slope of log+ T against log log r over the top half of the samples.
/// Needs >= 6 radii over >= 3 decades (insufficient_grid) and a
/// nondegenerate T (degenerate_model).
OrderEstimate log_order_from_T(const std::vector<NevanlinnaSample>& samples);
/// Same regression on N(r, f = 0).
OrderEstimate log_order_from_N(const std::vector<NevanlinnaSample>& samples);

struct WimanValironSample {
  double r = 0.0;
  double mu = 0.0;
  double log_mu = 0.0;
  int nu = 0;
  cplx max_modulus_point{0.0, 0.0};
  cplx ratio_check{0.0, 0.0};  // f(q^k z) / f(z) at the max-modulus point
};

/// mu = max |c_n| r^n, nu the largest maximiser. Throws truncation_too_short
/// unless nu < N/2; series with an infinite safe radius (polynomials) are
/// exempt.
WimanValironSample max_term_central_index(const TruncatedSeries& f, double r);

/// Slope of log+ nu against log log r over the top half, plus one.
OrderEstimate log_order_from_nu(const TruncatedSeries& f, const std::vector<double>& radii);

struct LogDerivRow {
  double r = 0.0;
  double m = 0.0;  // m(r, D_q^k f / f)
  double T = 0.0;
  double ratio = 0.0;
};

struct LogDerivTable {
  std::vector<LogDerivRow> rows;
  /// ratio nonincreasing over the radii in the top decade
  bool decreasing_top_decade = false;
};

LogDerivTable logderiv_lemma_check(const MeroModel& model, const QParam& qp, int k,
                                   const RadialGrid& grid, Exec exec = Exec::parallel);

struct SftRow {
  double r = 0.0;
  double T = 0.0;
  double sum_Ntilde = 0.0;
  /// sum Ntilde_J(r, f = a_j) - (p - 2) T
  double margin = 0.0;
  double sum_N = 0.0;
  /// 2 N(r, f) - N(r, D_q f) + N(r, 1/D_q f)
  double N_J = 0.0;
  /// sum N(r, f = a_j) - N_J - log r - (p - 2) T
  double sharp_margin = 0.0;
};

/// Rational model, p >= 3 distinct targets.
std::vector<SftRow> sft_check(const MeroModel& model, const std::vector<Target>& targets,
                              const QParam& qp, const RadialGrid& grid, Exec exec = Exec::parallel);

struct WimanValironRow {
  double r = 0.0;
  int nu = 0;
  cplx z{0.0, 0.0};
  double log_ratio = 0.0;  // log |f(q^k z) / f(z)|
  double predicted = 0.0;  // k nu log|q|
  double literal = 0.0;    // Re((q^k - 1) nu)
  double deviation = 0.0;  // |log_ratio - predicted| / |predicted|
};

struct WimanValironTable {
  std::vector<WimanValironRow> rows;
  /// Deviation strictly decreasing over the last `count` rows.
  bool deviation_decreasing(std::size_t count) const;
};

/// Compares log|f(q^k z)/f(z)| at the max-modulus point z of |z| = r with
/// the dominant-term prediction k nu log|q|. The point comes from a
/// 2048-node scan refined by golden section; max_modulus_ambiguous if two
/// separated maxima tie but give different ratios.
WimanValironTable wiman_valiron_check(const TruncatedSeries& f, const QParam& qp, int k,
                                      const std::vector<double>& radii);

struct GrowthReport {
  bool skipped = false;
  std::string reason;
  OrderEstimate sigma_A;
  OrderEstimate sigma_f;
  /// sigma_f - sigma_A - 1
  double gap = 0.0;
  double gap_half_width = 0.0;
  double max_residual = 0.0;
};

/// For an entire solution f of D_q^k f + A f = 0: estimates both
/// logarithmic orders and the gap sigma(f) - sigma(A) - 1. Nonzero rational
/// A is taken to have sigma = 1. A rational f is not transcendental and the
/// check is skipped. The equation must hold to 1e-6 relative at 16 points of
/// every grid circle (domain_error otherwise).
GrowthReport growth_lower_bound_check(const MeroModel& A, const MeroModel& f, const QParam& qp,
                                      int k, const RadialGrid& grid, Exec exec = Exec::parallel);

/// One characteristic() row per radius; radii run in parallel.
std::vector<NevanlinnaSample> sample_sweep(const MeroModel& model, const RadialGrid& grid,
                                           Exec exec = Exec::parallel);

/// Header r,m,N_0,N_inf,T,nJ_0,nJ_inf,quad_err; values as %.16e, nan where
/// a column is not computable for the model.
void write_samples_csv(std::ostream& out, const std::vector<NevanlinnaSample>& samples);

}  // namespace qdiff
