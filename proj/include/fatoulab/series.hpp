#pragma once

#include <quadmath.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "log_scalar.hpp"

namespace fatoulab {

/// Bounds on where exact series evaluation is attempted. Beyond them callers
/// must fall back to model-based growth curves.
struct EvalLimits {
  double max_log_r = 700.0;          // radii tracked only as log r past this
  std::int64_t max_terms = 4000000;  // coefficient enumeration budget
};

enum class Family {
  exp_series,   // sum z^k / k!
  cos_sqrt,     // sum (-1)^k z^k / (2k)!   (= cos(sqrt z))
  gap_squares,  // sum_{m>=1} z^{m^2} / (m^2)!
  baker,        // sin(sqrt z)/sqrt z + z + a
  monomial,     // c z^n
  constant,     // c
  explicit_list
};

std::complex<double> parse_complex(const std::string& text);
std::string format_complex(const std::complex<double>& z);

/// An entire function presented as an oracle over power-series coefficients:
/// log-magnitude and phase of a_k, plus a tail policy that bounds how many
/// terms are needed for a given radius and tolerance.
class CoefficientSeries {
 public:
  static CoefficientSeries exp_series() { return CoefficientSeries(Family::exp_series); }
  static CoefficientSeries cos_sqrt() { return CoefficientSeries(Family::cos_sqrt); }
  static CoefficientSeries gap_squares() { return CoefficientSeries(Family::gap_squares); }

  static CoefficientSeries baker(double a) {
    if (a == -1.0) throw ConfigError("baker: constant coefficient 1+a must be nonzero");
    CoefficientSeries f(Family::baker);
    f.a_ = a;
    return f;
  }

  static CoefficientSeries monomial(std::complex<double> c, int n) {
    if (n < 0) throw ConfigError("monomial: exponent must be nonnegative");
    if (c == std::complex<double>(0.0, 0.0)) throw ConfigError("monomial: coefficient must be nonzero");
    CoefficientSeries f(Family::monomial);
    f.c_ = c;
    f.n_ = n;
    return f;
  }

  static CoefficientSeries constant(std::complex<double> c) {
    if (c == std::complex<double>(0.0, 0.0)) throw ConfigError("constant: value must be nonzero");
    CoefficientSeries f(Family::constant);
    f.c_ = c;
    return f;
  }

  /// Explicit finite list; zero entries are dropped, indices must be distinct.
  static CoefficientSeries from_coefficients(std::vector<std::pair<std::int64_t, LogComplex>> coeffs);

  /// Named in configs as: exp, cos_sqrt, gap_squares, baker(a=<real>),
  /// monomial(c=<complex>,n=<int>), constant(c=<complex>).
  static CoefficientSeries parse(const std::string& spec);

  /// CSV with header (k,re,im) / (k,re_ak,im_ak) or (k,log_mag,phase).
  static CoefficientSeries load_csv(std::istream& in);

  Family family() const { return family_; }
  std::string spec_string() const;

  double param_a() const { return a_; }
  std::complex<double> param_c() const { return c_; }
  int param_n() const { return n_; }

  /// Exact log-magnitude/phase of a_k; a zero LogComplex iff a_k = 0.
  LogComplex coeff_log(std::int64_t k) const;

  /// Smallest support index, or -1 if the series is identically handled
  /// through explicit storage and empty (never the case for builtins).
  std::int64_t first_nonzero_index() const;

  /// Smallest support index strictly greater than k, or -1 if none exists
  /// (finite support exhausted).
  std::int64_t next_nonzero_index(std::int64_t k) const;

  bool finite_support() const {
    return family_ == Family::monomial || family_ == Family::constant ||
           family_ == Family::explicit_list;
  }

  std::int64_t degree() const;

  /// Rank-space view of the support (rank 0 = first nonzero index, rank 1 =
  /// next, ...). Lets extremum searches work over a contiguous integer range
  /// even for lacunary series.
  std::int64_t support_index(std::int64_t rank) const;

  /// Largest rank whose support index is <= k (-1 if none).
  std::int64_t rank_for_bound(std::int64_t k) const;

  /// Ranks >= this have log-concave term sequences log|a| + k log r; below it
  /// the terms may dip (the inhomogeneous leading coefficients of baker).
  std::int64_t concave_rank_start() const { return family_ == Family::baker ? 2 : 0; }

  bool has_closed_form_log_M() const {
    return family_ == Family::exp_series || family_ == Family::cos_sqrt ||
           family_ == Family::monomial || family_ == Family::constant;
  }

  /// log M(r) where available in closed form:
  ///   exp:      log M = r
  ///   cos_sqrt: log M = log cosh(sqrt r)
  ///   monomial: log M = log|c| + n log r
  ///   constant: log M = log|c|
  double closed_form_log_M(double log_r) const;

  /// Smallest admissible N such that sum_{k>N} |a_k| r^k <= tol * mu(r):
  /// enumerates terms past the peak until consecutive support ratios drop to
  /// <= 1/2, then bounds the tail by twice the first omitted term.
  std::int64_t truncation_index(double log_r, double tol, const EvalLimits& lim = {}) const;

  /// Log-domain value of sum_{k<=N} a_k (r e^{i theta})^k with N from the
  /// tail policy; the maximal term magnitude is factored out so intermediate
  /// sums stay bounded. When the double-precision sum cancels below its own
  /// rounding floor the summation is repeated at quadruple precision, which
  /// pushes the certifiable cancellation depth from ~1e-13 of the peak term
  /// to ~1e-29.
  LogComplex eval_log(double log_r, double theta, double tol, const EvalLimits& lim = {}) const;

  /// Coefficient log-magnitude and phase at quadruple precision, for the
  /// escalated summation. Factorial-type families recompute the term logs
  /// with lgammaq; explicitly stored coefficients are doubles and are
  /// promoted as-is (their value is the input, exact by definition) except
  /// that phases sitting exactly on rounded pi or pi/2 are snapped to the
  /// quadruple-precision quadrant.
  void coeff_log_quad(std::int64_t k, __float128& log_mag, __float128& phase) const;

 private:
  explicit CoefficientSeries(Family fam) : family_(fam) {}

  void check_radius(double log_r, const EvalLimits& lim) const {
    if (!std::isfinite(log_r)) throw std::invalid_argument("log_r must be finite");
    if (log_r > lim.max_log_r) {
      throw TruncationUnavailable("radius beyond exact-evaluation ceiling: log r = " +
                                  std::to_string(log_r));
    }
  }

  static void check_tol(double tol) {
    if (!(tol > 0.0 && tol < 1.0)) throw std::invalid_argument("tol must be in (0,1)");
  }

  Family family_;
  double a_ = 0.0;                  // baker
  std::complex<double> c_{0.0, 0.0};  // monomial / constant
  int n_ = 0;                       // monomial
  std::vector<std::int64_t> support_;   // explicit_list, sorted
  std::vector<LogComplex> values_;      // explicit_list, parallel to support_
};

inline CoefficientSeries CoefficientSeries::from_coefficients(
    std::vector<std::pair<std::int64_t, LogComplex>> coeffs) {
  CoefficientSeries f(Family::explicit_list);
  std::vector<std::pair<std::int64_t, LogComplex>> kept;
  kept.reserve(coeffs.size());
  for (auto& kv : coeffs) {
    if (kv.first < 0) throw ConfigError("coefficient index must be nonnegative");
    if (!kv.second.is_zero()) kept.push_back(kv);
  }
  std::sort(kept.begin(), kept.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  for (std::size_t i = 0; i + 1 < kept.size(); ++i) {
    if (kept[i].first == kept[i + 1].first) {
      throw ConfigError("duplicate coefficient index " + std::to_string(kept[i].first));
    }
  }
  if (kept.empty()) throw ConfigError("coefficient list has no nonzero entries");
  for (auto& kv : kept) {
    f.support_.push_back(kv.first);
    f.values_.push_back(kv.second);
  }
  return f;
}

inline LogComplex CoefficientSeries::coeff_log(std::int64_t k) const {
  if (k < 0) throw std::invalid_argument("coefficient index must be nonnegative");
  switch (family_) {
    case Family::exp_series:
      return LogComplex(-std::lgamma(static_cast<double>(k) + 1.0), 0.0);
    case Family::cos_sqrt:
      return LogComplex(-std::lgamma(2.0 * static_cast<double>(k) + 1.0),
                        (k % 2 != 0) ? detail::kPi : 0.0);
    case Family::gap_squares: {
      auto m = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(k))));
      if (m >= 1 && m * m == k) {
        return LogComplex(-std::lgamma(static_cast<double>(k) + 1.0), 0.0);
      }
      return LogComplex::zero();
    }
    case Family::baker: {
      if (k == 0) {
        double c0 = 1.0 + a_;
        return LogComplex(std::log(std::fabs(c0)), c0 < 0.0 ? detail::kPi : 0.0);
      }
      if (k == 1) return LogComplex(std::log(5.0 / 6.0), 0.0);
      return LogComplex(-std::lgamma(2.0 * static_cast<double>(k) + 2.0),
                        (k % 2 != 0) ? detail::kPi : 0.0);
    }
    case Family::monomial:
      return (k == n_) ? LogComplex::from_complex(c_) : LogComplex::zero();
    case Family::constant:
      return (k == 0) ? LogComplex::from_complex(c_) : LogComplex::zero();
    case Family::explicit_list: {
      auto it = std::lower_bound(support_.begin(), support_.end(), k);
      if (it != support_.end() && *it == k) {
        return values_[static_cast<std::size_t>(it - support_.begin())];
      }
      return LogComplex::zero();
    }
  }
  return LogComplex::zero();
}

namespace detail {

inline const __float128 kPiQ = acosq(-1.0);
inline const __float128 kTwoPiQ = 2 * kPiQ;

/// Stored phases are double atan2 results. A coefficient that is exactly
/// real-negative or purely imaginary carries the rounded pi (or pi/2), and
/// promoting that rounding error verbatim would leave ~1e-16 dust in sums
/// that cancel exactly; snap the three exact-quadrant values back.
inline __float128 promote_phase(double p) {
  if (p == kPi) return kPiQ;
  if (p == kPi / 2) return kPiQ / 2;
  if (p == -kPi / 2) return -kPiQ / 2;
  return p;
}

}  // namespace detail

inline void CoefficientSeries::coeff_log_quad(std::int64_t k, __float128& log_mag,
                                              __float128& phase) const {
  const __float128 one = 1;
  log_mag = -HUGE_VALQ;
  phase = 0;
  switch (family_) {
    case Family::exp_series:
      log_mag = -lgammaq(static_cast<__float128>(k) + one);
      return;
    case Family::cos_sqrt:
      log_mag = -lgammaq(2 * static_cast<__float128>(k) + one);
      if (k % 2 != 0) phase = detail::kPiQ;
      return;
    case Family::gap_squares: {
      auto m = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(k))));
      if (m >= 1 && m * m == k) log_mag = -lgammaq(static_cast<__float128>(k) + one);
      return;
    }
    case Family::baker: {
      if (k == 0) {
        __float128 c0 = one + static_cast<__float128>(a_);
        log_mag = logq(fabsq(c0));
        if (c0 < 0) phase = detail::kPiQ;
        return;
      }
      if (k == 1) {
        log_mag = logq(static_cast<__float128>(5) / 6);
        return;
      }
      log_mag = -lgammaq(2 * static_cast<__float128>(k) + 2);
      if (k % 2 != 0) phase = detail::kPiQ;
      return;
    }
    case Family::monomial:
    case Family::constant: {
      if (k != (family_ == Family::monomial ? static_cast<std::int64_t>(n_) : 0)) return;
      __float128 cre = c_.real(), cim = c_.imag();
      log_mag = logq(hypotq(cre, cim));
      phase = atan2q(cim, cre);
      return;
    }
    case Family::explicit_list: {
      LogComplex a = coeff_log(k);
      log_mag = a.log_mag;
      phase = detail::promote_phase(a.phase);
      return;
    }
  }
}

namespace detail {

/// A double-precision circle sum whose scaled magnitude falls below this
/// (peak term = 1) is dominated by rounding of the term logs; it is redone
/// at quadruple precision.
constexpr double kEscalateLogRel = -25.328436022934504;  // log 1e-11

/// Tail tolerance for the escalated sum. The usual cut leaves a tail of
/// ~tol * mu, which at 1e-12 sits far above the values a deep cancellation
/// produces; the escalated table cuts low enough that the dropped tail is
/// below the quadruple-precision rounding floor of the sum itself.
constexpr double kQuadTailTol = 1e-35;

struct QuadTerms {
  std::vector<std::int64_t> idx;
  std::vector<__float128> log_t;
  std::vector<__float128> phase;
  __float128 peak = -HUGE_VALQ;
};

inline QuadTerms build_quad_terms(const CoefficientSeries& f, double log_r,
                                  std::int64_t n_cut_fallback, const EvalLimits& lim) {
  std::int64_t n_cut;
  try {
    n_cut = f.truncation_index(log_r, kQuadTailTol, lim);
  } catch (const TruncationUnavailable&) {
    n_cut = n_cut_fallback;  // budget-capped: still no worse than the double cut
  }
  QuadTerms t;
  const __float128 lr = log_r;
  for (std::int64_t k = f.first_nonzero_index(); k >= 0 && k <= n_cut;
       k = f.next_nonzero_index(k)) {
    __float128 lm, ph;
    f.coeff_log_quad(k, lm, ph);
    __float128 v = lm + static_cast<__float128>(k) * lr;
    t.idx.push_back(k);
    t.log_t.push_back(v);
    t.phase.push_back(ph);
    if (v > t.peak) t.peak = v;
  }
  return t;
}

inline LogComplex quad_circle_sum(const QuadTerms& t, double theta) {
  if (t.idx.empty() || t.peak == -HUGE_VALQ) return LogComplex::zero();
  __float128 re = 0, im = 0;
  const __float128 th = theta;
  for (std::size_t i = 0; i < t.idx.size(); ++i) {
    __float128 angle = t.phase[i] + remainderq(static_cast<__float128>(t.idx[i]) * th, kTwoPiQ);
    __float128 w = expq(t.log_t[i] - t.peak);
    re += w * cosq(angle);
    im += w * sinq(angle);
  }
  __float128 mag2 = re * re + im * im;
  if (mag2 <= 0) return LogComplex::zero();
  return LogComplex(static_cast<double>(t.peak + 0.5 * logq(mag2)),
                    static_cast<double>(atan2q(im, re)));
}

}  // namespace detail

inline std::int64_t CoefficientSeries::first_nonzero_index() const {
  switch (family_) {
    case Family::exp_series:
    case Family::cos_sqrt:
    case Family::baker:
      return 0;
    case Family::gap_squares:
      return 1;
    case Family::monomial:
      return n_;
    case Family::constant:
      return 0;
    case Family::explicit_list:
      return support_.empty() ? -1 : support_.front();
  }
  return -1;
}

inline std::int64_t CoefficientSeries::next_nonzero_index(std::int64_t k) const {
  switch (family_) {
    case Family::exp_series:
    case Family::cos_sqrt:
    case Family::baker:
      return k + 1;
    case Family::gap_squares: {
      if (k < 1) return 1;
      auto m = static_cast<std::int64_t>(std::floor(std::sqrt(static_cast<double>(k))));
      while (m * m > k) --m;
      while ((m + 1) * (m + 1) <= k) ++m;
      return (m + 1) * (m + 1);
    }
    case Family::monomial:
      return (k < n_) ? n_ : -1;
    case Family::constant:
      return (k < 0) ? 0 : -1;
    case Family::explicit_list: {
      auto it = std::upper_bound(support_.begin(), support_.end(), k);
      return it == support_.end() ? -1 : *it;
    }
  }
  return -1;
}

inline std::int64_t CoefficientSeries::degree() const {
  if (!finite_support()) throw std::logic_error("degree undefined for infinite series");
  switch (family_) {
    case Family::monomial: return n_;
    case Family::constant: return 0;
    default: return support_.back();
  }
}

inline std::int64_t CoefficientSeries::support_index(std::int64_t rank) const {
  if (rank < 0) throw std::invalid_argument("rank must be nonnegative");
  switch (family_) {
    case Family::exp_series:
    case Family::cos_sqrt:
    case Family::baker:
      return rank;
    case Family::gap_squares:
      return (rank + 1) * (rank + 1);
    case Family::monomial:
      return rank == 0 ? n_ : -1;
    case Family::constant:
      return rank == 0 ? 0 : -1;
    case Family::explicit_list:
      return rank < static_cast<std::int64_t>(support_.size())
                 ? support_[static_cast<std::size_t>(rank)]
                 : -1;
  }
  return -1;
}

inline std::int64_t CoefficientSeries::rank_for_bound(std::int64_t k) const {
  if (k < 0) return -1;
  switch (family_) {
    case Family::exp_series:
    case Family::cos_sqrt:
    case Family::baker:
      return k;
    case Family::gap_squares: {
      if (k < 1) return -1;
      auto m = static_cast<std::int64_t>(std::floor(std::sqrt(static_cast<double>(k))));
      while (m * m > k) --m;
      while ((m + 1) * (m + 1) <= k) ++m;
      return m - 1;
    }
    case Family::monomial:
      return k >= n_ ? 0 : -1;
    case Family::constant:
      return 0;
    case Family::explicit_list: {
      auto it = std::upper_bound(support_.begin(), support_.end(), k);
      return static_cast<std::int64_t>(it - support_.begin()) - 1;
    }
  }
  return -1;
}

inline double CoefficientSeries::closed_form_log_M(double log_r) const {
  switch (family_) {
    case Family::exp_series:
      return std::exp(log_r);
    case Family::cos_sqrt: {
      // log cosh(x) with x = sqrt r = e^{log_r / 2}, stable for large x
      double half = 0.5 * log_r;
      if (half > 690.0) throw std::overflow_error("cos_sqrt closed form: sqrt r overflows");
      double x = std::exp(half);
      if (x > 20.0) return x - std::log(2.0) + std::log1p(std::exp(-2.0 * x));
      return std::log(std::cosh(x));
    }
    case Family::monomial:
      return std::log(std::abs(c_)) + static_cast<double>(n_) * log_r;
    case Family::constant:
      return std::log(std::abs(c_));
    default:
      throw std::logic_error("no closed-form log M for this family");
  }
}

inline std::int64_t CoefficientSeries::truncation_index(double log_r, double tol,
                                                        const EvalLimits& lim) const {
  check_tol(tol);
  check_radius(log_r, lim);
  if (finite_support()) return degree();

  const double ln2 = std::log(2.0);
  const double log_tol = std::log(tol);

  std::int64_t k = first_nonzero_index();
  double log_t = coeff_log(k).log_mag + static_cast<double>(k) * log_r;
  double log_mu = log_t;
  std::int64_t nu = k;
  std::int64_t visited = 1;

  while (true) {
    std::int64_t k_next = next_nonzero_index(k);
    double log_t_next = coeff_log(k_next).log_mag + static_cast<double>(k_next) * log_r;
    if (log_t_next >= log_mu) {
      log_mu = log_t_next;
      nu = k_next;
    }
    if (k > nu && log_t_next - log_t <= -ln2 && log_t_next + ln2 <= log_tol + log_mu) {
      return k;
    }
    k = k_next;
    log_t = log_t_next;
    if (++visited > lim.max_terms) {
      throw TruncationUnavailable("term budget exhausted at log r = " + std::to_string(log_r));
    }
  }
}

inline LogComplex CoefficientSeries::eval_log(double log_r, double theta, double tol,
                                              const EvalLimits& lim) const {
  std::int64_t n_cut = truncation_index(log_r, tol, lim);

  std::vector<double> log_t;
  std::vector<double> ph;
  std::vector<std::int64_t> idx;
  double peak = detail::kNegInf;
  for (std::int64_t k = first_nonzero_index(); k >= 0 && k <= n_cut;
       k = next_nonzero_index(k)) {
    LogComplex a = coeff_log(k);
    double t = a.log_mag + static_cast<double>(k) * log_r;
    log_t.push_back(t);
    ph.push_back(a.phase);
    idx.push_back(k);
    if (t > peak) peak = t;
  }
  if (log_t.empty() || peak == detail::kNegInf) return LogComplex::zero();

  long double re = 0.0L, im = 0.0L;
  for (std::size_t i = 0; i < log_t.size(); ++i) {
    double w = std::exp(log_t[i] - peak);
    double angle = ph[i] + std::remainder(static_cast<double>(idx[i]) * theta, detail::kTwoPi);
    re += static_cast<long double>(w) * std::cos(angle);
    im += static_cast<long double>(w) * std::sin(angle);
  }
  long double mag2 = re * re + im * im;
  if (mag2 <= 0.0L ||
      0.5 * static_cast<double>(std::log(mag2)) < detail::kEscalateLogRel) {
    return detail::quad_circle_sum(detail::build_quad_terms(*this, log_r, n_cut, lim), theta);
  }
  return LogComplex(peak + 0.5 * static_cast<double>(std::log(mag2)),
                    static_cast<double>(std::atan2(im, re)));
}

/// Precomputed circle evaluation: fixes a radius once, then evaluates
/// f(r e^{i theta}) for many theta at O(#terms) each.
class CircleEvaluator {
 public:
  /// resolve_deep_cancellation: escalate deeply cancelled sums to quadruple
  /// precision with an extended term table. Disable for maximum scans, where
  /// values that small can never matter and the escalation only costs time.
  CircleEvaluator(const CoefficientSeries& f, double log_r, double tol, const EvalLimits& lim = {},
                  bool resolve_deep_cancellation = true)
      : f_(&f), log_r_(log_r), lim_(lim), deep_(resolve_deep_cancellation) {
    n_cut_ = f.truncation_index(log_r, tol, lim);
    double peak = detail::kNegInf;
    std::vector<double> log_t;
    for (std::int64_t k = f.first_nonzero_index(); k >= 0 && k <= n_cut_;
         k = f.next_nonzero_index(k)) {
      LogComplex a = f.coeff_log(k);
      log_t.push_back(a.log_mag + static_cast<double>(k) * log_r);
      phase_.push_back(a.phase);
      index_.push_back(k);
      if (log_t.back() > peak) peak = log_t.back();
    }
    peak_ = peak;
    weight_.resize(log_t.size());
    for (std::size_t i = 0; i < log_t.size(); ++i) weight_[i] = std::exp(log_t[i] - peak);
  }

  /// Not safe for concurrent eval on one instance: the quadruple-precision
  /// term table is built lazily the first time a sum cancels deeply.
  LogComplex eval(double theta) const {
    if (peak_ == detail::kNegInf) return LogComplex::zero();
    long double re = 0.0L, im = 0.0L;
    for (std::size_t i = 0; i < weight_.size(); ++i) {
      double angle =
          phase_[i] + std::remainder(static_cast<double>(index_[i]) * theta, detail::kTwoPi);
      re += static_cast<long double>(weight_[i]) * std::cos(angle);
      im += static_cast<long double>(weight_[i]) * std::sin(angle);
    }
    long double mag2 = re * re + im * im;
    if (deep_ && (mag2 <= 0.0L ||
                  0.5 * static_cast<double>(std::log(mag2)) < detail::kEscalateLogRel)) {
      if (!quad_ready_) {
        quad_ = detail::build_quad_terms(*f_, log_r_, n_cut_, lim_);
        quad_ready_ = true;
      }
      return detail::quad_circle_sum(quad_, theta);
    }
    return LogComplex(peak_ + 0.5 * static_cast<double>(std::log(mag2)),
                      static_cast<double>(std::atan2(im, re)));
  }

  double log_peak() const { return peak_; }
  std::size_t term_count() const { return weight_.size(); }

 private:
  const CoefficientSeries* f_;
  double log_r_;
  EvalLimits lim_;
  bool deep_ = true;
  std::int64_t n_cut_ = 0;
  double peak_ = detail::kNegInf;
  std::vector<double> weight_;
  std::vector<double> phase_;
  std::vector<std::int64_t> index_;
  mutable detail::QuadTerms quad_;
  mutable bool quad_ready_ = false;
};

// ---- parsing helpers -------------------------------------------------------

inline std::complex<double> parse_complex(const std::string& text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  }
  if (s.empty()) throw ConfigError("empty complex literal");

  auto read_part = [](const char* p, const char** end, bool& is_imag) -> double {
    const char* q = p;
    double sign = 1.0;
    if (*q == '+' || *q == '-') {
      if (*q == '-') sign = -1.0;
      ++q;
    }
    if (*q == 'i' || *q == 'I') {
      is_imag = true;
      *end = q + 1;
      return sign;
    }
    char* num_end = nullptr;
    double v = std::strtod(q, &num_end);
    if (num_end == q) throw ConfigError("bad complex literal");
    if (*num_end == 'i' || *num_end == 'I') {
      is_imag = true;
      *end = num_end + 1;
    } else {
      is_imag = false;
      *end = num_end;
    }
    return sign * v;
  };

  const char* p = s.c_str();
  const char* end = p;
  bool imag1 = false;
  double v1 = read_part(p, &end, imag1);
  if (*end == '\0') return imag1 ? std::complex<double>(0.0, v1) : std::complex<double>(v1, 0.0);

  bool imag2 = false;
  const char* end2 = end;
  double v2 = read_part(end, &end2, imag2);
  if (*end2 != '\0' || imag1 == imag2) throw ConfigError("bad complex literal: " + text);
  double re = imag1 ? v2 : v1;
  double im = imag1 ? v1 : v2;
  return {re, im};
}

inline std::string format_complex(const std::complex<double>& z) {
  char buf[96];
  if (z.imag() == 0.0) {
    std::snprintf(buf, sizeof(buf), "%.17g", z.real());
    return buf;
  }
  if (z.real() == 0.0) {
    std::snprintf(buf, sizeof(buf), "%.17gi", z.imag());
    return buf;
  }
  std::snprintf(buf, sizeof(buf), "%.17g%+.17gi", z.real(), z.imag());
  return buf;
}

namespace detail {

inline std::vector<std::pair<std::string, std::string>> parse_arg_list(const std::string& args,
                                                                       const std::string& ctx) {
  std::vector<std::pair<std::string, std::string>> out;
  std::size_t pos = 0;
  while (pos < args.size()) {
    std::size_t comma = args.find(',', pos);
    std::string piece = args.substr(pos, comma == std::string::npos ? std::string::npos
                                                                    : comma - pos);
    std::size_t eq = piece.find('=');
    if (eq == std::string::npos) throw ConfigError(ctx + ": expected key=value, got '" + piece + "'");
    out.emplace_back(piece.substr(0, eq), piece.substr(eq + 1));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace detail

inline CoefficientSeries CoefficientSeries::parse(const std::string& spec) {
  std::string s;
  for (char c : spec) {
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  }
  if (s == "exp") return exp_series();
  if (s == "cos_sqrt") return cos_sqrt();
  if (s == "gap_squares") return gap_squares();

  std::size_t open = s.find('(');
  if (open == std::string::npos || s.back() != ')') {
    throw ConfigError("unknown function spec: " + spec);
  }
  std::string name = s.substr(0, open);
  std::string args = s.substr(open + 1, s.size() - open - 2);
  auto kv = detail::parse_arg_list(args, name);

  auto find_arg = [&](const std::string& key) -> const std::string& {
    for (auto& p : kv) {
      if (p.first == key) return p.second;
    }
    throw ConfigError(name + ": missing argument " + key);
  };

  if (name == "baker") {
    return baker(std::strtod(find_arg("a").c_str(), nullptr));
  }
  if (name == "monomial") {
    return monomial(parse_complex(find_arg("c")),
                    static_cast<int>(std::strtol(find_arg("n").c_str(), nullptr, 10)));
  }
  if (name == "constant") {
    return constant(parse_complex(find_arg("c")));
  }
  throw ConfigError("unknown function spec: " + spec);
}

inline std::string CoefficientSeries::spec_string() const {
  char buf[160];
  switch (family_) {
    case Family::exp_series: return "exp";
    case Family::cos_sqrt: return "cos_sqrt";
    case Family::gap_squares: return "gap_squares";
    case Family::baker:
      std::snprintf(buf, sizeof(buf), "baker(a=%.17g)", a_);
      return buf;
    case Family::monomial:
      std::snprintf(buf, sizeof(buf), "monomial(c=%s,n=%d)", format_complex(c_).c_str(), n_);
      return buf;
    case Family::constant:
      std::snprintf(buf, sizeof(buf), "constant(c=%s)", format_complex(c_).c_str());
      return buf;
    case Family::explicit_list:
      std::snprintf(buf, sizeof(buf), "list(n=%zu,deg=%lld)", support_.size(),
                    static_cast<long long>(support_.back()));
      return buf;
  }
  return "";
}

inline CoefficientSeries CoefficientSeries::load_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("coefficient CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  auto split = [](const std::string& row) {
    std::vector<std::string> cells;
    std::stringstream ss(row);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    return cells;
  };

  auto header = split(line);
  if (header.size() != 3 || header[0] != "k") {
    throw ConfigError("coefficient CSV header must be k,re,im or k,log_mag,phase");
  }
  bool log_form;
  if (header[1] == "log_mag" && header[2] == "phase") {
    log_form = true;
  } else if ((header[1] == "re" && header[2] == "im") ||
             (header[1] == "re_ak" && header[2] == "im_ak")) {
    log_form = false;
  } else {
    throw ConfigError("coefficient CSV header must be k,re,im or k,log_mag,phase");
  }

  std::vector<std::pair<std::int64_t, LogComplex>> coeffs;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split(line);
    if (cells.size() != 3) {
      throw ConfigError("coefficient CSV line " + std::to_string(line_no) + ": want 3 columns");
    }
    std::int64_t k = std::strtoll(cells[0].c_str(), nullptr, 10);
    double x = std::strtod(cells[1].c_str(), nullptr);
    double y = std::strtod(cells[2].c_str(), nullptr);
    if (log_form) {
      std::string low = cells[1];
      if (low == "-inf" || low == "\"-inf\"") x = detail::kNegInf;
      coeffs.emplace_back(k, LogComplex(x, y));
    } else {
      coeffs.emplace_back(k, LogComplex::from_complex({x, y}));
    }
  }
  return from_coefficients(std::move(coeffs));
}

}  // namespace fatoulab
