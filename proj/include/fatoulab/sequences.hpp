#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "errors.hpp"
#include "growth.hpp"
#include "leveled_real.hpp"
#include "series.hpp"

namespace fatoulab {

struct EvalOpts {
  int angular_samples = 1024;
  double refine_tol = 1e-10;
  double series_tol = 1e-12;
  EvalLimits limits;
};

namespace detail {

// Grid inequalities are float comparisons of independently computed sides;
// a relative slack keeps exact-equality cases (they do occur) from flapping.
inline bool leq_slack(double lhs, double rhs) {
  return lhs <= rhs + 1e-9 * std::max(1.0, std::fabs(rhs));
}
inline bool geq_slack(double lhs, double rhs) {
  return lhs >= rhs - 1e-9 * std::max(1.0, std::fabs(rhs));
}

/// Smallest index from which every later flag is set, -1 if the last flag
/// is clear (no such suffix).
inline int suffix_start(const std::vector<bool>& ok) {
  if (ok.empty()) return -1;
  int i = static_cast<int>(ok.size());
  while (i > 0 && ok[static_cast<std::size_t>(i) - 1]) --i;
  return i == static_cast<int>(ok.size()) ? -1 : i;
}

}  // namespace detail

// ---- growth curves -----------------------------------------------------------

enum class CurveMode { closed_form, exact, fitted, two_tier };

inline const char* curve_mode_name(CurveMode m) {
  switch (m) {
    case CurveMode::closed_form: return "closed_form";
    case CurveMode::exact: return "exact";
    case CurveMode::fitted: return "fitted";
    case CurveMode::two_tier: return "two_tier";
  }
  return "fitted";
}

/// log M(r) as a map u = log r -> log M, represented in the leveled tower so
/// the growth sequences can be iterated past double range. Closed forms stay
/// exact at every level; the exact mode evaluates the series directly and is
/// bounded by the evaluation ceiling; the fitted mode is the tail envelope
/// log M = sigma_hat * r^rho_hat. A two-tier curve uses direct evaluation
/// while the radius is reachable and hands off to the envelope beyond.
class GrowthCurve {
 public:
  static GrowthCurve closed_form(const CoefficientSeries& f) {
    if (!f.has_closed_form_log_M()) {
      throw std::invalid_argument("series has no closed-form maximum modulus");
    }
    GrowthCurve c;
    c.mode_ = CurveMode::closed_form;
    c.f_ = f;
    return c;
  }

  static GrowthCurve exact(const CoefficientSeries& f, const EvalOpts& opts = {}) {
    GrowthCurve c;
    c.mode_ = CurveMode::exact;
    c.f_ = f;
    c.opts_ = opts;
    return c;
  }

  static GrowthCurve fitted(double rho_hat, double log_sigma_hat) {
    if (!(rho_hat > 0.0) || !std::isfinite(rho_hat)) {
      throw FitRejected("fitted growth curve needs a positive finite order estimate");
    }
    GrowthCurve c;
    c.mode_ = CurveMode::fitted;
    c.rho_hat_ = rho_hat;
    c.log_sigma_hat_ = log_sigma_hat;
    return c;
  }

  /// Fit the tail envelope from a profile and validate it against direct
  /// evaluation on the largest profiled radii before accepting.
  static GrowthCurve two_tier(const CoefficientSeries& f, const GrowthProfile& profile,
                              double overlap_tol = 0.05, const EvalOpts& opts = {});

  LeveledReal log_M(const LeveledReal& u) const {
    switch (mode_) {
      case CurveMode::closed_form: return closed_form_level(u);
      case CurveMode::exact: return LeveledReal(exact_log_M(u));
      case CurveMode::fitted: return fitted_log_M(u);
      case CurveMode::two_tier:
        if (exact_tier_reachable(u)) return LeveledReal(exact_log_M(u));
        return fitted_log_M(u);
    }
    throw std::logic_error("unreachable curve mode");
  }

  CurveMode mode() const { return mode_; }
  double rho_hat() const { return rho_hat_; }
  double log_sigma_hat() const { return log_sigma_hat_; }

 private:
  CurveMode mode_ = CurveMode::fitted;
  std::optional<CoefficientSeries> f_;
  double rho_hat_ = 0.0;
  double log_sigma_hat_ = 0.0;
  EvalOpts opts_;

  static constexpr std::int64_t kTierProbeTerms = 100000;

  LeveledReal fitted_log_M(const LeveledReal& u) const {
    return u.mul(rho_hat_).add(log_sigma_hat_).exp();
  }

  LeveledReal closed_form_level(const LeveledReal& u) const {
    switch (f_->family()) {
      case Family::exp_series:
        return u.exp();
      case Family::cos_sqrt: {
        LeveledReal half = u.mul(0.5).exp();  // sqrt r
        if (half.is_level0() && half.stored() <= 350.0) {
          double x = half.stored();
          return LeveledReal(x - std::log(2.0) + std::log1p(std::exp(-2.0 * x)));
        }
        return half.add(-std::log(2.0));
      }
      case Family::monomial: {
        double log_c = std::log(std::abs(f_->param_c()));
        if (f_->param_n() == 0) return LeveledReal(log_c);
        return u.mul(static_cast<double>(f_->param_n())).add(log_c);
      }
      case Family::constant:
        return LeveledReal(std::log(std::abs(f_->param_c())));
      default:
        throw std::logic_error("no closed-form maximum modulus");
    }
  }

  bool exact_tier_reachable(const LeveledReal& u) const {
    if (!u.is_level0() || u.stored() > opts_.limits.max_log_r) return false;
    EvalLimits probe = opts_.limits;
    probe.max_terms = std::min(probe.max_terms, kTierProbeTerms);
    try {
      f_->truncation_index(u.stored(), opts_.series_tol, probe);
      return true;
    } catch (const TruncationUnavailable&) {
      return false;
    }
  }

  double exact_log_M(const LeveledReal& u) const {
    if (!u.is_level0() || u.stored() > opts_.limits.max_log_r) {
      throw EvaluationFailed("radius beyond direct-evaluation reach: log r = " + u.to_string());
    }
    return max_modulus(*f_, u.stored(), opts_.angular_samples, opts_.refine_tol, opts_.series_tol,
                       opts_.limits);
  }
};

/// Tail envelope of a profile: rho_hat = max of log log M / log r over the
/// tail, log_sigma_hat chosen so the envelope touches the tail from above.
inline GrowthCurve fit_growth_curve(const GrowthProfile& profile, double tail_window = 0.5) {
  if (profile.finite_support) {
    throw FitRejected("polynomial growth has order zero; no exponential envelope exists");
  }
  auto pts = detail::order_tail_points(profile, tail_window);
  if (pts.size() < 2) {
    throw FitRejected("tail envelope needs at least 2 usable samples, have " +
                      std::to_string(pts.size()));
  }
  double rho_hat = -std::numeric_limits<double>::infinity();
  for (const auto& p : pts) rho_hat = std::max(rho_hat, p.y / p.x);
  if (!(rho_hat > 0.0) || !std::isfinite(rho_hat)) {
    throw FitRejected("tail envelope slope is not positive");
  }
  double log_sigma_hat = -std::numeric_limits<double>::infinity();
  for (const auto& p : pts) log_sigma_hat = std::max(log_sigma_hat, p.y - rho_hat * p.x);
  return GrowthCurve::fitted(rho_hat, log_sigma_hat);
}

inline GrowthCurve GrowthCurve::two_tier(const CoefficientSeries& f, const GrowthProfile& profile,
                                         double overlap_tol, const EvalOpts& opts) {
  GrowthCurve fit = fit_growth_curve(profile);
  // The envelope must reproduce direct evaluation where the tiers overlap:
  // compare on the last few usable profile samples.
  int checked = 0;
  for (auto it = profile.samples.rbegin(); it != profile.samples.rend() && checked < 4; ++it) {
    if (!it->valid || it->log_M <= 0.0 || it->log_r <= 0.0) continue;
    double fitted = fit.fitted_log_M(LeveledReal(it->log_r)).to_double();
    double rel = std::fabs(fitted - it->log_M) / std::max(1.0, std::fabs(it->log_M));
    if (rel > overlap_tol) {
      throw FitRejected("fitted envelope disagrees with direct evaluation at log r = " +
                        std::to_string(it->log_r) + " (rel " + std::to_string(rel) + ")");
    }
    ++checked;
  }
  if (checked == 0) throw FitRejected("no overlap window to validate the fitted tier");
  GrowthCurve c;
  c.mode_ = CurveMode::two_tier;
  c.f_ = f;
  c.rho_hat_ = fit.rho_hat_;
  c.log_sigma_hat_ = fit.log_sigma_hat_;
  c.opts_ = opts;
  return c;
}

// ---- iterated radius sequences -------------------------------------------------

enum class SequenceVariant { half_alpha, quarter_alpha };

inline const char* sequence_variant_name(SequenceVariant v) {
  return v == SequenceVariant::half_alpha ? "half_alpha" : "quarter_alpha";
}

/// Companion sequences R_n, S_n: R advances through the maximum modulus of a
/// shrunk power of the previous radius, S through the maximum modulus itself.
/// property_ok[n-1] records the seed-propagation property at step n:
///   half_alpha:    S_n <= R_n^{1/(2 alpha)}
///   quarter_alpha: 2 S_n <= R_n^{1/(4 alpha)}
struct SequencePair {
  double alpha = 2.0;
  SequenceVariant variant = SequenceVariant::half_alpha;
  std::vector<LeveledReal> log_R;
  std::vector<LeveledReal> log_S;
  std::vector<bool> property_ok;
  int n1 = -1;         // 1-based step from which the property holds to the end
  bool verified = false;
  std::string note;    // set when the curve could not be iterated to n_max
};

inline SequencePair build_sequences(const GrowthCurve& curve, double log_R1, double log_S1,
                                    double alpha, SequenceVariant variant, int n_max = 8) {
  if (!(alpha > 1.0)) throw std::invalid_argument("alpha must exceed 1");
  if (n_max < 2 || n_max > 12) throw std::invalid_argument("n_max must lie in [2, 12]");
  if (!(log_R1 > 0.0) || !(log_S1 > 0.0)) {
    throw std::invalid_argument("seeds must satisfy log R1 > 0 and log S1 > 0");
  }
  const double shrink =
      variant == SequenceVariant::half_alpha ? 1.0 / (2.0 * alpha) : 1.0 / (4.0 * alpha);

  SequencePair seq;
  seq.alpha = alpha;
  seq.variant = variant;
  seq.log_R.push_back(LeveledReal(log_R1));
  seq.log_S.push_back(LeveledReal(log_S1));

  for (int n = 2; n <= n_max; ++n) {
    LeveledReal u_next, v_next;
    try {
      u_next = curve.log_M(seq.log_R.back().mul(shrink));
      v_next = curve.log_M(seq.log_S.back());
    } catch (const std::exception& e) {
      seq.note = "iteration stopped before n = " + std::to_string(n) + ": " + e.what();
      break;
    }
    if (n == 2 && (LeveledReal::compare(u_next, seq.log_R.back()) < 0 ||
                   LeveledReal::compare(v_next, seq.log_S.back()) < 0)) {
      throw SeedTooSmall("first iterate moved backwards: the seeds sit below the expansion "
                         "threshold of the growth curve");
    }
    seq.log_R.push_back(u_next);
    seq.log_S.push_back(v_next);
  }

  const double ln2 = std::log(2.0);
  for (std::size_t i = 0; i < seq.log_R.size(); ++i) {
    LeveledReal lhs = variant == SequenceVariant::half_alpha ? seq.log_S[i] : seq.log_S[i].add(ln2);
    LeveledReal rhs = seq.log_R[i].mul(shrink);
    seq.property_ok.push_back(LeveledReal::compare(lhs, rhs) <= 0);
  }
  int s = detail::suffix_start(seq.property_ok);
  seq.n1 = s >= 0 ? s + 1 : -1;
  seq.verified = s >= 0;
  return seq;
}

// ---- max-term bound tables -----------------------------------------------------

struct BoundRow {
  std::string label;  // "mu_bound" or "square_bound"
  double log_r = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

struct MaxTermBounds {
  double K = 0.0;             // log max-term at the witness radius, at least 2
  double log_s_witness = 0.0; // radius whose max term fixes K
  double log_s0 = 0.0;        // doubled-radius bound holds on the grid from here
  double log_s1 = 0.0;        // squared-radius bound holds on the grid from here
  std::vector<BoundRow> rows;
};

/// Tables two classical max-term inequalities on a radius grid:
///   mu_bound:     log mu(2r) <= nu(2r) log(2r) + K      (K = log mu(s) >= 2, s >= 1)
///   square_bound: log mu(r) + nu(r) log r <= log M(r^2)
/// K is the smallest grid candidate whose violations end before the grid
/// does. Throws NotSatisfiedOnGrid when either family of rows fails through
/// the end of the grid.
inline MaxTermBounds check_max_term_bounds(const CoefficientSeries& f, const GridSpec& grid,
                                           const EvalOpts& opts = {}) {
  if (grid.points < 2) throw std::invalid_argument("bound grid needs at least 2 points");
  const double ln2 = std::log(2.0);
  const int n = grid.points;

  std::vector<double> xs(static_cast<std::size_t>(n));
  std::vector<double> mu_at(static_cast<std::size_t>(n)), mu_2r(static_cast<std::size_t>(n));
  std::vector<double> nu_at(static_cast<std::size_t>(n)), nu_2r(static_cast<std::size_t>(n));
  std::vector<double> logM_sq(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    std::size_t i = static_cast<std::size_t>(j);
    xs[i] = grid_point(grid, j);
    MaxTermResult base = max_term(f, xs[i], opts.limits);
    MaxTermResult dbl = max_term(f, xs[i] + ln2, opts.limits);
    mu_at[i] = base.log_mu;
    nu_at[i] = static_cast<double>(base.nu);
    mu_2r[i] = dbl.log_mu;
    nu_2r[i] = static_cast<double>(dbl.nu);
    logM_sq[i] = max_modulus(f, 2.0 * xs[i], opts.angular_samples, opts.refine_tol,
                             opts.series_tol, opts.limits);
  }

  MaxTermBounds out;
  bool found = false;
  for (int j0 = 0; j0 < n && !found; ++j0) {
    std::size_t i0 = static_cast<std::size_t>(j0);
    if (xs[i0] < 0.0 || mu_at[i0] < 2.0) continue;
    double K = mu_at[i0];
    int hold_from = -1;
    for (int j = n - 1; j >= j0; --j) {
      std::size_t i = static_cast<std::size_t>(j);
      double rhs = nu_2r[i] * (xs[i] + ln2) + K;
      if (detail::leq_slack(mu_2r[i], rhs)) {
        hold_from = j;
      } else {
        break;
      }
    }
    if (hold_from >= 0) {
      out.K = K;
      out.log_s_witness = xs[i0];
      out.log_s0 = xs[static_cast<std::size_t>(hold_from)];
      found = true;
    }
  }
  if (!found) {
    throw NotSatisfiedOnGrid(
        "doubled-radius max-term bound fails through the end of the grid; largest violating "
        "log-radius = " + std::to_string(xs.back()));
  }

  std::vector<bool> sq_ok(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    std::size_t i = static_cast<std::size_t>(j);
    double lhs = mu_at[i] + nu_at[i] * xs[i];
    sq_ok[i] = detail::leq_slack(lhs, logM_sq[i]);
  }
  int s1_idx = detail::suffix_start(sq_ok);
  if (s1_idx < 0) {
    int last_bad = n - 1;
    throw NotSatisfiedOnGrid(
        "squared-radius max-term bound fails through the end of the grid; largest violating "
        "log-radius = " + std::to_string(xs[static_cast<std::size_t>(last_bad)]));
  }
  out.log_s1 = xs[static_cast<std::size_t>(s1_idx)];

  for (int j = 0; j < n; ++j) {
    std::size_t i = static_cast<std::size_t>(j);
    double rhs = nu_2r[i] * (xs[i] + ln2) + out.K;
    out.rows.push_back({"mu_bound", xs[i], mu_2r[i], rhs, detail::leq_slack(mu_2r[i], rhs)});
  }
  for (int j = 0; j < n; ++j) {
    std::size_t i = static_cast<std::size_t>(j);
    double lhs = mu_at[i] + nu_at[i] * xs[i];
    out.rows.push_back({"square_bound", xs[i], lhs, logM_sq[i], sq_ok[i]});
  }
  return out;
}

// ---- capped-exponent records ----------------------------------------------------

struct CappedExponentRecord {
  int n = 0;
  double log_S = 0.0;
  double log_R = 0.0;
  double nu_quarter = 0.0;  // central index at R_n^{1/(4 alpha)}
  double log_M_4S2 = 0.0;   // log M(4 S_n^2)
  double b = 0.0;           // nu_quarter / log_M_4S2^2
  double l = 0.0;           // exponent at which (8 S_n)^{2l} reaches the target radius
  double k = 0.0;           // min of l and the uncapped ratio b / nu(target)
  double nu_capped = 0.0;   // central index at (8 S_n)^{2k}
  double a = 0.0;           // b / nu_capped (inf when nu_capped = 0)
  bool holds = false;       // k <= a
};

struct CappedExponentReport {
  double alpha = 2.0;
  double b_target = 0.0;
  int requested = 0;
  std::vector<CappedExponentRecord> records;
  std::string notice;  // nonempty when trailing records were skipped
};

/// Per-step exponent budget: b_n measures how much central index the step has
/// to spend per unit of squared growth, l_n is the exponent that would land
/// the capped radius (8 S_n)^{2 k} exactly on the common target radius, and
/// k_n = min caps the spend. The defining quantities make k_n <= a_n an
/// invariant: shrinking the radius can only shrink the central index in the
/// denominator of a_n. Records whose maximum modulus is beyond the
/// evaluation budget are skipped with a notice rather than estimated.
inline CappedExponentReport capped_exponent_records(const CoefficientSeries& f,
                                                    const SequencePair& seq, double b_target,
                                                    const EvalOpts& opts = {}) {
  if (!(b_target > 1.0)) throw std::invalid_argument("b_target must exceed 1");
  const double inf = std::numeric_limits<double>::infinity();
  const double ln4 = std::log(4.0);
  const double ln8 = std::log(8.0);

  CappedExponentReport rep;
  rep.alpha = seq.alpha;
  rep.b_target = b_target;
  rep.requested = static_cast<int>(seq.log_R.size());

  double nu_target = static_cast<double>(max_term(f, std::log(b_target), opts.limits).nu);

  for (std::size_t i = 0; i < seq.log_R.size(); ++i) {
    int n = static_cast<int>(i) + 1;
    if (!seq.log_R[i].is_level0() || !seq.log_S[i].is_level0()) {
      rep.notice = "records from n = " + std::to_string(n) +
                   " skipped: radii exceed double range";
      break;
    }
    CappedExponentRecord rec;
    rec.n = n;
    rec.log_R = seq.log_R[i].stored();
    rec.log_S = seq.log_S[i].stored();
    try {
      rec.nu_quarter = static_cast<double>(
          max_term(f, rec.log_R / (4.0 * seq.alpha), opts.limits).nu);
      rec.log_M_4S2 = max_modulus(f, ln4 + 2.0 * rec.log_S, opts.angular_samples,
                                  opts.refine_tol, opts.series_tol, opts.limits);
    } catch (const TruncationUnavailable& e) {
      rep.notice = "records from n = " + std::to_string(n) + " skipped: " + e.what();
      break;
    }
    if (!(rec.log_M_4S2 > 0.0)) {
      rep.notice = "records from n = " + std::to_string(n) +
                   " skipped: maximum modulus has not left the unit scale";
      break;
    }
    rec.b = rec.nu_quarter / (rec.log_M_4S2 * rec.log_M_4S2);
    rec.l = std::log(b_target) / (2.0 * (ln8 + rec.log_S));
    double a0;
    if (rec.b == 0.0) {
      a0 = 0.0;
    } else {
      a0 = nu_target > 0.0 ? rec.b / nu_target : inf;
    }
    rec.k = std::min(a0, rec.l);
    rec.nu_capped = static_cast<double>(
        max_term(f, 2.0 * rec.k * (ln8 + rec.log_S), opts.limits).nu);
    if (rec.b == 0.0) {
      rec.a = 0.0;
    } else {
      rec.a = rec.nu_capped > 0.0 ? rec.b / rec.nu_capped : inf;
    }
    rec.holds = rec.k <= rec.a;
    rep.records.push_back(rec);
  }
  return rep;
}

// ---- central-index bound over the records ---------------------------------------

struct CentralIndexBoundRow {
  int n = 0;
  double lhs_nu = 0.0;  // central index at 2 S_n
  double rhs = 0.0;     // a_n * nu_capped * log(capped radius) / (4 alpha)
  bool holds = false;
};

struct CentralIndexBoundReport {
  double alpha = 2.0;
  std::vector<CentralIndexBoundRow> rows;
  int n1 = -1;  // 1-based record from which the bound holds to the end
};

/// The asymptotic central-index bound over the computed records. This is an
/// eventual statement: it throws NotSatisfiedOnGrid when no trailing run of
/// records satisfies it, which is the honest outcome at directly computable
/// scales for most seeds.
inline CentralIndexBoundReport check_central_index_bound(const CoefficientSeries& f,
                                                         const CappedExponentReport& recs,
                                                         const EvalOpts& opts = {}) {
  if (recs.records.empty()) throw std::invalid_argument("no records to check");
  const double ln2 = std::log(2.0);
  const double ln8 = std::log(8.0);

  CentralIndexBoundReport rep;
  rep.alpha = recs.alpha;
  std::vector<bool> ok;
  for (const auto& rec : recs.records) {
    CentralIndexBoundRow row;
    row.n = rec.n;
    row.lhs_nu = static_cast<double>(max_term(f, ln2 + rec.log_S, opts.limits).nu);
    double log_capped_radius = 2.0 * rec.k * (ln8 + rec.log_S);
    row.rhs = rec.a * rec.nu_capped * log_capped_radius / (4.0 * recs.alpha);
    row.holds = detail::leq_slack(row.lhs_nu, row.rhs);
    ok.push_back(row.holds);
    rep.rows.push_back(row);
  }
  int s = detail::suffix_start(ok);
  if (s < 0) {
    throw NotSatisfiedOnGrid("central-index bound fails through the last record; largest "
                             "violating n = " + std::to_string(rep.rows.back().n));
  }
  rep.n1 = s + 1;
  return rep;
}

// ---- iterated-log growth comparison ----------------------------------------------

struct LogRadiusGrowthRow {
  double u = 0.0;          // log r
  double log_inner = 0.0;  // log M(r^{1/(2m)})
  double lhs_log = 0.0;    // log M at the log-scaled radius
  double rhs_log = 0.0;
  bool holds = false;
};

struct LogRadiusGrowthReport {
  int m = 2;
  std::vector<LogRadiusGrowthRow> rows;
  double u_star = 0.0;  // grid point from which the comparison holds to the end
};

/// Compares maximum moduli after a log-scale substitution: with u = log r,
///   lhs = log M( (1/(2m)) r^{1/(2m)} log r )
///   rhs = m ( log(1/(2m)) + log M(r^{1/(2m)})/(2m) + log log M(r^{1/(2m)}) )
/// Rows need log M(r^{1/(2m)}) > 1 to be meaningful; rows below that fail.
/// Throws NotSatisfiedOnGrid when no trailing run of grid points satisfies
/// the comparison.
inline LogRadiusGrowthReport check_log_radius_growth(const CoefficientSeries& f, int m,
                                                     const GridSpec& grid,
                                                     const EvalOpts& opts = {}) {
  if (m < 2) throw std::invalid_argument("m must be at least 2");
  if (grid.points < 2) throw std::invalid_argument("growth grid needs at least 2 points");
  if (!(grid.log_r_min > 0.0)) {
    throw std::invalid_argument("growth grid must have log r > 0 throughout");
  }
  const double log_2m = std::log(2.0 * m);

  LogRadiusGrowthReport rep;
  rep.m = m;
  std::vector<bool> ok;
  for (int j = 0; j < grid.points; ++j) {
    LogRadiusGrowthRow row;
    row.u = grid_point(grid, j);
    row.log_inner = max_modulus(f, row.u / (2.0 * m), opts.angular_samples, opts.refine_tol,
                                opts.series_tol, opts.limits);
    row.lhs_log = max_modulus(f, -log_2m + row.u / (2.0 * m) + std::log(row.u),
                              opts.angular_samples, opts.refine_tol, opts.series_tol,
                              opts.limits);
    if (row.log_inner > 0.0) {
      row.rhs_log = m * (-log_2m + row.log_inner / (2.0 * m) + std::log(row.log_inner));
      row.holds = detail::geq_slack(row.lhs_log, row.rhs_log);
    } else {
      row.rhs_log = std::numeric_limits<double>::quiet_NaN();
      row.holds = false;
    }
    ok.push_back(row.holds);
    rep.rows.push_back(row);
  }
  int s = detail::suffix_start(ok);
  if (s < 0) {
    throw NotSatisfiedOnGrid("log-radius growth comparison fails through the end of the grid; "
                             "largest violating log-radius = " +
                             std::to_string(rep.rows.back().u));
  }
  rep.u_star = rep.rows[static_cast<std::size_t>(s)].u;
  return rep;
}

// ---- minimum/maximum modulus crossing --------------------------------------------

/// Radius sigma in [r, r^alpha] where the minimum modulus climbs back to
/// M(r): bisection on log L(sigma) - log M(r). Returns the crossing log-
/// radius, log r itself when the circle minimum already matches (single-term
/// series), or nullopt when the minimum stays below M(r) across the whole
/// window (entire functions with a persistent small-modulus direction, such
/// as exp).
inline std::optional<double> find_min_max_crossing(const CoefficientSeries& f, double log_r,
                                                   double alpha, const EvalOpts& opts = {},
                                                   double tol = 1e-8) {
  if (!(alpha > 1.0)) throw std::invalid_argument("alpha must exceed 1");
  if (!(log_r > 0.0)) throw std::invalid_argument("crossing search needs log r > 0");
  double target = max_modulus(f, log_r, opts.angular_samples, opts.refine_tol, opts.series_tol,
                              opts.limits);
  if (f.finite_support() && f.first_nonzero_index() == f.degree()) {
    return log_r;  // |f| is constant on circles: L = M at the base radius already
  }
  auto g = [&](double x) {
    return min_modulus(f, x, opts.angular_samples, opts.refine_tol, opts.series_tol,
                       opts.limits) - target;
  };
  double lo = log_r, hi = alpha * log_r;
  if (g(lo) >= 0.0) return lo;
  if (g(hi) < 0.0) return std::nullopt;
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    if (g(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// ---- power comparison of maximum moduli ------------------------------------------

struct MaxModulusPowerRow {
  double log_r = 0.0;
  double lhs = 0.0;  // log M(r^{2 alpha})
  double rhs = 0.0;  // 2 alpha log M(r)
  bool holds = false;
};

struct MaxModulusPowerReport {
  double alpha = 2.0;
  std::vector<MaxModulusPowerRow> rows;
  double log_r_star = 0.0;  // grid point from which the comparison holds to the end
};

/// Checks log M(r^{2 alpha}) >= 2 alpha log M(r) on a grid. Fails near r = 1
/// for any function with M(1) > 1 and kicks in once M(r) outruns the power
/// of the radius; throws NotSatisfiedOnGrid when that never happens on the
/// grid.
inline MaxModulusPowerReport check_max_modulus_power(const CoefficientSeries& f,
                                                     const GridSpec& grid, double alpha,
                                                     const EvalOpts& opts = {}) {
  if (!(alpha > 1.0)) throw std::invalid_argument("alpha must exceed 1");
  if (grid.points < 2) throw std::invalid_argument("power grid needs at least 2 points");

  MaxModulusPowerReport rep;
  rep.alpha = alpha;
  std::vector<bool> ok;
  for (int j = 0; j < grid.points; ++j) {
    MaxModulusPowerRow row;
    row.log_r = grid_point(grid, j);
    row.lhs = max_modulus(f, 2.0 * alpha * row.log_r, opts.angular_samples, opts.refine_tol,
                          opts.series_tol, opts.limits);
    row.rhs = 2.0 * alpha * max_modulus(f, row.log_r, opts.angular_samples, opts.refine_tol,
                                        opts.series_tol, opts.limits);
    row.holds = detail::geq_slack(row.lhs, row.rhs);
    ok.push_back(row.holds);
    rep.rows.push_back(row);
  }
  int s = detail::suffix_start(ok);
  if (s < 0) {
    throw NotSatisfiedOnGrid("power comparison of maximum moduli fails through the end of the "
                             "grid; largest violating log-radius = " +
                             std::to_string(rep.rows.back().log_r));
  }
  rep.log_r_star = rep.rows[static_cast<std::size_t>(s)].log_r;
  return rep;
}

// ---- nested sampling circles ------------------------------------------------------

struct NestedCircles {
  int n = 0;
  double alpha = 2.0;
  LeveledReal log_T;    // sampling circle: radius S_n
  LeveledReal log_ell;  // inflated reference radius (1/(2 alpha)) R_n^{1/(2 alpha)} log R_n
  LeveledReal log_T1;   // crossing circle: minimum modulus reaches M(ell)
  LeveledReal log_T2;   // outer circle: ell^alpha
  bool t1_exact = false;
  std::string note;  // set when T1 is a bracket midpoint rather than a crossing
};

/// The three concentric circles used at step n: the sampling circle at S_n,
/// the crossing circle inside [ell, ell^alpha], and the outer circle at
/// ell^alpha. The crossing is located exactly while ell^alpha is within
/// direct-evaluation reach; beyond that the bracket midpoint stands in,
/// labeled as an estimate.
inline NestedCircles nested_circle_radii(const CoefficientSeries& f, const SequencePair& seq,
                                         int n, const EvalOpts& opts = {}) {
  if (n < 1 || n > static_cast<int>(seq.log_R.size())) {
    throw std::out_of_range("sequence step " + std::to_string(n) + " was not computed");
  }
  const double alpha = seq.alpha;
  const LeveledReal u = seq.log_R[static_cast<std::size_t>(n - 1)];

  NestedCircles c;
  c.n = n;
  c.alpha = alpha;
  c.log_T = seq.log_S[static_cast<std::size_t>(n - 1)];
  c.log_ell = u.mul(1.0 / (2.0 * alpha)).add(u.log()).add(-std::log(2.0 * alpha));
  c.log_T2 = c.log_ell.mul(alpha);

  bool reachable = c.log_ell.is_level0() && c.log_ell.stored() > 0.0 &&
                   alpha * c.log_ell.stored() <= opts.limits.max_log_r;
  if (reachable) {
    try {
      auto x = find_min_max_crossing(f, c.log_ell.stored(), alpha, opts);
      if (x.has_value()) {
        c.log_T1 = LeveledReal(*x);
        c.t1_exact = true;
      } else {
        c.log_T1 = c.log_ell.mul(0.5 * (1.0 + alpha));
        c.note = "minimum modulus never reaches M(ell) inside the window; midpoint estimate";
      }
    } catch (const std::exception& e) {
      c.log_T1 = c.log_ell.mul(0.5 * (1.0 + alpha));
      c.note = std::string("crossing search failed (") + e.what() + "); midpoint estimate";
    }
  } else {
    c.log_T1 = c.log_ell.mul(0.5 * (1.0 + alpha));
    c.note = "window beyond direct-evaluation reach; midpoint estimate";
  }
  return c;
}

// ---- slow-growth induction ---------------------------------------------------------

struct SeedThresholds {
  double log_s0 = 0.0;
  double log_s1 = 0.0;
  double log_r1 = 0.0;
  double log_r2 = 0.0;
  double K = 2.0;
};

struct SlowGrowthReport {
  int n_lambda_rho = 0;           // smallest integer exceeding rho / lambda
  bool seed_radius_ok = false;    // 2 S_1 dominates every threshold radius
  bool seed_margin_ok = false;    // R_1^{1/(4 alpha)} >= 2 S_1
  bool seed_max_term_ok = false;  // log mu(R_1^{1/(4 alpha)}) clears 2 log 2 + K
  std::vector<bool> induction_ok; // log S_n / (2 alpha) <= log R_n / (16 alpha^4 n_lr)
  int n1 = -1;
  bool verified = false;          // seeds and a trailing induction run both hold
};

/// For positive lower order the two sequences stay polynomially coupled:
/// S_n^{1/(2 alpha)} <= R_n^{1/(16 alpha^4 n)} with n the smallest integer
/// above rho / lambda. Checks the seed conditions and that coupling on the
/// computed steps.
inline SlowGrowthReport slow_growth_check(const CoefficientSeries& f, double rho, double lambda,
                                          const SequencePair& seq,
                                          const SeedThresholds& thr = {},
                                          const EvalLimits& limits = {}) {
  if (!(lambda > 0.0)) {
    throw UndefinedForZeroLowerOrder("lower order must be positive, have " +
                                     std::to_string(lambda));
  }
  if (!std::isfinite(rho) || rho < lambda) {
    throw std::invalid_argument("order must satisfy rho >= lambda");
  }
  if (seq.log_R.empty()) throw std::invalid_argument("sequences have no computed steps");

  const double ln2 = std::log(2.0);
  SlowGrowthReport rep;
  rep.n_lambda_rho = static_cast<int>(std::floor(rho / lambda)) + 1;

  if (seq.log_R.front().is_level0() && seq.log_S.front().is_level0()) {
    double u1 = seq.log_R.front().stored();
    double v1 = seq.log_S.front().stored();
    double thr_max = std::max(std::max(thr.log_s0, thr.log_s1), std::max(thr.log_r1, thr.log_r2));
    rep.seed_radius_ok = ln2 + v1 >= thr_max;
    rep.seed_margin_ok = u1 / (4.0 * seq.alpha) >= ln2 + v1;
    double log_mu = max_term(f, u1 / (4.0 * seq.alpha), limits).log_mu;
    rep.seed_max_term_ok = log_mu >= 2.0 * ln2 + thr.K;
  }

  const double c = 1.0 / (16.0 * std::pow(seq.alpha, 4) * rep.n_lambda_rho);
  for (std::size_t i = 0; i < seq.log_R.size(); ++i) {
    LeveledReal lhs = seq.log_S[i].mul(1.0 / (2.0 * seq.alpha));
    LeveledReal rhs = seq.log_R[i].mul(c);
    rep.induction_ok.push_back(LeveledReal::compare(lhs, rhs) <= 0);
  }
  int s = detail::suffix_start(rep.induction_ok);
  rep.n1 = s >= 0 ? s + 1 : -1;
  rep.verified = rep.seed_radius_ok && rep.seed_margin_ok && rep.seed_max_term_ok && s >= 0;
  return rep;
}

}  // namespace fatoulab
