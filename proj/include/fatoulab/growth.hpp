#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "errors.hpp"
#include "parallel.hpp"
#include "series.hpp"

namespace fatoulab {

struct MaxTermResult {
  double log_mu;     // log of the largest term |a_k| r^k
  std::int64_t nu;   // largest maximizing index (ties broken upward)
};

namespace detail {

/// Near-equal tie window for the central index: lgamma and log round
/// differently, so exact mathematical ties (e.g. r = k+1 for exp) land a few
/// ulps apart and must still break upward.
constexpr double kTieRelTol = 1e-12;

}  // namespace detail

/// Maximum term and central index at radius r. Exact for every oracle: the
/// term sequence is log-concave in support rank from concave_rank_start on,
/// so an exponential bracket plus ternary descent finds the peak in O(log)
/// probes; the leading ranks are scanned directly.
inline MaxTermResult max_term(const CoefficientSeries& f, double log_r,
                              const EvalLimits& lim = {}) {
  if (!std::isfinite(log_r)) throw std::invalid_argument("log_r must be finite");
  if (log_r > lim.max_log_r) {
    throw TruncationUnavailable("radius beyond exact-evaluation ceiling: log r = " +
                                std::to_string(log_r));
  }

  auto term = [&](std::int64_t rank) {
    return f.coeff_log(f.support_index(rank)).log_mag +
           static_cast<double>(f.support_index(rank)) * log_r;
  };

  std::vector<std::int64_t> candidates;
  if (f.finite_support()) {
    std::int64_t last = f.rank_for_bound(f.degree());
    for (std::int64_t r = 0; r <= last; ++r) candidates.push_back(r);
  } else {
    const std::int64_t cstart = f.concave_rank_start();
    for (std::int64_t r = 0; r < cstart + 2; ++r) candidates.push_back(r);

    // Exponential bracket over the concave region.
    std::int64_t prev2 = cstart, prev = cstart;
    double t_prev = term(cstart);
    std::int64_t step = 1;
    std::int64_t hi;
    while (true) {
      if (step > (std::int64_t{1} << 61)) {
        throw TruncationUnavailable("central index exceeds integer range at log r = " +
                                    std::to_string(log_r));
      }
      std::int64_t probe = cstart + step;
      double t_probe = term(probe);
      if (t_probe < t_prev) {
        hi = probe;
        break;
      }
      prev2 = prev;
      prev = probe;
      t_prev = t_probe;
      step *= 2;
    }
    std::int64_t lo = prev2;

    while (hi - lo > 24) {
      std::int64_t m1 = lo + (hi - lo) / 3;
      std::int64_t m2 = hi - (hi - lo) / 3;
      if (term(m1) < term(m2)) {
        lo = m1 + 1;
      } else {
        hi = m2;
      }
    }
    for (std::int64_t r = std::max(cstart, lo - 2); r <= hi + 2; ++r) candidates.push_back(r);
  }

  double best = detail::kNegInf;
  for (std::int64_t r : candidates) {
    double t = term(r);
    if (t > best) best = t;
  }
  double tol = detail::kTieRelTol * std::max(1.0, std::fabs(best));
  std::int64_t nu = -1;
  for (std::int64_t r : candidates) {
    if (term(r) >= best - tol) {
      std::int64_t k = f.support_index(r);
      if (k > nu) nu = k;
    }
  }
  return {best, nu};
}

namespace detail {

inline double golden_extremum(const CircleEvaluator& circle, double lo, double hi,
                              double refine_tol, bool maximize, double coarse_best) {
  const double inv_phi = 0.6180339887498949;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = circle.eval(x1).log_mag;
  double f2 = circle.eval(x2).log_mag;
  double best = coarse_best;
  auto better = [&](double a, double b) { return maximize ? a > b : a < b; };
  if (better(f1, best)) best = f1;
  if (better(f2, best)) best = f2;
  while (hi - lo > refine_tol) {
    if (better(f1, f2)) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = circle.eval(x1).log_mag;
      if (better(f1, best)) best = f1;
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = circle.eval(x2).log_mag;
      if (better(f2, best)) best = f2;
    }
  }
  return best;
}

inline double circle_extremum(const CoefficientSeries& f, double log_r, int angular_samples,
                              double refine_tol, bool maximize, double series_tol,
                              const EvalLimits& lim) {
  if (angular_samples < 64) throw std::invalid_argument("angular_samples must be >= 64");

  // Single-term series have constant modulus on circles; return it exactly.
  std::int64_t k0 = f.first_nonzero_index();
  if (f.finite_support() && f.next_nonzero_index(k0) < 0) {
    return f.coeff_log(k0).log_mag + static_cast<double>(k0) * log_r;
  }

  CircleEvaluator circle(f, log_r, series_tol, lim, /*resolve_deep_cancellation=*/!maximize);
  const double step = kTwoPi / angular_samples;
  double best = maximize ? kNegInf : std::numeric_limits<double>::infinity();
  int best_j = 0;
  for (int j = 0; j < angular_samples; ++j) {
    double v = circle.eval(-kPi + step * j).log_mag;
    if (maximize ? (v > best) : (v < best)) {
      best = v;
      best_j = j;
    }
  }
  if (!maximize && best == kNegInf) return kNegInf;
  double lo = -kPi + step * (best_j - 1);
  double hi = -kPi + step * (best_j + 1);
  return golden_extremum(circle, lo, hi, refine_tol, maximize, best);
}

}  // namespace detail

/// M(r, f): coarse angular scan plus golden-section refinement.
inline double max_modulus(const CoefficientSeries& f, double log_r, int angular_samples = 1024,
                          double refine_tol = 1e-10, double series_tol = 1e-12,
                          const EvalLimits& lim = {}) {
  return detail::circle_extremum(f, log_r, angular_samples, refine_tol, true, series_tol, lim);
}

namespace detail {

/// A refined minimum more than this far (in log) below the max term has
/// cancelled past what the escalated summation can certify; it is reported
/// as a zero. e^-64 sits an order of magnitude above the quadruple-precision
/// rounding floor of the deepest sums this library evaluates.
constexpr double kZeroCancellationLog = -64.0;

}  // namespace detail

/// L(r, f): as max_modulus with minimization. Minima indistinguishable from
/// zero at working precision (relative to the max term) are reported as
/// -inf: a zero of f on or near the circle.
inline double min_modulus(const CoefficientSeries& f, double log_r, int angular_samples = 1024,
                          double refine_tol = 1e-10, double series_tol = 1e-12,
                          const EvalLimits& lim = {}) {
  double v = detail::circle_extremum(f, log_r, angular_samples, refine_tol, false, series_tol, lim);
  if (v == detail::kNegInf) return v;
  double log_mu = max_term(f, log_r, lim).log_mu;
  return v - log_mu < detail::kZeroCancellationLog ? detail::kNegInf : v;
}

struct GridSpec {
  double log_r_min = 0.0;
  double log_r_max = 5.0;
  int points = 64;
};

inline double grid_point(const GridSpec& g, int j) {
  if (g.points <= 1) return g.log_r_min;
  return g.log_r_min + (g.log_r_max - g.log_r_min) * j / (g.points - 1);
}

struct GrowthSample {
  double log_r = 0.0;
  double log_M = 0.0;
  double log_L = 0.0;  // -inf if a zero of f lies on the circle
  double log_mu = 0.0;
  std::int64_t nu = 0;
  bool valid = false;
  std::string error;
};

struct GrowthProfile {
  GridSpec grid;
  bool finite_support = false;
  std::vector<GrowthSample> samples;

  int valid_count() const {
    int n = 0;
    for (const auto& s : samples) n += s.valid ? 1 : 0;
    return n;
  }
};

struct ProfileOpts {
  int angular_samples = 1024;
  double refine_tol = 1e-10;
  double series_tol = 1e-12;
  int threads = 0;  // 0 = resolve from environment/hardware
  EvalLimits limits;
};

/// Samples log M, log L, log mu, nu over a geometric radius grid. Per-sample
/// failures mark the sample invalid instead of aborting the profile.
inline GrowthProfile growth_profile(const CoefficientSeries& f, const GridSpec& grid,
                                    const ProfileOpts& opts = {}) {
  if (grid.points < 1) throw std::invalid_argument("grid must have at least one point");
  GrowthProfile profile;
  profile.grid = grid;
  profile.finite_support = f.finite_support();
  profile.samples.resize(static_cast<std::size_t>(grid.points));

  parallel_for(static_cast<std::size_t>(grid.points), opts.threads, [&](std::size_t j) {
    GrowthSample& s = profile.samples[j];
    s.log_r = grid_point(grid, static_cast<int>(j));
    try {
      MaxTermResult mt = max_term(f, s.log_r, opts.limits);
      s.log_mu = mt.log_mu;
      s.nu = mt.nu;
      s.log_M = max_modulus(f, s.log_r, opts.angular_samples, opts.refine_tol, opts.series_tol,
                            opts.limits);
      s.log_L = min_modulus(f, s.log_r, opts.angular_samples, opts.refine_tol, opts.series_tol,
                            opts.limits);
      s.valid = true;
    } catch (const std::exception& e) {
      s.valid = false;
      s.error = e.what();
    }
  });
  return profile;
}

enum class TypeClass { minimal, mean, maximal, undefined };

inline const char* type_class_name(TypeClass c) {
  switch (c) {
    case TypeClass::minimal: return "minimal";
    case TypeClass::mean: return "mean";
    case TypeClass::maximal: return "maximal";
    case TypeClass::undefined: return "undefined";
  }
  return "undefined";
}

struct GrowthExponents {
  double rho = 0.0;
  double lambda = 0.0;
  double sigma_type = 0.0;
  TypeClass type_class = TypeClass::undefined;
  double tail_window = 0.5;
  double fit_slope = 0.0;      // least-squares slope of log log M vs log r
  double fit_intercept = 0.0;  // intercept of the same fit
  double fit_rms = 0.0;
  int used_samples = 0;
  bool finite_support = false;
};

namespace detail {

struct TailPoint {
  double x;  // log r
  double y;  // log log M
};

inline std::vector<TailPoint> order_tail_points(const GrowthProfile& p, double tail_window) {
  std::vector<TailPoint> pts;
  for (const auto& s : p.samples) {
    if (s.valid && s.log_M > 0.0 && s.log_r > 0.0) {
      pts.push_back({s.log_r, std::log(s.log_M)});
    }
  }
  std::size_t keep = std::max<std::size_t>(2, static_cast<std::size_t>(
                                                  std::ceil(pts.size() * tail_window)));
  if (keep < pts.size()) pts.erase(pts.begin(), pts.end() - static_cast<std::ptrdiff_t>(keep));
  return pts;
}

}  // namespace detail

/// Order rho = sup and lower order lambda = inf of log log M / log r over the
/// tail window; the least-squares slope is attached as a diagnostic only,
/// since a fit would average limsup and liminf away. Finite-support series
/// are polynomials and get rho = lambda = 0 exactly.
inline GrowthExponents estimate_order(const GrowthProfile& profile, double tail_window = 0.5) {
  GrowthExponents out;
  out.tail_window = tail_window;
  out.finite_support = profile.finite_support;

  auto pts = detail::order_tail_points(profile, tail_window);
  if (!profile.finite_support && (profile.valid_count() < 16 || pts.size() < 2)) {
    throw InsufficientSamples("estimate_order needs at least 16 valid samples, have " +
                              std::to_string(profile.valid_count()));
  }

  if (pts.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    double rho = -std::numeric_limits<double>::infinity();
    double lambda = std::numeric_limits<double>::infinity();
    for (const auto& p : pts) {
      double q = p.y / p.x;
      rho = std::max(rho, q);
      lambda = std::min(lambda, q);
      sx += p.x;
      sy += p.y;
      sxx += p.x * p.x;
      sxy += p.x * p.y;
    }
    double n = static_cast<double>(pts.size());
    double denom = n * sxx - sx * sx;
    out.fit_slope = denom != 0.0 ? (n * sxy - sx * sy) / denom : 0.0;
    out.fit_intercept = (sy - out.fit_slope * sx) / n;
    double rss = 0;
    for (const auto& p : pts) {
      double e = p.y - (out.fit_intercept + out.fit_slope * p.x);
      rss += e * e;
    }
    out.fit_rms = std::sqrt(rss / n);
    out.used_samples = static_cast<int>(pts.size());
    out.rho = rho;
    out.lambda = lambda;
  }

  if (profile.finite_support) {
    out.rho = 0.0;
    out.lambda = 0.0;
  }
  return out;
}

struct TypeOpts {
  double tail_window = 0.5;
  double minimal_threshold = 0.01;  // sigma at or below this classifies as minimal
  double maximal_threshold = 100.0;
};

/// Type sigma = sup of log M / r^rho over the tail window, computed in
/// log-space, with the {minimal, mean, maximal} classification.
inline void estimate_type(const GrowthProfile& profile, GrowthExponents& exponents,
                          const TypeOpts& opts = {}) {
  double rho = exponents.rho;
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    throw UndefinedForZeroOrder("type is undefined for order " + std::to_string(rho));
  }
  auto pts = detail::order_tail_points(profile, opts.tail_window);
  if (pts.size() < 2) {
    throw InsufficientSamples("estimate_type needs at least 2 usable tail samples");
  }
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& p : pts) best = std::max(best, p.y - rho * p.x);
  exponents.sigma_type = std::exp(best);
  if (exponents.sigma_type <= opts.minimal_threshold) {
    exponents.type_class = TypeClass::minimal;
  } else if (exponents.sigma_type >= opts.maximal_threshold) {
    exponents.type_class = TypeClass::maximal;
  } else {
    exponents.type_class = TypeClass::mean;
  }
}

struct CorollaryVerdict {
  bool qualifies = false;
  std::string clause;
};

/// Growth gate for guaranteed bounded Fatou components: order strictly below
/// one half, or exactly one half with minimal type.
inline CorollaryVerdict classify_corollary(const GrowthExponents& e, double rho_tol = 0.02) {
  CorollaryVerdict v;
  if (e.rho < 0.5 - rho_tol) {
    v.qualifies = true;
    v.clause = "order " + std::to_string(e.rho) + " is below one half";
  } else if (std::fabs(e.rho - 0.5) <= rho_tol && e.type_class == TypeClass::minimal) {
    v.qualifies = true;
    v.clause = "order is one half (within tolerance) with minimal type";
  } else {
    v.qualifies = false;
    v.clause = "order " + std::to_string(e.rho) + " with " +
               type_class_name(e.type_class) + " type meets neither clause";
  }
  return v;
}

}  // namespace fatoulab
