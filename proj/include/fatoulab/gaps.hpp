#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "errors.hpp"
#include "growth.hpp"
#include "parallel.hpp"
#include "series.hpp"

namespace fatoulab {

/// All k <= scan_bound with a_k != 0, strictly increasing.
inline std::vector<std::int64_t> exponent_sequence(const CoefficientSeries& f,
                                                   std::int64_t scan_bound) {
  if (scan_bound < 1) throw std::invalid_argument("scan_bound must be >= 1");
  std::vector<std::int64_t> out;
  for (std::int64_t k = f.first_nonzero_index(); k >= 0 && k <= scan_bound;
       k = f.next_nonzero_index(k)) {
    out.push_back(k);
  }
  return out;
}

enum class GapVerdict { holds, fails, inconclusive };

inline const char* gap_verdict_name(GapVerdict v) {
  switch (v) {
    case GapVerdict::holds: return "holds";
    case GapVerdict::fails: return "fails";
    case GapVerdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

struct FabryReport {
  std::vector<double> ratios;  // n_k / k over the 1-based exponent list
  GapVerdict verdict = GapVerdict::inconclusive;
  std::string note;
};

/// Heuristic test of n_k / k -> infinity from a finite exponent table:
/// holds when the tail half of the ratio table is strictly increasing and the
/// last ratio reaches 4x the first positive ratio; fails when the tail is
/// flat (bounded ratios with no trend). Verdicts are heuristic by nature and
/// labeled so; the raw table ships with the report for audit.
inline FabryReport fabry_check(const std::vector<std::int64_t>& exponents) {
  if (exponents.size() < 4) {
    throw InsufficientExponents("fabry_check needs at least 4 exponents, have " +
                                std::to_string(exponents.size()));
  }
  FabryReport rep;
  rep.ratios.reserve(exponents.size());
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    rep.ratios.push_back(static_cast<double>(exponents[i]) / static_cast<double>(i + 1));
  }

  double first_positive = 0.0;
  for (double r : rep.ratios) {
    if (r > 0.0) {
      first_positive = r;
      break;
    }
  }

  std::size_t tail_start = rep.ratios.size() - (rep.ratios.size() + 1) / 2;
  bool tail_increasing = true;
  for (std::size_t i = tail_start + 1; i < rep.ratios.size(); ++i) {
    if (rep.ratios[i] <= rep.ratios[i - 1]) tail_increasing = false;
  }
  double tail_first = rep.ratios[tail_start];
  double tail_last = rep.ratios.back();

  if (tail_increasing && first_positive > 0.0 && tail_last >= 4.0 * first_positive) {
    rep.verdict = GapVerdict::holds;
    rep.note = "tail ratios strictly increasing and last ratio reached 4x the first positive ratio";
  } else if (tail_first > 0.0 && (tail_last - tail_first) / tail_first <= 0.1) {
    rep.verdict = GapVerdict::fails;
    rep.note = "tail ratios are flat: bounded with no growth trend";
  } else {
    rep.verdict = GapVerdict::inconclusive;
    rep.note = "ratio table neither clearly unbounded nor clearly flat at this scan bound";
  }
  return rep;
}

struct FejerReport {
  std::vector<double> partial_sums;  // running sum of 1/n_k, zero exponents excluded
  GapVerdict verdict = GapVerdict::inconclusive;
  std::string note;
};

/// Heuristic test of sum 1/n_k < infinity: increments 1/n_k are compared
/// against a k^{-3/2} envelope; a tail of k^{3/2}/n_k that is nonincreasing
/// indicates convergence, a nondecreasing tail indicates harmonic-like
/// divergence.
inline FejerReport fejer_check(const std::vector<std::int64_t>& exponents) {
  std::vector<std::int64_t> nz;
  for (std::int64_t n : exponents) {
    if (n > 0) nz.push_back(n);
  }
  if (nz.size() < 4) {
    throw InsufficientExponents("fejer_check needs at least 4 nonzero exponents, have " +
                                std::to_string(nz.size()));
  }
  FejerReport rep;
  double run = 0.0;
  std::vector<double> scaled;  // k^{3/2} / n_k
  for (std::size_t i = 0; i < nz.size(); ++i) {
    run += 1.0 / static_cast<double>(nz[i]);
    rep.partial_sums.push_back(run);
    double k = static_cast<double>(i + 1);
    scaled.push_back(std::pow(k, 1.5) / static_cast<double>(nz[i]));
  }

  std::size_t tail_start = scaled.size() - (scaled.size() + 1) / 2;
  bool nonincreasing = true, nondecreasing = true;
  for (std::size_t i = tail_start + 1; i < scaled.size(); ++i) {
    if (scaled[i] > scaled[i - 1] * (1.0 + 1e-9)) nonincreasing = false;
    if (scaled[i] < scaled[i - 1] * (1.0 - 1e-9)) nondecreasing = false;
  }

  if (nonincreasing) {
    rep.verdict = GapVerdict::holds;
    rep.note = "increments decay at least as fast as k^{-3/2}; partial sums look convergent";
  } else if (nondecreasing) {
    rep.verdict = GapVerdict::fails;
    rep.note = "increments dominate a k^{-3/2} envelope with a growing trend: harmonic-like tail";
  } else {
    rep.verdict = GapVerdict::inconclusive;
    rep.note = "increment envelope has no clear trend at this scan bound";
  }
  return rep;
}

struct GapReport {
  std::int64_t scan_bound = 0;
  std::vector<std::int64_t> exponents;
  FabryReport fabry;
  FejerReport fejer;
};

inline GapReport gap_report(const CoefficientSeries& f, std::int64_t scan_bound) {
  GapReport rep;
  rep.scan_bound = scan_bound;
  rep.exponents = exponent_sequence(f, scan_bound);
  rep.fabry = fabry_check(rep.exponents);
  rep.fejer = fejer_check(rep.exponents);
  return rep;
}

// ---- minimum-modulus hypothesis ---------------------------------------------

struct HypothesisSample {
  double log_r = 0.0;
  double log_M = 0.0;
  double log_L = 0.0;
  bool excluded = false;     // log M <= 0: classification is vacuous near the origin
  bool exceptional = false;  // r in E = { log L <= (1-eps) log M }
  bool failed = false;       // evaluation error; counted exceptional, conservatively
  std::string error;
};

struct MinModulusHypothesisReport {
  double epsilon = 0.1;
  GridSpec grid;
  std::vector<HypothesisSample> samples;
  /// Running logarithmic density of E over the observed window [r_first, r_j]
  /// (trapezoidal integral of the indicator against dt/t, divided by the
  /// observed log-window), one entry per sample.
  std::vector<double> density;
  double final_density = 0.0;
  bool tail_nonincreasing = false;
  std::string verdict;  // consistent-with-hypothesis | violates | inconclusive
  double consistent_threshold = 0.3;
  double violates_threshold = 0.5;
};

struct HypothesisOpts {
  int angular_samples = 1024;
  double refine_tol = 1e-10;
  double series_tol = 1e-12;
  int threads = 0;
  EvalLimits limits;
  double consistent_threshold = 0.3;  // artifact convention, carried into the report
  double violates_threshold = 0.5;
  double tail_fraction = 0.25;  // trailing share of the density curve that must not increase
};

/// Classifies each grid radius by whether the minimum modulus drops below the
/// (1-epsilon) share of the maximum modulus, and estimates the logarithmic
/// density of the exceptional set. The density thresholds are conventions of
/// this artifact (the underlying condition is asymptotic) and are embedded in
/// the report.
inline MinModulusHypothesisReport check_min_modulus_hypothesis(const CoefficientSeries& f,
                                                               double epsilon,
                                                               const GridSpec& grid,
                                                               const HypothesisOpts& opts = {}) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must be in (0,1)");
  if (grid.points < 2) throw std::invalid_argument("hypothesis grid needs at least 2 points");

  MinModulusHypothesisReport rep;
  rep.epsilon = epsilon;
  rep.grid = grid;
  rep.consistent_threshold = opts.consistent_threshold;
  rep.violates_threshold = opts.violates_threshold;
  rep.samples.resize(static_cast<std::size_t>(grid.points));

  parallel_for(static_cast<std::size_t>(grid.points), opts.threads, [&](std::size_t j) {
    HypothesisSample& s = rep.samples[j];
    s.log_r = grid_point(grid, static_cast<int>(j));
    try {
      s.log_M = max_modulus(f, s.log_r, opts.angular_samples, opts.refine_tol, opts.series_tol,
                            opts.limits);
      s.log_L = min_modulus(f, s.log_r, opts.angular_samples, opts.refine_tol, opts.series_tol,
                            opts.limits);
      if (s.log_M <= 0.0) {
        s.excluded = true;
      } else {
        s.exceptional = s.log_L <= (1.0 - epsilon) * s.log_M;
      }
    } catch (const std::exception& e) {
      s.failed = true;
      s.exceptional = true;
      s.error = e.what();
    }
  });

  // First usable sample opens the integration window.
  std::size_t i0 = rep.samples.size();
  for (std::size_t j = 0; j < rep.samples.size(); ++j) {
    if (!rep.samples[j].excluded) {
      i0 = j;
      break;
    }
  }
  rep.density.assign(rep.samples.size(), 0.0);
  if (i0 < rep.samples.size()) {
    double integral = 0.0;
    for (std::size_t j = i0 + 1; j < rep.samples.size(); ++j) {
      double dx = rep.samples[j].log_r - rep.samples[j - 1].log_r;
      double e_prev = rep.samples[j - 1].exceptional ? 1.0 : 0.0;
      double e_cur = rep.samples[j].exceptional ? 1.0 : 0.0;
      integral += dx * 0.5 * (e_prev + e_cur);
      double window = rep.samples[j].log_r - rep.samples[i0].log_r;
      rep.density[j] = window > 0.0 ? integral / window : 0.0;
    }
    rep.final_density = rep.density.back();
  }

  std::size_t n_density = rep.samples.size() - (i0 < rep.samples.size() ? i0 : 0);
  std::size_t tail_len = std::max<std::size_t>(
      2, static_cast<std::size_t>(std::ceil(n_density * opts.tail_fraction)));
  rep.tail_nonincreasing = true;
  if (rep.density.size() >= 2) {
    std::size_t from = rep.density.size() > tail_len ? rep.density.size() - tail_len : 1;
    for (std::size_t j = from; j < rep.density.size(); ++j) {
      if (rep.density[j] > rep.density[j - 1] + 1e-9) rep.tail_nonincreasing = false;
    }
  }

  if (rep.final_density >= opts.violates_threshold) {
    rep.verdict = "violates";
  } else if (rep.final_density < opts.consistent_threshold && rep.tail_nonincreasing) {
    rep.verdict = "consistent-with-hypothesis";
  } else {
    rep.verdict = "inconclusive";
  }
  return rep;
}

}  // namespace fatoulab
