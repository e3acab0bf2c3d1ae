#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "log_scalar.hpp"
#include "parallel.hpp"
#include "series.hpp"

namespace fatoulab {

enum class OrbitClass { bounded, escaping, indeterminate };

inline const char* orbit_class_name(OrbitClass c) {
  switch (c) {
    case OrbitClass::bounded: return "bounded";
    case OrbitClass::escaping: return "escaping";
    case OrbitClass::indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

struct OrbitOpts {
  int max_iter = 1000;
  double escape_log_mag = 50.0;   // crossing this arms the escape confirmation
  int confirm_steps = 3;          // strictly increasing steps required above the threshold
  double hard_cap_log_mag = 1e6;  // beyond phase resolution; escape is immediate
  double series_tol = 1e-12;
  EvalLimits limits;
  bool record_trace = false;
};

namespace detail {

// Orbits are tracked as (log magnitude, phase). Above this magnitude the
// imaginary part e^{lm} sin(phase) outruns the 2 pi wrap's precision and the
// next phase is meaningless: stepping refuses rather than fabricating one.
constexpr double kPhaseResolutionCap = 1e15;

inline double orbit_magnitude(const LogComplex& z) {
  double m = std::exp(z.log_mag);
  if (!(m <= kPhaseResolutionCap)) {
    throw EvaluationFailed("phase unresolvable: |z| = exp(" + std::to_string(z.log_mag) +
                           ") exceeds the wrap precision cap");
  }
  return m;
}

/// Principal square root in log form: halve the log magnitude and the phase.
inline LogComplex principal_sqrt(const LogComplex& z) {
  return LogComplex(0.5 * z.log_mag, 0.5 * z.phase);
}

/// sin(a + bi) in log form, stable for |b| large.
inline LogComplex log_sin(double a, double b) {
  const double ln2 = std::log(2.0);
  if (b > 20.0) {
    return LogComplex(b - ln2, kPi / 2.0 - a);
  }
  if (b < -20.0) {
    return LogComplex(-b - ln2, a - kPi / 2.0);
  }
  return LogComplex::from_complex(std::sin(std::complex<double>(a, b)));
}

/// cos(a + bi) in log form, stable for |b| large.
inline LogComplex log_cos(double a, double b) {
  const double ln2 = std::log(2.0);
  if (b > 20.0) {
    return LogComplex(b - ln2, -a);
  }
  if (b < -20.0) {
    return LogComplex(-b - ln2, a);
  }
  return LogComplex::from_complex(std::cos(std::complex<double>(a, b)));
}

}  // namespace detail

/// One orbit step w = f(z) in log form. The builtin families step through
/// their closed forms, which keeps iteration meaningful far beyond double
/// range; other series are evaluated directly and inherit the evaluation
/// ceiling. Throws EvaluationFailed or TruncationUnavailable when the step
/// cannot be resolved.
inline LogComplex orbit_step(const CoefficientSeries& f, const LogComplex& z,
                             const OrbitOpts& opts = {}) {
  switch (f.family()) {
    case Family::constant:
      return LogComplex::from_complex(f.param_c());
    case Family::monomial: {
      std::complex<double> c = f.param_c();
      double n = static_cast<double>(f.param_n());
      if (z.is_zero()) {
        return f.param_n() == 0 ? LogComplex::from_complex(c) : LogComplex::zero();
      }
      return LogComplex(std::log(std::abs(c)) + n * z.log_mag,
                        n * z.phase + std::arg(c));
    }
    case Family::exp_series: {
      if (z.is_zero()) return LogComplex(0.0, 0.0);  // e^0 = 1
      double m = detail::orbit_magnitude(z);
      return LogComplex(m * std::cos(z.phase), m * std::sin(z.phase));
    }
    case Family::cos_sqrt: {
      if (z.is_zero()) return LogComplex(0.0, 0.0);  // cos 0 = 1
      LogComplex s = detail::principal_sqrt(z);
      double m = detail::orbit_magnitude(s);
      return detail::log_cos(m * std::cos(s.phase), m * std::sin(s.phase));
    }
    case Family::baker: {
      // z + a + sin(sqrt z)/sqrt z
      LogComplex sinc;
      if (z.is_zero()) {
        sinc = LogComplex(0.0, 0.0);
      } else {
        LogComplex s = detail::principal_sqrt(z);
        double m = detail::orbit_magnitude(s);
        LogComplex sn = detail::log_sin(m * std::cos(s.phase), m * std::sin(s.phase));
        sinc = LogComplex(sn.log_mag - s.log_mag, sn.phase - s.phase);
      }
      LogComplex sum = z + sinc;
      double a = f.param_a();
      if (a != 0.0) {
        sum = sum + LogComplex(std::log(std::abs(a)), a < 0.0 ? detail::kPi : 0.0);
      }
      return sum;
    }
    default:
      if (z.log_mag > opts.limits.max_log_r) {
        throw TruncationUnavailable("orbit left the direct-evaluation disc: log|z| = " +
                                    std::to_string(z.log_mag));
      }
      return f.eval_log(z.log_mag, z.phase, opts.series_tol, opts.limits);
  }
}

struct OrbitRecord {
  OrbitClass cls = OrbitClass::indeterminate;
  int steps = 0;  // iterations completed when the classification fired
  double final_log_mag = 0.0;
  std::string reason;             // why an orbit is indeterminate
  std::vector<LogComplex> trace;  // z_0 .. z_steps when requested
};

inline OrbitRecord iterate_orbit(const CoefficientSeries& f, const LogComplex& z0,
                                 const OrbitOpts& opts = {}) {
  if (opts.max_iter < 1) throw std::invalid_argument("max_iter must be at least 1");
  OrbitRecord rec;
  LogComplex z = z0;
  if (opts.record_trace) rec.trace.push_back(z);

  double prev_lm = z.log_mag;
  bool stayed_inside = z.log_mag <= opts.escape_log_mag;
  int rising_run = 0;

  if (z.log_mag > opts.hard_cap_log_mag) {
    rec.cls = OrbitClass::escaping;
    rec.final_log_mag = z.log_mag;
    return rec;
  }

  for (int it = 1; it <= opts.max_iter; ++it) {
    try {
      z = orbit_step(f, z, opts);
    } catch (const std::exception& e) {
      rec.cls = OrbitClass::indeterminate;
      rec.steps = it - 1;
      rec.final_log_mag = prev_lm;
      rec.reason = e.what();
      return rec;
    }
    if (opts.record_trace) rec.trace.push_back(z);
    double lm = z.log_mag;

    if (lm > opts.hard_cap_log_mag) {
      rec.cls = OrbitClass::escaping;
      rec.steps = it;
      rec.final_log_mag = lm;
      return rec;
    }
    if (lm > opts.escape_log_mag) {
      stayed_inside = false;
      rising_run = lm > prev_lm ? rising_run + 1 : 0;
      if (rising_run >= 1 + opts.confirm_steps) {
        rec.cls = OrbitClass::escaping;
        rec.steps = it;
        rec.final_log_mag = lm;
        return rec;
      }
    } else {
      rising_run = 0;
    }
    prev_lm = lm;
  }

  rec.steps = opts.max_iter;
  rec.final_log_mag = z.log_mag;
  if (stayed_inside) {
    rec.cls = OrbitClass::bounded;
  } else {
    rec.cls = OrbitClass::indeterminate;
    rec.reason = "budget exhausted: threshold crossings without a confirmed escape";
  }
  return rec;
}

inline OrbitRecord iterate_orbit(const CoefficientSeries& f, std::complex<double> z0,
                                 const OrbitOpts& opts = {}) {
  return iterate_orbit(f, LogComplex::from_complex(z0), opts);
}

// ---- escape field ------------------------------------------------------------

struct FieldWindow {
  double x_min = -2.0, x_max = 2.0;
  double y_min = -2.0, y_max = 2.0;
};

struct FieldResolution {
  int nx = 256, ny = 256;
};

struct FieldCell {
  std::uint8_t cls = 2;  // OrbitClass encoded 0 bounded / 1 escaping / 2 indeterminate
  std::int32_t steps = 0;
  float final_log_mag = 0.0f;
};

struct EscapeField {
  FieldWindow window;
  FieldResolution res;
  int max_iter = 0;
  std::vector<FieldCell> cells;  // row-major, row 0 at y_max (image convention)

  const FieldCell& at(int ix, int iy) const {
    return cells[static_cast<std::size_t>(iy) * static_cast<std::size_t>(res.nx) +
                 static_cast<std::size_t>(ix)];
  }
};

/// Classifies a pixel grid of orbit seeds. Work is strided across threads so
/// the result is identical for every thread count.
inline EscapeField escape_field(const CoefficientSeries& f, const FieldWindow& w,
                                const FieldResolution& res, const OrbitOpts& opts = {},
                                int threads = 0) {
  if (res.nx < 8 || res.ny < 8) throw std::invalid_argument("field resolution below 8x8");
  if (res.nx > 2048 || res.ny > 2048) throw std::invalid_argument("field resolution above 2048");
  if (!(w.x_max > w.x_min) || !(w.y_max > w.y_min)) {
    throw std::invalid_argument("field window is empty");
  }

  EscapeField field;
  field.window = w;
  field.res = res;
  field.max_iter = opts.max_iter;
  field.cells.resize(static_cast<std::size_t>(res.nx) * static_cast<std::size_t>(res.ny));

  OrbitOpts cell_opts = opts;
  cell_opts.record_trace = false;
  const double dx = (w.x_max - w.x_min) / res.nx;
  const double dy = (w.y_max - w.y_min) / res.ny;

  parallel_for(field.cells.size(), threads, [&](std::size_t idx) {
    int iy = static_cast<int>(idx) / res.nx;
    int ix = static_cast<int>(idx) % res.nx;
    double x = w.x_min + (ix + 0.5) * dx;
    double y = w.y_max - (iy + 0.5) * dy;
    OrbitRecord rec = iterate_orbit(f, std::complex<double>(x, y), cell_opts);
    FieldCell& cell = field.cells[idx];
    cell.cls = rec.cls == OrbitClass::bounded ? 0 : rec.cls == OrbitClass::escaping ? 1 : 2;
    cell.steps = rec.steps;
    cell.final_log_mag = static_cast<float>(rec.final_log_mag);
  });
  return field;
}

// ---- connected components of the bounded set -----------------------------------

struct FieldComponent {
  int label = 0;
  std::int64_t cells = 0;
  int min_x = 0, min_y = 0, max_x = 0, max_y = 0;
  bool touches_edge = false;  // meets the window boundary: may continue outside
};

struct ComponentReport {
  std::int64_t bounded_cells = 0;
  std::vector<FieldComponent> components;
};

/// 4-connected components of the bounded cells. Labels are assigned in
/// row-major first-encounter order, which makes them canonical for a given
/// field regardless of how the field was computed.
inline ComponentReport component_probe(const EscapeField& field) {
  const int nx = field.res.nx, ny = field.res.ny;
  ComponentReport rep;
  std::vector<std::int32_t> label(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny), 0);
  std::vector<std::pair<int, int>> stack;

  auto bounded = [&](int ix, int iy) { return field.at(ix, iy).cls == 0; };

  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      std::size_t idx = static_cast<std::size_t>(iy) * nx + ix;
      if (!bounded(ix, iy)) continue;
      ++rep.bounded_cells;
      if (label[idx] != 0) continue;

      FieldComponent comp;
      comp.label = static_cast<int>(rep.components.size()) + 1;
      comp.min_x = comp.max_x = ix;
      comp.min_y = comp.max_y = iy;
      stack.clear();
      stack.push_back({ix, iy});
      label[idx] = comp.label;
      while (!stack.empty()) {
        auto [cx, cy] = stack.back();
        stack.pop_back();
        ++comp.cells;
        comp.min_x = std::min(comp.min_x, cx);
        comp.max_x = std::max(comp.max_x, cx);
        comp.min_y = std::min(comp.min_y, cy);
        comp.max_y = std::max(comp.max_y, cy);
        if (cx == 0 || cy == 0 || cx == nx - 1 || cy == ny - 1) comp.touches_edge = true;
        const int nbr[4][2] = {{cx - 1, cy}, {cx + 1, cy}, {cx, cy - 1}, {cx, cy + 1}};
        for (const auto& nb : nbr) {
          int qx = nb[0], qy = nb[1];
          if (qx < 0 || qy < 0 || qx >= nx || qy >= ny) continue;
          std::size_t qidx = static_cast<std::size_t>(qy) * nx + qx;
          if (label[qidx] == 0 && bounded(qx, qy)) {
            label[qidx] = comp.label;
            stack.push_back({qx, qy});
          }
        }
      }
      rep.components.push_back(comp);
    }
  }
  return rep;
}

// ---- real-axis segment check for the shifted sinc family ------------------------

struct BakerSeedResult {
  double x0 = 0.0;
  OrbitClass cls = OrbitClass::indeterminate;
  int steps = 0;
  double final_log_mag = 0.0;
  bool stable = false;    // a 1e-9 relative seed perturbation stays within 50% in log magnitude
  bool monotone = false;  // log magnitude strictly increases along the recorded orbit
};

struct BakerSegmentReport {
  double a = 0.0;
  double x_base = 0.0;
  int seed_count = 0;
  std::vector<BakerSeedResult> seeds;
  double pass_fraction = 0.0;  // share of seeds with a confirmed escape
};

inline OrbitOpts baker_segment_budget() {
  OrbitOpts o;
  o.max_iter = 50000;
  o.escape_log_mag = std::log(1e5);
  return o;
}

/// Seeds x_j = x_base (1 + j/4) on the positive real axis under
/// z -> z + a + sin(sqrt z)/sqrt z. For a >= 1 every real orbit advances by
/// at least a - 1 per step and the whole segment escapes; for small a > 0
/// the sinc dip near x = 20.2 can hold orbits back, and the report shows it.
inline BakerSegmentReport baker_segment_check(double a, double x_base = 1.0, int seed_count = 8,
                                              const OrbitOpts& user_opts = baker_segment_budget()) {
  if (seed_count < 1) throw std::invalid_argument("seed_count must be at least 1");
  if (!(x_base > 0.0)) throw std::invalid_argument("x_base must be positive");
  CoefficientSeries f = CoefficientSeries::baker(a);

  BakerSegmentReport rep;
  rep.a = a;
  rep.x_base = x_base;
  rep.seed_count = seed_count;

  OrbitOpts opts = user_opts;
  opts.record_trace = true;

  int escaped = 0;
  for (int j = 0; j < seed_count; ++j) {
    double x = x_base * (1.0 + 0.25 * j);
    OrbitRecord main = iterate_orbit(f, std::complex<double>(x, 0.0), opts);
    OrbitRecord shadow = iterate_orbit(f, std::complex<double>(x * (1.0 + 1e-9), 0.0), opts);

    std::size_t horizon = std::min<std::size_t>(
        {static_cast<std::size_t>(200) + 1, main.trace.size(), shadow.trace.size()});
    bool stable = true;
    for (std::size_t t = 0; t < horizon; ++t) {
      double lm = main.trace[t].log_mag;
      double rel = std::fabs(lm - shadow.trace[t].log_mag) / std::max(1.0, std::fabs(lm));
      if (rel >= 0.5) stable = false;
    }
    bool monotone = main.trace.size() > 1;
    for (std::size_t t = 1; t < main.trace.size(); ++t) {
      if (main.trace[t].log_mag <= main.trace[t - 1].log_mag) monotone = false;
    }

    BakerSeedResult r;
    r.x0 = x;
    r.cls = main.cls;
    r.steps = main.steps;
    r.final_log_mag = main.final_log_mag;
    r.stable = stable;
    r.monotone = monotone;
    rep.seeds.push_back(r);
    if (main.cls == OrbitClass::escaping) ++escaped;
  }
  rep.pass_fraction = static_cast<double>(escaped) / seed_count;
  return rep;
}

}  // namespace fatoulab
