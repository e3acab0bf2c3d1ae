#pragma once

#include <algorithm>
#include <ostream>
#include <string>

#include "config.hpp"
#include "dynamics.hpp"
#include "gaps.hpp"
#include "growth.hpp"
#include "json_writer.hpp"
#include "leveled_real.hpp"
#include "sequences.hpp"
#include "version.hpp"

namespace fatoulab {

/// Every JSON document opens with the same provenance triple.
inline void json_provenance(JsonWriter& w, const std::string& cfg_hash) {
  w.kv("artifact", kArtifactName);
  w.kv("version", kArtifactVersion);
  w.kv("config_hash", cfg_hash);
}

inline void leveled_json(JsonWriter& w, const LeveledReal& v) {
  w.begin_object();
  w.kv("level", v.level());
  w.kv("stored", v.stored());
  w.kv("display", v.to_string());
  w.end_object();
}

// ---- growth profile ---------------------------------------------------------

inline void write_profile_csv(std::ostream& os, const GrowthProfile& p) {
  os << "log_r,log_M,log_L,log_mu,nu,valid\n";
  for (const auto& s : p.samples) {
    os << fmt_num(s.log_r) << ',' << fmt_num(s.log_M) << ',' << fmt_num(s.log_L) << ','
       << fmt_num(s.log_mu) << ',' << s.nu << ',' << (s.valid ? 1 : 0) << '\n';
  }
}

inline std::string exponents_json(const std::string& cfg_hash, const GrowthExponents& e,
                                  const CorollaryVerdict& cv) {
  JsonWriter w;
  w.begin_object();
  json_provenance(w, cfg_hash);
  w.kv("rho", e.rho);
  w.kv("lambda", e.lambda);
  w.kv("sigma_type", e.sigma_type);
  w.kv("type_class", type_class_name(e.type_class));
  w.kv("tail_window", e.tail_window);
  w.key("fit");
  w.begin_object();
  w.kv("slope", e.fit_slope);
  w.kv("intercept", e.fit_intercept);
  w.kv("rms", e.fit_rms);
  w.end_object();
  w.kv("used_samples", e.used_samples);
  w.kv("finite_support", e.finite_support);
  w.kv("transcendental", !e.finite_support);
  w.key("corollary");
  w.begin_object();
  w.kv("qualifies", cv.qualifies);
  w.kv("clause", cv.clause);
  w.end_object();
  w.end_object();
  return w.str();
}

// ---- gap structure ------------------------------------------------------------

inline std::string gaps_json(const std::string& cfg_hash, const GapReport& g) {
  JsonWriter w;
  w.begin_object();
  json_provenance(w, cfg_hash);
  w.kv("scan_bound", g.scan_bound);
  w.key("exponents");
  w.begin_array();
  for (std::int64_t n : g.exponents) w.value(n);
  w.end_array();
  w.key("fabry");
  w.begin_object();
  w.key("ratios");
  w.begin_array();
  for (double r : g.fabry.ratios) w.value(r);
  w.end_array();
  w.kv("verdict", gap_verdict_name(g.fabry.verdict));
  w.kv("note", g.fabry.note);
  w.end_object();
  w.key("fejer");
  w.begin_object();
  w.key("partial_sums");
  w.begin_array();
  for (double s : g.fejer.partial_sums) w.value(s);
  w.end_array();
  w.kv("verdict", gap_verdict_name(g.fejer.verdict));
  w.kv("note", g.fejer.note);
  w.end_object();
  w.end_object();
  return w.str();
}

// ---- minimum-modulus hypothesis -------------------------------------------------

inline std::string hypothesis_json(const std::string& cfg_hash,
                                   const MinModulusHypothesisReport& r) {
  JsonWriter w;
  w.begin_object();
  json_provenance(w, cfg_hash);
  w.kv("epsilon", r.epsilon);
  w.key("grid");
  w.begin_object();
  w.kv("log_r_min", r.grid.log_r_min);
  w.kv("log_r_max", r.grid.log_r_max);
  w.kv("points", r.grid.points);
  w.end_object();
  w.kv("verdict", r.verdict);
  w.kv("final_density", r.final_density);
  w.kv("tail_nonincreasing", r.tail_nonincreasing);
  w.kv("consistent_threshold", r.consistent_threshold);
  w.kv("violates_threshold", r.violates_threshold);
  w.key("samples");
  w.begin_array();
  for (const auto& s : r.samples) {
    w.begin_object();
    w.kv("log_r", s.log_r);
    w.kv("log_M", s.log_M);
    w.kv("log_L", s.log_L);
    w.kv("excluded", s.excluded);
    w.kv("exceptional", s.exceptional);
    w.kv("failed", s.failed);
    if (s.failed) w.kv("error", s.error);
    w.end_object();
  }
  w.end_array();
  w.key("density");
  w.begin_array();
  for (double d : r.density) w.value(d);
  w.end_array();
  w.end_object();
  return w.str();
}

inline void write_hypothesis_csv(std::ostream& os, const MinModulusHypothesisReport& r) {
  os << "log_r,density\n";
  for (std::size_t j = 0; j < r.samples.size(); ++j) {
    os << fmt_num(r.samples[j].log_r) << ',' << fmt_num(r.density[j]) << '\n';
  }
}

// ---- radius sequences ------------------------------------------------------------

inline std::string sequences_json(
    const std::string& cfg_hash, const SequencePair& seq, const CappedExponentReport* recs,
    const CentralIndexBoundReport* bound, const std::string& bound_error,
    const std::vector<std::pair<std::string, std::string>>* summary = nullptr) {
  JsonWriter w;
  w.begin_object();
  json_provenance(w, cfg_hash);
  w.kv("alpha", seq.alpha);
  w.kv("variant", sequence_variant_name(seq.variant));
  w.key("steps");
  w.begin_array();
  for (std::size_t i = 0; i < seq.log_R.size(); ++i) {
    w.begin_object();
    w.kv("n", static_cast<int>(i) + 1);
    w.key("log_R");
    leveled_json(w, seq.log_R[i]);
    w.key("log_S");
    leveled_json(w, seq.log_S[i]);
    w.kv("property_ok", static_cast<bool>(seq.property_ok[i]));
    w.end_object();
  }
  w.end_array();
  w.kv("n1", seq.n1);
  w.kv("verified", seq.verified);
  if (!seq.note.empty()) w.kv("note", seq.note);
  if (recs != nullptr) {
    w.key("capped_exponent_records");
    w.begin_object();
    w.kv("b_target", recs->b_target);
    w.kv("requested", recs->requested);
    if (!recs->notice.empty()) w.kv("notice", recs->notice);
    w.key("records");
    w.begin_array();
    for (const auto& rec : recs->records) {
      w.begin_object();
      w.kv("n", rec.n);
      w.kv("log_S", rec.log_S);
      w.kv("log_R", rec.log_R);
      w.kv("nu_quarter", rec.nu_quarter);
      w.kv("log_M_4S2", rec.log_M_4S2);
      w.kv("b", rec.b);
      w.kv("l", rec.l);
      w.kv("k", rec.k);
      w.kv("nu_capped", rec.nu_capped);
      w.kv("a", rec.a);
      w.kv("holds", rec.holds);
      w.end_object();
    }
    w.end_array();
    w.end_object();
  }
  if (bound != nullptr) {
    w.key("central_index_bound");
    w.begin_object();
    w.kv("n1", bound->n1);
    w.key("rows");
    w.begin_array();
    for (const auto& row : bound->rows) {
      w.begin_object();
      w.kv("n", row.n);
      w.kv("lhs_nu", row.lhs_nu);
      w.kv("rhs", row.rhs);
      w.kv("holds", row.holds);
      w.end_object();
    }
    w.end_array();
    w.end_object();
  } else if (!bound_error.empty()) {
    w.kv("central_index_bound_error", bound_error);
  }
  if (summary != nullptr) {
    w.key("inequalities");
    w.begin_array();
    for (const auto& row : *summary) {
      w.begin_object();
      w.kv("name", row.first);
      w.kv("first_holds", row.second);
      w.end_object();
    }
    w.end_array();
  }
  w.end_object();
  return w.str();
}

// ---- escape field and components ---------------------------------------------------

/// P2 shading: bounded 0, indeterminate 20, escaping 55..255 by step count
/// (earlier escapes brighter).
inline int field_gray(const FieldCell& c, int max_iter) {
  if (c.cls == 0) return 0;
  if (c.cls == 2) return 20;
  int g = 255 - (200 * c.steps) / std::max(1, max_iter);
  return std::clamp(g, 55, 255);
}

inline void write_field_pgm(std::ostream& os, const EscapeField& f) {
  os << "P2\n" << f.res.nx << ' ' << f.res.ny << "\n255\n";
  int on_line = 0;
  for (int iy = 0; iy < f.res.ny; ++iy) {
    for (int ix = 0; ix < f.res.nx; ++ix) {
      os << field_gray(f.at(ix, iy), f.max_iter);
      if (++on_line == 16) {
        os << '\n';
        on_line = 0;
      } else {
        os << ' ';
      }
    }
  }
  if (on_line != 0) os << '\n';
}

inline void write_field_csv(std::ostream& os, const EscapeField& f) {
  os << "x,y,class,steps\n";
  const double dx = (f.window.x_max - f.window.x_min) / f.res.nx;
  const double dy = (f.window.y_max - f.window.y_min) / f.res.ny;
  const char* names[3] = {"bounded", "escaping", "indeterminate"};
  for (int iy = 0; iy < f.res.ny; ++iy) {
    for (int ix = 0; ix < f.res.nx; ++ix) {
      const FieldCell& c = f.at(ix, iy);
      double x = f.window.x_min + (ix + 0.5) * dx;
      double y = f.window.y_max - (iy + 0.5) * dy;
      os << fmt_num(x) << ',' << fmt_num(y) << ',' << names[c.cls] << ',' << c.steps << '\n';
    }
  }
}

inline std::string components_json(const std::string& cfg_hash, const ComponentReport& r) {
  JsonWriter w;
  w.begin_object();
  json_provenance(w, cfg_hash);
  w.kv("bounded_cells", r.bounded_cells);
  w.key("components");
  w.begin_array();
  for (const auto& c : r.components) {
    w.begin_object();
    w.kv("label", c.label);
    w.kv("cells", c.cells);
    w.kv("min_x", c.min_x);
    w.kv("min_y", c.min_y);
    w.kv("max_x", c.max_x);
    w.kv("max_y", c.max_y);
    w.kv("possibly_unbounded", c.touches_edge);
    w.end_object();
  }
  w.end_array();
  w.end_object();
  return w.str();
}

}  // namespace fatoulab
