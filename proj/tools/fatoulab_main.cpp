// Command-line front end: analyze / hypothesis / sequences / render /
// verify-all over the header library. Exit codes: 0 success, 1 config
// error, 2 per-sample failures with partial output, 3 seeds too small,
// 4 verification failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "fatoulab/fatoulab.hpp"

namespace fs = std::filesystem;
using namespace fatoulab;

namespace {

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> sets;
  std::optional<std::string> function;
  std::optional<std::string> function_file;
  std::optional<std::string> grid;
  std::optional<std::string> out_dir;
  std::optional<int> threads;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
  cmd->add_option("--config", a.config_path, "key=value config file");
  cmd->add_option("--set", a.sets, "config override KEY=VALUE (repeatable)");
  cmd->add_option("--function", a.function,
                  "series: exp | cos_sqrt | gap_squares | baker(a=A) | "
                  "monomial(c=C,n=N) | constant(c=C)");
  cmd->add_option("--function-file", a.function_file,
                  "CSV of coefficients (index,re,im), overrides --function");
  cmd->add_option("--grid", a.grid, "log-radius grid MIN:MAX:POINTS");
  cmd->add_option("--out", a.out_dir, "output directory");
  cmd->add_option("--threads", a.threads, "worker threads (0 = auto)");
}

void apply_grid(RunConfig& cfg, const std::string& s) {
  auto p1 = s.find(':');
  auto p2 = s.find(':', p1 == std::string::npos ? p1 : p1 + 1);
  if (p1 == std::string::npos || p2 == std::string::npos) {
    throw ConfigError("--grid expects MIN:MAX:POINTS, got: " + s);
  }
  cfg.set("grid.min", s.substr(0, p1));
  cfg.set("grid.max", s.substr(p1 + 1, p2 - p1 - 1));
  cfg.set("grid.points", s.substr(p2 + 1));
}

RunConfig load_config(const CommonArgs& a) {
  RunConfig cfg;
  if (!a.config_path.empty()) cfg = RunConfig::parse_file(a.config_path);
  for (const std::string& kv : a.sets) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects KEY=VALUE, got: " + kv);
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (a.function) cfg.function = *a.function;
  if (a.grid) apply_grid(cfg, *a.grid);
  if (a.out_dir) cfg.out_dir = *a.out_dir;
  if (a.threads) cfg.threads = *a.threads;
  cfg.validate();
  return cfg;
}

CoefficientSeries load_function(const RunConfig& cfg, const CommonArgs& a) {
  if (a.function_file) {
    std::ifstream in(*a.function_file);
    if (!in) throw ConfigError("cannot open coefficient file: " + *a.function_file);
    return CoefficientSeries::load_csv(in);
  }
  return CoefficientSeries::parse(cfg.function);
}

EvalLimits limits_from(const RunConfig& cfg) {
  EvalLimits lim;
  lim.max_terms = cfg.budgets_max_terms;
  return lim;
}

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + p.string());
  os << content;
}

fs::path ensure_out(const RunConfig& cfg) {
  fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  return dir;
}

// ---- analyze --------------------------------------------------------------------

int cmd_analyze(const RunConfig& cfg, const CommonArgs& args) {
  CoefficientSeries f = load_function(cfg, args);
  GridSpec grid{cfg.grid_min, cfg.grid_max, cfg.grid_points};
  ProfileOpts po;
  po.threads = cfg.threads;
  po.limits = limits_from(cfg);

  GrowthProfile profile = growth_profile(f, grid, po);
  fs::path dir = ensure_out(cfg);
  {
    std::ofstream os(dir / "profile.csv", std::ios::binary);
    write_profile_csv(os, profile);
  }

  int failures = grid.points - profile.valid_count();
  std::string hash = config_hash(cfg);

  GrowthExponents e;
  try {
    e = estimate_order(profile);
  } catch (const InsufficientSamples& ex) {
    std::cerr << "order estimate unavailable: " << ex.what() << "\n";
    std::cout << "wrote " << (dir / "profile.csv").string() << " (" << profile.valid_count()
              << "/" << grid.points << " samples)\n";
    return 2;
  }
  try {
    estimate_type(profile, e);
  } catch (const UndefinedForZeroOrder&) {
    // zero order has no finite type; the report says so via type_class
  }
  CorollaryVerdict cv = classify_corollary(e);
  write_file(dir / "exponents.json", exponents_json(hash, e, cv));

  std::cout << "function " << f.spec_string() << ": rho=" << fmt_num(e.rho)
            << " lambda=" << fmt_num(e.lambda) << " type=" << type_class_name(e.type_class)
            << (e.finite_support ? " (finite support, not transcendental)" : "") << "\n"
            << "corollary: " << (cv.qualifies ? "qualifies" : "does not qualify") << " ("
            << cv.clause << ")\n"
            << "wrote " << (dir / "profile.csv").string() << ", "
            << (dir / "exponents.json").string() << "\n";
  if (failures > 0) {
    std::cerr << failures << " of " << grid.points << " samples failed\n";
    return 2;
  }
  return 0;
}

// ---- hypothesis -----------------------------------------------------------------

int cmd_hypothesis(const RunConfig& cfg, const CommonArgs& args) {
  CoefficientSeries f = load_function(cfg, args);
  GridSpec grid{cfg.grid_min, cfg.grid_max, cfg.grid_points};
  HypothesisOpts ho;
  ho.threads = cfg.threads;
  ho.limits = limits_from(cfg);

  MinModulusHypothesisReport rep = check_min_modulus_hypothesis(f, cfg.epsilon, grid, ho);
  fs::path dir = ensure_out(cfg);
  std::string hash = config_hash(cfg);
  write_file(dir / "hypothesis.json", hypothesis_json(hash, rep));
  {
    std::ofstream os(dir / "hypothesis.csv", std::ios::binary);
    write_hypothesis_csv(os, rep);
  }

  std::string gaps;
  try {
    gaps = gaps_json(hash, gap_report(f, 256));
  } catch (const InsufficientExponents& e) {
    JsonWriter w;
    w.begin_object();
    json_provenance(w, hash);
    w.kv("error", std::string(e.what()));
    w.end_object();
    gaps = w.str();
  }
  write_file(dir / "gaps.json", gaps);

  int failed = 0;
  for (const auto& s : rep.samples) failed += s.failed ? 1 : 0;
  std::cout << "epsilon=" << fmt_num(rep.epsilon) << " density=" << fmt_num(rep.final_density)
            << " verdict=" << rep.verdict << "\n"
            << "wrote " << (dir / "hypothesis.json").string() << ", "
            << (dir / "hypothesis.csv").string() << ", " << (dir / "gaps.json").string() << "\n";
  if (failed > 0) {
    std::cerr << failed << " of " << rep.samples.size()
              << " samples failed and were counted as exceptional\n";
    return 2;
  }
  return 0;
}

// ---- sequences ------------------------------------------------------------------

int cmd_sequences(const RunConfig& cfg, const CommonArgs& args) {
  CoefficientSeries f = load_function(cfg, args);
  GridSpec grid{cfg.grid_min, cfg.grid_max, cfg.grid_points};
  EvalOpts eo;
  eo.limits = limits_from(cfg);
  ProfileOpts po;
  po.threads = cfg.threads;
  po.limits = eo.limits;
  SequenceVariant variant = cfg.variant == "half_alpha" ? SequenceVariant::half_alpha
                                                        : SequenceVariant::quarter_alpha;

  GrowthProfile profile = growth_profile(f, grid, po);
  GrowthCurve curve = f.has_closed_form_log_M() ? GrowthCurve::closed_form(f)
                                                : GrowthCurve::two_tier(f, profile, 0.05, eo);

  SequencePair seq;
  try {
    seq = build_sequences(curve, cfg.seeds_log_r1, cfg.seeds_log_s1, cfg.alpha, variant,
                          cfg.seeds_n_max);
  } catch (const SeedTooSmall& e) {
    std::cerr << "seeds too small: " << e.what() << "\n"
              << "hint: raise seeds.log_r1 (and keep seeds.log_s1 well below it) so the first "
                 "iterate already moves outward\n";
    return 3;
  }

  std::vector<std::pair<std::string, std::string>> table;
  auto row = [&](const std::string& name, const std::string& firsts) {
    table.emplace_back(name, firsts);
  };

  const char* sizerel = variant == SequenceVariant::half_alpha
                            ? "size relation S_n <= R_n^(1/(2 alpha))"
                            : "size relation 2 S_n <= R_n^(1/(4 alpha))";
  row(sizerel, seq.n1 >= 1 ? "n=" + std::to_string(seq.n1) : "never on computed steps");

  CappedExponentReport recs;
  bool have_recs = false;
  try {
    recs = capped_exponent_records(f, seq, cfg.b_target, eo);
    have_recs = !recs.records.empty();
    int holding = 0;
    for (const auto& rec : recs.records) holding += rec.holds ? 1 : 0;
    row("capped exponent k_n <= a_n",
        have_recs ? std::to_string(holding) + "/" + std::to_string(recs.records.size()) +
                        " records" + (recs.notice.empty() ? "" : " (" + recs.notice + ")")
                  : "no records (" + recs.notice + ")");
  } catch (const std::exception& e) {
    row("capped exponent k_n <= a_n", std::string("unavailable (") + e.what() + ")");
  }

  CentralIndexBoundReport bound;
  bool have_bound = false;
  std::string bound_err;
  if (have_recs) {
    try {
      bound = check_central_index_bound(f, recs, eo);
      have_bound = true;
      row("central index bound at 2 S_n",
          bound.n1 >= 1 ? "n=" + std::to_string(bound.n1) : "never on computed records");
    } catch (const NotSatisfiedOnGrid& e) {
      bound_err = e.what();
      row("central index bound at 2 S_n", "not satisfied at computed scales");
    }
  }

  try {
    MaxTermBounds wb = check_max_term_bounds(f, grid, eo);
    row("max term vs doubled radius (K=" + fmt_num(wb.K) + ")", "log r=" + fmt_num(wb.log_s0));
    row("max term vs squared radius", "log r=" + fmt_num(wb.log_s1));
  } catch (const std::exception& e) {
    row("max term bounds", std::string("unavailable (") + e.what() + ")");
  }

  try {
    GridSpec pos = grid;
    pos.log_r_min = std::max(grid.log_r_min, 0.5);
    LogRadiusGrowthReport lr = check_log_radius_growth(f, 2, pos, eo);
    row("log-radius growth (m=2)", "log r=" + fmt_num(lr.u_star));
  } catch (const std::exception& e) {
    row("log-radius growth (m=2)", std::string("unavailable (") + e.what() + ")");
  }

  try {
    MaxModulusPowerReport pw = check_max_modulus_power(f, grid, cfg.alpha, eo);
    row("power comparison M(r^(2 alpha)) vs M(r)^(2 alpha)", "log r=" + fmt_num(pw.log_r_star));
  } catch (const std::exception& e) {
    row("power comparison M(r^(2 alpha)) vs M(r)^(2 alpha)",
        std::string("unavailable (") + e.what() + ")");
  }

  try {
    NestedCircles c = nested_circle_radii(f, seq, 1, eo);
    row("sampling circles at n=1",
        "log T=" + c.log_T.to_string() + " log T1=" + c.log_T1.to_string() +
            " log T2=" + c.log_T2.to_string() + (c.t1_exact ? "" : " (estimate)"));
  } catch (const std::exception& e) {
    row("sampling circles at n=1", std::string("unavailable (") + e.what() + ")");
  }

  try {
    GrowthExponents e = estimate_order(profile);
    SlowGrowthReport sg = slow_growth_check(f, e.rho, e.lambda, seq);
    row("slow-growth coupling (n_lr=" + std::to_string(sg.n_lambda_rho) + ")",
        sg.verified ? "seeds and induction hold from n=" + std::to_string(sg.n1)
                    : "not verified on computed steps");
  } catch (const std::exception& e) {
    row("slow-growth coupling", std::string("unavailable (") + e.what() + ")");
  }

  fs::path dir = ensure_out(cfg);
  write_file(dir / "sequences.json",
             sequences_json(config_hash(cfg), seq, have_recs ? &recs : nullptr,
                            have_bound ? &bound : nullptr, bound_err, &table));

  std::size_t width = 0;
  for (const auto& t : table) width = std::max(width, t.first.size());
  std::cout << "computed " << seq.log_R.size() << " steps (alpha=" << fmt_num(seq.alpha) << ", "
            << sequence_variant_name(seq.variant) << ")"
            << (seq.note.empty() ? "" : " [" + seq.note + "]") << "\n";
  for (const auto& t : table) {
    std::cout << "  " << t.first << std::string(width - t.first.size() + 2, ' ') << t.second
              << "\n";
  }
  std::cout << "wrote " << (dir / "sequences.json").string() << "\n";
  return 0;
}

// ---- render ---------------------------------------------------------------------

int cmd_render(const RunConfig& cfg, const CommonArgs& args) {
  CoefficientSeries f = load_function(cfg, args);
  FieldWindow w{cfg.window_x_min, cfg.window_x_max, cfg.window_y_min, cfg.window_y_max};
  FieldResolution res{cfg.resolution_nx, cfg.resolution_ny};
  OrbitOpts oo;
  oo.max_iter = cfg.budgets_max_iter;
  oo.escape_log_mag = cfg.budgets_escape_threshold;
  oo.limits = limits_from(cfg);

  EscapeField field = escape_field(f, w, res, oo, cfg.threads);
  ComponentReport comps = component_probe(field);

  fs::path dir = ensure_out(cfg);
  {
    std::ofstream os(dir / "field.pgm", std::ios::binary);
    write_field_pgm(os, field);
  }
  {
    std::ofstream os(dir / "field.csv", std::ios::binary);
    write_field_csv(os, field);
  }
  write_file(dir / "components.json", components_json(config_hash(cfg), comps));

  std::int64_t esc = 0, ind = 0;
  for (const auto& c : field.cells) {
    if (c.cls == 1) ++esc;
    if (c.cls == 2) ++ind;
  }
  std::cout << "field " << res.nx << "x" << res.ny << ": " << comps.bounded_cells
            << " bounded cells in " << comps.components.size() << " component(s), " << esc
            << " escaping, " << ind << " indeterminate\n"
            << "wrote " << (dir / "field.pgm").string() << ", " << (dir / "field.csv").string()
            << ", " << (dir / "components.json").string() << "\n";
  return 0;
}

// ---- verify-all -----------------------------------------------------------------

int cmd_verify_all(const RunConfig& cfg) {
  AcceptanceOpts ao;
  ao.threads = cfg.threads;
  ao.order_tol = cfg.verify_order_tol;

  std::vector<CriterionResult> rows = run_acceptance_with_determinism(ao);
  for (const auto& r : rows) {
    std::printf("[%s] %2d %-28s %s\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(),
                r.detail.c_str());
  }

  fs::path dir = ensure_out(cfg);
  write_file(dir / "verify_summary.json", acceptance_summary_json(config_hash(cfg), rows));
  std::cout << "wrote " << (dir / "verify_summary.json").string() << "\n";

  for (const auto& r : rows) {
    if (!r.pass) {
      std::cerr << "first failing criterion: " << r.name << "\n";
      return 4;
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(kArtifactName) + " " + kArtifactVersion +
               ": growth, gap, and escape analysis for entire functions"};
  app.require_subcommand(1);

  CommonArgs a_analyze, a_hyp, a_seq, a_render, a_verify;
  std::optional<double> epsilon, alpha, log_r1, log_s1, b_target;
  std::optional<int> n_max;
  std::optional<std::string> variant;

  CLI::App* c_analyze = app.add_subcommand("analyze", "growth profile and order/type estimate");
  add_common(c_analyze, a_analyze);

  CLI::App* c_hyp =
      app.add_subcommand("hypothesis", "minimum-modulus density and gap structure");
  add_common(c_hyp, a_hyp);
  c_hyp->add_option("--epsilon", epsilon, "exceptional-set threshold in (0,1)");

  CLI::App* c_seq = app.add_subcommand("sequences", "radius recurrences and growth bounds");
  add_common(c_seq, a_seq);
  c_seq->add_option("--alpha", alpha, "growth exponent, > 1");
  c_seq->add_option("--variant", variant, "half_alpha | quarter_alpha");
  c_seq->add_option("--log-r1", log_r1, "seed log R_1");
  c_seq->add_option("--log-s1", log_s1, "seed log S_1");
  c_seq->add_option("--n-max", n_max, "steps to compute (2..12)");
  c_seq->add_option("--b-target", b_target, "target ratio for capped exponents, > 1");

  CLI::App* c_render = app.add_subcommand("render", "escape-time field over a window");
  add_common(c_render, a_render);

  CLI::App* c_verify = app.add_subcommand("verify-all", "run the acceptance battery");
  add_common(c_verify, a_verify);

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_analyze->parsed()) return cmd_analyze(load_config(a_analyze), a_analyze);
    if (c_hyp->parsed()) {
      RunConfig cfg = load_config(a_hyp);
      if (epsilon) cfg.set("epsilon", fmt_num(*epsilon));
      cfg.validate();
      return cmd_hypothesis(cfg, a_hyp);
    }
    if (c_seq->parsed()) {
      RunConfig cfg = load_config(a_seq);
      if (alpha) cfg.set("alpha", fmt_num(*alpha));
      if (variant) cfg.set("variant", *variant);
      if (log_r1) cfg.set("seeds.log_r1", fmt_num(*log_r1));
      if (log_s1) cfg.set("seeds.log_s1", fmt_num(*log_s1));
      if (n_max) cfg.set("seeds.n_max", std::to_string(*n_max));
      if (b_target) cfg.set("b_target", fmt_num(*b_target));
      cfg.validate();
      return cmd_sequences(cfg, a_seq);
    }
    if (c_render->parsed()) return cmd_render(load_config(a_render), a_render);
    if (c_verify->parsed()) return cmd_verify_all(load_config(a_verify));
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
