#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "fatoulab/report_io.hpp"

using namespace fatoulab;

TEST_CASE("number formatting round trips and collapses negative zero") {
  REQUIRE(fmt_num(0.0) == "0");
  REQUIRE(fmt_num(-0.0) == "0");
  REQUIRE(fmt_num(1.0) == "1");
  for (double v : {3.141592653589793, 1e300, 0.1, -2.5e-8, -7.0}) {
    const std::string s = fmt_num(v);
    REQUIRE(std::strtod(s.c_str(), nullptr) == v);
  }
}

TEST_CASE("config serialization is its own inverse") {
  RunConfig cfg;
  cfg.function = "gap_squares";
  cfg.epsilon = 0.25;
  cfg.grid_points = 96;
  cfg.variant = "quarter_alpha";
  cfg.threads = 3;
  cfg.deterministic = false;
  cfg.validate();

  std::istringstream in(cfg.serialize());
  const RunConfig back = RunConfig::parse(in);
  REQUIRE(back.serialize() == cfg.serialize());
  REQUIRE(back.function == "gap_squares");
  REQUIRE(back.epsilon == 0.25);
  REQUIRE(back.variant == "quarter_alpha");
  REQUIRE_FALSE(back.deterministic);
}

TEST_CASE("config parsing skips comments and reports line numbers") {
  std::istringstream ok("# growth study\n\nfunction = exp\n  grid.points = 32  \n");
  const RunConfig cfg = RunConfig::parse(ok);
  REQUIRE(cfg.function == "exp");
  REQUIRE(cfg.grid_points == 32);

  std::istringstream bad("function=exp\nthis line has no equals\n");
  try {
    RunConfig::parse(bad);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    REQUIRE(std::string(e.what()).find("line 2") != std::string::npos);
  }

  std::istringstream unknown("nonsense=1\n");
  REQUIRE_THROWS_AS(RunConfig::parse(unknown), ConfigError);
  std::istringstream badnum("grid.min = abc\n");
  REQUIRE_THROWS_AS(RunConfig::parse(badnum), ConfigError);
}

TEST_CASE("config validation rejects out-of-range values") {
  RunConfig cfg;
  cfg.epsilon = 1.5;
  REQUIRE_THROWS_AS(cfg.validate(), ConfigError);
  cfg.epsilon = 0.1;
  cfg.variant = "thirds";
  REQUIRE_THROWS_AS(cfg.validate(), ConfigError);
  cfg.variant = "half_alpha";
  cfg.resolution_nx = 4;
  REQUIRE_THROWS_AS(cfg.validate(), ConfigError);
  cfg.resolution_nx = 256;
  cfg.seeds_n_max = 1;
  REQUIRE_THROWS_AS(cfg.validate(), ConfigError);
  cfg.seeds_n_max = 6;
  cfg.verify_order_tol = 0.0;
  REQUIRE_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("config hash is stable, canonical, and sensitive") {
  RunConfig a;
  RunConfig b;
  const std::string ha = config_hash(a);
  REQUIRE(ha.size() == 16);
  REQUIRE(ha.find_first_not_of("0123456789abcdef") == std::string::npos);
  REQUIRE(config_hash(b) == ha);
  b.epsilon = 0.2;
  REQUIRE(config_hash(b) != ha);

  // the hash covers report content, not where it lands or how it was scheduled
  RunConfig c;
  c.out_dir = "elsewhere";
  c.threads = 7;
  REQUIRE(config_hash(c) == ha);
}

TEST_CASE("json writer emits deterministic, escaped documents") {
  JsonWriter w;
  w.begin_object();
  w.kv("name", "a\"b\\c\nd");
  w.kv("n", 3);
  w.kv("x", 0.5);
  w.kv("flag", true);
  w.key("arr");
  w.begin_array();
  w.value(1.0);
  w.value(std::nan(""));
  w.value(std::numeric_limits<double>::infinity());
  w.value(-std::numeric_limits<double>::infinity());
  w.end_array();
  w.end_object();
  REQUIRE(w.str() ==
          "{\"name\":\"a\\\"b\\\\c\\nd\",\"n\":3,\"x\":0.5,\"flag\":true,"
          "\"arr\":[1,\"nan\",\"inf\",\"-inf\"]}");
}

TEST_CASE("profile CSV has a fixed golden form") {
  GrowthProfile p;
  p.samples.resize(2);
  p.samples[0] = {0.5, 1.0, -1.0, 0.5, 3, true, ""};
  p.samples[1] = {1.0, 2.25, -2.0, 1.75, 4, false, "boom"};
  std::ostringstream os;
  write_profile_csv(os, p);
  REQUIRE(os.str() ==
          "log_r,log_M,log_L,log_mu,nu,valid\n"
          "0.5,1,-1,0.5,3,1\n"
          "1,2.25,-2,1.75,4,0\n");
}

TEST_CASE("exponents json carries the transcendental flag and corollary") {
  GrowthExponents e;
  e.rho = 1.0;
  e.lambda = 1.0;
  e.sigma_type = 1.0;
  e.type_class = TypeClass::mean;
  CorollaryVerdict cv;
  cv.qualifies = false;
  cv.clause = "order 1 is not below one half";
  const std::string doc = exponents_json("deadbeefdeadbeef", e, cv);
  REQUIRE(doc.find("\"config_hash\":\"deadbeefdeadbeef\"") != std::string::npos);
  REQUIRE(doc.find("\"transcendental\":true") != std::string::npos);
  REQUIRE(doc.find("\"type_class\":\"mean\"") != std::string::npos);
  REQUIRE(doc.find("\"qualifies\":false") != std::string::npos);
  REQUIRE(exponents_json("deadbeefdeadbeef", e, cv) == doc);

  e.finite_support = true;
  REQUIRE(exponents_json("deadbeefdeadbeef", e, cv)
              .find("\"transcendental\":false") != std::string::npos);
}

TEST_CASE("hypothesis json includes errors only for failed samples") {
  MinModulusHypothesisReport r;
  r.epsilon = 0.1;
  r.grid = {0.0, 1.0, 2};
  r.samples.resize(2);
  r.samples[0].log_r = 0.0;
  r.samples[1].log_r = 1.0;
  r.samples[1].failed = true;
  r.samples[1].error = "series blew up";
  r.density = {0.0, 1.0};
  r.final_density = 1.0;
  r.verdict = "violates";

  const std::string doc = hypothesis_json("ffffffffffffffff", r);
  REQUIRE(doc.find("\"failed\":true,\"error\":\"series blew up\"") != std::string::npos);
  REQUIRE(doc.find("\"failed\":false,\"error\"") == std::string::npos);
  REQUIRE(doc.find("\"verdict\":\"violates\"") != std::string::npos);

  std::ostringstream os;
  write_hypothesis_csv(os, r);
  REQUIRE(os.str() == "log_r,density\n0,0\n1,1\n");
}

TEST_CASE("sequence json reports the tower and optional sections") {
  const GrowthCurve curve = GrowthCurve::closed_form(CoefficientSeries::exp_series());
  const SequencePair seq =
      build_sequences(curve, 256.0, 2.0, 2.0, SequenceVariant::half_alpha, 3);

  const std::string plain = sequences_json("0123456789abcdef", seq, nullptr, nullptr, "");
  REQUIRE(plain.find("\"variant\":\"half_alpha\"") != std::string::npos);
  REQUIRE(plain.find("\"level\":") != std::string::npos);
  REQUIRE(plain.find("\"display\":\"exp(") != std::string::npos);
  REQUIRE(plain.find("central_index_bound") == std::string::npos);
  REQUIRE(plain.find("inequalities") == std::string::npos);

  const std::string with_err =
      sequences_json("0123456789abcdef", seq, nullptr, nullptr, "not satisfied");
  REQUIRE(with_err.find("\"central_index_bound_error\":\"not satisfied\"") !=
          std::string::npos);

  std::vector<std::pair<std::string, std::string>> summary{{"power_comparison", "0.465"}};
  const std::string with_summary =
      sequences_json("0123456789abcdef", seq, nullptr, nullptr, "", &summary);
  REQUIRE(with_summary.find("\"inequalities\":[{\"name\":\"power_comparison\","
                            "\"first_holds\":\"0.465\"}]") != std::string::npos);
}

TEST_CASE("field shading follows the documented gray levels") {
  REQUIRE(field_gray({0, 0, 0.0f}, 100) == 0);
  REQUIRE(field_gray({2, 0, 0.0f}, 100) == 20);
  REQUIRE(field_gray({1, 0, 0.0f}, 100) == 255);
  REQUIRE(field_gray({1, 100, 0.0f}, 100) == 55);
  REQUIRE(field_gray({1, 50, 0.0f}, 100) == 155);
  // escaping never darkens into the reserved bands
  REQUIRE(field_gray({1, 1000000, 0.0f}, 100) == 55);
}

TEST_CASE("PGM output is parseable and places classes correctly") {
  EscapeField f;
  f.window = {0.0, 1.0, 0.0, 1.0};
  f.res = {8, 8};
  f.max_iter = 100;
  f.cells.assign(64, FieldCell{1, 0, 0.0f});
  f.cells[0] = {0, 0, 0.0f};   // bounded
  f.cells[1] = {2, 0, 0.0f};   // indeterminate
  f.cells[2] = {1, 100, 0.0f}; // slow escape

  std::ostringstream os;
  write_field_pgm(os, f);
  std::istringstream in(os.str());
  std::string magic;
  int nx = 0, ny = 0, maxval = 0;
  in >> magic >> nx >> ny >> maxval;
  REQUIRE(magic == "P2");
  REQUIRE(nx == 8);
  REQUIRE(ny == 8);
  REQUIRE(maxval == 255);
  std::vector<int> pix;
  for (int v; in >> v;) pix.push_back(v);
  REQUIRE(pix.size() == 64);
  REQUIRE(pix[0] == 0);
  REQUIRE(pix[1] == 20);
  REQUIRE(pix[2] == 55);
  REQUIRE(pix[3] == 255);
}

TEST_CASE("field CSV names classes and pixel centers") {
  EscapeField f;
  f.window = {0.0, 1.0, 0.0, 1.0};
  f.res = {8, 8};
  f.max_iter = 10;
  f.cells.assign(64, FieldCell{1, 3, 0.0f});
  f.cells[0] = {0, 10, 0.0f};

  std::ostringstream os;
  write_field_csv(os, f);
  const std::string text = os.str();
  REQUIRE(text.rfind("x,y,class,steps\n", 0) == 0);
  REQUIRE(text.find("0.0625,0.9375,bounded,10") != std::string::npos);
  REQUIRE(text.find("escaping") != std::string::npos);
  REQUIRE(text.find("indeterminate") == std::string::npos);
}

TEST_CASE("components json labels possibly unbounded components") {
  ComponentReport rep;
  rep.bounded_cells = 3;
  FieldComponent c;
  c.label = 1;
  c.cells = 3;
  c.min_x = 0;
  c.max_x = 2;
  c.min_y = 1;
  c.max_y = 1;
  c.touches_edge = true;
  rep.components.push_back(c);
  const std::string doc = components_json("0000000000000000", rep);
  REQUIRE(doc.find("\"bounded_cells\":3") != std::string::npos);
  REQUIRE(doc.find("\"possibly_unbounded\":true") != std::string::npos);
}
