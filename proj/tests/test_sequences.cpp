#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fatoulab/sequences.hpp"

using namespace fatoulab;

namespace {

GrowthProfile gap_profile() {
  static const GrowthProfile p =
      growth_profile(CoefficientSeries::gap_squares(), {0.5, 6.0, 64});
  return p;
}

}  // namespace

TEST_CASE("tail envelope fit recovers the exponential") {
  const auto f = CoefficientSeries::exp_series();
  const GrowthProfile p = growth_profile(f, {0.5, 4.0, 32});
  const GrowthCurve c = fit_growth_curve(p);
  REQUIRE(c.mode() == CurveMode::fitted);
  REQUIRE(c.rho_hat() == Catch::Approx(1.0).epsilon(1e-8));
  REQUIRE(c.log_sigma_hat() == Catch::Approx(0.0).margin(1e-6));
  REQUIRE(c.log_M(LeveledReal(3.0)).to_double() ==
          Catch::Approx(std::exp(3.0)).epsilon(1e-6));
}

TEST_CASE("envelope fit rejects unusable profiles") {
  const auto mono = CoefficientSeries::monomial({3.0, 0.0}, 2);
  const GrowthProfile pm = growth_profile(mono, {0.5, 4.0, 32});
  REQUIRE_THROWS_AS(fit_growth_curve(pm), FitRejected);

  const auto f = CoefficientSeries::exp_series();
  const GrowthProfile small = growth_profile(f, {-3.0, -0.1, 20});
  REQUIRE_THROWS_AS(fit_growth_curve(small), FitRejected);

  REQUIRE_THROWS_AS(GrowthCurve::fitted(0.0, 1.0), FitRejected);
  REQUIRE_THROWS_AS(GrowthCurve::fitted(std::nan(""), 1.0), FitRejected);
}

TEST_CASE("closed-form curves evaluate at every level") {
  const GrowthCurve e = GrowthCurve::closed_form(CoefficientSeries::exp_series());
  REQUIRE(e.mode() == CurveMode::closed_form);
  REQUIRE(e.log_M(LeveledReal(2.0)).to_double() == Catch::Approx(std::exp(2.0)));
  const LeveledReal huge = e.log_M(LeveledReal(800.0));
  REQUIRE(huge.level() == 1);
  REQUIRE(huge.stored() == 800.0);

  const GrowthCurve c = GrowthCurve::closed_form(CoefficientSeries::cos_sqrt());
  REQUIRE(c.log_M(LeveledReal(2.0)).to_double() ==
          Catch::Approx(2.029479615715041).epsilon(1e-12));

  const GrowthCurve m =
      GrowthCurve::closed_form(CoefficientSeries::monomial({3.0, 0.0}, 2));
  REQUIRE(m.log_M(LeveledReal(5.0)).to_double() ==
          Catch::Approx(2.0 * 5.0 + std::log(3.0)).epsilon(1e-14));

  REQUIRE_THROWS_AS(GrowthCurve::closed_form(CoefficientSeries::gap_squares()),
                    std::invalid_argument);
}

TEST_CASE("exact curves evaluate the series and refuse unreachable radii") {
  const GrowthCurve c = GrowthCurve::exact(CoefficientSeries::gap_squares());
  REQUIRE(c.log_M(LeveledReal(3.0)).to_double() ==
          Catch::Approx(17.8979978086488).epsilon(1e-9));
  REQUIRE_THROWS_AS(c.log_M(LeveledReal(750.0).exp()), EvaluationFailed);
}

TEST_CASE("closed-form sequences reproduce the tower values") {
  const GrowthCurve curve = GrowthCurve::closed_form(CoefficientSeries::exp_series());
  const SequencePair seq =
      build_sequences(curve, 256.0, 2.0, 2.0, SequenceVariant::half_alpha, 8);
  REQUIRE(seq.log_R.size() == 8);
  REQUIRE(seq.log_R[0].to_double() == 256.0);
  // R_2 = exp(256 / 4)
  REQUIRE(seq.log_R[1].to_double() ==
          Catch::Approx(6.235149080811617e27).epsilon(1e-12));
  REQUIRE(seq.log_S[1].to_double() == Catch::Approx(7.38905609893065).epsilon(1e-12));
  // deeper entries climb the tower instead of overflowing
  REQUIRE(seq.log_R[2].level() >= 1);
  for (bool ok : seq.property_ok) REQUIRE(ok);
  REQUIRE(seq.n1 == 1);
  REQUIRE(seq.verified);
  REQUIRE(seq.note.empty());
}

TEST_CASE("sequence iteration rejects seeds below the expansion threshold") {
  const GrowthCurve curve = GrowthCurve::closed_form(CoefficientSeries::exp_series());
  REQUIRE_THROWS_AS(
      build_sequences(curve, 4.0, 1.0, 2.0, SequenceVariant::half_alpha, 4),
      SeedTooSmall);
  REQUIRE_THROWS_AS(
      build_sequences(curve, 256.0, 2.0, 1.0, SequenceVariant::half_alpha, 4),
      std::invalid_argument);
  REQUIRE_THROWS_AS(
      build_sequences(curve, 256.0, 2.0, 2.0, SequenceVariant::half_alpha, 1),
      std::invalid_argument);
  REQUIRE_THROWS_AS(
      build_sequences(curve, -1.0, 2.0, 2.0, SequenceVariant::half_alpha, 4),
      std::invalid_argument);
}

TEST_CASE("two-tier gap sequences match direct evaluation while reachable") {
  const auto gap = CoefficientSeries::gap_squares();
  const GrowthCurve curve = GrowthCurve::two_tier(gap, gap_profile());
  REQUIRE(curve.mode() == CurveMode::two_tier);

  const SequencePair half =
      build_sequences(curve, 16.0, 2.0, 2.0, SequenceVariant::half_alpha, 3);
  REQUIRE(half.log_R[1].to_double() ==
          Catch::Approx(51.90069587431272).epsilon(1e-9));
  REQUIRE(half.log_S[1].to_double() ==
          Catch::Approx(5.7567267379803155).epsilon(1e-9));
  REQUIRE(half.log_R[2].to_double() ==
          Catch::Approx(431558.0711279981).epsilon(1e-9));
  REQUIRE(half.log_S[2].to_double() ==
          Catch::Approx(312.74426462503646).epsilon(1e-9));
  REQUIRE(half.n1 == 1);
  REQUIRE(half.verified);

  const SequencePair quarter =
      build_sequences(curve, 40.0, 1.5, 2.0, SequenceVariant::quarter_alpha, 4);
  REQUIRE(quarter.log_R[1].to_double() ==
          Catch::Approx(145.228204287541).epsilon(1e-9));
  REQUIRE(quarter.log_S[1].to_double() ==
          Catch::Approx(3.1485634038934127).epsilon(1e-9));
  REQUIRE(quarter.log_R[2].to_double() ==
          Catch::Approx(76555414.42752767).epsilon(1e-9));
  REQUIRE(quarter.log_S[2].to_double() ==
          Catch::Approx(21.05936192796877).epsilon(1e-9));
  // the fourth radius needs the fitted tier and lives one level up
  REQUIRE(quarter.log_R.size() == 4);
  REQUIRE(quarter.log_R[3].level() == 1);
  REQUIRE(quarter.verified);
}

TEST_CASE("max-term bound tables pin the classical constants") {
  const GridSpec grid{0.5, 3.0, 32};

  const MaxTermBounds e =
      check_max_term_bounds(CoefficientSeries::exp_series(), grid);
  REQUIRE(e.K == Catch::Approx(2.1275953694816216).epsilon(1e-12));
  REQUIRE(e.log_s_witness == Catch::Approx(1.3064516129032258).epsilon(1e-12));
  // the doubled-argument inequality already holds from the witness onward,
  // while the squared-argument one survives the backward scan to the grid edge
  REQUIRE(e.log_s0 == Catch::Approx(1.3064516129032258).epsilon(1e-12));
  REQUIRE(e.log_s1 == 0.5);
  REQUIRE(e.rows.size() == 64);

  const MaxTermBounds c = check_max_term_bounds(CoefficientSeries::cos_sqrt(), grid);
  REQUIRE(c.K == Catch::Approx(2.015494556748829).epsilon(1e-12));
  REQUIRE(c.log_s_witness == Catch::Approx(2.596774193548387).epsilon(1e-12));
  REQUIRE(c.log_s0 == Catch::Approx(2.596774193548387).epsilon(1e-12));
  REQUIRE(c.log_s1 == 0.5);

  const MaxTermBounds g = check_max_term_bounds(CoefficientSeries::gap_squares(), grid);
  REQUIRE(g.K == Catch::Approx(2.047752621264958).epsilon(1e-12));
  REQUIRE(g.log_s_witness == Catch::Approx(1.3064516129032258).epsilon(1e-12));
  REQUIRE(g.log_s0 == Catch::Approx(1.3064516129032258).epsilon(1e-12));
  REQUIRE(g.log_s1 == 0.5);

  // a bounded function never produces a max term above the K floor
  REQUIRE_THROWS_AS(
      check_max_term_bounds(CoefficientSeries::constant({5.0, 0.0}), grid),
      NotSatisfiedOnGrid);
}

TEST_CASE("capped-exponent records reproduce the ledger of the quarter chain") {
  const auto gap = CoefficientSeries::gap_squares();
  const GrowthCurve curve = GrowthCurve::two_tier(gap, gap_profile());
  const SequencePair seq =
      build_sequences(curve, 40.0, 1.5, 2.0, SequenceVariant::quarter_alpha, 4);
  const CappedExponentReport rep = capped_exponent_records(gap, seq, 100.0);

  REQUIRE(rep.requested == 4);
  REQUIRE(rep.records.size() == 2);
  REQUIRE(rep.notice.find("n = 3") != std::string::npos);

  const CappedExponentRecord& r1 = rep.records[0];
  REQUIRE(r1.nu_quarter == 144.0);
  REQUIRE(r1.log_M_4S2 == Catch::Approx(77.47453501968019).epsilon(1e-9));
  REQUIRE(r1.b == Catch::Approx(0.023990789230222884).epsilon(1e-9));
  REQUIRE(r1.l == Catch::Approx(0.6432805414426297).epsilon(1e-12));
  REQUIRE(r1.k == Catch::Approx(0.00023990789230222886).epsilon(1e-9));
  REQUIRE(r1.nu_capped == 1.0);
  REQUIRE(r1.a == Catch::Approx(0.023990789230222884).epsilon(1e-9));
  REQUIRE(r1.holds);

  const CappedExponentRecord& r2 = rep.records[1];
  REQUIRE(r2.nu_quarter == 76562500.0);
  REQUIRE(r2.log_M_4S2 == Catch::Approx(2167.4919207699763).epsilon(1e-9));
  REQUIRE(r2.b == Catch::Approx(16.296754805290245).epsilon(1e-9));
  REQUIRE(r2.l == Catch::Approx(0.44043284521827636).epsilon(1e-9));
  REQUIRE(r2.k == Catch::Approx(0.16296754805290245).epsilon(1e-9));
  REQUIRE(r2.nu_capped == 4.0);
  REQUIRE(r2.a == Catch::Approx(4.074188701322561).epsilon(1e-9));
  REQUIRE(r2.holds);

  REQUIRE_THROWS_AS(capped_exponent_records(gap, seq, 1.0), std::invalid_argument);
}

TEST_CASE("central-index bound is an eventual statement that fails at desk scale") {
  const auto gap = CoefficientSeries::gap_squares();
  const GrowthCurve curve = GrowthCurve::two_tier(gap, gap_profile());
  const SequencePair seq =
      build_sequences(curve, 40.0, 1.5, 2.0, SequenceVariant::quarter_alpha, 4);
  const CappedExponentReport recs = capped_exponent_records(gap, seq, 100.0);
  REQUIRE_THROWS_AS(check_central_index_bound(gap, recs), NotSatisfiedOnGrid);

  CappedExponentReport empty;
  REQUIRE_THROWS_AS(check_central_index_bound(gap, empty), std::invalid_argument);
}

TEST_CASE("log-radius growth comparison holds for the exponential") {
  const auto f = CoefficientSeries::exp_series();
  const LogRadiusGrowthReport rep = check_log_radius_growth(f, 2, {1.0, 8.0, 32});
  REQUIRE(rep.m == 2);
  REQUIRE(rep.u_star == 1.0);
  const LogRadiusGrowthRow& last = rep.rows.back();
  REQUIRE(last.u == 8.0);
  REQUIRE(last.log_inner == Catch::Approx(7.38905609893065).epsilon(1e-9));
  REQUIRE(last.lhs_log == Catch::Approx(14.7781121978613).epsilon(1e-8));
  REQUIRE(last.rhs_log == Catch::Approx(4.921939327225543).epsilon(1e-8));
  REQUIRE(last.holds);

  // a small polynomial never gets its inner modulus above 1
  REQUIRE_THROWS_AS(
      check_log_radius_growth(CoefficientSeries::monomial({0.01, 0.0}, 1), 2,
                              {0.2, 0.8, 8}),
      NotSatisfiedOnGrid);
  REQUIRE_THROWS_AS(check_log_radius_growth(f, 1, {1.0, 8.0, 32}),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(check_log_radius_growth(f, 2, {0.0, 8.0, 32}),
                    std::invalid_argument);
}

TEST_CASE("minimum-maximum crossing has three regimes") {
  // constant-modulus circles: the crossing is the base radius itself
  const auto mono = CoefficientSeries::monomial({3.0, 0.0}, 2);
  const auto at_base = find_min_max_crossing(mono, 1.0, 2.0);
  REQUIRE(at_base.has_value());
  REQUIRE(*at_base == 1.0);

  // exp: the minimum modulus direction never recovers to M(r)
  REQUIRE_FALSE(find_min_max_crossing(CoefficientSeries::exp_series(), 1.0, 2.0)
                    .has_value());

  // gap series: the minimum climbs back inside the window
  const auto gap = CoefficientSeries::gap_squares();
  const auto root = find_min_max_crossing(gap, 3.0, 2.0);
  REQUIRE(root.has_value());
  REQUIRE(*root == Catch::Approx(3.081185483424833).margin(1e-6));
  const double target = max_modulus(gap, 3.0);
  REQUIRE(min_modulus(gap, *root) == Catch::Approx(target).margin(1e-5));

  REQUIRE_THROWS_AS(find_min_max_crossing(gap, 0.0, 2.0), std::invalid_argument);
  REQUIRE_THROWS_AS(find_min_max_crossing(gap, 3.0, 1.0), std::invalid_argument);
}

TEST_CASE("power comparison of maximum moduli kicks in past the fourth root of 4") {
  const auto f = CoefficientSeries::exp_series();
  const MaxModulusPowerReport rep = check_max_modulus_power(f, {0.0, 1.0, 201}, 2.0);
  // e^{4x} >= 4 e^x from x = log(4)/3 ~ 0.4621; first grid point past it
  REQUIRE(rep.log_r_star == Catch::Approx(0.465).margin(1e-12));
  REQUIRE(rep.rows.front().holds == false);
  REQUIRE(rep.rows.back().holds);

  const auto mono = CoefficientSeries::monomial({1.0, 0.0}, 2);
  // unit coefficient: both sides equal 8x, so the comparison holds with equality
  const MaxModulusPowerReport pm = check_max_modulus_power(mono, {0.5, 2.0, 16}, 2.0);
  REQUIRE(pm.log_r_star == 0.5);

  // a constant above 1 has log M fixed, so the power comparison never holds
  REQUIRE_THROWS_AS(
      check_max_modulus_power(CoefficientSeries::constant({5.0, 0.0}),
                              {0.5, 2.0, 16}, 2.0),
      NotSatisfiedOnGrid);
}

TEST_CASE("nested circles order and label their radii") {
  const auto gap = CoefficientSeries::gap_squares();
  const GrowthCurve curve = GrowthCurve::exact(gap);
  const SequencePair seq =
      build_sequences(curve, 16.0, 2.0, 2.0, SequenceVariant::half_alpha, 2);

  const NestedCircles c = nested_circle_radii(gap, seq, 1);
  REQUIRE(c.log_T.to_double() == 2.0);
  REQUIRE(c.log_ell.to_double() == Catch::Approx(5.386294361119891).epsilon(1e-12));
  REQUIRE(c.log_T2.to_double() == Catch::Approx(10.772588722239782).epsilon(1e-12));
  REQUIRE(c.t1_exact);
  REQUIRE(c.note.empty());
  REQUIRE(c.log_T1.to_double() == Catch::Approx(5.389918728770491).margin(1e-6));
  REQUIRE(LeveledReal::compare(c.log_T, c.log_T1) < 0);
  REQUIRE(LeveledReal::compare(c.log_T1, c.log_T2) <= 0);

  REQUIRE_THROWS_AS(nested_circle_radii(gap, seq, 0), std::out_of_range);
  REQUIRE_THROWS_AS(nested_circle_radii(gap, seq, 9), std::out_of_range);
}

TEST_CASE("nested circles fall back to the midpoint when no crossing exists") {
  const auto f = CoefficientSeries::exp_series();
  const GrowthCurve curve = GrowthCurve::closed_form(f);
  const SequencePair seq =
      build_sequences(curve, 256.0, 2.0, 2.0, SequenceVariant::half_alpha, 2);
  const NestedCircles c = nested_circle_radii(f, seq, 1);
  REQUIRE(c.log_ell.to_double() == Catch::Approx(68.15888308335967).epsilon(1e-12));
  REQUIRE(c.log_T2.to_double() == Catch::Approx(136.31776616671934).epsilon(1e-12));
  REQUIRE_FALSE(c.t1_exact);
  REQUIRE_FALSE(c.note.empty());
  REQUIRE(c.log_T1.to_double() ==
          Catch::Approx(68.15888308335967 * 1.5).epsilon(1e-12));
}

TEST_CASE("slow-growth coupling verifies the exponential seeds") {
  const auto f = CoefficientSeries::exp_series();
  const GrowthCurve curve = GrowthCurve::closed_form(f);
  const SequencePair seq =
      build_sequences(curve, 256.0, 2.0, 2.0, SequenceVariant::half_alpha, 4);

  const SlowGrowthReport rep = slow_growth_check(f, 1.0, 1.0, seq);
  REQUIRE(rep.n_lambda_rho == 2);
  REQUIRE(rep.seed_radius_ok);
  REQUIRE(rep.seed_margin_ok);
  REQUIRE(rep.seed_max_term_ok);
  // n = 1 sits exactly on the coupling boundary: 2/4 = 256/512
  REQUIRE(rep.induction_ok.size() == seq.log_R.size());
  for (bool ok : rep.induction_ok) REQUIRE(ok);
  REQUIRE(rep.n1 == 1);
  REQUIRE(rep.verified);

  REQUIRE_THROWS_AS(slow_growth_check(f, 1.0, 0.0, seq), UndefinedForZeroLowerOrder);
  REQUIRE_THROWS_AS(slow_growth_check(f, 0.5, 1.0, seq), std::invalid_argument);
}
