#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fatoulab/growth.hpp"

using namespace fatoulab;

TEST_CASE("max term of exp breaks ties upward") {
  const auto f = CoefficientSeries::exp_series();
  // r = 1: terms 1/k! peak jointly at k = 0 and k = 1
  const MaxTermResult at1 = max_term(f, 0.0);
  REQUIRE(at1.nu == 1);
  REQUIRE(at1.log_mu == Catch::Approx(0.0).margin(1e-12));
  // r = 2: 2^1/1! = 2^2/2! ties at k = 1, 2
  const MaxTermResult at2 = max_term(f, std::log(2.0));
  REQUIRE(at2.nu == 2);
  REQUIRE(at2.log_mu == Catch::Approx(std::log(2.0)).epsilon(1e-12));

  const MaxTermResult at10 = max_term(f, std::log(10.0));
  REQUIRE(at10.nu == 10);
  REQUIRE(at10.log_mu ==
          Catch::Approx(10.0 * std::log(10.0) - std::lgamma(11.0)).epsilon(1e-12));
}

TEST_CASE("max term walks gap support correctly") {
  const auto gap = CoefficientSeries::gap_squares();
  const MaxTermResult a = max_term(gap, 5.0);
  REQUIRE(a.nu == 144);
  REQUIRE(a.log_mu == Catch::Approx(144.9424609752898).epsilon(1e-12));

  REQUIRE(max_term(gap, std::log(100.0)).nu == 100);
  REQUIRE(max_term(gap, std::log(2.0) + 5.0).nu == 289);
}

TEST_CASE("max term of a monomial is the monomial") {
  const auto mono = CoefficientSeries::monomial({3.0, 0.0}, 2);
  for (double log_r : {-1.0, 0.0, 2.5}) {
    const MaxTermResult mt = max_term(mono, log_r);
    REQUIRE(mt.nu == 2);
    REQUIRE(mt.log_mu == Catch::Approx(std::log(3.0) + 2.0 * log_r).epsilon(1e-14));
  }
}

TEST_CASE("max term reaches radii far beyond enumeration") {
  const auto f = CoefficientSeries::exp_series();
  // nu(e^40) ~ 2.4e17: the peak is located by bracketing, not enumeration.
  // The objective k log r - lgamma(k+1) is flat to ~1 ulp over a ~1e10-wide
  // window at this scale, so the maximizer is pinned only to ~5e-8 relative.
  const MaxTermResult mt = max_term(f, 40.0);
  REQUIRE(static_cast<double>(mt.nu) == Catch::Approx(std::exp(40.0)).epsilon(1e-6));
  REQUIRE(mt.log_mu > 0.0);

  // the central index itself overflows integer range long before the radius cap
  REQUIRE_THROWS_AS(max_term(f, 600.0), TruncationUnavailable);
  REQUIRE_THROWS_AS(max_term(f, 701.0), TruncationUnavailable);
}

TEST_CASE("circle extrema of exp sit on the real axis") {
  const auto f = CoefficientSeries::exp_series();
  const double e = std::exp(1.0);
  REQUIRE(max_modulus(f, 1.0) == Catch::Approx(e).epsilon(1e-9));
  REQUIRE(min_modulus(f, 1.0) == Catch::Approx(-e).epsilon(1e-9));
}

TEST_CASE("min modulus reports zeros on the circle as -inf") {
  // f(z) = z - 1 vanishes on |z| = 1
  const auto f = CoefficientSeries::from_coefficients(
      {{0, LogComplex::from_complex({-1.0, 0.0})},
       {1, LogComplex::from_complex({1.0, 0.0})}});
  REQUIRE(min_modulus(f, 0.0) == -std::numeric_limits<double>::infinity());
  // away from the zero the minimum is |r - 1|
  REQUIRE(min_modulus(f, std::log(3.0)) == Catch::Approx(std::log(2.0)).epsilon(1e-9));
  REQUIRE(max_modulus(f, std::log(3.0)) == Catch::Approx(std::log(4.0)).epsilon(1e-9));
}

TEST_CASE("positive coefficients put the maximum at theta = 0") {
  const auto gap = CoefficientSeries::gap_squares();
  REQUIRE(max_modulus(gap, 3.0) == Catch::Approx(17.8979978086488).epsilon(1e-9));

  const auto cosf = CoefficientSeries::cos_sqrt();
  REQUIRE(max_modulus(cosf, 2.0) == Catch::Approx(2.029479615715041).epsilon(1e-9));
}

TEST_CASE("growth profile samples are internally consistent") {
  const auto f = CoefficientSeries::exp_series();
  const GridSpec grid{0.0, 4.0, 48};
  REQUIRE(grid_point(grid, 0) == 0.0);
  REQUIRE(grid_point(grid, 47) == 4.0);

  const GrowthProfile p = growth_profile(f, grid);
  REQUIRE(p.valid_count() == 48);
  for (const auto& s : p.samples) {
    REQUIRE(s.valid);
    REQUIRE(s.log_mu <= s.log_M + 1e-9 * std::max(1.0, std::fabs(s.log_M)));
    REQUIRE(s.log_L <= s.log_M);
    REQUIRE(s.nu >= 0);
  }
}

TEST_CASE("growth profile is invariant under thread count") {
  const auto gap = CoefficientSeries::gap_squares();
  ProfileOpts one;
  one.threads = 1;
  ProfileOpts four;
  four.threads = 4;
  const GridSpec grid{0.0, 5.0, 40};
  const GrowthProfile a = growth_profile(gap, grid, one);
  const GrowthProfile b = growth_profile(gap, grid, four);
  REQUIRE(a.samples.size() == b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    REQUIRE(a.samples[i].log_M == b.samples[i].log_M);
    REQUIRE(a.samples[i].log_L == b.samples[i].log_L);
    REQUIRE(a.samples[i].log_mu == b.samples[i].log_mu);
    REQUIRE(a.samples[i].nu == b.samples[i].nu);
  }
}

TEST_CASE("angular refinement has converged at the default sampling") {
  const auto f = CoefficientSeries::exp_series();
  for (double log_r : {0.5, 1.5, 3.0}) {
    const double coarse = max_modulus(f, log_r, 1024);
    const double fine = max_modulus(f, log_r, 2048);
    REQUIRE(coarse == Catch::Approx(fine).margin(1e-9));
  }
}

TEST_CASE("order estimate recovers the exponential") {
  const auto f = CoefficientSeries::exp_series();
  const GrowthProfile p = growth_profile(f, {0.5, 4.0, 32});
  const GrowthExponents e = estimate_order(p);
  REQUIRE(e.rho == Catch::Approx(1.0).epsilon(1e-8));
  REQUIRE(e.lambda == Catch::Approx(1.0).epsilon(1e-8));
  REQUIRE(e.fit_slope == Catch::Approx(1.0).epsilon(1e-6));
  REQUIRE(e.used_samples >= 2);
  REQUIRE_FALSE(e.finite_support);
}

TEST_CASE("polynomials have order zero and no defined type") {
  const auto mono = CoefficientSeries::monomial({3.0, 0.0}, 2);
  const GrowthProfile p = growth_profile(mono, {0.0, 6.0, 64});
  GrowthExponents e = estimate_order(p);
  REQUIRE(e.rho == 0.0);
  REQUIRE(e.lambda == 0.0);
  REQUIRE(e.finite_support);
  REQUIRE_THROWS_AS(estimate_type(p, e), UndefinedForZeroOrder);
}

TEST_CASE("order estimate demands enough samples") {
  const auto f = CoefficientSeries::exp_series();
  const GrowthProfile p = growth_profile(f, {0.0, 2.0, 8});
  REQUIRE_THROWS_AS(estimate_order(p), InsufficientSamples);
}

TEST_CASE("type estimate classifies the exponential as mean type") {
  const auto f = CoefficientSeries::exp_series();
  const GrowthProfile p = growth_profile(f, {0.5, 4.0, 32});
  GrowthExponents e = estimate_order(p);
  estimate_type(p, e);
  REQUIRE(e.sigma_type == Catch::Approx(1.0).epsilon(1e-6));
  REQUIRE(e.type_class == TypeClass::mean);
}

TEST_CASE("component boundedness gate") {
  GrowthExponents e;
  e.rho = 0.3;
  REQUIRE(classify_corollary(e).qualifies);
  e.rho = 0.5;
  e.type_class = TypeClass::minimal;
  REQUIRE(classify_corollary(e).qualifies);
  e.type_class = TypeClass::mean;
  REQUIRE_FALSE(classify_corollary(e).qualifies);
  e.rho = 1.0;
  REQUIRE_FALSE(classify_corollary(e).qualifies);
  REQUIRE_FALSE(type_class_name(TypeClass::mean) == nullptr);
}
