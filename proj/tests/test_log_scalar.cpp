#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <limits>

#include "fatoulab/log_scalar.hpp"

using fatoulab::LogComplex;
using fatoulab::LogScalar;
namespace detail = fatoulab::detail;

TEST_CASE("log_sum_log adds magnitudes in the log domain") {
  const double l5 = detail::log_sum_log(std::log(2.0), std::log(3.0));
  REQUIRE(l5 == Catch::Approx(std::log(5.0)).epsilon(1e-14));
  REQUIRE(detail::log_sum_log(detail::kNegInf, 1.5) == 1.5);
  REQUIRE(detail::log_sum_log(1.5, detail::kNegInf) == 1.5);
  REQUIRE(detail::log_sum_log(detail::kNegInf, detail::kNegInf) == detail::kNegInf);
  // widely separated operands keep the dominant term intact
  REQUIRE(detail::log_sum_log(1000.0, 0.0) == 1000.0);
}

TEST_CASE("wrap_phase lands in (-pi, pi]") {
  REQUIRE(detail::wrap_phase(0.0) == 0.0);
  REQUIRE(detail::wrap_phase(detail::kTwoPi) == 0.0);
  REQUIRE(detail::wrap_phase(detail::kPi) == Catch::Approx(detail::kPi));
  REQUIRE(detail::wrap_phase(-detail::kPi) == Catch::Approx(detail::kPi));
  REQUIRE(detail::wrap_phase(3.0 * detail::kPi) == Catch::Approx(detail::kPi));
  for (double x : {-12.3, -4.0, 0.7, 9.9, 123.456}) {
    const double y = detail::wrap_phase(x);
    REQUIRE(y > -detail::kPi - 1e-15);
    REQUIRE(y <= detail::kPi + 1e-15);
    REQUIRE(std::remainder(y - x, detail::kTwoPi) == Catch::Approx(0.0).margin(1e-9));
  }
}

TEST_CASE("LogScalar round trips values through the log domain") {
  const LogScalar a = LogScalar::from_value(12.0);
  REQUIRE(a.value() == Catch::Approx(12.0).epsilon(1e-14));
  REQUIRE(a.log_value() == Catch::Approx(std::log(12.0)).epsilon(1e-14));

  const LogScalar z = LogScalar::from_value(0.0);
  REQUIRE(z.log_value() == detail::kNegInf);
  REQUIRE(z.value() == 0.0);
  REQUIRE(LogScalar::zero().log_value() == detail::kNegInf);
}

TEST_CASE("LogScalar arithmetic matches plain arithmetic on small values") {
  const LogScalar a = LogScalar::from_value(3.0);
  const LogScalar b = LogScalar::from_value(5.0);
  REQUIRE((a * b).value() == Catch::Approx(15.0).epsilon(1e-13));
  REQUIRE((b / a).value() == Catch::Approx(5.0 / 3.0).epsilon(1e-13));
  REQUIRE((a + b).value() == Catch::Approx(8.0).epsilon(1e-13));
  REQUIRE(a.pow(4.0).value() == Catch::Approx(81.0).epsilon(1e-13));

  const LogScalar zero = LogScalar::zero();
  REQUIRE((zero + a).value() == Catch::Approx(3.0).epsilon(1e-14));
  REQUIRE((a + zero).value() == Catch::Approx(3.0).epsilon(1e-14));
  REQUIRE((zero * a).log_value() == detail::kNegInf);
}

TEST_CASE("LogScalar survives magnitudes beyond double range") {
  const LogScalar big = LogScalar::from_log(1000.0);
  const LogScalar tiny = LogScalar::from_log(-1000.0);
  REQUIRE((big * big).log_value() == Catch::Approx(2000.0));
  REQUIRE((big / tiny).log_value() == Catch::Approx(2000.0));
  REQUIRE(big.pow(3.0).log_value() == Catch::Approx(3000.0));
  // adding a vastly smaller term leaves log unchanged
  REQUIRE((big + tiny).log_value() == Catch::Approx(1000.0));
}

TEST_CASE("LogScalar comparisons order by magnitude") {
  const LogScalar a = LogScalar::from_log(2.0);
  const LogScalar b = LogScalar::from_log(3.0);
  REQUIRE(a < b);
  REQUIRE(b > a);
  REQUIRE(a <= a);
  REQUIRE(a >= a);
  REQUIRE(a == a);
  REQUIRE(a != b);
  REQUIRE(LogScalar::zero() < a);
}

TEST_CASE("LogComplex constructor normalizes phase") {
  const LogComplex w(1.0, 3.0 * detail::kPi);
  REQUIRE(w.phase == Catch::Approx(detail::kPi));
  // a zero magnitude forces a canonical phase so equal zeros compare equal
  const LogComplex z(detail::kNegInf, 2.5);
  REQUIRE(z.phase == 0.0);
  REQUIRE(z.is_zero());
  REQUIRE(LogComplex::zero().is_zero());
}

TEST_CASE("LogComplex round trips std::complex") {
  const std::complex<double> v(3.0, 4.0);
  const LogComplex w = LogComplex::from_complex(v);
  REQUIRE(w.log_mag == Catch::Approx(std::log(5.0)).epsilon(1e-14));
  REQUIRE(w.phase == Catch::Approx(std::atan2(4.0, 3.0)).epsilon(1e-14));
  const std::complex<double> back = w.to_complex();
  REQUIRE(back.real() == Catch::Approx(3.0).epsilon(1e-13));
  REQUIRE(back.imag() == Catch::Approx(4.0).epsilon(1e-13));
  REQUIRE(LogComplex::from_complex({0.0, 0.0}).is_zero());
}

TEST_CASE("LogComplex multiplication adds logs and phases") {
  const LogComplex u = LogComplex::from_complex({1.0, 1.0});
  const LogComplex sq = u * u;
  REQUIRE(sq.log_mag == Catch::Approx(std::log(2.0)).epsilon(1e-13));
  REQUIRE(sq.phase == Catch::Approx(detail::kPi / 2.0).epsilon(1e-13));
}

TEST_CASE("LogComplex addition matches complex addition") {
  const LogComplex a = LogComplex::from_complex({3.0, 0.0});
  const LogComplex b = LogComplex::from_complex({4.0, 0.0});
  REQUIRE((a + b).to_complex().real() == Catch::Approx(7.0).epsilon(1e-13));

  const LogComplex c = LogComplex::from_complex({1.0, 2.0});
  const LogComplex d = LogComplex::from_complex({-0.5, 0.25});
  const std::complex<double> s = (c + d).to_complex();
  REQUIRE(s.real() == Catch::Approx(0.5).epsilon(1e-12));
  REQUIRE(s.imag() == Catch::Approx(2.25).epsilon(1e-12));

  REQUIRE((LogComplex::zero() + c).to_complex().real() == Catch::Approx(1.0));
}

TEST_CASE("LogComplex addition cancels opposite terms to rounding dust") {
  // sin(pi) != 0 in doubles, so 1 + (-1) leaves a ~1e-16 residue rather than
  // an exact zero; the contract is cancellation down to the rounding floor
  const LogComplex p(0.0, 0.0);
  const LogComplex m(0.0, detail::kPi);
  REQUIRE((p + m).log_mag < -30.0);
}

TEST_CASE("LogComplex addition keeps huge magnitudes in range") {
  const LogComplex big(5000.0, 0.3);
  const LogComplex small(-5000.0, 1.1);
  const LogComplex s = big + small;
  REQUIRE(s.log_mag == Catch::Approx(5000.0));
  REQUIRE(s.phase == Catch::Approx(0.3));
  const LogComplex doubled = big + big;
  REQUIRE(doubled.log_mag == Catch::Approx(5000.0 + std::log(2.0)).epsilon(1e-14));
}
