#pragma once

#include <cmath>
#include <complex>
#include <limits>

namespace fatoulab {

namespace detail {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 6.28318530717958647692;

/// log(e^p + e^q) without leaving the log domain.
inline double log_sum_log(double p, double q) {
  if (p == kNegInf) return q;
  if (q == kNegInf) return p;
  const double larger = (p > q) ? p : q;
  const double smaller = (p > q) ? q : p;
  return larger + std::log1p(std::exp(smaller - larger));
}

/// Wrap an angle into (-pi, pi].
inline double wrap_phase(double x) {
  double y = std::remainder(x, kTwoPi);
  if (y <= -kPi) y += kTwoPi;
  return y;
}

}  // namespace detail

/// Nonnegative real stored as the natural log of its magnitude.
/// -inf encodes exact zero.
class LogScalar {
 public:
  LogScalar() = default;

  static LogScalar from_log(double log_value) { return LogScalar(log_value); }
  static LogScalar from_value(double v) {
    return LogScalar(v == 0.0 ? detail::kNegInf : std::log(std::abs(v)));
  }
  static LogScalar zero() { return LogScalar(detail::kNegInf); }

  double log_value() const { return logv_; }
  bool is_zero() const { return logv_ == detail::kNegInf; }

  /// Magnitude as a plain double; overflows to +inf past e^709.
  double value() const { return std::exp(logv_); }

  LogScalar operator*(const LogScalar& o) const { return LogScalar(logv_ + o.logv_); }
  LogScalar operator/(const LogScalar& o) const { return LogScalar(logv_ - o.logv_); }
  LogScalar operator+(const LogScalar& o) const {
    return LogScalar(detail::log_sum_log(logv_, o.logv_));
  }
  /// Magnitude raised to a real power.
  LogScalar pow(double p) const {
    if (is_zero()) return *this;
    return LogScalar(logv_ * p);
  }

  bool operator<(const LogScalar& o) const { return logv_ < o.logv_; }
  bool operator>(const LogScalar& o) const { return logv_ > o.logv_; }
  bool operator==(const LogScalar& o) const { return logv_ == o.logv_; }
  bool operator<=(const LogScalar& o) const { return logv_ <= o.logv_; }
  bool operator>=(const LogScalar& o) const { return logv_ >= o.logv_; }

 private:
  explicit LogScalar(double lv) : logv_(lv) {}
  double logv_ = detail::kNegInf;
};

/// Complex value stored as (log magnitude, phase), phase in (-pi, pi].
/// Exact zero has log_mag == -inf and phase 0.
struct LogComplex {
  double log_mag = detail::kNegInf;
  double phase = 0.0;

  LogComplex() = default;
  LogComplex(double lm, double ph) : log_mag(lm), phase(lm == detail::kNegInf ? 0.0 : detail::wrap_phase(ph)) {}

  static LogComplex zero() { return LogComplex(); }
  static LogComplex from_complex(const std::complex<double>& z) {
    const double m = std::abs(z);
    if (m == 0.0) return zero();
    return LogComplex(std::log(m), std::arg(z));
  }

  bool is_zero() const { return log_mag == detail::kNegInf; }

  std::complex<double> to_complex() const {
    if (is_zero()) return {0.0, 0.0};
    const double m = std::exp(log_mag);
    return {m * std::cos(phase), m * std::sin(phase)};
  }

  LogComplex operator*(const LogComplex& o) const {
    if (is_zero() || o.is_zero()) return zero();
    return LogComplex(log_mag + o.log_mag, phase + o.phase);
  }

  /// Sum via factoring out the larger magnitude, so intermediates stay bounded.
  LogComplex operator+(const LogComplex& o) const {
    if (is_zero()) return o;
    if (o.is_zero()) return *this;
    const LogComplex& big = (log_mag >= o.log_mag) ? *this : o;
    const LogComplex& small = (log_mag >= o.log_mag) ? o : *this;
    const double w = std::exp(small.log_mag - big.log_mag);  // <= 1
    const double re = std::cos(big.phase) + w * std::cos(small.phase);
    const double im = std::sin(big.phase) + w * std::sin(small.phase);
    const double mag2 = re * re + im * im;
    if (mag2 == 0.0) return zero();
    return LogComplex(big.log_mag + 0.5 * std::log(mag2), std::atan2(im, re));
  }
};

}  // namespace fatoulab
