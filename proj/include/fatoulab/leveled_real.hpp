#pragma once

#include <cmath>
#include <limits>
#include <string>

namespace fatoulab {

/// Real number with a log-level tag: level 0 stores the value itself,
/// level k >= 1 stores x with value = exp(exp(...exp(x))), k times.
/// Iterated-radius recurrences overflow any fixed float range within a few
/// steps; order comparisons survive because log is monotone. Arithmetic on
/// values at level >= 2 absorbs additive/multiplicative constants that fall
/// below the representable resolution of the stored tier.
class LeveledReal {
 public:
  LeveledReal() = default;
  explicit LeveledReal(double v) : level_(0), x_(v) {}

  static LeveledReal from_value(double v) { return LeveledReal(v); }

  /// Value whose natural log is `lv` (i.e. e^lv), kept representable.
  static LeveledReal exp_of_log(double lv) {
    if (lv <= kLowerBound) return LeveledReal(std::exp(lv));
    LeveledReal r;
    r.level_ = 1;
    r.x_ = lv;
    return r;
  }

  int level() const { return level_; }
  double stored() const { return x_; }
  bool is_level0() const { return level_ == 0; }

  /// Plain double view; +inf once the value exceeds double range.
  double to_double() const {
    if (level_ == 0) return x_;
    if (level_ == 1 && x_ <= 709.0) return std::exp(x_);
    return std::numeric_limits<double>::infinity();
  }

  /// e^value.
  LeveledReal exp() const {
    if (level_ == 0 && x_ <= kLowerBound) return LeveledReal(std::exp(x_));
    LeveledReal r;
    r.level_ = level_ + 1;
    r.x_ = x_;
    return r;
  }

  /// log(value); value must be positive at level 0.
  LeveledReal log() const {
    if (level_ == 0) {
      if (x_ <= 0.0) return LeveledReal(-std::numeric_limits<double>::infinity());
      return LeveledReal(std::log(x_));
    }
    LeveledReal r;
    r.level_ = level_ - 1;
    r.x_ = x_;
    r.normalize();
    return r;
  }

  /// value * c, c > 0.
  LeveledReal mul(double c) const {
    if (level_ == 0) {
      const double p = x_ * c;
      if (std::isfinite(p) || x_ <= 0.0) return LeveledReal(p);
      return raised().mul(c);
    }
    if (level_ == 1) {
      LeveledReal r;
      r.level_ = 1;
      r.x_ = x_ + std::log(c);
      r.normalize();
      return r;
    }
    // log(c) falls below the resolution of the stored tier at level >= 2
    return *this;
  }

  /// value + a for a plain double a.
  LeveledReal add(double a) const {
    if (level_ == 0) {
      const double s = x_ + a;
      if (std::isfinite(s) || x_ <= 0.0) return LeveledReal(s);
      return raised().add(a);
    }
    if (level_ == 1) {
      if (x_ > 745.0 || std::abs(a) * std::exp(-x_) >= 1.0) {
        // either underflows against e^x or is dwarfed by it
        return *this;
      }
      LeveledReal r;
      r.level_ = 1;
      r.x_ = x_ + std::log1p(a * std::exp(-x_));
      r.normalize();
      return r;
    }
    return *this;
  }

  /// value + other; exact at level 0, dominant-plus-correction otherwise.
  LeveledReal add(const LeveledReal& o) const {
    if (level_ == 0 && o.level_ == 0) return LeveledReal(x_ + o.x_);
    const bool self_big = compare(*this, o) >= 0;
    const LeveledReal& big = self_big ? *this : o;
    const LeveledReal& small = self_big ? o : *this;
    if (small.level_ == 0) {
      if (small.x_ == 0.0) return big;
      return big.add(small.x_);
    }
    const LeveledReal lb = big.log();
    const LeveledReal ls = small.log();
    if (lb.level_ == 0 && ls.level_ == 0) {
      const double t = ls.x_ - lb.x_;
      if (t > -700.0) return exp_of_log(lb.x_ + std::log1p(std::exp(t)));
    }
    return big;
  }

  static int compare(const LeveledReal& a, const LeveledReal& b) {
    LeveledReal x = a, y = b;
    x.normalize();
    y.normalize();
    while (x.level_ != y.level_) {
      LeveledReal& lo = (x.level_ < y.level_) ? x : y;
      if (lo.level_ == 0 && lo.x_ <= 0.0) {
        // any level >= 1 value exceeds e^700; a nonpositive level-0 loses
        return (x.level_ < y.level_) ? -1 : 1;
      }
      lo = lo.raised();
    }
    if (x.x_ < y.x_) return -1;
    if (x.x_ > y.x_) return 1;
    return 0;
  }

  bool operator<(const LeveledReal& o) const { return compare(*this, o) < 0; }
  bool operator<=(const LeveledReal& o) const { return compare(*this, o) <= 0; }
  bool operator>(const LeveledReal& o) const { return compare(*this, o) > 0; }
  bool operator>=(const LeveledReal& o) const { return compare(*this, o) >= 0; }

  std::string to_string() const {
    std::string s = std::to_string(x_);
    for (int i = 0; i < level_; ++i) s = "exp(" + s + ")";
    return s;
  }

 private:
  // level >= 1 keeps x above this so the represented value overflows lower tiers
  static constexpr double kLowerBound = 700.0;

  void normalize() {
    while (level_ >= 1 && x_ <= kLowerBound) {
      x_ = std::exp(x_);
      --level_;
    }
  }

  /// Same value re-tagged one level up (x -> log x); requires x > 0.
  LeveledReal raised() const {
    LeveledReal r;
    r.level_ = level_ + 1;
    r.x_ = std::log(x_);
    return r;
  }

  int level_ = 0;
  double x_ = 0.0;
};

}  // namespace fatoulab
