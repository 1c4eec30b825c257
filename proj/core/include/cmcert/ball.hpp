#pragma once

#include <mpfr.h>

#include <iosfwd>
#include <string>

#include "cmcert/rational.hpp"

namespace cmcert {

/// Owning wrapper around an mpfr_t.
class BigFloat {
 public:
  explicit BigFloat(mpfr_prec_t prec = 64);
  BigFloat(const BigFloat& o);
  BigFloat(BigFloat&& o) noexcept;
  BigFloat& operator=(const BigFloat& o);
  BigFloat& operator=(BigFloat&& o) noexcept;
  ~BigFloat();

  mpfr_ptr get() { return value_; }
  mpfr_srcptr get() const { return value_; }
  mpfr_prec_t precision() const { return mpfr_get_prec(value_); }
  double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }
  /// Scientific notation with `digits` significant digits.
  std::string to_string(int digits, mpfr_rnd_t rnd = MPFR_RNDN) const;

 private:
  mpfr_t value_;
};

enum class Sign { Positive, Negative, Indeterminate };

const char* to_string(Sign s);

/// Midpoint-radius enclosure [mid - rad, mid + rad] of a real number.
///
/// The midpoint carries the working precision; the radius is a low
/// precision upper bound that absorbs both input uncertainty and every
/// rounding error committed while forming the midpoint. Operations never
/// shrink an enclosure below what the inputs justify.
class Ball {
 public:
  static constexpr mpfr_prec_t kRadiusPrecision = 64;

  /// Exact zero at the given midpoint precision.
  explicit Ball(mpfr_prec_t prec = 64);

  static Ball from_rational(const BigRational& q, mpfr_prec_t prec);
  static Ball from_int(long v, mpfr_prec_t prec);
  /// Smallest convenient ball covering [lo, hi]; requires lo <= hi.
  static Ball from_endpoints(mpfr_srcptr lo, mpfr_srcptr hi, mpfr_prec_t prec);
  /// Ball with midpoint `mid` (rounded to prec) and at least radius `rad`.
  static Ball from_mid_rad(mpfr_srcptr mid, mpfr_srcptr rad, mpfr_prec_t prec);

  mpfr_prec_t precision() const { return mid_.precision(); }
  const BigFloat& mid() const { return mid_; }
  const BigFloat& rad() const { return rad_; }
  bool is_exact() const { return mpfr_zero_p(rad_.get()) != 0; }
  bool is_finite() const;

  /// Rigorous endpoints at the midpoint precision (rounded outward).
  BigFloat lower() const;
  BigFloat upper() const;
  /// Upper bound of |x| for x in the ball.
  BigFloat mag_upper() const;

  Sign sign() const;
  bool is_positive() const { return sign() == Sign::Positive; }
  bool is_negative() const { return sign() == Sign::Negative; }
  bool contains_zero() const;
  bool contains(const BigRational& q) const;
  bool contains(const Ball& other) const;
  /// False only when the two enclosures are certainly disjoint.
  bool overlaps(const Ball& other) const;
  /// rad <= 2^-bits * |mid|
  bool relative_radius_below(long bits) const;

  Ball& operator+=(const Ball& o);
  Ball& operator-=(const Ball& o);
  Ball& operator*=(const Ball& o);
  Ball& operator/=(const Ball& o);

  friend Ball operator+(Ball a, const Ball& b) { return a += b; }
  friend Ball operator-(Ball a, const Ball& b) { return a -= b; }
  friend Ball operator*(Ball a, const Ball& b) { return a *= b; }
  friend Ball operator/(Ball a, const Ball& b) { return a /= b; }
  friend Ball operator-(Ball a);

  /// Scale by an exact rational.
  Ball& operator*=(const BigRational& q);
  Ball& operator+=(const BigRational& q);
  friend Ball operator*(Ball a, const BigRational& q) { return a *= q; }
  friend Ball operator*(const BigRational& q, Ball a) { return a *= q; }
  friend Ball operator+(Ball a, const BigRational& q) { return a += q; }
  friend Ball operator-(Ball a, const BigRational& q) { return a += BigRational(-q); }

  /// Add `r` (rounded up) to the radius.
  void inflate(mpfr_srcptr r);

  /// "mid ± rad" with `digits` significant digits in the midpoint.
  std::string to_string(int digits = 20) const;

 private:
  void absorb_rounding(int inexact);

  BigFloat mid_;
  BigFloat rad_;
};

Ball exp(const Ball& x);
/// x^n for any integer n; negative n requires a ball excluding zero.
Ball pow(const Ball& x, long n);
Ball abs(const Ball& x);

std::ostream& operator<<(std::ostream& os, const Ball& b);

}  // namespace cmcert
