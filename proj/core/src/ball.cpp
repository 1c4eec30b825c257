#include "cmcert/ball.hpp"

#include <algorithm>
#include <cstdlib>
#include <ostream>

#include "cmcert/errors.hpp"

namespace cmcert {

BigFloat::BigFloat(mpfr_prec_t prec) {
  mpfr_init2(value_, prec);
  mpfr_set_zero(value_, 1);
}

BigFloat::BigFloat(const BigFloat& o) {
  mpfr_init2(value_, o.precision());
  mpfr_set(value_, o.value_, MPFR_RNDN);
}

BigFloat::BigFloat(BigFloat&& o) noexcept {
  mpfr_init2(value_, MPFR_PREC_MIN);
  mpfr_swap(value_, o.value_);
}

BigFloat& BigFloat::operator=(const BigFloat& o) {
  if (this != &o) {
    mpfr_set_prec(value_, o.precision());
    mpfr_set(value_, o.value_, MPFR_RNDN);
  }
  return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& o) noexcept {
  mpfr_swap(value_, o.value_);
  return *this;
}

BigFloat::~BigFloat() { mpfr_clear(value_); }

std::string BigFloat::to_string(int digits, mpfr_rnd_t rnd) const {
  char* buf = nullptr;
  const char* fmt = rnd == MPFR_RNDU ? "%.*RUe" : rnd == MPFR_RNDD ? "%.*RDe" : "%.*RNe";
  mpfr_asprintf(&buf, fmt, std::max(digits - 1, 0), value_);
  std::string s(buf);
  mpfr_free_str(buf);
  return s;
}

const char* to_string(Sign s) {
  switch (s) {
    case Sign::Positive: return "positive";
    case Sign::Negative: return "negative";
    case Sign::Indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

namespace {

constexpr mpfr_prec_t kRad = Ball::kRadiusPrecision;

// Upper bound for |v| at radius precision.
BigFloat abs_up(mpfr_srcptr v) {
  BigFloat r(kRad);
  mpfr_abs(r.get(), v, MPFR_RNDU);
  return r;
}

}  // namespace

Ball::Ball(mpfr_prec_t prec) : mid_(prec), rad_(kRad) {}

Ball Ball::from_rational(const BigRational& q, mpfr_prec_t prec) {
  Ball b(prec);
  b.absorb_rounding(mpfr_set_q(b.mid_.get(), q.get_mpq_t(), MPFR_RNDN));
  return b;
}

Ball Ball::from_int(long v, mpfr_prec_t prec) {
  Ball b(prec);
  b.absorb_rounding(mpfr_set_si(b.mid_.get(), v, MPFR_RNDN));
  return b;
}

Ball Ball::from_endpoints(mpfr_srcptr lo, mpfr_srcptr hi, mpfr_prec_t prec) {
  Ball b(prec);
  // mid = (lo + hi) / 2, radius covers both distances to the endpoints
  BigFloat sum(std::max({prec, mpfr_get_prec(lo), mpfr_get_prec(hi)}) + 2);
  mpfr_add(sum.get(), lo, hi, MPFR_RNDN);
  mpfr_div_2ui(b.mid_.get(), sum.get(), 1, MPFR_RNDN);
  BigFloat d1(kRad), d2(kRad);
  mpfr_sub(d1.get(), hi, b.mid_.get(), MPFR_RNDU);
  mpfr_sub(d2.get(), b.mid_.get(), lo, MPFR_RNDU);
  mpfr_max(b.rad_.get(), d1.get(), d2.get(), MPFR_RNDU);
  if (mpfr_sgn(b.rad_.get()) < 0) mpfr_set_zero(b.rad_.get(), 1);
  return b;
}

Ball Ball::from_mid_rad(mpfr_srcptr mid, mpfr_srcptr rad, mpfr_prec_t prec) {
  Ball b(prec);
  b.absorb_rounding(mpfr_set(b.mid_.get(), mid, MPFR_RNDN));
  b.inflate(rad);
  return b;
}

bool Ball::is_finite() const {
  return mpfr_number_p(mid_.get()) != 0 && mpfr_number_p(rad_.get()) != 0;
}

void Ball::absorb_rounding(int inexact) {
  if (inexact == 0) return;
  // |error| <= ulp(mid) = 2^(EXP(mid) - prec)
  BigFloat ulp(kRad);
  mpfr_set_ui_2exp(ulp.get(), 1, mpfr_get_exp(mid_.get()) - precision(), MPFR_RNDU);
  mpfr_add(rad_.get(), rad_.get(), ulp.get(), MPFR_RNDU);
}

void Ball::inflate(mpfr_srcptr r) { mpfr_add(rad_.get(), rad_.get(), r, MPFR_RNDU); }

BigFloat Ball::lower() const {
  BigFloat r(precision());
  mpfr_sub(r.get(), mid_.get(), rad_.get(), MPFR_RNDD);
  return r;
}

BigFloat Ball::upper() const {
  BigFloat r(precision());
  mpfr_add(r.get(), mid_.get(), rad_.get(), MPFR_RNDU);
  return r;
}

BigFloat Ball::mag_upper() const {
  BigFloat r = abs_up(mid_.get());
  mpfr_add(r.get(), r.get(), rad_.get(), MPFR_RNDU);
  return r;
}

Sign Ball::sign() const {
  // mpfr_cmp is exact across precisions
  if (mpfr_cmpabs(mid_.get(), rad_.get()) <= 0) return Sign::Indeterminate;
  return mpfr_sgn(mid_.get()) > 0 ? Sign::Positive : Sign::Negative;
}

bool Ball::contains_zero() const { return sign() == Sign::Indeterminate; }

bool Ball::contains(const BigRational& q) const {
  // |mid - q| <= rad, evaluated exactly through rationals
  BigRational m, r;
  mpfr_get_q(m.get_mpq_t(), mid_.get());
  mpfr_get_q(r.get_mpq_t(), rad_.get());
  return abs(m - q) <= r;
}

bool Ball::contains(const Ball& other) const {
  BigRational m1, r1, m2, r2;
  mpfr_get_q(m1.get_mpq_t(), mid_.get());
  mpfr_get_q(r1.get_mpq_t(), rad_.get());
  mpfr_get_q(m2.get_mpq_t(), other.mid_.get());
  mpfr_get_q(r2.get_mpq_t(), other.rad_.get());
  return abs(m1 - m2) + r2 <= r1;
}

bool Ball::overlaps(const Ball& other) const {
  BigRational m1, r1, m2, r2;
  mpfr_get_q(m1.get_mpq_t(), mid_.get());
  mpfr_get_q(r1.get_mpq_t(), rad_.get());
  mpfr_get_q(m2.get_mpq_t(), other.mid_.get());
  mpfr_get_q(r2.get_mpq_t(), other.rad_.get());
  return abs(m1 - m2) <= r1 + r2;
}

bool Ball::relative_radius_below(long bits) const {
  BigFloat bound(kRad);
  mpfr_abs(bound.get(), mid_.get(), MPFR_RNDD);
  mpfr_div_2si(bound.get(), bound.get(), bits, MPFR_RNDD);
  return mpfr_lessequal_p(rad_.get(), bound.get()) != 0;
}

Ball& Ball::operator+=(const Ball& o) {
  const mpfr_prec_t prec = std::max(precision(), o.precision());
  mpfr_prec_round(mid_.get(), prec, MPFR_RNDN);  // exact: precision only grows
  mpfr_add(rad_.get(), rad_.get(), o.rad_.get(), MPFR_RNDU);
  absorb_rounding(mpfr_add(mid_.get(), mid_.get(), o.mid_.get(), MPFR_RNDN));
  return *this;
}

Ball& Ball::operator-=(const Ball& o) {
  const mpfr_prec_t prec = std::max(precision(), o.precision());
  mpfr_prec_round(mid_.get(), prec, MPFR_RNDN);
  mpfr_add(rad_.get(), rad_.get(), o.rad_.get(), MPFR_RNDU);
  absorb_rounding(mpfr_sub(mid_.get(), mid_.get(), o.mid_.get(), MPFR_RNDN));
  return *this;
}

Ball& Ball::operator*=(const Ball& o) {
  const mpfr_prec_t prec = std::max(precision(), o.precision());
  // rad = |m1| r2 + |m2| r1 + r1 r2
  BigFloat t1 = abs_up(mid_.get());
  mpfr_mul(t1.get(), t1.get(), o.rad_.get(), MPFR_RNDU);
  BigFloat t2 = abs_up(o.mid_.get());
  mpfr_mul(t2.get(), t2.get(), rad_.get(), MPFR_RNDU);
  BigFloat t3(kRad);
  mpfr_mul(t3.get(), rad_.get(), o.rad_.get(), MPFR_RNDU);
  mpfr_add(rad_.get(), t1.get(), t2.get(), MPFR_RNDU);
  mpfr_add(rad_.get(), rad_.get(), t3.get(), MPFR_RNDU);
  mpfr_prec_round(mid_.get(), prec, MPFR_RNDN);
  absorb_rounding(mpfr_mul(mid_.get(), mid_.get(), o.mid_.get(), MPFR_RNDN));
  return *this;
}

Ball& Ball::operator/=(const Ball& o) {
  if (o.contains_zero()) throw DomainError("division by an enclosure containing zero");
  const mpfr_prec_t prec = std::max(precision(), o.precision());
  // |a/b - m1/m2| <= (|m1| r2 + |m2| r1) / (|m2| (|m2| - r2))
  BigFloat num = abs_up(mid_.get());
  mpfr_mul(num.get(), num.get(), o.rad_.get(), MPFR_RNDU);
  BigFloat t = abs_up(o.mid_.get());
  mpfr_mul(t.get(), t.get(), rad_.get(), MPFR_RNDU);
  mpfr_add(num.get(), num.get(), t.get(), MPFR_RNDU);
  BigFloat den(kRad), gap(kRad);
  mpfr_abs(den.get(), o.mid_.get(), MPFR_RNDD);
  mpfr_sub(gap.get(), den.get(), o.rad_.get(), MPFR_RNDD);
  mpfr_mul(den.get(), den.get(), gap.get(), MPFR_RNDD);
  mpfr_div(rad_.get(), num.get(), den.get(), MPFR_RNDU);
  mpfr_prec_round(mid_.get(), prec, MPFR_RNDN);
  absorb_rounding(mpfr_div(mid_.get(), mid_.get(), o.mid_.get(), MPFR_RNDN));
  return *this;
}

Ball operator-(Ball a) {
  mpfr_neg(a.mid_.get(), a.mid_.get(), MPFR_RNDN);
  return a;
}

Ball& Ball::operator*=(const BigRational& q) {
  if (mpz_sizeinbase(q.get_den_mpz_t(), 2) == 1 && mpz_sizeinbase(q.get_num_mpz_t(), 2) < 63) {
    // dyadic with small numerator: one rounding at most
    const long num = q.get_num().get_si();
    const long shift = static_cast<long>(mpz_scan1(q.get_den_mpz_t(), 0));
    BigFloat a(kRad);
    mpfr_set_si(a.get(), std::labs(num), MPFR_RNDU);
    mpfr_mul(rad_.get(), rad_.get(), a.get(), MPFR_RNDU);
    mpfr_div_2si(rad_.get(), rad_.get(), shift, MPFR_RNDU);
    absorb_rounding(mpfr_mul_si(mid_.get(), mid_.get(), num, MPFR_RNDN));
    mpfr_div_2si(mid_.get(), mid_.get(), shift, MPFR_RNDN);
    return *this;
  }
  return *this *= from_rational(q, precision());
}

Ball& Ball::operator+=(const BigRational& q) { return *this += from_rational(q, precision()); }

std::string Ball::to_string(int digits) const {
  return mid_.to_string(digits) + " ± " + rad_.to_string(3, MPFR_RNDU);
}

Ball exp(const Ball& x) {
  const mpfr_prec_t prec = x.precision();
  if (x.is_exact()) {
    BigFloat lo(prec), hi(prec);
    mpfr_exp(lo.get(), x.mid().get(), MPFR_RNDD);
    mpfr_exp(hi.get(), x.mid().get(), MPFR_RNDU);
    return Ball::from_endpoints(lo.get(), hi.get(), prec);
  }
  BigFloat lo = x.lower();
  BigFloat hi = x.upper();
  mpfr_exp(lo.get(), lo.get(), MPFR_RNDD);
  mpfr_exp(hi.get(), hi.get(), MPFR_RNDU);
  return Ball::from_endpoints(lo.get(), hi.get(), prec);
}

Ball pow(const Ball& x, long n) {
  const mpfr_prec_t prec = x.precision();
  if (n == 0) return Ball::from_int(1, prec);
  if (x.is_positive()) {
    BigFloat lo = x.lower();
    BigFloat hi = x.upper();
    BigFloat plo(prec), phi(prec);
    if (n > 0) {
      mpfr_pow_si(plo.get(), lo.get(), n, MPFR_RNDD);
      mpfr_pow_si(phi.get(), hi.get(), n, MPFR_RNDU);
    } else {
      mpfr_pow_si(plo.get(), hi.get(), n, MPFR_RNDD);
      mpfr_pow_si(phi.get(), lo.get(), n, MPFR_RNDU);
    }
    return Ball::from_endpoints(plo.get(), phi.get(), prec);
  }
  if (x.is_negative()) {
    Ball r = pow(-x, n);
    return (n % 2 == 0) ? r : -r;
  }
  if (n < 0) throw DomainError("negative power of an enclosure containing zero");
  Ball result = Ball::from_int(1, prec);
  Ball base = x;
  for (long e = n; e > 0; e >>= 1) {
    if (e & 1) result *= base;
    if (e > 1) base *= base;
  }
  return result;
}

Ball abs(const Ball& x) {
  if (x.is_negative()) return -x;
  if (x.is_positive()) return x;
  BigFloat zero(x.precision());
  BigFloat hi = x.mag_upper();
  return Ball::from_endpoints(zero.get(), hi.get(), x.precision());
}

std::ostream& operator<<(std::ostream& os, const Ball& b) { return os << b.to_string(); }

}  // namespace cmcert
