#include "cmcert/ball.hpp"
#include "cmcert/errors.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace cmcert;
using cmcert::testing::random_rational;

TEST_CASE("exact rationals and dyadic values") {
  const Ball half = Ball::from_rational(BigRational(1, 2), 64);
  CHECK(half.is_exact());
  CHECK(half.contains(BigRational(1, 2)));
  const Ball third = Ball::from_rational(BigRational(1, 3), 64);
  CHECK_FALSE(third.is_exact());
  CHECK(third.contains(BigRational(1, 3)));
  CHECK_FALSE(third.contains(BigRational(1, 3) + pow2(-50)));
  CHECK(Ball::from_int(-7, 32).sign() == Sign::Negative);
}

TEST_CASE("sign is three-valued") {
  BigFloat mid(64), rad(64);
  mpfr_set_d(mid.get(), 1.0, MPFR_RNDN);
  mpfr_set_d(rad.get(), 0.5, MPFR_RNDN);
  CHECK(Ball::from_mid_rad(mid.get(), rad.get(), 64).sign() == Sign::Positive);
  mpfr_set_d(rad.get(), 1.0, MPFR_RNDN);
  CHECK(Ball::from_mid_rad(mid.get(), rad.get(), 64).sign() == Sign::Indeterminate);
  CHECK(Ball(64).sign() == Sign::Indeterminate);
  CHECK(std::string(to_string(Sign::Positive)) == "positive");
  CHECK(std::string(to_string(Sign::Indeterminate)) == "indeterminate");
}

TEST_CASE("division and powers reject enclosures of zero") {
  const Ball one = Ball::from_int(1, 64);
  CHECK_THROWS_AS(one / Ball(64), DomainError);
  CHECK_THROWS_AS(pow(Ball(64), -2), DomainError);
  CHECK(pow(Ball::from_int(3, 64), -2).contains(BigRational(1, 9)));
}

TEST_CASE("exp encloses e") {
  BigFloat e(400);
  mpfr_set_ui(e.get(), 1, MPFR_RNDN);
  mpfr_exp(e.get(), e.get(), MPFR_RNDN);
  const Ball b = exp(Ball::from_int(1, 200));
  CHECK(cmcert::testing::encloses(b, e));
  CHECK(b.relative_radius_below(190));
}

TEST_CASE("property: arithmetic encloses the exact rational result") {
  for (int trial = 0; trial < 500; ++trial) {
    const BigRational a = random_rational(1000, 97), b = random_rational(1000, 89);
    const mpfr_prec_t prec = 24 + static_cast<mpfr_prec_t>(trial % 5) * 40;
    const Ball x = Ball::from_rational(a, prec), y = Ball::from_rational(b, prec);
    CHECK((x + y).contains(BigRational(a + b)));
    CHECK((x - y).contains(BigRational(a - b)));
    CHECK((x * y).contains(BigRational(a * b)));
    if (b != 0) CHECK((x / y).contains(BigRational(a / b)));
    CHECK((x * b).contains(BigRational(a * b)));
    CHECK((x + b).contains(BigRational(a + b)));
    CHECK(pow(x, 3).contains(BigRational(a * a * a)));
    CHECK(abs(x).contains(BigRational(abs(a))));
  }
}

TEST_CASE("property: long accumulations stay valid") {
  // sum_{i<N} 1/i^2 at low precision must still contain the exact sum
  Ball acc(40);
  BigRational exact = 0;
  for (int i = 1; i <= 300; ++i) {
    const BigRational term(1, i * i);
    acc += Ball::from_rational(term, 40);
    exact += term;
  }
  CHECK(acc.contains(exact));
}

TEST_CASE("contains and overlaps between balls") {
  const Ball a = Ball::from_rational(BigRational(1, 3), 100);
  const Ball b = Ball::from_rational(BigRational(1, 3), 30);
  CHECK(b.contains(a));
  CHECK(a.overlaps(b));
  CHECK_FALSE(a.overlaps(Ball::from_rational(BigRational(1, 2), 100)));
}

TEST_CASE("formatting") {
  const Ball b = Ball::from_rational(BigRational(1, 4), 64);
  CHECK(b.to_string(5) == "2.5000e-01 ± 0.00e+00");
}
