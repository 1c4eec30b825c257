#include "cmcert/errors.hpp"
#include "cmcert/polygamma.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace cmcert;
using cmcert::testing::encloses;

namespace {

BigFloat pi_power(int n, long bits) {
  BigFloat v(bits);
  mpfr_const_pi(v.get(), MPFR_RNDN);
  mpfr_pow_ui(v.get(), v.get(), n, MPFR_RNDN);
  return v;
}

}  // namespace

TEST_CASE("classical values") {
  const PrecisionPolicy policy = PrecisionPolicy::with_target(128);
  // psi'(1) = pi^2/6
  BigFloat z2 = pi_power(2, 400);
  mpfr_div_ui(z2.get(), z2.get(), 6, MPFR_RNDN);
  CHECK(encloses(polygamma(1, BigRational(1), policy), z2));
  // psi''(1) = -2 zeta(3)
  BigFloat z3(400);
  mpfr_zeta_ui(z3.get(), 3, MPFR_RNDN);
  mpfr_mul_si(z3.get(), z3.get(), -2, MPFR_RNDN);
  CHECK(encloses(polygamma(2, BigRational(1), policy), z3));
  // psi'(1/2) = pi^2/2
  BigFloat half = pi_power(2, 400);
  mpfr_div_ui(half.get(), half.get(), 2, MPFR_RNDN);
  CHECK(encloses(polygamma(1, BigRational(1, 2), policy), half));
  // psi'''(1) = pi^4/15
  BigFloat z4 = pi_power(4, 400);
  mpfr_div_ui(z4.get(), z4.get(), 15, MPFR_RNDN);
  CHECK(encloses(polygamma(3, BigRational(1), policy), z4));
}

TEST_CASE("independent high-precision oracles") {
  const PrecisionPolicy policy = PrecisionPolicy::with_target(128);
  CHECK(encloses(polygamma(2, BigRational(10), policy), "-0.0110498349708020674621037490668"));
  CHECK(encloses(polygamma(5, BigRational(1, 3), policy), "87502.2152361966023795285638472"));
  CHECK(encloses(polygamma(1, BigRational(100), policy), "0.0100501666633335713952456684657"));
  CHECK(encloses(polygamma(12, BigRational(7, 4), policy), "-332722.474741131421269721656314"));
  CHECK(encloses(polygamma(1, BigRational(1, 2), policy), "4.93480220054467930941724549994"));
}

TEST_CASE("relative radius meets the target") {
  for (long bits : {32L, 64L, 128L, 256L, 600L}) {
    const PrecisionPolicy policy = PrecisionPolicy::with_target(bits);
    for (int m : {1, 2, 7}) {
      for (const BigRational& x : {BigRational(1, 1000), BigRational(3, 7), BigRational(5), BigRational(1000)}) {
        const Ball b = polygamma(m, x, policy);
        CHECK(b.relative_radius_below(bits));
      }
    }
  }
}

TEST_CASE("domain errors") {
  const PrecisionPolicy policy;
  CHECK_THROWS_AS(polygamma(0, BigRational(1), policy), DomainError);
  CHECK_THROWS_AS(polygamma(33, BigRational(1), policy), DomainError);
  CHECK_THROWS_AS(polygamma(1, BigRational(0), policy), DomainError);
  CHECK_THROWS_AS(polygamma(1, BigRational(-1, 2), policy), DomainError);
  CHECK_THROWS_AS(PrecisionPolicy::with_target(4).validate(), DomainError);
}

TEST_CASE("Bernoulli numbers") {
  CHECK(bernoulli(0) == 1);
  CHECK(bernoulli(1) == BigRational(-1, 2));
  CHECK(bernoulli(2) == BigRational(1, 6));
  CHECK(bernoulli(3) == 0);
  CHECK(bernoulli(12) == BigRational(-691, 2730));
  CHECK(bernoulli(30) == BigRational(BigInt("8615841276005"), BigInt(14322)));
}

TEST_CASE("Hurwitz zeta agrees with zeta at a = 1") {
  BigFloat z5(400);
  mpfr_zeta_ui(z5.get(), 5, MPFR_RNDN);
  CHECK(encloses(hurwitz_zeta(5, Ball::from_int(1, 200), 200), z5));
}

TEST_CASE("property: recurrence psi^(m)(x+1) = psi^(m)(x) + (-1)^m m!/x^(m+1)") {
  const PrecisionPolicy policy = PrecisionPolicy::with_target(96);
  for (int trial = 0; trial < 60; ++trial) {
    const int m = static_cast<int>(cmcert::testing::random_int(1, 10));
    const BigRational x = cmcert::testing::random_positive_rational(200, 40);
    BigRational step = BigRational(factorial(m)) / pow(x, m + 1);
    if (m % 2 == 1) step = -step;
    const Ball lhs = polygamma(m, BigRational(x + 1), policy);
    const Ball rhs = polygamma(m, x, policy) + step;
    CHECK(lhs.overlaps(rhs));
  }
}

TEST_CASE("property: sign pattern (-1)^(m+1) psi^(m)(x) > 0") {
  const PrecisionPolicy policy = PrecisionPolicy::with_target(64);
  for (int trial = 0; trial < 60; ++trial) {
    const int m = static_cast<int>(cmcert::testing::random_int(1, 20));
    const BigRational x = cmcert::testing::random_positive_rational(500, 25);
    const Sign s = polygamma(m, x, policy).sign();
    CHECK(s == (m % 2 == 1 ? Sign::Positive : Sign::Negative));
  }
}

TEST_CASE("recurrence shift and ball arguments agree with the direct path") {
  const PrecisionPolicy policy = PrecisionPolicy::with_target(128);
  for (int m : {1, 2, 3}) {
    for (const BigRational& x : {BigRational(1, 2), BigRational(1), BigRational(2), BigRational(10)}) {
      const Ball direct = polygamma(m, x, policy);
      CHECK(direct.overlaps(polygamma_recurrence_shift(m, x, 7, policy)));
      CHECK(direct.overlaps(polygamma(m, Ball::from_rational(x, 200), policy)));
    }
  }
}

TEST_CASE("quadrature cross-check agrees to 1e-20 relative") {
  for (int m : {1, 2, 3}) {
    for (const BigRational& x : {BigRational(1, 2), BigRational(1), BigRational(2), BigRational(10)}) {
      const QuadratureEstimate q = polygamma_quadrature_crosscheck(m, x, 128);
      const Ball series = polygamma(m, x, PrecisionPolicy::with_target(128));
      BigFloat diff(128);
      mpfr_sub(diff.get(), q.value.get(), series.mid().get(), MPFR_RNDN);
      mpfr_div(diff.get(), diff.get(), series.mid().get(), MPFR_RNDN);
      CHECK(std::abs(diff.to_double()) < 1e-20);
      CHECK(q.error_estimate.to_double() < 1e-20 * std::abs(series.mid().to_double()));
    }
  }
  CHECK_THROWS_AS(polygamma_quadrature_crosscheck(0, BigRational(1), 128), DomainError);
  CHECK_THROWS_AS(polygamma_quadrature_crosscheck(1, BigRational(0), 128), DomainError);
}

TEST_CASE("documented examples") {
  const PrecisionPolicy policy = PrecisionPolicy::with_target(128);
  BigFloat z2m1 = pi_power(2, 400);
  mpfr_div_ui(z2m1.get(), z2m1.get(), 6, MPFR_RNDN);
  mpfr_sub_ui(z2m1.get(), z2m1.get(), 1, MPFR_RNDN);
  CHECK(encloses(polygamma(1, BigRational(2), policy), z2m1));

  BigFloat z2 = pi_power(2, 400);
  mpfr_div_ui(z2.get(), z2.get(), 6, MPFR_RNDN);
  CHECK(encloses(polygamma_recurrence_shift(1, BigRational(1), 1, policy), z2));
  const Ball precise = polygamma(2, BigRational(1, 2), PrecisionPolicy::with_target(512));
  CHECK(polygamma_recurrence_shift(2, BigRational(1, 2), 2, policy).overlaps(precise));
  const Ball direct = polygamma(1, BigRational(3), policy);
  const Ball same = polygamma_recurrence_shift(1, BigRational(3), 0, policy);
  CHECK(mpfr_equal_p(direct.mid().get(), same.mid().get()));
  CHECK(mpfr_equal_p(direct.rad().get(), same.rad().get()));

  for (const auto& [m, x] : {std::pair{1, 1}, std::pair{2, 1}, std::pair{1, 10}}) {
    const QuadratureEstimate q = polygamma_quadrature_crosscheck(m, BigRational(x), 64);
    const double series = polygamma(m, BigRational(x), policy).mid().to_double();
    CHECK(std::abs(q.value.to_double() - series) < 1e-10);
  }
}

TEST_CASE("property: radius shrinks with precision and finer results nest") {
  for (int trial = 0; trial < 40; ++trial) {
    const int m = static_cast<int>(cmcert::testing::random_int(1, 16));
    const BigRational x = make_rational(cmcert::testing::random_int(1, 10000), cmcert::testing::random_int(1, 1024));
    const long bits = cmcert::testing::random_int(16, 200);
    const Ball coarse = polygamma(m, x, PrecisionPolicy::with_target(bits));
    const Ball fine = polygamma(m, x, PrecisionPolicy::with_target(2 * bits));
    const Ball finest = polygamma(m, x, PrecisionPolicy::with_target(4 * bits));
    CHECK(mpfr_lessequal_p(fine.rad().get(), coarse.rad().get()));
    CHECK(coarse.contains(finest));
    CHECK(fine.contains(finest));
  }
}
