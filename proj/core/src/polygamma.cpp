#include "cmcert/polygamma.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>
#include <vector>

#include "cmcert/errors.hpp"

namespace cmcert {

PrecisionPolicy PrecisionPolicy::escalated() const {
  PrecisionPolicy p = *this;
  p.target_bits = std::min(target_bits * 2, max_bits);
  return p;
}

void PrecisionPolicy::validate() const {
  if (target_bits < 8) throw DomainError("target precision must be at least 8 bits");
  if (guard_bits_per_order < 0) throw DomainError("guard bits must be nonnegative");
  if (max_bits < target_bits) throw DomainError("precision cap below target");
}

PrecisionPolicy PrecisionPolicy::with_target(long bits) {
  PrecisionPolicy p;
  p.target_bits = bits;
  p.max_bits = std::max(p.max_bits, bits);
  return p;
}

namespace {

// Bernoulli numbers through tangent numbers (Brent-Harvey): only small
// integer multiply-adds, then B_{2k} = (-1)^{k-1} 2k T_k / (4^k (4^k - 1)).
class BernoulliCache {
 public:
  BigRational even(unsigned k) {
    std::lock_guard lock(mutex_);
    if (k >= values_.size()) grow(std::max<unsigned>(2 * k, 64));
    return values_[k];
  }

 private:
  void grow(unsigned n) {
    std::vector<BigInt> t(n + 1);
    t[1] = 1;
    for (unsigned k = 2; k <= n; ++k) t[k] = t[k - 1] * (k - 1);
    for (unsigned k = 2; k <= n; ++k) {
      for (unsigned j = k; j <= n; ++j) t[j] = t[j - 1] * (j - k) + t[j] * (j - k + 2);
    }
    values_.assign(n + 1, BigRational(0));
    values_[0] = 1;
    for (unsigned k = 1; k <= n; ++k) {
      BigInt four_k;
      mpz_ui_pow_ui(four_k.get_mpz_t(), 4, k);
      BigRational b(t[k] * 2 * k, four_k * (four_k - 1));
      b.canonicalize();
      values_[k] = (k % 2 == 1) ? b : BigRational(-b);
    }
  }

  std::mutex mutex_;
  std::vector<BigRational> values_;
};

BernoulliCache& bernoulli_cache() {
  static BernoulliCache cache;
  return cache;
}

void check_order(int m) {
  if (m < 1 || m > kMaxPolygammaOrder) {
    throw DomainError("polygamma order " + std::to_string(m) + " outside [1, " +
                      std::to_string(kMaxPolygammaOrder) + "]");
  }
}

}  // namespace

BigRational bernoulli(unsigned n) {
  if (n == 1) return BigRational(-1, 2);
  if (n % 2 == 1) return 0;
  return bernoulli_cache().even(n / 2);
}

Ball hurwitz_zeta(int s, const Ball& a, mpfr_prec_t prec) {
  if (s < 2) throw DomainError("Hurwitz zeta needs s >= 2");
  if (!a.is_positive()) throw DomainError("Hurwitz zeta needs a > 0");

  // Euler-Maclaurin at A = a + N:
  //   zeta(s,a) = sum_{i<N} (a+i)^-s + A^{1-s}/(s-1) + A^-s/2
  //             + sum_{j=1}^{M} B_{2j}/(2j)! (s)_{2j-1} A^{-s-2j+1} + R,
  //   |R| <= |last included correction term|.
  // The corrections shrink until 2j ~ 2 pi A / e, so A ~ prec/2 leaves
  // plenty of headroom.
  const double a_lo = a.lower().to_double();
  const double want = 0.5 * static_cast<double>(prec) + s;
  const long n_terms = std::max(0L, static_cast<long>(std::ceil(want - a_lo)));

  Ball sum(prec);
  Ball shifted = a;
  for (long i = 0; i < n_terms; ++i) {
    sum += pow(shifted, -s);
    shifted += BigRational(1);
  }
  const Ball& big_a = shifted;
  Ball inv_a2 = pow(big_a, -2);
  Ball a_pow = pow(big_a, 1 - s);  // A^{1-s}
  sum += a_pow * BigRational(1, s - 1);
  a_pow *= pow(big_a, -1);  // A^{-s}
  sum += a_pow * BigRational(1, 2);

  // tolerance relative to a lower bound of the (positive) sum
  BigFloat tol = sum.lower();
  if (mpfr_sgn(tol.get()) <= 0) throw PrecisionError("Hurwitz zeta head sum is not positive");
  mpfr_div_2si(tol.get(), tol.get(), static_cast<long>(prec), MPFR_RNDD);

  Ball power = a_pow * pow(big_a, -1);  // A^{-s-1}
  const unsigned max_j = static_cast<unsigned>(prec) + 16;
  BigFloat previous_mag(Ball::kRadiusPrecision);
  mpfr_set_inf(previous_mag.get(), 1);
  for (unsigned j = 1; j <= max_j; ++j) {
    const BigRational coeff = bernoulli(2 * j) / BigRational(factorial(2 * j)) *
                              BigRational(rising_factorial(s, 2 * j - 1));
    Ball term = power * coeff;
    BigFloat mag = term.mag_upper();
    sum += term;
    if (mpfr_lessequal_p(mag.get(), tol.get())) {
      sum.inflate(mag.get());
      return sum;
    }
    if (mpfr_greater_p(mag.get(), previous_mag.get())) break;  // asymptotic series turned around
    previous_mag = mag;
    power *= inv_a2;
  }
  throw PrecisionError("Euler-Maclaurin tail did not reach " + std::to_string(prec) + " bits");
}

namespace {

Ball polygamma_from_zeta(int m, const Ball& zeta) {
  BigRational scale(factorial(static_cast<unsigned>(m)));
  if (m % 2 == 0) scale = -scale;  // (-1)^{m+1}
  return zeta * scale;
}

}  // namespace

Ball polygamma(int m, const Ball& x, const PrecisionPolicy& policy) {
  check_order(m);
  policy.validate();
  if (!x.is_positive()) throw DomainError("polygamma needs x > 0");
  const auto prec = static_cast<mpfr_prec_t>(policy.working_bits(m));
  return polygamma_from_zeta(m, hurwitz_zeta(m + 1, x, prec));
}

Ball polygamma(int m, const BigRational& x, const PrecisionPolicy& policy) {
  check_order(m);
  policy.validate();
  if (sgn(x) <= 0) throw DomainError("polygamma needs x > 0, got " + to_string(x));
  const int s = m + 1;

  // For x < 1 move up by ceil(1 - x) and carry the head terms exactly.
  BigRational head = 0;
  BigRational base = x;
  while (base < 1) {
    head += pow(base, -s);
    base += 1;
  }

  long prec = policy.working_bits(m);
  for (int attempt = 0; attempt < 4; ++attempt) {
    const Ball arg = Ball::from_rational(base, prec);
    Ball zeta = hurwitz_zeta(s, arg, prec);
    if (head != 0) zeta += Ball::from_rational(head, prec);
    Ball result = polygamma_from_zeta(m, zeta);
    if (result.relative_radius_below(policy.target_bits)) return result;
    prec += 64;
  }
  throw PrecisionError("polygamma(" + std::to_string(m) + ", " + to_string(x) + ") could not reach " +
                       std::to_string(policy.target_bits) + " bits");
}

Ball polygamma(int m, const BigRational& x, long target_bits) {
  return polygamma(m, x, PrecisionPolicy::with_target(target_bits));
}

Ball polygamma_recurrence_shift(int m, const BigRational& x, unsigned k, const PrecisionPolicy& policy) {
  check_order(m);
  if (sgn(x) <= 0) throw DomainError("polygamma needs x > 0, got " + to_string(x));
  if (k == 0) return polygamma(m, x, policy);
  // psi^(m)(x+1) = psi^(m)(x) + (-1)^m m! / x^{m+1}
  BigRational correction = 0;
  for (unsigned j = 0; j < k; ++j) correction += pow(x + j, -(m + 1));
  correction *= BigRational(factorial(static_cast<unsigned>(m)));
  if (m % 2 == 1) correction = -correction;
  Ball shifted = polygamma(m, BigRational(x + k), policy);
  return shifted - Ball::from_rational(correction, shifted.precision());
}

}  // namespace cmcert
