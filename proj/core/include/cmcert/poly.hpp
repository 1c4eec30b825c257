#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "cmcert/rational.hpp"

namespace cmcert {

/// Dense univariate polynomial over the rationals. coeffs()[i] is the
/// coefficient of the i-th power; the highest stored coefficient is always
/// nonzero, and the zero polynomial has no coefficients at all.
class RationalPoly {
 public:
  RationalPoly() = default;
  explicit RationalPoly(std::vector<BigRational> coeffs);
  RationalPoly(std::initializer_list<BigRational> coeffs);

  static RationalPoly constant(const BigRational& c);
  static RationalPoly monomial(const BigRational& c, std::size_t power);
  /// (x + a)^n
  static RationalPoly shifted_power(const BigRational& a, std::size_t n);

  const std::vector<BigRational>& coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }
  /// -1 for the zero polynomial.
  long degree() const { return static_cast<long>(coeffs_.size()) - 1; }
  /// Coefficient of x^i, zero past the degree.
  BigRational coeff(std::size_t i) const;
  BigRational leading() const;

  BigRational operator()(const BigRational& x) const;  // Horner
  RationalPoly derivative() const;
  /// p(x + a)
  RationalPoly taylor_shift(const BigRational& a) const;
  /// Every coefficient >= 0.
  bool nonnegative_coefficients() const;

  RationalPoly& operator+=(const RationalPoly& o);
  RationalPoly& operator-=(const RationalPoly& o);
  RationalPoly& operator*=(const RationalPoly& o);
  RationalPoly& operator*=(const BigRational& s);
  RationalPoly& operator/=(const BigRational& s);

  friend RationalPoly operator+(RationalPoly a, const RationalPoly& b) { return a += b; }
  friend RationalPoly operator-(RationalPoly a, const RationalPoly& b) { return a -= b; }
  friend RationalPoly operator*(const RationalPoly& a, const RationalPoly& b);
  friend RationalPoly operator*(RationalPoly a, const BigRational& s) { return a *= s; }
  friend RationalPoly operator*(const BigRational& s, RationalPoly a) { return a *= s; }
  friend RationalPoly operator/(RationalPoly a, const BigRational& s) { return a /= s; }
  friend RationalPoly operator-(RationalPoly a);
  friend bool operator==(const RationalPoly& a, const RationalPoly& b) = default;

 private:
  void trim();
  std::vector<BigRational> coeffs_;
};

/// Euclidean division: a = q*b + r with deg r < deg b. Throws DomainError
/// when b is zero.
std::pair<RationalPoly, RationalPoly> divmod(const RationalPoly& a, const RationalPoly& b);

/// Monic greatest common divisor (zero if both inputs are zero).
RationalPoly gcd(RationalPoly a, RationalPoly b);

/// Truncated power-series quotient num/den mod x^n; den(0) must be nonzero.
RationalPoly series_divide(const RationalPoly& num, const RationalPoly& den, std::size_t n);

/// Human-readable form in ascending powers, e.g. "450 + 3600*x + ...".
std::string to_string(const RationalPoly& p, char var = 'x');

}  // namespace cmcert
