#pragma once

#include <string>
#include <vector>

#include "cmcert/ball.hpp"
#include "cmcert/constants.hpp"
#include "cmcert/partial_fraction.hpp"
#include "cmcert/polygamma.hpp"

namespace cmcert {

/// The concrete functions built on the reference constants:
///
///   B(x) = p(x) / (900 x^4 (x+1)^10)
///   g(x) = psi'(x)^2 + psi''(x) - B(x)
///   H(x) = psi'(x) - Q(x) / (1800 x^2 (x+1)^10 (x+2)^10)
///
/// The rational parts are held as exact partial fractions, so each of their
/// derivatives is an exact rational at rational x and all enclosure radius
/// comes from the polygamma values.
class BoundModel {
 public:
  explicit BoundModel(BoundConstants constants);
  /// Model over the built-in constants table.
  static const BoundModel& reference();

  const BoundConstants& constants() const { return constants_; }
  const PartialFractionForm& bound_pfd() const { return bound_pfd_; }
  const PartialFractionForm& remainder_pfd() const { return remainder_pfd_; }

  BigRational p(const BigRational& x) const { return constants_.p(x); }
  BigRational q(const BigRational& x) const { return constants_.q(x); }

  /// Exact B(x); DomainError for x <= 0.
  BigRational bound_exact(const BigRational& x) const;
  Ball bound(const BigRational& x, long prec_bits) const;
  /// Exact Q(x) / (1800 x^2 (x+1)^10 (x+2)^10).
  BigRational remainder_exact(const BigRational& x) const;

  /// g(x), escalating precision (doubling up to policy.max_bits) until the
  /// sign of the enclosure is decided.
  Ball g(const BigRational& x, const PrecisionPolicy& policy) const;
  /// H(x), with the same escalation.
  Ball h(const BigRational& x, const PrecisionPolicy& policy) const;

  /// g^(k)(x) for k <= max_derivative_order(), no escalation.
  Ball g_derivative(unsigned k, const BigRational& x, const PrecisionPolicy& policy) const;
  Ball h_derivative(unsigned k, const BigRational& x, const PrecisionPolicy& policy) const;
  /// g^(0..k_max)(x), sharing the polygamma evaluations.
  std::vector<Ball> g_derivatives(unsigned k_max, const BigRational& x, const PrecisionPolicy& policy) const;
  std::vector<Ball> h_derivatives(unsigned k_max, const BigRational& x, const PrecisionPolicy& policy) const;

  /// Upper bound of |g^(k)(y)| for all y >= x, from the absolute values of
  /// every piece (no sign information used).
  BigRational g_derivative_magnitude_bound(unsigned k, const BigRational& x, const PrecisionPolicy& policy) const;

  unsigned max_derivative_order() const { return max_order_; }
  void set_max_derivative_order(unsigned k);
  /// Points below this are rejected by the g/H evaluators (default 2^-20).
  const BigRational& min_x() const { return min_x_; }

 private:
  void check_point(const BigRational& x) const;
  void check_order(unsigned k) const;

  BoundConstants constants_;
  PartialFractionForm bound_pfd_;
  PartialFractionForm remainder_pfd_;
  unsigned max_order_ = 12;
  BigRational min_x_;
};

/// Exact Horner evaluations of the reference polynomials.
BigRational p_eval(const BigRational& x);
BigRational q_eval(const BigRational& x);
Ball bound_eval(const BigRational& x, long prec_bits);
Ball g_eval(const BigRational& x, const PrecisionPolicy& policy);
Ball h_eval(const BigRational& x, const PrecisionPolicy& policy);
Ball g_derivative(unsigned k, const BigRational& x, const PrecisionPolicy& policy);

/// Outcome of an exact rational identity check.
struct IdentityReport {
  std::string name;
  bool equal = false;
  /// lhs.num * rhs.den - rhs.num * lhs.den; zero exactly when equal.
  RationalPoly numerator_difference;
  /// Term-level differences of the partial fraction forms, if any.
  std::vector<std::string> differences;
};

/// 1/(2x^2) + 1/x + p(x)/(1800x^2(x+1)^10) - x^2 p(x+1)/(1800(x+1)^4(x+2)^10)
/// as one fraction over x^2 (x+1)^10 (x+2)^10.
RationalFunction telescoped_rational_part(const BoundConstants& c);

/// Decomposes the telescoped rational part and compares it, term by term
/// and over the common denominator, with the tabulated 22-term expansion.
IdentityReport expansion_identity_check(const BoundConstants& c);
/// Tabulated expansion against Q(x) / (1800 x^2 (x+1)^10 (x+2)^10).
IdentityReport remainder_identity_check(const BoundConstants& c);
/// Both checks; equal only if both hold.
IdentityReport pf_expansion_identity_check(const BoundConstants& c);

struct TelescopingReport {
  BigRational x;
  Ball lhs;  // g(x) - g(x+1)
  Ball rhs;  // (2/x^2) H(x)
  BigFloat gap;         // |mid(lhs) - mid(rhs)|
  BigFloat radius_sum;  // rad(lhs) + rad(rhs)
  bool overlap = false;
};

/// Numerical check of g(x) - g(x+1) = (2/x^2) H(x).
TelescopingReport telescoping_identity_check(const BigRational& x, const PrecisionPolicy& policy,
                                             const BoundModel& model = BoundModel::reference());

}  // namespace cmcert
