#pragma once

#include "cmcert/ball.hpp"
#include "cmcert/rational.hpp"

namespace cmcert {

/// Precision requested from an evaluation. Working precision grows with
/// the derivative order to absorb cancellation in later differences.
struct PrecisionPolicy {
  long target_bits = 128;
  long guard_bits_per_order = 4;
  /// Ceiling for automatic escalation.
  long max_bits = 4096;

  long working_bits(int order) const { return target_bits + 32 + guard_bits_per_order * order; }
  /// Same policy with the target doubled (clamped to max_bits).
  PrecisionPolicy escalated() const;
  /// Throws DomainError unless target_bits >= 8 and guard_bits_per_order >= 0.
  void validate() const;

  static PrecisionPolicy with_target(long bits);
};

constexpr int kMaxPolygammaOrder = 32;

/// Enclosure of psi^(m)(x) for 1 <= m <= 32 and x > 0.
///
/// For rational x the radius is at most 2^-target_bits * |midpoint|;
/// PrecisionError is raised if that cannot be reached.
Ball polygamma(int m, const BigRational& x, const PrecisionPolicy& policy);
Ball polygamma(int m, const BigRational& x, long target_bits);
/// Ball argument; the ball must lie in (0, inf). No relative radius promise.
Ball polygamma(int m, const Ball& x, const PrecisionPolicy& policy);

/// psi^(m)(x) obtained as psi^(m)(x+k) minus the exact telescoped sum
/// sum_{j<k} (-1)^m m! / (x+j)^{m+1}.
Ball polygamma_recurrence_shift(int m, const BigRational& x, unsigned k, const PrecisionPolicy& policy);

/// Hurwitz zeta zeta(s, a) = sum_{i>=0} (a+i)^-s for integer s >= 2 and a
/// ball in (0, inf), at `prec` working bits.
Ball hurwitz_zeta(int s, const Ball& a, mpfr_prec_t prec);

/// B_n as an exact rational (B_1 = -1/2).
BigRational bernoulli(unsigned n);

/// Numerical value of the integral representation
///   psi^(m)(x) = (-1)^{m+1} int_0^inf t^m e^{-x t} / (1 - e^{-t}) dt.
/// Heuristic only: `error_estimate` is an estimate, not a bound.
struct QuadratureEstimate {
  BigFloat value;
  BigFloat error_estimate;
  unsigned evaluations = 0;
  unsigned levels = 0;

  /// value ± error_estimate. Not a certified enclosure.
  Ball as_ball() const;
};

/// Throws DomainError for m < 1 or x <= 0 and QuadratureFailure if the
/// refinement does not settle.
QuadratureEstimate polygamma_quadrature_crosscheck(int m, const BigRational& x, long prec_bits);

}  // namespace cmcert
