#pragma once

#include <string>
#include <vector>

#include "cmcert/exppoly.hpp"
#include "cmcert/poly.hpp"

namespace cmcert {

/// coeff / (x + shift)^order
struct PartialFractionTerm {
  BigRational coeff;
  unsigned shift = 0;
  unsigned order = 1;

  friend bool operator==(const PartialFractionTerm&, const PartialFractionTerm&) = default;
};

/// poly_part(x) + sum of terms. Terms are kept sorted by (shift, order)
/// with no repeated pair and no zero coefficient, so structural equality is
/// mathematical equality.
class PartialFractionForm {
 public:
  PartialFractionForm() = default;
  /// Merges repeated (shift, order) pairs, drops zero terms, sorts.
  PartialFractionForm(RationalPoly poly_part, std::vector<PartialFractionTerm> terms);

  const RationalPoly& poly_part() const { return poly_part_; }
  const std::vector<PartialFractionTerm>& terms() const { return terms_; }

  /// Exact value at a rational point other than a pole.
  BigRational operator()(const BigRational& x) const;
  /// Exact k-th derivative at x.
  BigRational derivative_at(unsigned k, const BigRational& x) const;
  /// Upper bound of |f^(k)(y)| for every y >= x > -min shift, obtained from
  /// absolute values of the terms (requires a zero polynomial part).
  BigRational derivative_magnitude_bound(unsigned k, const BigRational& x) const;

  friend bool operator==(const PartialFractionForm&, const PartialFractionForm&) = default;

 private:
  RationalPoly poly_part_;
  std::vector<PartialFractionTerm> terms_;
};

/// Factor (x + shift)^multiplicity of a denominator.
struct DenominatorFactor {
  unsigned shift = 0;
  unsigned multiplicity = 1;
};

/// num / den, kept as a numerator and denominator pair.
struct RationalFunction {
  RationalPoly num;
  RationalPoly den;

  /// Same function: num * o.den == o.num * den.
  bool equivalent(const RationalFunction& o) const;
  /// num / den with gcd removed and monic denominator.
  RationalFunction reduced() const;
  friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b);
};

/// Product of the factors as a polynomial.
RationalPoly denominator_polynomial(const std::vector<DenominatorFactor>& factors);

/// Decomposes num / prod (x + a)^m. Shifts must be pairwise distinct and
/// deg(num) must be below the total multiplicity, otherwise DegreeError.
PartialFractionForm pfd_decompose(const RationalPoly& num, const std::vector<DenominatorFactor>& factors);

/// Single reduced fraction (monic denominator) equal to the form.
RationalFunction pfd_recompose(const PartialFractionForm& f);

/// coeff * t^power * e^{-decay t}
struct KernelTerm {
  BigRational coeff;
  unsigned power = 0;
  unsigned decay = 0;

  friend bool operator==(const KernelTerm&, const KernelTerm&) = default;
};

/// Laplace preimage of a partial fraction term:
/// c/(x+a)^m = integral_0^inf (c/(m-1)!) t^{m-1} e^{-a t} e^{-x t} dt.
KernelTerm laplace_kernel_of(const PartialFractionTerm& term);
std::vector<KernelTerm> laplace_kernel_of(const PartialFractionForm& form);

/// e^{shift t} * sum of kernel terms as an ExpPoly; every decay must be at
/// most `shift` (DomainError otherwise).
ExpPoly kernel_to_exppoly(const std::vector<KernelTerm>& kernel, unsigned shift);

std::string to_string(const PartialFractionTerm& t);
std::string to_string(const PartialFractionForm& f);

}  // namespace cmcert
