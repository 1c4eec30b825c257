#include "cmcert/partial_fraction.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <utility>

#include "cmcert/errors.hpp"

namespace cmcert {

PartialFractionForm::PartialFractionForm(RationalPoly poly_part, std::vector<PartialFractionTerm> terms)
    : poly_part_(std::move(poly_part)) {
  std::map<std::pair<unsigned, unsigned>, BigRational> merged;
  for (const auto& t : terms) {
    if (t.order == 0) throw DomainError("partial fraction term of order 0");
    merged[{t.shift, t.order}] += t.coeff;
  }
  for (const auto& [key, c] : merged) {
    if (c != 0) terms_.push_back({c, key.first, key.second});
  }
}

BigRational PartialFractionForm::operator()(const BigRational& x) const { return derivative_at(0, x); }

BigRational PartialFractionForm::derivative_at(unsigned k, const BigRational& x) const {
  RationalPoly poly = poly_part_;
  for (unsigned i = 0; i < k; ++i) poly = poly.derivative();
  BigRational acc = poly(x);
  const BigRational sign = (k % 2 == 0) ? 1 : -1;
  for (const auto& t : terms_) {
    const BigRational base = x + t.shift;
    if (base == 0) throw DomainError("partial fraction evaluated at a pole");
    acc += sign * t.coeff * BigRational(rising_factorial(t.order, k)) / pow(base, t.order + k);
  }
  return acc;
}

BigRational PartialFractionForm::derivative_magnitude_bound(unsigned k, const BigRational& x) const {
  if (!poly_part_.is_zero()) throw DomainError("magnitude bound needs a pure fraction part");
  BigRational acc = 0;
  for (const auto& t : terms_) {
    const BigRational base = x + t.shift;
    if (sgn(base) <= 0) throw DomainError("magnitude bound left of a pole");
    acc += abs(t.coeff) * BigRational(rising_factorial(t.order, k)) / pow(base, t.order + k);
  }
  return acc;
}

bool RationalFunction::equivalent(const RationalFunction& o) const { return num * o.den == o.num * den; }

RationalFunction RationalFunction::reduced() const {
  if (den.is_zero()) throw DomainError("rational function with zero denominator");
  if (num.is_zero()) return {RationalPoly{}, RationalPoly::constant(1)};
  const RationalPoly g = gcd(num, den);
  RationalPoly n = divmod(num, g).first;
  RationalPoly d = divmod(den, g).first;
  const BigRational lead = d.leading();
  return {n / lead, d / lead};
}

RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
  return {a.num * b.den + b.num * a.den, a.den * b.den};
}

RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
  return {a.num * b.den - b.num * a.den, a.den * b.den};
}

RationalPoly denominator_polynomial(const std::vector<DenominatorFactor>& factors) {
  RationalPoly d = RationalPoly::constant(1);
  for (const auto& f : factors) d *= RationalPoly::shifted_power(BigRational(f.shift), f.multiplicity);
  return d;
}

PartialFractionForm pfd_decompose(const RationalPoly& num, const std::vector<DenominatorFactor>& factors) {
  long total = 0;
  std::set<unsigned> shifts;
  for (const auto& f : factors) {
    if (f.multiplicity == 0) throw DomainError("denominator factor with multiplicity 0");
    if (!shifts.insert(f.shift).second) throw DomainError("repeated denominator shift");
    total += f.multiplicity;
  }
  if (num.degree() >= total) {
    throw DegreeError("numerator degree " + std::to_string(num.degree()) + " is not below denominator degree " +
                      std::to_string(total));
  }
  std::vector<PartialFractionTerm> terms;
  for (const auto& f : factors) {
    // Expand around x = -a in y = x + a: num/den = S(y) / y^m with S a
    // power series whose first m coefficients give the principal part.
    const BigRational a(f.shift);
    const RationalPoly n = num.taylor_shift(-a);
    RationalPoly d = RationalPoly::constant(1);
    for (const auto& g : factors) {
      if (g.shift == f.shift) continue;
      d *= RationalPoly::shifted_power(BigRational(g.shift) - a, g.multiplicity);
    }
    const RationalPoly s = series_divide(n, d, f.multiplicity);
    for (unsigned j = 0; j < f.multiplicity; ++j) {
      if (s.coeff(j) != 0) terms.push_back({s.coeff(j), f.shift, f.multiplicity - j});
    }
  }
  return PartialFractionForm(RationalPoly{}, std::move(terms));
}

RationalFunction pfd_recompose(const PartialFractionForm& f) {
  std::map<unsigned, unsigned> max_order;
  for (const auto& t : f.terms()) max_order[t.shift] = std::max(max_order[t.shift], t.order);
  std::vector<DenominatorFactor> factors;
  for (const auto& [a, m] : max_order) factors.push_back({a, m});
  const RationalPoly den = denominator_polynomial(factors);
  RationalPoly num = f.poly_part() * den;
  for (const auto& t : f.terms()) {
    // den / (x+a)^m = (x+a)^{M-m} * prod_{b != a} (x+b)^{M_b}
    RationalPoly cofactor = RationalPoly::shifted_power(BigRational(t.shift), max_order[t.shift] - t.order);
    for (const auto& g : factors) {
      if (g.shift != t.shift) cofactor *= RationalPoly::shifted_power(BigRational(g.shift), g.multiplicity);
    }
    num += cofactor * t.coeff;
  }
  return RationalFunction{std::move(num), den}.reduced();
}

KernelTerm laplace_kernel_of(const PartialFractionTerm& term) {
  if (term.order == 0) throw DomainError("partial fraction term of order 0");
  return {term.coeff / BigRational(factorial(term.order - 1)), term.order - 1, term.shift};
}

std::vector<KernelTerm> laplace_kernel_of(const PartialFractionForm& form) {
  if (!form.poly_part().is_zero()) throw DomainError("a polynomial part has no Laplace kernel");
  std::vector<KernelTerm> out;
  out.reserve(form.terms().size());
  for (const auto& t : form.terms()) out.push_back(laplace_kernel_of(t));
  return out;
}

ExpPoly kernel_to_exppoly(const std::vector<KernelTerm>& kernel, unsigned shift) {
  ExpPoly::Blocks blocks;
  for (const auto& k : kernel) {
    if (k.decay > shift) throw DomainError("kernel decay exceeds the exponential shift");
    blocks[shift - k.decay] += RationalPoly::monomial(k.coeff, k.power);
  }
  return ExpPoly(std::move(blocks));
}

std::string to_string(const PartialFractionTerm& t) {
  std::ostringstream os;
  os << to_string(t.coeff) << "/(x";
  if (t.shift != 0) os << '+' << t.shift;
  os << ')';
  if (t.order != 1) os << '^' << t.order;
  return os.str();
}

std::string to_string(const PartialFractionForm& f) {
  std::ostringstream os;
  bool first = true;
  if (!f.poly_part().is_zero()) {
    os << to_string(f.poly_part());
    first = false;
  }
  for (const auto& t : f.terms()) {
    if (!first) os << " + ";
    first = false;
    os << to_string(t);
  }
  return first ? "0" : os.str();
}

}  // namespace cmcert
