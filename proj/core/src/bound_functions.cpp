#include "cmcert/bound_functions.hpp"

#include <map>
#include <sstream>

#include "cmcert/errors.hpp"

namespace cmcert {

namespace {

const std::vector<DenominatorFactor> kBoundDenominator{{0, 4}, {1, 10}};
const std::vector<DenominatorFactor> kRemainderDenominator{{0, 2}, {1, 10}, {2, 10}};

// psi^(1..n)(x); slot 0 is unused
std::vector<Ball> polygamma_table(unsigned n, const BigRational& x, const PrecisionPolicy& policy) {
  std::vector<Ball> out;
  out.reserve(n + 1);
  out.emplace_back(policy.working_bits(0));
  for (unsigned m = 1; m <= n; ++m) out.push_back(polygamma(static_cast<int>(m), x, policy));
  return out;
}

template <class Eval>
Ball escalate_until_signed(const PrecisionPolicy& policy, Eval eval) {
  PrecisionPolicy p = policy;
  Ball value = eval(p);
  while (value.contains_zero() && p.target_bits < p.max_bits) {
    p = p.escalated();
    value = eval(p);
  }
  return value;
}

}  // namespace

BoundModel::BoundModel(BoundConstants constants)
    : constants_(std::move(constants)),
      bound_pfd_(pfd_decompose(constants_.p / constants_.scale_p, kBoundDenominator)),
      remainder_pfd_(pfd_decompose(constants_.q / constants_.scale_q, kRemainderDenominator)),
      min_x_(pow2(-20)) {}

const BoundModel& BoundModel::reference() {
  static const BoundModel model(BoundConstants::from_table(ConstantTable::builtin()));
  return model;
}

void BoundModel::set_max_derivative_order(unsigned k) {
  if (k + 2 > static_cast<unsigned>(kMaxPolygammaOrder)) {
    throw DomainError("derivative order cap exceeds the supported polygamma range");
  }
  max_order_ = k;
}

void BoundModel::check_point(const BigRational& x) const {
  if (sgn(x) <= 0) throw DomainError("x must be positive, got " + to_string(x));
  if (x < min_x_) throw DomainError("x = " + to_string(x) + " is below the supported minimum 2^-20");
}

void BoundModel::check_order(unsigned k) const {
  if (k > max_order_) {
    throw DomainError("derivative order " + std::to_string(k) + " exceeds the cap " + std::to_string(max_order_));
  }
}

BigRational BoundModel::bound_exact(const BigRational& x) const {
  if (sgn(x) <= 0) throw DomainError("x must be positive, got " + to_string(x));
  return constants_.p(x) / (constants_.scale_p * pow(x, 4) * pow(BigRational(x + 1), 10));
}

Ball BoundModel::bound(const BigRational& x, long prec_bits) const {
  return Ball::from_rational(bound_exact(x), prec_bits);
}

BigRational BoundModel::remainder_exact(const BigRational& x) const {
  if (sgn(x) <= 0) throw DomainError("x must be positive, got " + to_string(x));
  return constants_.q(x) /
         (constants_.scale_q * pow(x, 2) * pow(BigRational(x + 1), 10) * pow(BigRational(x + 2), 10));
}

std::vector<Ball> BoundModel::g_derivatives(unsigned k_max, const BigRational& x,
                                            const PrecisionPolicy& policy) const {
  check_point(x);
  check_order(k_max);
  const auto psi = polygamma_table(k_max + 2, x, policy);
  std::vector<Ball> out;
  out.reserve(k_max + 1);
  for (unsigned k = 0; k <= k_max; ++k) {
    // d^k [psi']^2 by Leibniz, d^k psi'' = psi^(k+2)
    Ball acc = psi[k + 2];
    for (unsigned j = 0; j <= k; ++j) {
      acc += psi[1 + j] * psi[1 + k - j] * BigRational(binomial(k, j));
    }
    acc -= Ball::from_rational(bound_pfd_.derivative_at(k, x), acc.precision());
    out.push_back(std::move(acc));
  }
  return out;
}

std::vector<Ball> BoundModel::h_derivatives(unsigned k_max, const BigRational& x,
                                            const PrecisionPolicy& policy) const {
  check_point(x);
  check_order(k_max);
  std::vector<Ball> out;
  out.reserve(k_max + 1);
  for (unsigned k = 0; k <= k_max; ++k) {
    Ball acc = polygamma(static_cast<int>(k + 1), x, policy);
    acc -= Ball::from_rational(remainder_pfd_.derivative_at(k, x), acc.precision());
    out.push_back(std::move(acc));
  }
  return out;
}

Ball BoundModel::g_derivative(unsigned k, const BigRational& x, const PrecisionPolicy& policy) const {
  return g_derivatives(k, x, policy).back();
}

Ball BoundModel::h_derivative(unsigned k, const BigRational& x, const PrecisionPolicy& policy) const {
  check_point(x);
  check_order(k);
  Ball acc = polygamma(static_cast<int>(k + 1), x, policy);
  acc -= Ball::from_rational(remainder_pfd_.derivative_at(k, x), acc.precision());
  return acc;
}

Ball BoundModel::g(const BigRational& x, const PrecisionPolicy& policy) const {
  return escalate_until_signed(policy, [&](const PrecisionPolicy& p) { return g_derivative(0, x, p); });
}

Ball BoundModel::h(const BigRational& x, const PrecisionPolicy& policy) const {
  return escalate_until_signed(policy, [&](const PrecisionPolicy& p) { return h_derivative(0, x, p); });
}

BigRational BoundModel::g_derivative_magnitude_bound(unsigned k, const BigRational& x,
                                                     const PrecisionPolicy& policy) const {
  check_point(x);
  if (k + 2 > static_cast<unsigned>(kMaxPolygammaOrder)) throw DomainError("derivative order too large");
  // |psi^(m)| is decreasing in x for m >= 1, so values at x bound every y >= x
  const auto psi = polygamma_table(k + 2, x, policy);
  auto upper = [](const Ball& b) {
    BigRational q;
    mpfr_get_q(q.get_mpq_t(), b.mag_upper().get());
    return q;
  };
  BigRational acc = upper(psi[k + 2]);
  for (unsigned j = 0; j <= k; ++j) {
    acc += BigRational(binomial(k, j)) * upper(psi[1 + j]) * upper(psi[1 + k - j]);
  }
  acc += bound_pfd_.derivative_magnitude_bound(k, x);
  return acc;
}

BigRational p_eval(const BigRational& x) { return BoundModel::reference().p(x); }
BigRational q_eval(const BigRational& x) { return BoundModel::reference().q(x); }
Ball bound_eval(const BigRational& x, long prec_bits) { return BoundModel::reference().bound(x, prec_bits); }
Ball g_eval(const BigRational& x, const PrecisionPolicy& policy) { return BoundModel::reference().g(x, policy); }
Ball h_eval(const BigRational& x, const PrecisionPolicy& policy) { return BoundModel::reference().h(x, policy); }
Ball g_derivative(unsigned k, const BigRational& x, const PrecisionPolicy& policy) {
  return BoundModel::reference().g_derivative(k, x, policy);
}

RationalFunction telescoped_rational_part(const BoundConstants& c) {
  // everything over D = x^2 (x+1)^10 (x+2)^10
  const BigRational two_s = 2 * c.scale_p;
  const RationalPoly x1 = RationalPoly::shifted_power(1, 10);
  const RationalPoly x2 = RationalPoly::shifted_power(2, 10);
  RationalPoly num = x1 * x2 * BigRational(1, 2);  // 1/(2x^2)
  num += RationalPoly::monomial(1, 1) * x1 * x2;   // 1/x
  num += c.p * x2 / two_s;                         // p(x) / (2s x^2 (x+1)^10)
  // x^2 p(x+1) / (2s (x+1)^4 (x+2)^10)
  num -= RationalPoly::monomial(1, 4) * RationalPoly::shifted_power(1, 6) * c.p.taylor_shift(1) / two_s;
  return {num, denominator_polynomial(kRemainderDenominator)};
}

namespace {

std::vector<std::string> term_differences(const PartialFractionForm& got, const PartialFractionForm& expected) {
  std::map<std::pair<unsigned, unsigned>, std::pair<BigRational, BigRational>> all;
  for (const auto& t : got.terms()) all[{t.shift, t.order}].first = t.coeff;
  for (const auto& t : expected.terms()) all[{t.shift, t.order}].second = t.coeff;
  std::vector<std::string> out;
  for (const auto& [key, v] : all) {
    if (v.first == v.second) continue;
    std::ostringstream os;
    os << "1/(x+" << key.first << ")^" << key.second << ": computed " << to_string(v.first) << ", tabulated "
       << to_string(v.second);
    out.push_back(os.str());
  }
  if (got.poly_part() != expected.poly_part()) {
    out.push_back("polynomial part: computed " + to_string(got.poly_part()) + ", tabulated " +
                  to_string(expected.poly_part()));
  }
  return out;
}

RationalPoly cross_difference(const RationalFunction& a, const RationalFunction& b) {
  return a.num * b.den - b.num * a.den;
}

}  // namespace

IdentityReport expansion_identity_check(const BoundConstants& c) {
  IdentityReport r;
  r.name = "expansion";
  const RationalFunction lhs = telescoped_rational_part(c);
  r.differences = term_differences(pfd_decompose(lhs.num, kRemainderDenominator), c.remainder_terms);
  r.numerator_difference = cross_difference(lhs, pfd_recompose(c.remainder_terms));
  r.equal = r.differences.empty() && r.numerator_difference.is_zero();
  return r;
}

IdentityReport remainder_identity_check(const BoundConstants& c) {
  IdentityReport r;
  r.name = "closed-form";
  const RationalFunction target{c.q, denominator_polynomial(kRemainderDenominator) * c.scale_q};
  r.numerator_difference = cross_difference(pfd_recompose(c.remainder_terms), target);
  r.differences = term_differences(pfd_decompose(c.q / c.scale_q, kRemainderDenominator), c.remainder_terms);
  r.equal = r.differences.empty() && r.numerator_difference.is_zero();
  return r;
}

IdentityReport pf_expansion_identity_check(const BoundConstants& c) {
  IdentityReport a = expansion_identity_check(c);
  IdentityReport b = remainder_identity_check(c);
  IdentityReport r;
  r.name = "expansion+closed-form";
  r.equal = a.equal && b.equal;
  r.numerator_difference = a.equal ? b.numerator_difference : a.numerator_difference;
  for (auto& d : a.differences) r.differences.push_back("expansion: " + d);
  for (auto& d : b.differences) r.differences.push_back("closed-form: " + d);
  return r;
}

TelescopingReport telescoping_identity_check(const BigRational& x, const PrecisionPolicy& policy,
                                             const BoundModel& model) {
  TelescopingReport r{x, Ball(), Ball(), BigFloat(Ball::kRadiusPrecision), BigFloat(Ball::kRadiusPrecision)};
  r.lhs = model.g_derivative(0, x, policy) - model.g_derivative(0, BigRational(x + 1), policy);
  r.rhs = model.h_derivative(0, x, policy) * (BigRational(2) / (x * x));
  BigFloat diff(std::max(r.lhs.precision(), r.rhs.precision()) + 8);
  mpfr_sub(diff.get(), r.lhs.mid().get(), r.rhs.mid().get(), MPFR_RNDN);
  mpfr_abs(r.gap.get(), diff.get(), MPFR_RNDN);
  mpfr_add(r.radius_sum.get(), r.lhs.rad().get(), r.rhs.rad().get(), MPFR_RNDU);
  r.overlap = r.lhs.overlaps(r.rhs);
  return r;
}

}  // namespace cmcert
