#include "cmcert/proof_replay.hpp"

#include <sstream>

#include "cmcert/bound_functions.hpp"
#include "cmcert/errors.hpp"
#include "cmcert/partial_fraction.hpp"

namespace cmcert {

namespace {

constexpr unsigned kThetaOrders = 10;
constexpr unsigned kTheta1Orders = 10;
constexpr unsigned kTheta2Orders = 9;

const char* family_name(Family f) {
  switch (f) {
    case Family::Theta: return "theta";
    case Family::Theta1: return "theta1";
    case Family::Theta2: return "theta2";
  }
  return "theta";
}

std::string pretty(StageRef s) {
  std::string name = family_name(s.family);
  return s.order == 0 ? name : name + "^(" + std::to_string(s.order) + ")";
}

}  // namespace

std::string StageRef::label() const {
  std::string name = family_name(family);
  return order == 0 ? name : name + "_d" + std::to_string(order);
}

StageRef StageRef::parse(std::string_view label) {
  for (Family f : {Family::Theta2, Family::Theta1, Family::Theta}) {
    const std::string name = family_name(f);
    if (!label.starts_with(name)) continue;
    std::string_view rest = label.substr(name.size());
    if (rest.empty()) return {f, 0};
    if (rest.starts_with("_d") && rest.size() > 2) {
      try {
        std::size_t used = 0;
        const unsigned long order = std::stoul(std::string(rest.substr(2)), &used);
        if (used == rest.size() - 2) return {f, static_cast<unsigned>(order)};
      } catch (const std::exception&) {
      }
    }
  }
  throw ParseError("unknown stage '" + std::string(label) + "'");
}

ThetaFixtures ThetaFixtures::from_table(const ConstantTable& table) {
  ThetaFixtures f;
  f.theta_scale = table.get("theta_scale");
  f.theta2_scale = table.get("theta2_scale");
  f.remainder_terms = table.partial_fractions("remainder");
  f.theta = table.exp_polynomial("theta");
  f.theta_d1 = table.exp_polynomial("theta_d1");
  f.theta_d10 = table.exp_polynomial("theta_d10");
  f.theta1_d1 = table.exp_polynomial("theta1_d1");
  f.theta1_d10 = table.exp_polynomial("theta1_d10");
  f.theta2_d9 = table.exp_polynomial("theta2_d9");
  for (const auto& e : table.with_prefix("initial.")) {
    f.initial_values.emplace_back(StageRef::parse(std::string_view(e.label).substr(8)), e.value);
  }
  return f;
}

ThetaChain ThetaChain::build(const ExpPoly& theta, const BigRational& theta2_scale) {
  ThetaChain c;
  c.theta.push_back(theta);
  for (unsigned i = 1; i <= kThetaOrders; ++i) c.theta.push_back(c.theta.back().derivative());
  c.theta1.push_back(c.theta.back().factor_exp(1, 1));
  for (unsigned i = 1; i <= kTheta1Orders; ++i) c.theta1.push_back(c.theta1.back().derivative());
  c.theta2.push_back(c.theta1.back().factor_exp(1, theta2_scale));
  for (unsigned i = 1; i <= kTheta2Orders; ++i) c.theta2.push_back(c.theta2.back().derivative());
  return c;
}

const ExpPoly& ThetaChain::stage(StageRef s) const {
  const std::vector<ExpPoly>* family = nullptr;
  switch (s.family) {
    case Family::Theta: family = &theta; break;
    case Family::Theta1: family = &theta1; break;
    case Family::Theta2: family = &theta2; break;
  }
  if (s.order >= family->size()) throw DomainError("stage " + s.label() + " is not part of the chain");
  return (*family)[s.order];
}

ExpPoly theta_from_kernel(const PartialFractionForm& remainder, const BigRational& scale) {
  // e^{2t} R(t): every kernel decay is 0, 1 or 2
  const ExpPoly kernel = kernel_to_exppoly(laplace_kernel_of(remainder), 2);
  const ExpPoly t_e3 = ExpPoly::term(3, RationalPoly::monomial(1, 1));  // e^{2t} * t e^t
  const ExpPoly et_minus_1 = ExpPoly(ExpPoly::Blocks{{1, RationalPoly::constant(1)}, {0, RationalPoly::constant(-1)}});
  return (t_e3 - et_minus_1 * kernel) * scale;
}

ExpPoly build_theta_from_kernel(const ThetaFixtures& fixtures) {
  ExpPoly theta = theta_from_kernel(fixtures.remainder_terms, fixtures.theta_scale);
  if (auto diff = first_difference(theta, fixtures.theta)) {
    throw FixtureMismatch("theta built from the kernel differs from the tabulated theta at " + *diff);
  }
  return theta;
}

std::optional<RationalPoly> exp_lower_bound_polynomial(const ExpPoly& e) {
  RationalPoly acc;
  for (const auto& [k, p] : e.blocks()) {
    if (k > 0 && !p.nonnegative_coefficients()) return std::nullopt;
    acc += p;
  }
  return acc;
}

std::vector<StageVerdict> verify_derivative_fixtures(const ThetaChain& chain, const ThetaFixtures& fixtures) {
  const std::pair<StageRef, const ExpPoly*> checks[] = {
      {{Family::Theta, 1}, &fixtures.theta_d1},     {{Family::Theta, 10}, &fixtures.theta_d10},
      {{Family::Theta1, 1}, &fixtures.theta1_d1},   {{Family::Theta1, 10}, &fixtures.theta1_d10},
      {{Family::Theta2, 9}, &fixtures.theta2_d9},
  };
  std::vector<StageVerdict> out;
  for (const auto& [stage, fixture] : checks) {
    StageVerdict v{"fixture " + stage.label(), true, "exact match"};
    if (auto diff = first_difference(chain.stage(stage), *fixture)) {
      v.passed = false;
      v.detail = "mismatch at " + *diff;
    }
    out.push_back(std::move(v));
  }
  return out;
}

StageVerdict verify_initial_values(const ThetaChain& chain, const ThetaFixtures& fixtures) {
  StageVerdict v{"initial values", true, ""};
  std::vector<std::string> problems;
  unsigned expected = 0;
  for (Family f : {Family::Theta, Family::Theta1, Family::Theta2}) {
    const unsigned top = f == Family::Theta2 ? kTheta2Orders : kThetaOrders;
    for (unsigned i = 1; i <= top; ++i) {
      ++expected;
      const StageRef s{f, i};
      const BigRational computed = chain.stage(s).at_zero();
      bool found = false;
      for (const auto& [stage, value] : fixtures.initial_values) {
        if (!(stage == s)) continue;
        found = true;
        if (value != computed) {
          problems.push_back(s.label() + "(0): computed " + to_string(computed) + ", tabulated " + to_string(value));
        }
      }
      if (!found) problems.push_back(s.label() + "(0) is not tabulated");
    }
  }
  if (fixtures.initial_values.size() != expected) {
    problems.push_back("expected " + std::to_string(expected) + " tabulated values, found " +
                       std::to_string(fixtures.initial_values.size()));
  }
  for (unsigned i = 0; i <= 4; ++i) {
    const BigRational value = chain.theta[i].at_zero();
    if (value != 0) problems.push_back("theta^(" + std::to_string(i) + ")(0) = " + to_string(value) + ", expected 0");
  }
  if (problems.empty()) {
    v.detail = std::to_string(expected) + " tabulated values match; theta(0) = theta'(0) = ... = theta^(4)(0) = 0";
  } else {
    v.passed = false;
    std::ostringstream os;
    for (std::size_t i = 0; i < problems.size(); ++i) os << (i ? "; " : "") << problems[i];
    v.detail = os.str();
  }
  return v;
}

StageVerdict verify_divisibility(const ThetaChain& chain, const ThetaFixtures& fixtures) {
  StageVerdict v{"divisibility", true, ""};
  const ExpPoly& t10 = chain.theta[kThetaOrders];
  const ExpPoly& t1_10 = chain.theta1[kTheta1Orders];
  std::vector<std::string> problems;
  if (t10.min_exponent().value_or(1) < 1) problems.push_back("theta^(10) has an e^{0t} block");
  if (t1_10.min_exponent().value_or(1) < 1) problems.push_back("theta1^(10) has an e^{0t} block");
  for (const auto& [k, p] : t1_10.blocks()) {
    for (const auto& c : p.coeffs()) {
      if (BigRational(c / fixtures.theta2_scale).get_den() != 1) {
        problems.push_back("theta1^(10) coefficient " + to_string(c) + " is not divisible by " +
                           to_string(fixtures.theta2_scale));
        break;
      }
    }
  }
  if (problems.empty()) {
    v.detail = "theta^(10) = e^t theta1; theta1^(10) = " + to_string(fixtures.theta2_scale) + " e^t theta2";
  } else {
    v.passed = false;
    v.detail = problems.front();
  }
  return v;
}

namespace {

// Tabulated value for a stage, if present.
std::optional<BigRational> tabulated(const ThetaFixtures& f, StageRef s) {
  for (const auto& [stage, value] : f.initial_values) {
    if (stage == s) return value;
  }
  return std::nullopt;
}

// Integration-from-zero induction over orders [lowest, top): each stage
// needs a nonnegative value at 0 that agrees with the table when the table
// lists it. Returns the first problem, if any.
std::optional<std::string> induction_premises(const ThetaChain& chain, const ThetaFixtures& fixtures, Family family,
                                              unsigned top, CertificateStep& step,
                                              const std::optional<std::pair<StageRef, StageRef>>& alias = {}) {
  for (unsigned i = top; i-- > 0;) {
    const StageRef s{family, i};
    const BigRational value = chain.stage(s).at_zero();
    std::optional<BigRational> table = tabulated(fixtures, s);
    std::string source = "computed";
    if (!table && alias && alias->first == s) {
      table = tabulated(fixtures, alias->second);
      source = "tabulated as " + alias->second.label() + "(0)";
    } else if (table) {
      source = "tabulated";
    }
    step.exact_values_used.emplace_back(s.label() + "(0)", to_string(table.value_or(value)));
    if (table && *table != value) {
      return pretty(s) + "(0): tabulated " + to_string(*table) + " but the chain gives " + to_string(value);
    }
    if (sgn(value) < 0) return pretty(s) + "(0) = " + to_string(value) + " is negative (" + source + ")";
  }
  return std::nullopt;
}

}  // namespace

std::vector<CertificateStep> positivity_steps(const ThetaChain& chain, const ThetaFixtures& fixtures,
                                              bool identity_holds) {
  std::vector<CertificateStep> steps;

  // 1. bottom stage
  {
    CertificateStep s;
    s.step = 1;
    s.claim = "theta2^(9)(t) > 0 for t >= 0";
    s.method =
        "replace e^{kt} by its lower bound 1 (t >= 0) on every block k >= 1 with nonnegative coefficients; the "
        "remaining polynomial has nonnegative coefficients and a positive constant term";
    const ExpPoly& computed = chain.theta2[kTheta2Orders];
    auto diff = first_difference(computed, fixtures.theta2_d9);
    // the tabulated form is the object of the argument; it must be the chain's
    const auto bound = exp_lower_bound_polynomial(fixtures.theta2_d9);
    if (bound) {
      for (std::size_t j = 0; j < bound->coeffs().size(); ++j) {
        s.exact_values_used.emplace_back("lower_bound[t^" + std::to_string(j) + "]", to_string(bound->coeffs()[j]));
      }
    }
    if (diff) {
      s.note = "tabulated theta2^(9) differs from the chain at " + *diff;
    } else if (!bound) {
      s.note = "a block e^{kt}, k >= 1, has a negative coefficient; the crude bound does not apply";
    } else if (!bound->nonnegative_coefficients() || sgn(bound->coeff(0)) <= 0) {
      s.note = "lower-bound polynomial " + to_string(*bound, 't') + " is not certifiably positive";
    } else {
      s.passed = true;
    }
    steps.push_back(std::move(s));
  }

  // 2. theta2 chain
  {
    CertificateStep s;
    s.step = 2;
    s.claim = "theta2^(i)(t) > 0 on (0, inf) for i = 8, ..., 0";
    s.method =
        "f' > 0 on (0, inf) and f(0) >= 0 imply f > 0 on (0, inf); applied downward from theta2^(9) with exact "
        "values at t = 0";
    auto problem = induction_premises(chain, fixtures, Family::Theta2, kTheta2Orders, s);
    if (!steps[0].passed) s.note = "depends on step 1";
    else if (problem) s.note = *problem;
    else s.passed = true;
    steps.push_back(std::move(s));
  }

  // 3. theta1 chain
  {
    CertificateStep s;
    s.step = 3;
    s.claim = "theta1^(i)(t) > 0 on (0, inf) for i = 10, ..., 0";
    s.method = "theta1^(10) = " + to_string(fixtures.theta2_scale) +
               " e^t theta2 is positive by step 2; then the same integration-from-zero induction";
    const bool factor_ok =
        chain.theta1[kTheta1Orders] == chain.theta2[0].multiply_exp(1, fixtures.theta2_scale);
    s.exact_values_used.emplace_back("theta2_scale", to_string(fixtures.theta2_scale));
    const auto top_table = tabulated(fixtures, {Family::Theta1, kTheta1Orders});
    const BigRational top_value = chain.theta1[kTheta1Orders].at_zero();
    s.exact_values_used.emplace_back("theta1_d10(0)", to_string(top_value));
    // theta1(0) = theta^(10)(0)
    auto problem = induction_premises(chain, fixtures, Family::Theta1, kTheta1Orders, s,
                                      std::make_pair(StageRef{Family::Theta1, 0}, StageRef{Family::Theta, 10}));
    if (!steps[1].passed) s.note = "depends on step 2";
    else if (!factor_ok) s.note = "theta1^(10) is not the scaled e^t multiple of theta2";
    else if (top_table && *top_table != top_value)
      s.note = "theta1^(10)(0): tabulated " + to_string(*top_table) + " but the chain gives " + to_string(top_value);
    else if (problem) s.note = *problem;
    else s.passed = true;
    steps.push_back(std::move(s));
  }

  // 4. theta chain
  {
    CertificateStep s;
    s.step = 4;
    s.claim = "theta^(i)(t) > 0 on (0, inf) for i = 10, ..., 1, and theta(t) > 0 on (0, inf) with theta(0) = 0";
    s.method = "theta^(10) = e^t theta1 is positive by step 3; then the same integration-from-zero induction";
    const bool factor_ok = chain.theta[kThetaOrders] == chain.theta1[0].multiply_exp(1, 1);
    const auto top_table = tabulated(fixtures, {Family::Theta, kThetaOrders});
    const BigRational top_value = chain.theta[kThetaOrders].at_zero();
    s.exact_values_used.emplace_back("theta_d10(0)", to_string(top_value));
    auto problem = induction_premises(chain, fixtures, Family::Theta, kThetaOrders, s);
    if (!steps[2].passed) s.note = "depends on step 3";
    else if (!factor_ok) s.note = "theta^(10) is not e^t theta1";
    else if (top_table && *top_table != top_value)
      s.note = "theta^(10)(0): tabulated " + to_string(*top_table) + " but the chain gives " + to_string(top_value);
    else if (problem) s.note = *problem;
    else if (chain.theta[0].at_zero() != 0) s.note = "theta(0) is not 0";
    else s.passed = true;
    steps.push_back(std::move(s));
  }

  // 5. conclusion
  {
    CertificateStep s;
    s.step = 5;
    s.claim =
        "H is completely monotonic on (0, inf); hence g(x) - g(x+1) = (2/x^2) H(x) is completely monotonic, and "
        "(-1)^k g^(k)(x) >= (-1)^k g^(k)(x+m) -> 0 for every k >= 0 gives g completely monotonic";
    s.method =
        "H(x) = (1/theta_scale) int_0^inf theta(t) e^{-(x+2)t} / (e^t - 1) dt with a nonnegative integrand "
        "(Laplace transform of a nonnegative density); 2/x^2 is completely monotonic and products of completely "
        "monotonic functions are completely monotonic; induction on m with the vanishing limit";
    s.exact_values_used.emplace_back("theta_scale", to_string(fixtures.theta_scale));
    const bool kernel_ok = theta_from_kernel(fixtures.remainder_terms, fixtures.theta_scale) == chain.theta[0];
    if (!steps[3].passed) s.note = "depends on step 4";
    else if (!identity_holds) s.note = "the exact telescoping identity for g(x) - g(x+1) did not hold";
    else if (!kernel_ok) s.note = "theta is not the Laplace-kernel numerator of H";
    else s.passed = true;
    steps.push_back(std::move(s));
  }
  return steps;
}

CertificateReport chain_positivity_certificate(const ConstantTable& table) {
  CertificateReport report;
  const BoundConstants bound = BoundConstants::from_table(table);
  const ThetaFixtures fixtures = ThetaFixtures::from_table(table);

  const IdentityReport expansion = expansion_identity_check(bound);
  const IdentityReport remainder = remainder_identity_check(bound);
  auto identity_stage = [](const IdentityReport& r, std::string name, std::string ok) {
    StageVerdict v{std::move(name), r.equal, std::move(ok)};
    if (!r.equal) {
      v.detail = r.differences.empty() ? "numerator difference " + to_string(r.numerator_difference)
                                       : r.differences.front();
    }
    return v;
  };
  report.stages.push_back(identity_stage(expansion, "telescoping expansion",
                                         "g(x) - g(x+1) = (2/x^2) H(x) with the 22-term remainder, exactly"));
  report.stages.push_back(identity_stage(remainder, "remainder closed form",
                                         "22-term remainder = Q(x) / (1800 x^2 (x+1)^10 (x+2)^10), exactly"));

  const ExpPoly theta = theta_from_kernel(fixtures.remainder_terms, fixtures.theta_scale);
  StageVerdict kernel{"theta from kernel", true, "Laplace-kernel construction reproduces the tabulated theta"};
  if (auto diff = first_difference(theta, fixtures.theta)) {
    kernel.passed = false;
    kernel.detail = "mismatch at " + *diff;
  }
  report.stages.push_back(kernel);

  ThetaChain chain;
  try {
    chain = ThetaChain::build(theta, fixtures.theta2_scale);
  } catch (const Error& e) {
    report.stages.push_back({"chain construction", false, e.what()});
    return report;
  }
  for (auto& v : verify_derivative_fixtures(chain, fixtures)) report.stages.push_back(std::move(v));
  report.stages.push_back(verify_divisibility(chain, fixtures));
  report.stages.push_back(verify_initial_values(chain, fixtures));
  report.steps = positivity_steps(chain, fixtures, expansion.equal);
  return report;
}

bool CertificateReport::passed() const {
  if (steps.size() != 5) return false;
  for (const auto& s : stages) {
    if (!s.passed) return false;
  }
  for (const auto& s : steps) {
    if (!s.passed) return false;
  }
  return true;
}

std::optional<int> CertificateReport::first_failed_step() const {
  for (const auto& s : steps) {
    if (!s.passed) return s.step;
  }
  return std::nullopt;
}

std::string CertificateReport::first_failure() const {
  if (auto step = first_failed_step()) {
    for (const auto& s : steps) {
      if (s.step == *step) return "step " + std::to_string(*step) + ": " + s.note;
    }
  }
  for (const auto& s : stages) {
    if (!s.passed) return "stage '" + s.name + "': " + s.detail;
  }
  if (steps.size() != 5) return "positivity chain not reached";
  return "";
}

std::string CertificateReport::trace() const {
  std::ostringstream os;
  for (const auto& s : stages) {
    os << "[" << (s.passed ? "pass" : "FAIL") << "] " << s.name << ": " << s.detail << '\n';
  }
  for (const auto& s : steps) {
    os << "[" << (s.passed ? "pass" : "FAIL") << "] step " << s.step << ": " << s.claim << '\n';
    os << "       via " << s.method << '\n';
    if (!s.passed) os << "       reason: " << s.note << '\n';
  }
  os << "verdict: " << (passed() ? "pass" : "fail") << '\n';
  return os.str();
}

void CertificateReport::require_pass() const {
  if (!passed()) throw CertificateFailure(first_failure());
}

SpotCheckReport grid_positivity_spotcheck(const ThetaChain& chain, StageRef stage,
                                          const std::vector<BigRational>& grid, const PrecisionPolicy& policy) {
  policy.validate();
  const ExpPoly& e = chain.stage(stage);
  SpotCheckReport report{stage, {}, true};
  for (const auto& t : grid) {
    if (sgn(t) < 0) throw DomainError("spot check needs t >= 0");
    PrecisionPolicy p = policy;
    SpotCheckEntry entry{t, e.eval(t, p.working_bits(0)), Sign::Indeterminate, false, p.working_bits(0)};
    entry.sign = entry.value.sign();
    while (entry.sign == Sign::Indeterminate && t != 0 && p.target_bits < p.max_bits) {
      p = p.escalated();
      entry.value = e.eval(t, p.working_bits(0));
      entry.precision_used = p.working_bits(0);
      entry.sign = entry.value.sign();
    }
    if (t == 0) {
      const BigRational exact = e.at_zero();
      entry.boundary = exact == 0;
      if (sgn(exact) < 0) report.passed = false;
    } else if (entry.sign == Sign::Indeterminate) {
      throw IndeterminateSign(stage.label() + "(" + to_string(t) + ") straddles zero at " +
                              std::to_string(entry.precision_used) + " bits");
    } else if (entry.sign == Sign::Negative) {
      report.passed = false;
    }
    report.entries.push_back(std::move(entry));
  }
  return report;
}

}  // namespace cmcert
