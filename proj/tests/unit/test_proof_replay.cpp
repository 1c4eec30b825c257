#include "cmcert/errors.hpp"
#include "cmcert/proof_replay.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace cmcert;

namespace {

ConstantTable mutated(std::string_view label, const BigRational& delta = 1) {
  ConstantTable t = ConstantTable::builtin();
  t.set(label, t.get(label) + delta);
  return t;
}

const ThetaChain& reference_chain() {
  static const ThetaChain chain = [] {
    const ThetaFixtures f = ThetaFixtures::from_table(ConstantTable::builtin());
    return ThetaChain::build(build_theta_from_kernel(f), f.theta2_scale);
  }();
  return chain;
}

}  // namespace

TEST_CASE("stage labels round-trip") {
  for (const char* label : {"theta", "theta_d1", "theta_d10", "theta1", "theta1_d7", "theta2_d9"}) {
    CHECK(StageRef::parse(label).label() == label);
  }
  CHECK(StageRef::parse("theta2_d9") == StageRef{Family::Theta2, 9});
  CHECK_THROWS_AS(StageRef::parse("theta3"), ParseError);
  CHECK_THROWS_AS(StageRef::parse("theta_dx"), ParseError);
}

TEST_CASE("theta from the kernel matches the tabulated theta") {
  const ThetaFixtures f = ThetaFixtures::from_table(ConstantTable::builtin());
  CHECK(build_theta_from_kernel(f) == f.theta);
  ThetaFixtures bad = ThetaFixtures::from_table(mutated("theta[3][1]"));
  CHECK_THROWS_AS(build_theta_from_kernel(bad), FixtureMismatch);
}

TEST_CASE("frozen values at t = 0") {
  const ThetaChain& c = reference_chain();
  CHECK(c.theta[0].at_zero() == 0);
  CHECK(c.theta[5].at_zero() == 1632960000);
  CHECK(c.theta2[9].at_zero() == BigRational(BigInt("295702274730240")));
  CHECK(c.theta2[0].at_zero() == BigRational(BigInt("122050247808825")));
  CHECK(c.theta1[0].at_zero() == c.theta[10].at_zero());
  // 725760 (8857350 * 46 - 1)
  CHECK(c.theta2[9].at_zero() == BigRational(BigInt(725760) * (BigInt(8857350) * 46 - 1)));
}

TEST_CASE("chain is consistent under differentiation and factorisation") {
  const ThetaChain& c = reference_chain();
  REQUIRE(c.theta.size() == 11);
  REQUIRE(c.theta1.size() == 11);
  REQUIRE(c.theta2.size() == 10);
  for (std::size_t i = 0; i + 1 < c.theta.size(); ++i) CHECK(c.theta[i].derivative() == c.theta[i + 1]);
  for (std::size_t i = 0; i + 1 < c.theta1.size(); ++i) CHECK(c.theta1[i].derivative() == c.theta1[i + 1]);
  for (std::size_t i = 0; i + 1 < c.theta2.size(); ++i) CHECK(c.theta2[i].derivative() == c.theta2[i + 1]);
  CHECK(c.theta1[0].multiply_exp(1, 1) == c.theta[10]);
  CHECK(c.theta2[0].multiply_exp(1, 512) == c.theta1[10]);
  CHECK_THROWS_AS(c.stage({Family::Theta2, 10}), DomainError);
}

TEST_CASE("individual verification stages pass on the reference data") {
  const ThetaFixtures f = ThetaFixtures::from_table(ConstantTable::builtin());
  const ThetaChain& c = reference_chain();
  for (const auto& v : verify_derivative_fixtures(c, f)) {
    INFO(v.name << ": " << v.detail);
    CHECK(v.passed);
  }
  CHECK(verify_divisibility(c, f).passed);
  const StageVerdict init = verify_initial_values(c, f);
  INFO(init.detail);
  CHECK(init.passed);
}

TEST_CASE("crude lower bound for the bottom stage") {
  const ThetaChain& c = reference_chain();
  const auto bound = exp_lower_bound_polynomial(c.theta2[9]);
  REQUIRE(bound.has_value());
  CHECK(bound->nonnegative_coefficients());
  CHECK(bound->coeff(0) == c.theta2[9].at_zero());
  const ExpPoly negative = ExpPoly::term(2, RationalPoly{1, -1});
  CHECK_FALSE(exp_lower_bound_polynomial(negative).has_value());
}

TEST_CASE("certificate passes with five steps") {
  const CertificateReport r = chain_positivity_certificate();
  INFO(r.trace());
  CHECK(r.passed());
  REQUIRE(r.steps.size() == 5);
  for (int i = 0; i < 5; ++i) {
    CHECK(r.steps[static_cast<std::size_t>(i)].step == i + 1);
    CHECK_FALSE(r.steps[static_cast<std::size_t>(i)].exact_values_used.empty());
  }
  CHECK_FALSE(r.first_failed_step().has_value());
  CHECK(r.first_failure().empty());
  CHECK_NOTHROW(r.require_pass());
}

TEST_CASE("certificate JSON is deterministic and round-trips") {
  const std::string a = chain_positivity_certificate().to_json();
  const std::string b = chain_positivity_certificate().to_json();
  CHECK(a == b);
  CHECK(CertificateReport::from_json(a).to_json() == a);
  CHECK(a.find("\"schema\": \"cmcert.certificate/1\"") != std::string::npos);
  CHECK_THROWS_AS(CertificateReport::from_json("{"), ParseError);
  CHECK_THROWS_AS(CertificateReport::from_json("{\"schema\": \"other\"}"), ParseError);
}

TEST_CASE("mutations fail at the expected place") {
  SUBCASE("bottom stage coefficient") {
    const CertificateReport r = chain_positivity_certificate(mutated("theta2_d9[1][0]"));
    CHECK_FALSE(r.passed());
    CHECK(r.first_failed_step() == 1);
    CHECK_THROWS_AS(r.require_pass(), CertificateFailure);
  }
  SUBCASE("theta1 initial value") {
    const CertificateReport r = chain_positivity_certificate(mutated("initial.theta1_d5"));
    CHECK_FALSE(r.passed());
    CHECK(r.first_failed_step() == 3);
  }
  SUBCASE("theta2 initial value") {
    const CertificateReport r = chain_positivity_certificate(mutated("initial.theta2_d4"));
    CHECK(r.first_failed_step() == 2);
  }
  SUBCASE("theta initial value") {
    const CertificateReport r = chain_positivity_certificate(mutated("initial.theta_d7"));
    CHECK(r.first_failed_step() == 4);
  }
  SUBCASE("remainder term propagates into theta") {
    const CertificateReport r = chain_positivity_certificate(mutated("remainder[2][10]"));
    CHECK_FALSE(r.passed());
    bool kernel_stage_failed = false;
    for (const auto& s : r.stages) kernel_stage_failed |= s.name == "theta from kernel" && !s.passed;
    CHECK(kernel_stage_failed);
  }
  SUBCASE("scale of the last factorisation") {
    const CertificateReport r = chain_positivity_certificate(mutated("theta2_scale"));
    CHECK_FALSE(r.passed());
  }
}

TEST_CASE("grid spot check of every stage") {
  const ThetaChain& c = reference_chain();
  std::vector<BigRational> grid{0};
  for (int i = -6; i <= 6; ++i) grid.push_back(pow2(i));
  grid.push_back(BigRational(1, 3));
  grid.push_back(BigRational(25));
  const PrecisionPolicy policy = PrecisionPolicy::with_target(64);
  for (unsigned i = 0; i < c.theta.size(); ++i) {
    const auto r = grid_positivity_spotcheck(c, {Family::Theta, i}, grid, policy);
    INFO("theta^(" << i << ")");
    CHECK(r.passed);
    CHECK(r.entries.front().boundary == (i <= 4));
  }
  for (unsigned i = 0; i < c.theta1.size(); ++i) CHECK(grid_positivity_spotcheck(c, {Family::Theta1, i}, grid, policy).passed);
  for (unsigned i = 0; i < c.theta2.size(); ++i) CHECK(grid_positivity_spotcheck(c, {Family::Theta2, i}, grid, policy).passed);
  CHECK_THROWS_AS(grid_positivity_spotcheck(c, {Family::Theta, 0}, {BigRational(-1)}, policy), DomainError);
}

TEST_CASE("spot check reports negative values and unresolved signs") {
  ThetaChain chain;
  chain.theta.push_back(ExpPoly::term(0, RationalPoly{-1}));
  const auto r = grid_positivity_spotcheck(chain, {Family::Theta, 0}, {BigRational(1)}, PrecisionPolicy{});
  CHECK_FALSE(r.passed);
  // e^t - 1 - t is about 2^-401 at t = 2^-200, far below 128 bits
  ThetaChain tiny;
  tiny.theta.push_back(ExpPoly(ExpPoly::Blocks{{0, RationalPoly{-1, -1}}, {1, RationalPoly{1}}}));
  PrecisionPolicy capped = PrecisionPolicy::with_target(32);
  capped.max_bits = 128;
  CHECK_THROWS_AS(grid_positivity_spotcheck(tiny, {Family::Theta, 0}, {pow2(-200)}, capped), IndeterminateSign);
}
