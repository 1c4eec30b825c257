#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cmcert/ball.hpp"
#include "cmcert/constants.hpp"
#include "cmcert/exppoly.hpp"
#include "cmcert/polygamma.hpp"

namespace cmcert {

/// The three exponential-polynomial families of the positivity chain.
enum class Family { Theta, Theta1, Theta2 };

/// One stage of the chain: family and derivative order.
struct StageRef {
  Family family = Family::Theta;
  unsigned order = 0;

  /// "theta", "theta_d5", "theta1_d10", "theta2_d9", ...
  std::string label() const;
  /// Inverse of label(); throws ParseError.
  static StageRef parse(std::string_view label);
  friend bool operator==(const StageRef&, const StageRef&) = default;
};

/// Everything the replay reads from the constants table.
struct ThetaFixtures {
  BigRational theta_scale;   // normaliser of the Laplace integrand
  BigRational theta2_scale;  // theta1^(10) = theta2_scale * e^t * theta2
  PartialFractionForm remainder_terms;
  ExpPoly theta;
  ExpPoly theta_d1;
  ExpPoly theta_d10;
  ExpPoly theta1_d1;
  ExpPoly theta1_d10;
  ExpPoly theta2_d9;
  /// Tabulated values at t = 0, keyed by stage.
  std::vector<std::pair<StageRef, BigRational>> initial_values;

  static ThetaFixtures from_table(const ConstantTable& table);
};

/// theta and its derivatives, followed through the two exponential
/// factorisations theta^(10) = e^t theta1 and theta1^(10) = s e^t theta2.
struct ThetaChain {
  std::vector<ExpPoly> theta;   // theta^(0..10)
  std::vector<ExpPoly> theta1;  // theta1^(0..10)
  std::vector<ExpPoly> theta2;  // theta2^(0..9)

  /// Throws NotDivisible if a factorisation fails.
  static ThetaChain build(const ExpPoly& theta, const BigRational& theta2_scale);
  const ExpPoly& stage(StageRef s) const;
};

/// scale * e^{2t} * (t e^t - (e^t - 1) R(t)), R being the Laplace kernel of
/// the remainder partial fractions. This is the numerator of the integrand
///   t/(1 - e^{-t}) - R(t) = theta(t) e^{-2t} / (scale (e^t - 1)).
ExpPoly theta_from_kernel(const PartialFractionForm& remainder, const BigRational& scale);
/// theta_from_kernel checked against the tabulated theta; FixtureMismatch
/// names the first differing coefficient.
ExpPoly build_theta_from_kernel(const ThetaFixtures& fixtures);

/// Polynomial q with e(t) >= q(t) for t >= 0, obtained by replacing e^{kt}
/// with 1 on every block k >= 1 (each such block must have nonnegative
/// coefficients). nullopt when that is not possible.
std::optional<RationalPoly> exp_lower_bound_polynomial(const ExpPoly& e);

struct StageVerdict {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct CertificateStep {
  int step = 0;
  std::string claim;
  std::string method;
  std::vector<std::pair<std::string, std::string>> exact_values_used;
  bool passed = false;
  std::string note;
};

/// Structured verdict of the replay. Deterministic: the same inputs produce
/// byte-identical serialisations.
struct CertificateReport {
  std::vector<StageVerdict> stages;
  std::vector<CertificateStep> steps;

  bool passed() const;
  /// 1-based number of the first failing positivity step.
  std::optional<int> first_failed_step() const;
  /// Name of the first failing stage or step ("" when passed).
  std::string first_failure() const;
  std::string trace() const;
  std::string to_json() const;
  static CertificateReport from_json(std::string_view json);
  /// Throws CertificateFailure naming the first failure.
  void require_pass() const;
};

/// Exact comparison of computed derivatives with the tabulated ones
/// (theta', theta^(10), theta1', theta1^(10), theta2^(9)).
std::vector<StageVerdict> verify_derivative_fixtures(const ThetaChain& chain, const ThetaFixtures& fixtures);
/// All tabulated values at t = 0 against the exact chain, plus theta(0) = 0
/// and theta^(1..4)(0) = 0.
StageVerdict verify_initial_values(const ThetaChain& chain, const ThetaFixtures& fixtures);
/// theta^(10) and theta1^(10) have no e^{0t} block and theta1^(10) has
/// coefficients divisible by theta2_scale.
StageVerdict verify_divisibility(const ThetaChain& chain, const ThetaFixtures& fixtures);

/// The five-step positivity argument over an already built chain.
std::vector<CertificateStep> positivity_steps(const ThetaChain& chain, const ThetaFixtures& fixtures,
                                              bool identity_holds);

/// Full replay over a constants table: identities, theta from the kernel,
/// derivative fixtures, divisibility, initial values, positivity chain.
CertificateReport chain_positivity_certificate(const ConstantTable& table = ConstantTable::builtin());

struct SpotCheckEntry {
  BigRational t;
  Ball value;
  Sign sign = Sign::Indeterminate;
  /// t == 0 and the exact value is 0: a boundary point, not a failure.
  bool boundary = false;
  long precision_used = 0;
};

struct SpotCheckReport {
  StageRef stage;
  std::vector<SpotCheckEntry> entries;
  bool passed = false;
};

/// Evaluates one stage on a grid of t >= 0 and requires a strictly positive
/// enclosure at every t > 0. Precision doubles up to policy.max_bits before
/// IndeterminateSign is thrown.
SpotCheckReport grid_positivity_spotcheck(const ThetaChain& chain, StageRef stage,
                                          const std::vector<BigRational>& grid, const PrecisionPolicy& policy);

}  // namespace cmcert
