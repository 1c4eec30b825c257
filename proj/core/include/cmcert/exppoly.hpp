#pragma once

#include <map>
#include <optional>
#include <string>

#include "cmcert/ball.hpp"
#include "cmcert/poly.hpp"

namespace cmcert {

/// Exponential polynomial sum_k p_k(t) e^{k t} with k >= 0 and rational
/// polynomial blocks p_k. Zero blocks are never stored, so two ExpPolys are
/// equal exactly when their block maps are equal.
class ExpPoly {
 public:
  using Blocks = std::map<unsigned, RationalPoly>;

  ExpPoly() = default;
  explicit ExpPoly(Blocks blocks);
  /// p(t) e^{k t}
  static ExpPoly term(unsigned k, RationalPoly p);

  const Blocks& blocks() const { return blocks_; }
  /// Block at exponent k (zero polynomial if absent).
  RationalPoly block(unsigned k) const;
  bool is_zero() const { return blocks_.empty(); }
  /// Smallest exponent present; nullopt for the zero ExpPoly.
  std::optional<unsigned> min_exponent() const;

  /// d/dt, block-wise (p_k' + k p_k) e^{k t}.
  ExpPoly derivative() const;
  ExpPoly derivative(unsigned order) const;

  /// Exact value at t = 0.
  BigRational at_zero() const;
  /// Enclosure of the value at a rational point. Exact at t0 = 0.
  Ball eval(const BigRational& t0, mpfr_prec_t prec) const;

  /// e / (s e^{k t}); throws NotDivisible when some exponent is below k and
  /// DomainError when s is zero.
  ExpPoly factor_exp(unsigned k, const BigRational& s) const;
  /// e * s e^{k t}
  ExpPoly multiply_exp(unsigned k, const BigRational& s) const;

  ExpPoly& operator+=(const ExpPoly& o);
  ExpPoly& operator-=(const ExpPoly& o);
  ExpPoly& operator*=(const BigRational& s);

  friend ExpPoly operator+(ExpPoly a, const ExpPoly& b) { return a += b; }
  friend ExpPoly operator-(ExpPoly a, const ExpPoly& b) { return a -= b; }
  friend ExpPoly operator*(const ExpPoly& a, const ExpPoly& b);
  friend ExpPoly operator*(ExpPoly a, const BigRational& s) { return a *= s; }
  friend ExpPoly operator*(const BigRational& s, ExpPoly a) { return a *= s; }
  friend bool operator==(const ExpPoly& a, const ExpPoly& b) = default;

 private:
  void prune();
  Blocks blocks_;
};

/// First coefficient at which two ExpPolys differ, as a readable message
/// ("e^{3t} t^1: got X, expected Y"); nullopt when equal.
std::optional<std::string> first_difference(const ExpPoly& got, const ExpPoly& expected);

std::string to_string(const ExpPoly& e);

}  // namespace cmcert
