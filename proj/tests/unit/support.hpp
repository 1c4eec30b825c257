#pragma once

#include <random>
#include <string>

#include "cmcert/ball.hpp"
#include "cmcert/poly.hpp"
#include "cmcert/rational.hpp"

namespace cmcert::testing {

/// Fixed seed so property failures reproduce.
inline std::mt19937_64& rng() {
  static std::mt19937_64 engine(0x5eed'c0de'2024ULL);
  return engine;
}

inline long random_int(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng()); }

/// n/d with |n| <= num_bound and 1 <= d <= den_bound.
inline BigRational random_rational(long num_bound = 50, long den_bound = 12) {
  return make_rational(random_int(-num_bound, num_bound), random_int(1, den_bound));
}

inline BigRational random_positive_rational(long num_bound = 80, long den_bound = 16) {
  return make_rational(random_int(1, num_bound), random_int(1, den_bound));
}

inline RationalPoly random_poly(int max_degree, long num_bound = 20) {
  std::vector<BigRational> c;
  const int deg = static_cast<int>(random_int(0, max_degree));
  for (int i = 0; i <= deg; ++i) c.push_back(random_rational(num_bound, 6));
  return RationalPoly(std::move(c));
}

/// True when |mid - reference| <= rad + rel_slack * |reference|, with the
/// reference given as a decimal string (more digits than the slack needs).
inline bool encloses(const Ball& b, const std::string& reference, double rel_slack = 1e-28) {
  BigFloat ref(512), diff(512), bound(512);
  mpfr_set_str(ref.get(), reference.c_str(), 10, MPFR_RNDN);
  mpfr_sub(diff.get(), b.mid().get(), ref.get(), MPFR_RNDN);
  mpfr_abs(diff.get(), diff.get(), MPFR_RNDN);
  mpfr_abs(bound.get(), ref.get(), MPFR_RNDN);
  mpfr_mul_d(bound.get(), bound.get(), rel_slack, MPFR_RNDU);
  mpfr_add(bound.get(), bound.get(), b.rad().get(), MPFR_RNDU);
  return mpfr_lessequal_p(diff.get(), bound.get()) != 0;
}

/// True when the ball contains the value of a high-precision MPFR number
/// up to its own last-bit uncertainty.
inline bool encloses(const Ball& b, const BigFloat& reference) {
  BigFloat diff(reference.precision() + 64), slack(64);
  mpfr_sub(diff.get(), b.mid().get(), reference.get(), MPFR_RNDN);
  mpfr_abs(diff.get(), diff.get(), MPFR_RNDN);
  mpfr_abs(slack.get(), reference.get(), MPFR_RNDU);
  mpfr_mul_2si(slack.get(), slack.get(), -static_cast<long>(reference.precision()) + 2, MPFR_RNDU);
  mpfr_add(slack.get(), slack.get(), b.rad().get(), MPFR_RNDU);
  return mpfr_lessequal_p(diff.get(), slack.get()) != 0;
}

inline double relative_radius(const Ball& b) { return b.rad().to_double() / std::abs(b.mid().to_double()); }

}  // namespace cmcert::testing
