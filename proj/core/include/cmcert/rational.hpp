#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace cmcert {

// Arbitrary-size integers and canonical rationals. gmpxx keeps every
// arithmetic result in lowest terms with a positive denominator.
using BigInt = mpz_class;
using BigRational = mpq_class;

/// Builds num/den in canonical form. Throws DomainError if den == 0.
BigRational make_rational(const BigInt& num, const BigInt& den);

/// Parses "n", "-n/d" or a plain decimal such as "0.05" (converted exactly).
BigRational parse_rational(std::string_view text);

/// "n" for integers, "n/d" otherwise.
std::string to_string(const BigRational& q);

BigInt factorial(unsigned n);
BigInt binomial(unsigned n, unsigned k);

/// Rising factorial s (s+1) ... (s+n-1).
BigInt rising_factorial(long s, unsigned n);

/// base^exponent for any integer exponent; base must be nonzero when
/// exponent < 0.
BigRational pow(const BigRational& base, long exponent);

/// 2^e as an exact rational (e may be negative).
BigRational pow2(long e);

}  // namespace cmcert
