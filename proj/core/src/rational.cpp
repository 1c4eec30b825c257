#include "cmcert/rational.hpp"

#include <cctype>

#include "cmcert/errors.hpp"

namespace cmcert {

BigRational make_rational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  BigRational q(num, den);
  q.canonicalize();
  return q;
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

BigRational parse_rational(std::string_view text) {
  std::string_view body = text;
  while (!body.empty() && std::isspace(static_cast<unsigned char>(body.front()))) body.remove_prefix(1);
  while (!body.empty() && std::isspace(static_cast<unsigned char>(body.back()))) body.remove_suffix(1);
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  BigRational q;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    auto num = body.substr(0, slash);
    auto den = body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) {
      throw ParseError("malformed rational '" + std::string(text) + "'");
    }
    q = make_rational(BigInt(std::string(num)), BigInt(std::string(den)));
  } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
    auto whole = body.substr(0, dot);
    auto frac = body.substr(dot + 1);
    if ((!whole.empty() && !all_digits(whole)) || (!frac.empty() && !all_digits(frac)) ||
        (whole.empty() && frac.empty())) {
      throw ParseError("malformed decimal '" + std::string(text) + "'");
    }
    BigInt num(std::string(whole.empty() ? "0" : whole) + std::string(frac));
    BigInt den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
    q = make_rational(num, den);
  } else {
    if (!all_digits(body)) throw ParseError("malformed number '" + std::string(text) + "'");
    q = BigRational(BigInt(std::string(body)));
  }
  return negative ? BigRational(-q) : q;
}

std::string to_string(const BigRational& q) { return q.get_str(); }

BigInt factorial(unsigned n) {
  BigInt r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

BigInt binomial(unsigned n, unsigned k) {
  BigInt r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

BigInt rising_factorial(long s, unsigned n) {
  BigInt r = 1;
  for (unsigned i = 0; i < n; ++i) r *= s + static_cast<long>(i);
  return r;
}

BigRational pow(const BigRational& base, long exponent) {
  if (exponent < 0) {
    if (base == 0) throw DomainError("zero raised to a negative power");
    return pow(BigRational(1) / base, -exponent);
  }
  BigInt num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), static_cast<unsigned long>(exponent));
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), static_cast<unsigned long>(exponent));
  return BigRational(num, den);  // already coprime
}

BigRational pow2(long e) {
  BigInt p;
  mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(e < 0 ? -e : e));
  return e < 0 ? BigRational(BigInt(1), p) : BigRational(p);
}

}  // namespace cmcert
