#include "cmcert/exppoly.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "cmcert/errors.hpp"

namespace cmcert {

ExpPoly::ExpPoly(Blocks blocks) : blocks_(std::move(blocks)) { prune(); }

ExpPoly ExpPoly::term(unsigned k, RationalPoly p) {
  Blocks b;
  b.emplace(k, std::move(p));
  return ExpPoly(std::move(b));
}

void ExpPoly::prune() { std::erase_if(blocks_, [](const auto& kv) { return kv.second.is_zero(); }); }

RationalPoly ExpPoly::block(unsigned k) const {
  auto it = blocks_.find(k);
  return it == blocks_.end() ? RationalPoly{} : it->second;
}

std::optional<unsigned> ExpPoly::min_exponent() const {
  if (blocks_.empty()) return std::nullopt;
  return blocks_.begin()->first;
}

ExpPoly ExpPoly::derivative() const {
  Blocks out;
  for (const auto& [k, p] : blocks_) {
    out.emplace(k, p.derivative() + p * BigRational(k));
  }
  return ExpPoly(std::move(out));
}

ExpPoly ExpPoly::derivative(unsigned order) const {
  ExpPoly e = *this;
  for (unsigned i = 0; i < order; ++i) e = e.derivative();
  return e;
}

BigRational ExpPoly::at_zero() const {
  BigRational acc = 0;
  for (const auto& [k, p] : blocks_) acc += p.coeff(0);
  return acc;
}

Ball ExpPoly::eval(const BigRational& t0, mpfr_prec_t prec) const {
  if (t0 == 0) {
    // e^0 = 1: the value is an exact rational; widen the midpoint so that
    // dyadic values (in particular integers) are represented exactly
    const BigRational v = at_zero();
    mpfr_prec_t need = prec;
    if (mpz_popcount(v.get_den_mpz_t()) == 1) {
      need = std::max<mpfr_prec_t>(prec, static_cast<mpfr_prec_t>(mpz_sizeinbase(v.get_num_mpz_t(), 2)) + 1);
    }
    return Ball::from_rational(v, need);
  }
  Ball acc(prec);
  const Ball t = Ball::from_rational(t0, prec);
  for (const auto& [k, p] : blocks_) {
    Ball value = Ball::from_rational(p(t0), prec);
    if (k != 0) value *= exp(t * BigRational(k));
    acc += value;
  }
  return acc;
}

ExpPoly ExpPoly::factor_exp(unsigned k, const BigRational& s) const {
  if (s == 0) throw DomainError("factor_exp with zero scale");
  Blocks out;
  for (const auto& [e, p] : blocks_) {
    if (e < k) {
      throw NotDivisible("exponent " + std::to_string(e) + " is below the factored e^{" + std::to_string(k) +
                         "t}");
    }
    out.emplace(e - k, p / s);
  }
  return ExpPoly(std::move(out));
}

ExpPoly ExpPoly::multiply_exp(unsigned k, const BigRational& s) const {
  Blocks out;
  for (const auto& [e, p] : blocks_) out.emplace(e + k, p * s);
  return ExpPoly(std::move(out));
}

ExpPoly& ExpPoly::operator+=(const ExpPoly& o) {
  for (const auto& [k, p] : o.blocks_) blocks_[k] += p;
  prune();
  return *this;
}

ExpPoly& ExpPoly::operator-=(const ExpPoly& o) {
  for (const auto& [k, p] : o.blocks_) blocks_[k] -= p;
  prune();
  return *this;
}

ExpPoly& ExpPoly::operator*=(const BigRational& s) {
  for (auto& [k, p] : blocks_) p *= s;
  prune();
  return *this;
}

ExpPoly operator*(const ExpPoly& a, const ExpPoly& b) {
  ExpPoly::Blocks out;
  for (const auto& [ka, pa] : a.blocks_) {
    for (const auto& [kb, pb] : b.blocks_) out[ka + kb] += pa * pb;
  }
  return ExpPoly(std::move(out));
}

std::optional<std::string> first_difference(const ExpPoly& got, const ExpPoly& expected) {
  std::set<unsigned> keys;
  for (const auto& kv : got.blocks()) keys.insert(kv.first);
  for (const auto& kv : expected.blocks()) keys.insert(kv.first);
  for (unsigned k : keys) {
    const RationalPoly a = got.block(k);
    const RationalPoly b = expected.block(k);
    const auto n = static_cast<std::size_t>(std::max(a.degree(), b.degree()) + 1);
    for (std::size_t j = 0; j < n; ++j) {
      if (a.coeff(j) != b.coeff(j)) {
        std::ostringstream os;
        os << "e^{" << k << "t} t^" << j << ": got " << to_string(a.coeff(j)) << ", expected "
           << to_string(b.coeff(j));
        return os.str();
      }
    }
  }
  return std::nullopt;
}

std::string to_string(const ExpPoly& e) {
  if (e.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = e.blocks().rbegin(); it != e.blocks().rend(); ++it) {
    if (!first) os << " + ";
    first = false;
    os << '(' << to_string(it->second, 't') << ')';
    if (it->first == 1) os << "*e^t";
    else if (it->first > 1) os << "*e^(" << it->first << "t)";
  }
  return os.str();
}

}  // namespace cmcert
