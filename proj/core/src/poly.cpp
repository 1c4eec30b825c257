#include "cmcert/poly.hpp"

#include <algorithm>
#include <sstream>

#include "cmcert/errors.hpp"

namespace cmcert {

RationalPoly::RationalPoly(std::vector<BigRational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

RationalPoly::RationalPoly(std::initializer_list<BigRational> coeffs) : coeffs_(coeffs) { trim(); }

RationalPoly RationalPoly::constant(const BigRational& c) { return RationalPoly({c}); }

RationalPoly RationalPoly::monomial(const BigRational& c, std::size_t power) {
  std::vector<BigRational> v(power + 1);
  v[power] = c;
  return RationalPoly(std::move(v));
}

RationalPoly RationalPoly::shifted_power(const BigRational& a, std::size_t n) {
  std::vector<BigRational> v(n + 1);
  // binomial expansion of (x + a)^n
  BigRational apow = 1;
  for (std::size_t k = 0; k <= n; ++k) {
    v[n - k] = BigRational(binomial(static_cast<unsigned>(n), static_cast<unsigned>(k))) * apow;
    apow *= a;
  }
  return RationalPoly(std::move(v));
}

void RationalPoly::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

BigRational RationalPoly::coeff(std::size_t i) const {
  return i < coeffs_.size() ? coeffs_[i] : BigRational(0);
}

BigRational RationalPoly::leading() const { return coeffs_.empty() ? BigRational(0) : coeffs_.back(); }

BigRational RationalPoly::operator()(const BigRational& x) const {
  BigRational acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc *= x;
    acc += *it;
  }
  return acc;
}

RationalPoly RationalPoly::derivative() const {
  if (coeffs_.size() <= 1) return {};
  std::vector<BigRational> v(coeffs_.size() - 1);
  for (std::size_t i = 1; i < coeffs_.size(); ++i) v[i - 1] = coeffs_[i] * static_cast<unsigned long>(i);
  return RationalPoly(std::move(v));
}

RationalPoly RationalPoly::taylor_shift(const BigRational& a) const {
  // Horner in polynomial arithmetic: ((c_n)(x+a) + c_{n-1})(x+a) + ...
  RationalPoly acc;
  const RationalPoly lin({a, BigRational(1)});
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc = acc * lin;
    acc += constant(*it);
  }
  return acc;
}

bool RationalPoly::nonnegative_coefficients() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const BigRational& c) { return sgn(c) >= 0; });
}

RationalPoly& RationalPoly::operator+=(const RationalPoly& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
  for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  trim();
  return *this;
}

RationalPoly& RationalPoly::operator-=(const RationalPoly& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
  for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  trim();
  return *this;
}

RationalPoly operator*(const RationalPoly& a, const RationalPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<BigRational> v(a.coeffs_.size() + b.coeffs_.size() - 1);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    if (a.coeffs_[i] == 0) continue;
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) v[i + j] += a.coeffs_[i] * b.coeffs_[j];
  }
  return RationalPoly(std::move(v));
}

RationalPoly& RationalPoly::operator*=(const RationalPoly& o) { return *this = *this * o; }

RationalPoly& RationalPoly::operator*=(const BigRational& s) {
  if (s == 0) {
    coeffs_.clear();
    return *this;
  }
  for (auto& c : coeffs_) c *= s;
  return *this;
}

RationalPoly& RationalPoly::operator/=(const BigRational& s) {
  if (s == 0) throw DomainError("polynomial divided by zero");
  for (auto& c : coeffs_) c /= s;
  return *this;
}

RationalPoly operator-(RationalPoly a) {
  for (auto& c : a.coeffs_) c = -c;
  return a;
}

std::pair<RationalPoly, RationalPoly> divmod(const RationalPoly& a, const RationalPoly& b) {
  if (b.is_zero()) throw DomainError("polynomial division by zero");
  if (a.degree() < b.degree()) return {RationalPoly{}, a};
  std::vector<BigRational> rem = a.coeffs();
  std::vector<BigRational> quo(rem.size() - b.coeffs().size() + 1);
  const auto db = static_cast<std::size_t>(b.degree());
  const BigRational lead = b.leading();
  for (std::size_t i = quo.size(); i-- > 0;) {
    BigRational f = rem[i + db] / lead;
    quo[i] = f;
    if (f == 0) continue;
    for (std::size_t j = 0; j <= db; ++j) rem[i + j] -= f * b.coeffs()[j];
  }
  return {RationalPoly(std::move(quo)), RationalPoly(std::move(rem))};
}

RationalPoly gcd(RationalPoly a, RationalPoly b) {
  while (!b.is_zero()) {
    auto r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  if (a.is_zero()) return a;
  return a / a.leading();
}

RationalPoly series_divide(const RationalPoly& num, const RationalPoly& den, std::size_t n) {
  const BigRational d0 = den.coeff(0);
  if (d0 == 0) throw DomainError("series division by a polynomial vanishing at 0");
  std::vector<BigRational> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    BigRational acc = num.coeff(i);
    for (std::size_t j = 1; j <= i && j < den.coeffs().size(); ++j) acc -= den.coeffs()[j] * out[i - j];
    out[i] = acc / d0;
  }
  return RationalPoly(std::move(out));
}

std::string to_string(const RationalPoly& p, char var) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < p.coeffs().size(); ++i) {
    const BigRational& c = p.coeffs()[i];
    if (c == 0) continue;
    if (!first) os << (sgn(c) < 0 ? " - " : " + ");
    else if (sgn(c) < 0) os << '-';
    first = false;
    os << to_string(BigRational(abs(c)));
    if (i >= 1) os << '*' << var;
    if (i >= 2) os << '^' << i;
  }
  return os.str();
}

}  // namespace cmcert
