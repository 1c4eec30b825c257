// Non-certified cross-check of the series path: tanh-sinh quadrature of the
// integral representation of psi^(m), truncated at a point T where the
// exponential tail is negligible.
#include <cmath>
#include <string>
#include <vector>

#include "cmcert/errors.hpp"
#include "cmcert/polygamma.hpp"

namespace cmcert {

Ball QuadratureEstimate::as_ball() const {
  BigFloat err(Ball::kRadiusPrecision);
  mpfr_abs(err.get(), error_estimate.get(), MPFR_RNDU);
  return Ball::from_mid_rad(value.get(), err.get(), value.precision());
}

namespace {

// Relative tail bound: int_T^inf t^m e^{-xt}/(1-e^{-t}) dt divided by the
// lower bound m!/x^{m+1} of the whole integral, in natural log.
double log_relative_tail(int m, double x, double T) {
  double series = 0.0, term = 1.0;
  for (int i = 0; i <= m; ++i) {
    series += term;
    term *= x * T / (i + 1);
  }
  return -x * T - std::log1p(-std::exp(-T)) + std::log(series);
}

class Integrand {
 public:
  Integrand(int m, const BigRational& x, mpfr_prec_t prec) : m_(m), x_(prec), tmp_(prec), num_(prec) {
    mpfr_set_q(x_.get(), x.get_mpq_t(), MPFR_RNDN);
  }

  // t^m e^{-x t} / (1 - e^{-t}) written into out
  void operator()(mpfr_ptr out, mpfr_srcptr t) {
    if (mpfr_zero_p(t)) {
      mpfr_set_ui(out, m_ == 1 ? 1 : 0, MPFR_RNDN);
      return;
    }
    mpfr_pow_ui(num_.get(), t, static_cast<unsigned long>(m_), MPFR_RNDN);
    mpfr_mul(tmp_.get(), x_.get(), t, MPFR_RNDN);
    mpfr_neg(tmp_.get(), tmp_.get(), MPFR_RNDN);
    mpfr_exp(tmp_.get(), tmp_.get(), MPFR_RNDN);
    mpfr_mul(num_.get(), num_.get(), tmp_.get(), MPFR_RNDN);
    mpfr_neg(tmp_.get(), t, MPFR_RNDN);
    mpfr_expm1(tmp_.get(), tmp_.get(), MPFR_RNDN);
    mpfr_neg(tmp_.get(), tmp_.get(), MPFR_RNDN);
    mpfr_div(out, num_.get(), tmp_.get(), MPFR_RNDN);
  }

 private:
  int m_;
  BigFloat x_, tmp_, num_;
};

struct PanelResult {
  BigFloat value;
  BigFloat delta;
  unsigned evaluations = 0;
  unsigned levels = 0;
};

PanelResult tanh_sinh(Integrand& f, mpfr_srcptr lo, mpfr_srcptr hi, mpfr_prec_t prec) {
  constexpr unsigned kMaxLevel = 12;
  BigFloat half_pi(prec), d(prec), u(prec), v(prec), e(prec), t(prec), w(prec), fx(prec), c(prec);
  mpfr_const_pi(half_pi.get(), MPFR_RNDN);
  mpfr_div_2ui(half_pi.get(), half_pi.get(), 1, MPFR_RNDN);
  mpfr_sub(d.get(), hi, lo, MPFR_RNDN);
  mpfr_div_2ui(d.get(), d.get(), 1, MPFR_RNDN);

  // nodes beyond u_max carry weights far below 2^-prec
  const double u_max = std::asinh((static_cast<double>(prec) + 20.0) * std::log(2.0) / M_PI);

  PanelResult r{BigFloat(prec), BigFloat(prec)};
  BigFloat total(prec), previous(prec), estimate(prec);

  auto add_node = [&](double node) {
    mpfr_set_d(u.get(), node, MPFR_RNDN);
    mpfr_sinh(v.get(), u.get(), MPFR_RNDN);
    mpfr_mul(v.get(), v.get(), half_pi.get(), MPFR_RNDN);
    // abscissa measured from the nearer endpoint to keep it accurate
    mpfr_mul_2ui(e.get(), v.get(), 1, MPFR_RNDN);
    if (node > 0) mpfr_neg(e.get(), e.get(), MPFR_RNDN);
    mpfr_exp(e.get(), e.get(), MPFR_RNDN);
    mpfr_add_ui(e.get(), e.get(), 1, MPFR_RNDN);
    mpfr_ui_div(e.get(), 2, e.get(), MPFR_RNDN);
    mpfr_mul(e.get(), e.get(), d.get(), MPFR_RNDN);
    if (node > 0) mpfr_sub(t.get(), hi, e.get(), MPFR_RNDN);
    else mpfr_add(t.get(), lo, e.get(), MPFR_RNDN);
    // weight d (pi/2) cosh(u) / cosh(v)^2
    mpfr_cosh(w.get(), u.get(), MPFR_RNDN);
    mpfr_mul(w.get(), w.get(), half_pi.get(), MPFR_RNDN);
    mpfr_mul(w.get(), w.get(), d.get(), MPFR_RNDN);
    mpfr_cosh(c.get(), v.get(), MPFR_RNDN);
    mpfr_sqr(c.get(), c.get(), MPFR_RNDN);
    mpfr_div(w.get(), w.get(), c.get(), MPFR_RNDN);
    f(fx.get(), t.get());
    mpfr_mul(fx.get(), fx.get(), w.get(), MPFR_RNDN);
    mpfr_add(total.get(), total.get(), fx.get(), MPFR_RNDN);
    ++r.evaluations;
  };

  const long k_max = static_cast<long>(std::floor(u_max));
  for (long k = -k_max; k <= k_max; ++k) add_node(static_cast<double>(k));
  mpfr_set(previous.get(), total.get(), MPFR_RNDN);

  for (unsigned level = 1; level <= kMaxLevel; ++level) {
    const double h = std::ldexp(1.0, -static_cast<int>(level));
    const long n = static_cast<long>(std::floor(u_max / h));
    for (long k = -n; k <= n; ++k) {
      if (k % 2 != 0) add_node(static_cast<double>(k) * h);
    }
    mpfr_mul_d(estimate.get(), total.get(), h, MPFR_RNDN);
    mpfr_sub(r.delta.get(), estimate.get(), previous.get(), MPFR_RNDN);
    mpfr_abs(r.delta.get(), r.delta.get(), MPFR_RNDN);
    mpfr_set(previous.get(), estimate.get(), MPFR_RNDN);
    r.levels = level;
    if (level >= 3) {
      BigFloat tol(prec);
      mpfr_abs(tol.get(), estimate.get(), MPFR_RNDN);
      mpfr_div_2si(tol.get(), tol.get(), static_cast<long>(prec) - 8, MPFR_RNDN);
      if (mpfr_lessequal_p(r.delta.get(), tol.get()) || mpfr_zero_p(estimate.get())) {
        r.value = estimate;
        return r;
      }
    }
  }
  throw QuadratureFailure("tanh-sinh refinement did not converge");
}

}  // namespace

QuadratureEstimate polygamma_quadrature_crosscheck(int m, const BigRational& x, long prec_bits) {
  if (m < 1) throw DomainError("quadrature cross-check needs m >= 1");
  if (sgn(x) <= 0) throw DomainError("quadrature cross-check needs x > 0");
  if (prec_bits < 8) throw DomainError("precision must be at least 8 bits");
  const auto prec = static_cast<mpfr_prec_t>(prec_bits + 16);
  const double xd = x.get_d();

  // truncation point: relative tail below 2^-(prec + 8)
  const double log_target = -(static_cast<double>(prec) + 8.0) * std::log(2.0);
  double T = 1.0;
  while (log_relative_tail(m, xd, T) > log_target) T *= 2.0;
  double lo_t = T / 2, hi_t = T;
  for (int i = 0; i < 40; ++i) {
    const double mid = 0.5 * (lo_t + hi_t);
    (log_relative_tail(m, xd, mid) > log_target ? lo_t : hi_t) = mid;
  }
  T = std::max(hi_t, 1.0);

  // geometric panels [0,1], [1,2], [2,4], ... up to T
  std::vector<double> edges{0.0, 1.0};
  while (edges.back() * 2 < T) edges.push_back(edges.back() * 2);
  if (edges.back() < T) edges.push_back(T);

  Integrand f(m, x, prec);
  QuadratureEstimate out{BigFloat(prec), BigFloat(prec)};
  BigFloat lo(prec), hi(prec);
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    mpfr_set_d(lo.get(), edges[i], MPFR_RNDN);
    mpfr_set_d(hi.get(), edges[i + 1], MPFR_RNDN);
    PanelResult p = tanh_sinh(f, lo.get(), hi.get(), prec);
    mpfr_add(out.value.get(), out.value.get(), p.value.get(), MPFR_RNDN);
    mpfr_add(out.error_estimate.get(), out.error_estimate.get(), p.delta.get(), MPFR_RNDU);
    out.evaluations += p.evaluations;
    out.levels = std::max(out.levels, p.levels);
  }

  // tail estimate, scaled by the lower bound m!/x^{m+1}
  BigFloat tail(prec);
  mpfr_set_d(tail.get(), log_relative_tail(m, xd, T), MPFR_RNDU);
  mpfr_exp(tail.get(), tail.get(), MPFR_RNDU);
  BigFloat scale(prec);
  const BigRational lower = BigRational(factorial(static_cast<unsigned>(m))) / pow(x, m + 1);
  mpfr_set_q(scale.get(), lower.get_mpq_t(), MPFR_RNDU);
  mpfr_mul(tail.get(), tail.get(), scale.get(), MPFR_RNDU);
  mpfr_add(out.error_estimate.get(), out.error_estimate.get(), tail.get(), MPFR_RNDU);

  if (m % 2 == 0) mpfr_neg(out.value.get(), out.value.get(), MPFR_RNDN);
  return out;
}

}  // namespace cmcert
