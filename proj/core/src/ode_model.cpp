#include "hbcert/ode_model.hpp"

#include <cmath>
#include <limits>

#include "hbcert/errors.hpp"

namespace hbcert {

void OdeSpec::validate() const {
  if (coeffs.size() < 2) throw SemanticError("ode degree in x must be >= 1");
  if (coeffs.back().is_zero())
    throw SemanticError("leading coefficient c_d must not be identically zero");
}

double OdeSpec::eval_X(double x, double t) const {
  double v = 0;
  for (int k = degree_x(); k >= 0; --k) v = v * x + coeffs[k].eval(t);
  return v;
}

double OdeSpec::eval_dX_dx(double x, double t) const {
  double v = 0;
  for (int k = degree_x(); k >= 1; --k) v = v * x + k * coeffs[k].eval(t);
  return v;
}

TrigPoly substitute(const OdeSpec& ode, const TrigPoly& xbar) {
  TrigPoly v;
  for (int k = ode.degree_x(); k >= 0; --k) v = v * xbar + ode.coeffs[k];
  return v;
}

TrigPoly residual(const OdeSpec& ode, const TrigPoly& xbar) {
  return xbar.derivative() - substitute(ode, xbar);
}

Accuracy accuracy(const OdeSpec& ode, const TrigPoly& xbar) {
  Rational sq = residual(ode, xbar).l2_norm_sq();
  return {sq, sqrt_round_up(sq)};
}

TrigPoly dX_dx_along(const OdeSpec& ode, const TrigPoly& xbar) {
  TrigPoly v;
  for (int k = ode.degree_x(); k >= 1; --k)
    v = v * xbar + ode.coeffs[k].scaled(Rational(k));
  return v;
}

double d2X_dx2_bound(const OdeSpec& ode, double lo, double hi) {
  double xmax = std::max(std::fabs(lo), std::fabs(hi));
  double bound = 0;
  double xpow = 1.0;  // xmax^{k-2}, maximized at an endpoint (or 1 when k = 2)
  for (int k = 2; k <= ode.degree_x(); ++k) {
    bound += static_cast<double>(k) * (k - 1) * ode.coeffs[k].sup_norm_bound() * xpow;
    xpow *= xmax;
  }
  return bound;
}

double DomainInterval::lo_double() const {
  // Round toward -inf so the strict containment test stays conservative.
  return lo ? -to_double_round_up(-*lo) : -std::numeric_limits<double>::infinity();
}

double DomainInterval::hi_double() const {
  return hi ? to_double_round_up(*hi) : std::numeric_limits<double>::infinity();
}

bool DomainInterval::contains_closed(double a, double b) const {
  if (!(a <= b)) return false;
  if (lo && !(a > to_double_round_up(*lo))) return false;
  if (hi && !(b < -to_double_round_up(-*hi))) return false;
  return true;
}

std::string DomainInterval::to_string() const {
  std::string s = "(";
  s += lo ? hbcert::to_string(*lo) : "-inf";
  s += ", ";
  s += hi ? hbcert::to_string(*hi) : "inf";
  return s + ")";
}

OdeSpec time_reversed(const OdeSpec& ode) {
  OdeSpec r;
  r.name = ode.name + "_reversed";
  r.coeffs.reserve(ode.coeffs.size());
  for (const TrigPoly& c : ode.coeffs) {
    // -c_k(-t): negate a0 and cos coefficients, keep sin coefficients.
    std::vector<Rational> cc, ss;
    for (int m = 1; m <= c.degree(); ++m) {
      cc.push_back(-c.cos_coeff(m));
      ss.push_back(c.sin_coeff(m));
    }
    r.coeffs.push_back(TrigPoly::from_coeffs(-c.a0(), std::move(cc), std::move(ss)));
  }
  return r;
}

}  // namespace hbcert
