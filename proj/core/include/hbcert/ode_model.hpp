// Scalar 2pi-periodic ODE x' = X(x, t) with X polynomial in x and
// trig-polynomial in t, plus candidate periodic approximations.
#ifndef HBCERT_ODE_MODEL_HPP
#define HBCERT_ODE_MODEL_HPP

#include <optional>
#include <string>
#include <vector>

#include "hbcert/trigpoly.hpp"

namespace hbcert {

// X(x, t) = sum_{k=0}^{d} c_k(t) x^k. Invariant: coeffs.size() == d+1 and
// c_d is not identically zero.
struct OdeSpec {
  std::string name;
  std::vector<TrigPoly> coeffs;

  int degree_x() const { return static_cast<int>(coeffs.size()) - 1; }
  void validate() const;

  double eval_X(double x, double t) const;
  double eval_dX_dx(double x, double t) const;
};

struct Provenance {
  enum Kind { hbm, rationalized, shooting, user } kind = user;
  int order = 0;  // meaningful for hbm
};

struct ApproxSolution {
  TrigPoly xbar;
  Provenance provenance;
};

// X(xbar(t), t) as an exact trig polynomial (Horner in xbar).
TrigPoly substitute(const OdeSpec& ode, const TrigPoly& xbar);

// s(t) = xbar'(t) - X(xbar(t), t).
TrigPoly residual(const OdeSpec& ode, const TrigPoly& xbar);

struct Accuracy {
  Rational exact_sq;  // ||s||_2^2, exact
  double value;       // sqrt, rounded up
};
Accuracy accuracy(const OdeSpec& ode, const TrigPoly& xbar);

// dX/dx (xbar(t), t) = sum k c_k(t) xbar^{k-1}, exact.
TrigPoly dX_dx_along(const OdeSpec& ode, const TrigPoly& xbar);

// Upper bound for max |d2X/dx2| over [lo,hi] x [0,2pi]:
// sum_{k>=2} k (k-1) sup|c_k| max(|lo|,|hi|)^{k-2}.
double d2X_dx2_bound(const OdeSpec& ode, double lo, double hi);

// Coefficients of the time-reversed field u' = -X(u, 2pi - tau): negate
// every coefficient and flip sin signs. Used by shooting on unstable cycles.
OdeSpec time_reversed(const OdeSpec& ode);

// Open interval Omega for the x variable; an absent endpoint is unbounded.
struct DomainInterval {
  std::optional<Rational> lo, hi;

  double lo_double() const;  // -inf when unbounded
  double hi_double() const;
  // Is the closed interval [a, b] strictly inside the open domain?
  bool contains_closed(double a, double b) const;
  std::string to_string() const;  // e.g. "(0, inf)"
};

}  // namespace hbcert

#endif
