// Exact trigonometric polynomials on [0, 2pi] with rational coefficients,
// f(t) = a0/2 + sum_{m=1}^{N} (a_m cos(mt) + b_m sin(mt)),
// plus the secular antiderivative type A(t) = mu*t + p(t) - p(0).
#ifndef HBCERT_TRIGPOLY_HPP
#define HBCERT_TRIGPOLY_HPP

#include <vector>

#include "hbcert/rational.hpp"

namespace hbcert {

class SecularFn;

class TrigPoly {
public:
  TrigPoly() : a0_(0) {}
  explicit TrigPoly(Rational constant) : a0_(2 * std::move(constant)) {}

  // a0 is twice the mean, matching the series convention above.
  static TrigPoly from_coeffs(Rational a0, std::vector<Rational> cos_coeffs,
                              std::vector<Rational> sin_coeffs);
  static TrigPoly harmonic_cos(int m, const Rational& c);
  static TrigPoly harmonic_sin(int m, const Rational& c);

  // Highest harmonic with a nonzero coefficient (0 for constants).
  int degree() const { return static_cast<int>(cos_.size()); }
  bool is_zero() const;

  const Rational& a0() const { return a0_; }
  Rational mean() const { return a0_ / 2; }
  // m >= 1; coefficients beyond degree() read as zero.
  Rational cos_coeff(int m) const;
  Rational sin_coeff(int m) const;

  TrigPoly operator+(const TrigPoly& g) const;
  TrigPoly operator-(const TrigPoly& g) const;
  TrigPoly operator-() const;
  // Product-to-sum expansion; exact, degree deg(f)+deg(g).
  TrigPoly operator*(const TrigPoly& g) const;
  TrigPoly scaled(const Rational& c) const;
  TrigPoly pow(unsigned e) const;

  TrigPoly derivative() const;
  // Antiderivative with A(0) = 0; the mean becomes the secular slope.
  SecularFn antiderivative() const;

  // Parseval: (a0/2)^2 + (1/2) sum (a_m^2 + b_m^2). Exact.
  Rational l2_norm_sq() const;
  double l2_norm() const;  // sqrt, rounded up

  double eval(double t) const;

  struct Range {
    double lo, hi;
  };
  // Certified enclosure of the range over [0, 2pi]: evaluate on grid_n
  // uniform points and widen by (h/2) * Lipschitz bound (plus rounding
  // slack). Requires grid_n >= 4 * (degree + 1).
  Range range_bounds(int grid_n) const;

  // Upper bound for sup |f|: min of the coefficient-sum bound and the
  // range-derived bound on a fine default grid.
  double sup_norm_bound() const;

  // sup |f'| <= sum m (|a_m| + |b_m|).
  double lipschitz_bound() const;
  // |a0/2| + sum (|a_m| + |b_m|), itself a sup-norm bound.
  double coeff_abs_sum() const;

  bool operator==(const TrigPoly& g) const = default;

private:
  void trim();
  Rational a0_;
  std::vector<Rational> cos_, sin_;  // index m-1 holds the harmonic-m coefficient
};

// A(t) = slope*t + periodic(t) - periodic(0); periodic has zero mean, so
// A(0) = 0 and A(2pi) = 2pi * slope exactly.
class SecularFn {
public:
  SecularFn() : slope_(0) {}
  SecularFn(Rational slope, TrigPoly periodic);

  const Rational& slope() const { return slope_; }
  const TrigPoly& periodic_part() const { return periodic_; }

  double eval(double t) const;
  double a2pi() const;  // 2pi * slope, in double

  // d/dt A = slope + periodic', recovering the integrand exactly.
  TrigPoly derivative() const;
  // sup |A'| <= |slope| + sum m (|a_m| + |b_m|) over the periodic part.
  double deriv_sup_bound() const;

private:
  Rational slope_;
  TrigPoly periodic_;
  double periodic_at0_;  // cached periodic(0) for eval
};

}  // namespace hbcert

#endif
