#include "hbcert/trigpoly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "hbcert/errors.hpp"

namespace hbcert {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double abs_to_double_up(const Rational& q) {
  return to_double_round_up(Rational(abs(q)));
}
}  // namespace

void TrigPoly::trim() {
  while (!cos_.empty() && cos_.back() == 0 && sin_.back() == 0) {
    cos_.pop_back();
    sin_.pop_back();
  }
}

TrigPoly TrigPoly::from_coeffs(Rational a0, std::vector<Rational> cos_coeffs,
                               std::vector<Rational> sin_coeffs) {
  TrigPoly f;
  f.a0_ = std::move(a0);
  std::size_t n = std::max(cos_coeffs.size(), sin_coeffs.size());
  cos_coeffs.resize(n, Rational(0));
  sin_coeffs.resize(n, Rational(0));
  f.cos_ = std::move(cos_coeffs);
  f.sin_ = std::move(sin_coeffs);
  f.trim();
  return f;
}

TrigPoly TrigPoly::harmonic_cos(int m, const Rational& c) {
  if (m < 0) throw std::invalid_argument("harmonic index must be >= 0");
  if (m == 0) return TrigPoly(c);
  TrigPoly f;
  f.cos_.assign(m, Rational(0));
  f.sin_.assign(m, Rational(0));
  f.cos_[m - 1] = c;
  f.trim();
  return f;
}

TrigPoly TrigPoly::harmonic_sin(int m, const Rational& c) {
  if (m <= 0) throw std::invalid_argument("sin harmonic index must be >= 1");
  TrigPoly f;
  f.cos_.assign(m, Rational(0));
  f.sin_.assign(m, Rational(0));
  f.sin_[m - 1] = c;
  f.trim();
  return f;
}

bool TrigPoly::is_zero() const { return a0_ == 0 && cos_.empty(); }

Rational TrigPoly::cos_coeff(int m) const {
  if (m < 1 || m > degree()) return Rational(0);
  return cos_[m - 1];
}

Rational TrigPoly::sin_coeff(int m) const {
  if (m < 1 || m > degree()) return Rational(0);
  return sin_[m - 1];
}

TrigPoly TrigPoly::operator+(const TrigPoly& g) const {
  TrigPoly r;
  r.a0_ = a0_ + g.a0_;
  std::size_t n = std::max(cos_.size(), g.cos_.size());
  r.cos_.assign(n, Rational(0));
  r.sin_.assign(n, Rational(0));
  for (std::size_t i = 0; i < cos_.size(); ++i) {
    r.cos_[i] = cos_[i];
    r.sin_[i] = sin_[i];
  }
  for (std::size_t i = 0; i < g.cos_.size(); ++i) {
    r.cos_[i] += g.cos_[i];
    r.sin_[i] += g.sin_[i];
  }
  r.trim();
  return r;
}

TrigPoly TrigPoly::operator-(const TrigPoly& g) const { return *this + (-g); }

TrigPoly TrigPoly::operator-() const {
  TrigPoly r = *this;
  r.a0_ = -r.a0_;
  for (auto& c : r.cos_) c = -c;
  for (auto& s : r.sin_) s = -s;
  return r;
}

TrigPoly TrigPoly::scaled(const Rational& c) const {
  if (c == 0) return TrigPoly();
  TrigPoly r = *this;
  r.a0_ *= c;
  for (auto& x : r.cos_) x *= c;
  for (auto& x : r.sin_) x *= c;
  return r;
}

// cos k cos l = (cos(k-l) + cos(k+l)) / 2
// sin k sin l = (cos(k-l) - cos(k+l)) / 2
// sin k cos l = (sin(k+l) + sin(k-l)) / 2, with sin(-m) = -sin(m)
TrigPoly TrigPoly::operator*(const TrigPoly& g) const {
  int nf = degree(), ng = g.degree();
  int n = nf + ng;
  Rational mean_acc(0);
  std::vector<Rational> rc(n, Rational(0)), rs(n, Rational(0));

  auto add_cos = [&](int m, const Rational& v) {
    if (v == 0) return;
    if (m == 0) mean_acc += v;
    else rc[m - 1] += v;
  };
  auto add_sin = [&](int m, const Rational& v) {
    if (v == 0) return;
    if (m == 0) return;  // sin 0 = 0
    if (m > 0) rs[m - 1] += v;
    else rs[-m - 1] -= v;
  };

  Rational mf = mean(), mg = g.mean();
  mean_acc += mf * mg;
  for (int l = 1; l <= ng; ++l) {
    add_cos(l, mf * g.cos_[l - 1]);
    add_sin(l, mf * g.sin_[l - 1]);
  }
  for (int k = 1; k <= nf; ++k) {
    add_cos(k, mg * cos_[k - 1]);
    add_sin(k, mg * sin_[k - 1]);
  }
  for (int k = 1; k <= nf; ++k) {
    const Rational& ak = cos_[k - 1];
    const Rational& bk = sin_[k - 1];
    if (ak == 0 && bk == 0) continue;
    for (int l = 1; l <= ng; ++l) {
      const Rational& cl = g.cos_[l - 1];
      const Rational& dl = g.sin_[l - 1];
      if (cl == 0 && dl == 0) continue;
      int d = k - l, s = k + l;
      if (ak != 0 && cl != 0) {
        Rational half = ak * cl / 2;
        add_cos(std::abs(d), half);
        add_cos(s, half);
      }
      if (bk != 0 && dl != 0) {
        Rational half = bk * dl / 2;
        add_cos(std::abs(d), half);
        add_cos(s, -half);
      }
      if (bk != 0 && cl != 0) {
        Rational half = bk * cl / 2;
        add_sin(s, half);
        add_sin(d, half);
      }
      if (ak != 0 && dl != 0) {
        Rational half = ak * dl / 2;
        add_sin(s, half);
        add_sin(-d, half);  // sin l cos k with roles swapped: sin(l+k) + sin(l-k)
      }
    }
  }
  TrigPoly r;
  r.a0_ = 2 * mean_acc;
  r.cos_ = std::move(rc);
  r.sin_ = std::move(rs);
  r.trim();
  return r;
}

TrigPoly TrigPoly::pow(unsigned e) const {
  TrigPoly r{Rational(1)};
  TrigPoly b = *this;
  while (e) {
    if (e & 1u) r = r * b;
    if (e >>= 1u) b = b * b;
  }
  return r;
}

TrigPoly TrigPoly::derivative() const {
  TrigPoly r;
  int n = degree();
  r.cos_.assign(n, Rational(0));
  r.sin_.assign(n, Rational(0));
  for (int m = 1; m <= n; ++m) {
    r.cos_[m - 1] = m * sin_[m - 1];
    r.sin_[m - 1] = -m * cos_[m - 1];
  }
  r.trim();
  return r;
}

SecularFn TrigPoly::antiderivative() const {
  // int a_m cos(mt) = (a_m/m) sin(mt); int b_m sin(mt) = -(b_m/m) cos(mt).
  TrigPoly p;
  int n = degree();
  p.cos_.assign(n, Rational(0));
  p.sin_.assign(n, Rational(0));
  for (int m = 1; m <= n; ++m) {
    p.sin_[m - 1] = cos_[m - 1] / m;
    p.cos_[m - 1] = -sin_[m - 1] / m;
  }
  p.trim();
  return SecularFn(mean(), std::move(p));
}

Rational TrigPoly::l2_norm_sq() const {
  Rational s = mean() * mean();
  for (std::size_t i = 0; i < cos_.size(); ++i)
    s += (cos_[i] * cos_[i] + sin_[i] * sin_[i]) / 2;
  return s;
}

double TrigPoly::l2_norm() const { return sqrt_round_up(l2_norm_sq()); }

double TrigPoly::eval(double t) const {
  double v = to_double(a0_) / 2.0;
  for (int m = 1; m <= degree(); ++m) {
    double a = to_double(cos_[m - 1]);
    double b = to_double(sin_[m - 1]);
    if (a != 0.0) v += a * std::cos(m * t);
    if (b != 0.0) v += b * std::sin(m * t);
  }
  return v;
}

TrigPoly::Range TrigPoly::range_bounds(int grid_n) const {
  if (grid_n < 4 * (degree() + 1))
    throw std::invalid_argument("range_bounds: grid_n must be >= 4*(degree+1)");
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  double h = kTwoPi / grid_n;
  for (int j = 0; j < grid_n; ++j) {
    double v = eval(j * h);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  // Between grid nodes the function moves at most (h/2)*Lip from the nearer
  // node; pad further by a few ulps of the coefficient mass for eval rounding.
  double pad = 0.5 * h * lipschitz_bound() + 64.0 * std::numeric_limits<double>::epsilon() * (1.0 + coeff_abs_sum());
  return {lo - pad, hi + pad};
}

double TrigPoly::sup_norm_bound() const {
  double csum = coeff_abs_sum();
  int grid = std::max(4096, 8 * (degree() + 1));
  Range r = range_bounds(grid);
  return std::min(csum, std::max(std::fabs(r.lo), std::fabs(r.hi)));
}

double TrigPoly::lipschitz_bound() const {
  double s = 0;
  for (int m = 1; m <= degree(); ++m)
    s += m * (abs_to_double_up(cos_[m - 1]) + abs_to_double_up(sin_[m - 1]));
  return s;
}

double TrigPoly::coeff_abs_sum() const {
  double s = abs_to_double_up(Rational(a0_ / 2));
  for (int m = 1; m <= degree(); ++m)
    s += abs_to_double_up(cos_[m - 1]) + abs_to_double_up(sin_[m - 1]);
  return s;
}

SecularFn::SecularFn(Rational slope, TrigPoly periodic)
    : slope_(std::move(slope)), periodic_(std::move(periodic)) {
  if (periodic_.mean() != 0)
    throw SemanticError("SecularFn periodic part must have zero mean");
  periodic_at0_ = periodic_.eval(0.0);
}

double SecularFn::eval(double t) const {
  return to_double(slope_) * t + periodic_.eval(t) - periodic_at0_;
}

double SecularFn::a2pi() const { return kTwoPi * to_double(slope_); }

TrigPoly SecularFn::derivative() const {
  return TrigPoly(slope_) + periodic_.derivative();
}

double SecularFn::deriv_sup_bound() const {
  return abs_to_double_up(slope_) + periodic_.lipschitz_bound();
}

}  // namespace hbcert
