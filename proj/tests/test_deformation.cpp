#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include <hbcert/deformation.hpp>
#include <hbcert/errors.hpp>
#include <hbcert/ode_model.hpp>

#include "test_support.hpp"

using namespace hbcert;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

SecularFn af_A() { return dX_dx_along(make_cubic_polar(), af_candidate()).antiderivative(); }
SecularFn af2_A() { return dX_dx_along(make_rigid_cubic(), af2_candidate()).antiderivative(); }
SecularFn order2_A() {
  return dX_dx_along(make_cubic_polar(), order2_candidate()).antiderivative();
}

// All-zero lower bound (alpha = beta = 0); margin 0, so not buildable via
// build_lower_bound -- assembled by hand for the degenerate psi identities.
LowerBound zero_lower_bound(int pieces) {
  LowerBound L;
  L.pieces = pieces;
  L.margin = 0.0;
  L.piece_h = kTwoPi / pieces;
  L.knot_t.resize(pieces + 1);
  for (int i = 0; i <= pieces; ++i) L.knot_t[i] = kTwoPi * i / pieces;
  L.knot_t[pieces] = kTwoPi;
  L.knot_v.assign(pieces + 1, 0.0);
  L.alpha.assign(pieces, 0.0);
  L.beta.assign(pieces, 0.0);
  return L;
}

// Chords of A itself (margin 0): touches A at the knots, so never adequate.
LowerBound touching_chords(const SecularFn& A, int pieces) {
  LowerBound L = zero_lower_bound(pieces);
  for (int i = 0; i <= pieces; ++i) L.knot_v[i] = A.eval(L.knot_t[i]);
  for (int i = 0; i < pieces; ++i) {
    double slope = (L.knot_v[i + 1] - L.knot_v[i]) / (L.knot_t[i + 1] - L.knot_t[i]);
    L.alpha[i] = -2.0 * slope;
    L.beta[i] = -2.0 * (L.knot_v[i] - slope * L.knot_t[i]);
  }
  return L;
}

}  // namespace

TEST_CASE("build_lower_bound: chords of a linear A are exact") {
  const SecularFn A(Rational(2), TrigPoly());  // A(t) = 2t
  LowerBound L = build_lower_bound(A, 4, 1.0);
  REQUIRE(L.pieces == 4);
  CHECK(!L.adequacy_certified);
  for (int i = 0; i < 4; ++i) {
    // L_i(t) = 2t - 1  <=>  alpha_i = -4, beta_i = 2
    CHECK(std::abs(L.alpha[i] + 4.0) <= 1e-12);
    CHECK(std::abs(L.beta[i] - 2.0) <= 1e-12);
    const double tm = 0.5 * (L.knot_t[i] + L.knot_t[i + 1]);
    CHECK(std::abs(L.eval(i, tm) - (2.0 * tm - 1.0)) <= 1e-12);
  }
  // continuity at interior knots
  for (int i = 0; i + 1 < 4; ++i)
    CHECK(std::abs(L.eval(i, L.knot_t[i + 1]) - L.eval(i + 1, L.knot_t[i + 1])) <= 1e-12);

  CHECK(certify_adequate(L, A));  // gap identically 1
  CHECK(L.adequacy_certified);

  CHECK_THROWS_AS(build_lower_bound(A, 4, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(build_lower_bound(A, 0, 1.0), std::invalid_argument);
}

TEST_CASE("certify_adequate: margin-zero chords are rejected") {
  // A(t) = sin t is convex on (pi/2, 3pi/2); its chords with no margin touch
  // (or cross) the graph, so strict minorization must fail.
  const SecularFn A = TrigPoly::harmonic_cos(1, Rational(1)).antiderivative();
  LowerBound L = touching_chords(A, 8);
  CHECK(!certify_adequate(L, A));
  CHECK(!L.adequacy_certified);
}

TEST_CASE("certify_adequate: the bundled problem configurations hold") {
  const SecularFn Aaf = af_A();
  LowerBound L1 = build_lower_bound(Aaf, 10, 0.1);
  CHECK(certify_adequate(L1, Aaf));

  const SecularFn A2 = af2_A();
  LowerBound L2 = build_lower_bound(A2, 7, 1.0 / 18.0);
  CHECK(certify_adequate(L2, A2));

  const SecularFn Ao = order2_A();
  LowerBound L3 = build_lower_bound(Ao, 13, 1.0 / 9.0);
  CHECK(certify_adequate(L3, Ao));
}

TEST_CASE("psi: degenerate all-zero lower bound") {
  LowerBound L = zero_lower_bound(8);
  const double h = kTwoPi / 8;
  for (int m : {0, 3, 7}) {
    const double t = (m + 0.3) * h;
    CHECK(std::abs(psi(L, 0.0, m, t) - t) <= 1e-12);         // lambda = 0: Psi = t
    CHECK(std::abs(psi(L, 1.0, m, t) - kTwoPi) <= 1e-12);    // lambda^2 = 1: Psi = 2pi
    CHECK(std::abs(psi(L, -1.0, m, t) - kTwoPi) <= 1e-12);
  }
  CHECK_THROWS_AS(psi(L, 0.0, 8, 0.0), std::invalid_argument);   // piece out of range
  CHECK_THROWS_AS(psi(L, 0.0, 0, 2.0), std::invalid_argument);   // t outside piece 0
}

TEST_CASE("psi: positive whenever adequacy holds and lambda != 1") {
  const SecularFn Aaf = af_A();
  LowerBound L = build_lower_bound(Aaf, 10, 0.1);
  REQUIRE(certify_adequate(L, Aaf));
  const double lam = std::exp(Aaf.a2pi());
  for (int m : {0, 4, 9}) {
    for (double frac : {0.0, 0.5, 1.0}) {
      const double t = L.knot_t[m] + frac * (L.knot_t[m + 1] - L.knot_t[m]);
      const double v = psi(L, lam, m, t);
      CHECK(std::isfinite(v));
      CHECK(v > 0.0);
    }
  }

  const SecularFn A2 = af2_A();
  LowerBound L2 = build_lower_bound(A2, 7, 1.0 / 18.0);
  REQUIRE(certify_adequate(L2, A2));
  const double lam2 = std::exp(A2.a2pi());
  for (int m : {0, 3, 6}) {
    const double t = 0.5 * (L2.knot_t[m] + L2.knot_t[m + 1]);
    CHECK(psi(L2, lam2, m, t) > 0.0);
  }
}

TEST_CASE("m_bound_cota: certified bounds for the three reference configurations") {
  const SecularFn Ao = order2_A();
  DeformationResult r1 = m_bound_cota(Ao, build_lower_bound(Ao, 13, 1.0 / 9.0));
  CHECK(r1.m_bound <= 2.3 * 1.05);
  CHECK(r1.m_bound >= 1.5);
  CHECK(r1.m_bound == doctest::Approx(2.31750525).epsilon(1e-3));
  CHECK(r1.method == MMethod::cota);
  CHECK(r1.pieces == 13);

  const SecularFn Aaf = af_A();
  DeformationResult r2 = m_bound_cota(Aaf, build_lower_bound(Aaf, 10, 0.1));
  CHECK(r2.m_bound <= 2.4 * 1.05);
  CHECK(r2.m_bound >= 1.5);
  CHECK(r2.m_bound == doctest::Approx(2.32919175).epsilon(1e-3));
  CHECK(r2.a2pi == doctest::Approx(12.56703455).epsilon(1e-6));
  CHECK(r2.lambda == doctest::Approx(std::exp(r2.a2pi)).epsilon(1e-12));

  const SecularFn A2 = af2_A();
  DeformationResult r3 = m_bound_cota(A2, build_lower_bound(A2, 7, 1.0 / 18.0));
  CHECK(r3.m_bound <= 7.0 * 1.05);
  CHECK(r3.m_bound >= 4.0);
  CHECK(r3.m_bound == doctest::Approx(6.97584799).epsilon(1e-3));
  CHECK(r3.a2pi == doctest::Approx(-1.22931987).epsilon(1e-6));
}

TEST_CASE("m_bound_cota: error paths") {
  // A(2pi) = 0: noncriticality fails before anything else.
  const SecularFn Asin = TrigPoly::harmonic_cos(1, Rational(1)).antiderivative();
  CHECK_THROWS_AS(m_bound_cota(Asin, zero_lower_bound(8)), Critical);

  // Margin-zero chords of a noncritical A cannot be certified.
  const SecularFn Aaf = af_A();
  CHECK_THROWS_AS(m_bound_cota(Aaf, touching_chords(Aaf, 10)), NotAdequate);
}

TEST_CASE("m_oracle_quadrature: closed form for A(t) = 2t") {
  // For A = 2t the maximized function is constant in t:
  // e^{4t} G(t) = (e^{8pi} - 1)/4, so M = sqrt(2pi (e^{4pi}+1)/(e^{4pi}-1))/2.
  const SecularFn A(Rational(2), TrigPoly());
  const double e4pi = std::exp(2.0 * kTwoPi);
  const double closed = 0.5 * std::sqrt(kTwoPi * (e4pi + 1.0) / (e4pi - 1.0));
  DeformationResult r = m_oracle_quadrature(A, 2048);
  CHECK(r.method == MMethod::quadrature_oracle);
  CHECK(r.m_bound == doctest::Approx(closed).epsilon(1e-8));

  CHECK_THROWS_AS(m_oracle_quadrature(TrigPoly::harmonic_cos(1, Rational(1)).antiderivative(), 256),
                  Critical);
}

TEST_CASE("m_oracle_quadrature: floors and dominance by the certified bound") {
  // a == -1, b == 1 has periodic solution x == 1, so M >= ||x||_inf / ||b||_2 = 1.
  const SecularFn Am1(Rational(-1), TrigPoly());
  CHECK(m_oracle_quadrature(Am1, 512).m_bound >= 1.0 - 1e-9);

  const SecularFn Aaf = af_A();
  const double oracle_af = m_oracle_quadrature(Aaf, 1024).m_bound;
  CHECK(oracle_af <= 2.4);
  CHECK(m_bound_cota(Aaf, build_lower_bound(Aaf, 10, 0.1)).m_bound >= oracle_af * (1 - 1e-9));

  const SecularFn A2 = af2_A();
  CHECK(m_bound_cota(A2, build_lower_bound(A2, 7, 1.0 / 18.0)).m_bound >=
        m_oracle_quadrature(A2, 1024).m_bound * (1 - 1e-9));

  const SecularFn Ao = order2_A();
  CHECK(m_bound_cota(Ao, build_lower_bound(Ao, 13, 1.0 / 9.0)).m_bound >=
        m_oracle_quadrature(Ao, 1024).m_bound * (1 - 1e-9));
}

TEST_CASE("periodic_solution_kernel: explicit solutions of x' = -x + b") {
  const SecularFn Am1(Rational(-1), TrigPoly());

  SampledFunction one = periodic_solution_kernel(Am1, TrigPoly(Rational(1)), 2048);
  REQUIRE(one.t.size() == one.x.size());
  for (double v : one.x) CHECK(std::abs(v - 1.0) <= 1e-8);
  CHECK(one.sup_norm() == doctest::Approx(1.0).epsilon(1e-8));

  SampledFunction xc = periodic_solution_kernel(Am1, TrigPoly::harmonic_cos(1, Rational(1)), 2048);
  for (std::size_t j = 0; j < xc.t.size(); ++j) {
    const double want = 0.5 * (std::cos(xc.t[j]) + std::sin(xc.t[j]));
    CHECK(std::abs(xc.x[j] - want) <= 1e-8);
  }
  CHECK(std::abs(xc.x.front() - xc.x.back()) <= 1e-10);

  // ODE residual at interior samples via a 4th-order stencil.
  const std::size_t n = xc.t.size() - 1;
  const double h = kTwoPi / static_cast<double>(n);
  for (std::size_t j = 2; j + 2 <= n; j += 97) {
    const double dx =
        (-xc.x[j + 2] + 8.0 * xc.x[j + 1] - 8.0 * xc.x[j - 1] + xc.x[j - 2]) / (12.0 * h);
    const double rhs = -xc.x[j] + std::cos(xc.t[j]);
    CHECK(std::abs(dx - rhs) <= 1e-6);
  }

  // a = cos t integrates to A(2pi) = 0: Critical.
  const SecularFn Acos = TrigPoly::harmonic_cos(1, Rational(1)).antiderivative();
  CHECK_THROWS_AS(periodic_solution_kernel(Acos, TrigPoly(Rational(1)), 256), Critical);
}

TEST_CASE("defining inequality: ||x_b||_inf <= M ||b||_2 for random b") {
  const SecularFn Aaf = af_A();
  const DeformationResult res = m_bound_cota(Aaf, build_lower_bound(Aaf, 10, 0.1));

  std::mt19937_64 rng(test_seed() + 11);
  std::uniform_int_distribution<int> deg(0, 6), num(-300, 300), den(1, 97);
  for (int iter = 0; iter < 20; ++iter) {
    const int d = deg(rng);
    std::vector<Rational> cc, ss;
    for (int m = 0; m < d; ++m) {
      cc.push_back(rat(num(rng), den(rng)));
      ss.push_back(rat(num(rng), den(rng)));
    }
    const TrigPoly b = TrigPoly::from_coeffs(rat(num(rng), den(rng)), cc, ss);
    SampledFunction xb = periodic_solution_kernel(Aaf, b, 1024);
    CHECK(xb.sup_norm() <= res.m_bound * b.l2_norm() + 1e-6);
  }
}

TEST_CASE("refinement monotonicity: doubling P, halving margin never hurts") {
  const SecularFn Aaf = af_A();
  const double m1 = m_bound_cota(Aaf, build_lower_bound(Aaf, 10, 0.1)).m_bound;
  const double m2 = m_bound_cota(Aaf, build_lower_bound(Aaf, 20, 0.05)).m_bound;
  const double m3 = m_bound_cota(Aaf, build_lower_bound(Aaf, 40, 0.025)).m_bound;
  CHECK(m2 <= m1 + 1e-9);
  CHECK(m3 <= m2 + 1e-9);
  CHECK(m3 < m1);  // typically a strict improvement
}

TEST_CASE("m_bound_auto: deterministic parameter search") {
  const SecularFn Aaf = af_A();
  DeformationResult a = m_bound_auto(Aaf);
  DeformationResult b = m_bound_auto(Aaf);
  CHECK(a.m_bound == b.m_bound);  // bit-for-bit reproducible
  CHECK(a.pieces == b.pieces);
  CHECK(a.margin == b.margin);

  CHECK(a.m_bound == doctest::Approx(2.15640549).epsilon(1e-3));
  CHECK(a.pieces == 64);
  CHECK(a.margin == Rational(1, 256));
  // The search result can never be worse than the hand-picked configuration.
  CHECK(a.m_bound <=
        m_bound_cota(Aaf, build_lower_bound(Aaf, 10, 0.1)).m_bound + 1e-12);
}
