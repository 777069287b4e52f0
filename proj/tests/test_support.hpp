#pragma once
#include <cstdint>
#include <string>

#include <hbcert/ode_model.hpp>
#include <hbcert/trigpoly.hpp>

extern uint64_t g_test_seed;
inline uint64_t test_seed() { return g_test_seed; }

// mpq_class(n, d) keeps the representation as given; reduce explicitly so
// randomly generated fractions are safe to compute with.
inline hbcert::Rational rat(long num, long den) {
  hbcert::Rational q(num, den);
  q.canonicalize();
  return q;
}

inline std::string problems_dir() {
#ifdef HBCERT_PROBLEMS_DIR
  return HBCERT_PROBLEMS_DIR;
#else
  return "problems";
#endif
}

// r' = -r + (2 + cos 2t + sin 2t) r^3
inline hbcert::OdeSpec make_cubic_polar() {
  using namespace hbcert;
  std::vector<TrigPoly> c(4);
  c[1] = TrigPoly(Rational(-1));
  c[3] = TrigPoly(Rational(2)) + TrigPoly::harmonic_cos(2, Rational(1)) +
         TrigPoly::harmonic_sin(2, Rational(1));
  return OdeSpec{"cubic_polar", c};
}

// r' = (1/10) r - (1/10) cos(t) r^2 - cos^2(t) r^3, cos^2 pre-expanded.
inline hbcert::OdeSpec make_rigid_cubic() {
  using namespace hbcert;
  std::vector<TrigPoly> c(4);
  c[1] = TrigPoly(Rational(1, 10));
  c[2] = TrigPoly::harmonic_cos(1, Rational(-1, 10));
  c[3] = TrigPoly(Rational(-1, 2)) + TrigPoly::harmonic_cos(2, Rational(-1, 2));
  return OdeSpec{"rigid_cubic", c};
}

inline hbcert::TrigPoly order2_candidate() {
  using namespace hbcert;
  return TrigPoly::from_coeffs(Rational(3, 2), {Rational(0), Rational(-1, 5)}, {});
}

// 44/59 - (24/119)cos 2t + (2/49)cos 4t - (1/110)cos 6t + (1/468)cos 8t
inline hbcert::TrigPoly af_candidate() {
  using namespace hbcert;
  TrigPoly p(Rational(44, 59));
  p = p + TrigPoly::harmonic_cos(2, Rational(-24, 119));
  p = p + TrigPoly::harmonic_cos(4, Rational(2, 49));
  p = p + TrigPoly::harmonic_cos(6, Rational(-1, 110));
  p = p + TrigPoly::harmonic_cos(8, Rational(1, 468));
  return p;
}

inline hbcert::TrigPoly af2_candidate() {
  using namespace hbcert;
  TrigPoly p(Rational(4, 9));
  p = p + TrigPoly::harmonic_cos(1, Rational(-1, 693));
  p = p + TrigPoly::harmonic_sin(1, Rational(-1, 51));
  p = p + TrigPoly::harmonic_cos(2, Rational(-1, 653));
  p = p + TrigPoly::harmonic_sin(2, Rational(-1, 45));
  p = p + TrigPoly::harmonic_cos(3, Rational(-1, 780));
  return p;
}
