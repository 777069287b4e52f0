#include <benchmark/benchmark.h>

#include <hbcert/deformation.hpp>
#include <hbcert/hbm_solver.hpp>
#include <hbcert/ode_model.hpp>
#include <hbcert/trigpoly.hpp>

using namespace hbcert;

namespace {

TrigPoly dense_poly(int deg) {
  TrigPoly p(Rational(1, 3));
  for (int m = 1; m <= deg; ++m) {
    p = p + TrigPoly::harmonic_cos(m, Rational(1, 2 * m + 1)) +
        TrigPoly::harmonic_sin(m, Rational(-1, 3 * m + 2));
  }
  return p;
}

OdeSpec integrable_spec() {
  std::vector<TrigPoly> c(4);
  c[1] = TrigPoly(Rational(-1));
  c[3] = TrigPoly(Rational(2)) + TrigPoly::harmonic_cos(2, Rational(1)) +
         TrigPoly::harmonic_sin(2, Rational(1));
  return OdeSpec{"bench", c};
}

TrigPoly order2_xbar() {
  return TrigPoly::from_coeffs(Rational(3, 2), {Rational(0), Rational(-1, 5)}, {});
}

void BM_TrigMul(benchmark::State& state) {
  const TrigPoly p = dense_poly(static_cast<int>(state.range(0)));
  const TrigPoly q = dense_poly(static_cast<int>(state.range(0)) / 2 + 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(p * q);
  }
}
BENCHMARK(BM_TrigMul)->Arg(8)->Arg(16)->Arg(32);

void BM_Accuracy(benchmark::State& state) {
  const OdeSpec ode = integrable_spec();
  const TrigPoly xbar = order2_xbar();
  for (auto _ : state) {
    benchmark::DoNotOptimize(accuracy(ode, xbar));
  }
}
BENCHMARK(BM_Accuracy);

void BM_GalerkinJacobian(benchmark::State& state) {
  const OdeSpec ode = integrable_spec();
  const auto sys = GalerkinSystem::make(static_cast<int>(state.range(0)),
                                        Symmetry::even_cos);
  std::vector<Rational> u(sys.layout_size(), Rational(0));
  u[0] = Rational(3, 4);
  u[2] = Rational(-1, 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(galerkin_jacobian(ode, sys, u));
  }
}
BENCHMARK(BM_GalerkinJacobian)->Arg(4)->Arg(8)->Arg(16);

void BM_MBoundCota(benchmark::State& state) {
  const OdeSpec ode = integrable_spec();
  const SecularFn A = dX_dx_along(ode, order2_xbar()).antiderivative();
  const int pieces = static_cast<int>(state.range(0));
  for (auto _ : state) {
    // This A needs at least 16 pieces at margin 1/10 to certify adequacy.
    LowerBound L = build_lower_bound(A, pieces, 1.0 / 10.0);
    if (!certify_adequate(L, A)) {
      state.SkipWithError("lower bound not adequate at this piece count");
      return;
    }
    benchmark::DoNotOptimize(m_bound_cota(A, L));
  }
}
BENCHMARK(BM_MBoundCota)->Arg(16)->Arg(32)->Arg(128);

}  // namespace

BENCHMARK_MAIN();
