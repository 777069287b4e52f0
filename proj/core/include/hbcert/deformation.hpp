// Deformation constant M for the periodic linear kernel of x' = a(t) x + b(t):
// certified upper bounds through piecewise-linear minorants of A(t) = int a,
// a non-certified quadrature oracle, and the kernel solver itself.
#ifndef HBCERT_DEFORMATION_HPP
#define HBCERT_DEFORMATION_HPP

#include <functional>
#include <vector>

#include "hbcert/trigpoly.hpp"

namespace hbcert {

// Piecewise-linear L with L(t) < A(t) required on all of [0, 2pi].
// On piece i (t in [t_i, t_{i+1}]), L_i(t) = -(alpha_i t + beta_i)/2, the
// chord of A - margin through (t_i, A(t_i) - margin), (t_{i+1}, A(t_{i+1}) - margin).
struct LowerBound {
  int pieces = 0;
  double margin = 0;
  double piece_h = 0;                 // 2pi / pieces
  std::vector<double> knot_t;         // size pieces+1
  std::vector<double> knot_v;         // A(t_i) - margin
  std::vector<double> alpha, beta;    // size pieces
  bool adequacy_certified = false;

  double eval(int piece, double t) const { return -(alpha[piece] * t + beta[piece]) / 2.0; }
};

LowerBound build_lower_bound(const SecularFn& A, int pieces, double margin);

// Certifies min (A - L_i) > 0 on every piece by adaptive grid evaluation with
// Lipschitz widening (|A'| bounded by coefficient sums, |L_i'| = |alpha_i|/2).
// Sets L.adequacy_certified on success.
bool certify_adequate(LowerBound& L, const SecularFn& A);

// Psi_m(t) for t in piece m:
//   sum_{i<m} J_i + lambda^2 sum_{i>=m} J_i + (1 - lambda^2) int_{t_m}^t e^{-2L_m}
// with J_i = int_{t_i}^{t_{i+1}} e^{-2L_i}. The second partial sum starts at
// the current piece index m: starting one piece earlier would double-count
// J_{m-1} and is undefined on the first piece. Evaluated in the equivalent
// all-positive form to avoid cancellation.
double psi(const LowerBound& L, double lambda, int m, double t);

enum class MMethod { cota, quadrature_oracle };

struct DeformationResult {
  double m_bound = 0;
  MMethod method = MMethod::cota;
  double lambda = 0;       // e^{A(2pi)}; may overflow to inf for large slopes
  double a2pi = 0;         // A(2pi), always finite
  int pieces = 0;
  Rational margin{0};
};

// Certified upper bound sqrt(2pi)/|1-lambda| * max_t e^{A(t)} sqrt(Psi(t)),
// computed in log space (log-sum-exp) so e^{A(2pi)}-scale factors never
// overflow, with the outer max certified by adaptive grids plus Lipschitz
// widening. Throws Critical when |A(2pi)| < 1e-9, NotAdequate when L cannot
// be certified.
DeformationResult m_bound_cota(const SecularFn& A, const LowerBound& L);

// Parameter search over pieces in {8,...,128} and margins {1/8,...,1/256};
// keeps the smallest certified bound (ties: smallest P, then largest margin).
DeformationResult m_bound_auto(const SecularFn& A);

// Non-certified quadrature estimate of 2pi max_t ||H(t,.)||_2 (composite
// Simpson with grid_n panels). A floor for any certified bound.
DeformationResult m_oracle_quadrature(const SecularFn& A, int grid_n);

struct SampledFunction {
  std::vector<double> t, x;
  double sup_norm() const;
};

// Unique periodic solution of x' = a(t) x + b(t) via the explicit kernel,
// sampled on grid_n+1 uniform points spanning [0, 2pi] (grid_n made even).
SampledFunction periodic_solution_kernel(const SecularFn& A, const TrigPoly& b, int grid_n);

// Same solver with b given pointwise; grid has 2K+1 nodes, h = pi/K.
SampledFunction solve_linear_periodic(const SecularFn& A,
                                      const std::function<double(double)>& b, int half_panels);

}  // namespace hbcert

#endif
