// Harmonic balance: Galerkin projection of F(y) = y' - X(y, t) onto the
// first N harmonics, solved by damped Newton with exact residual/Jacobian
// assembly in rational trig-poly arithmetic.
#ifndef HBCERT_HBM_SOLVER_HPP
#define HBCERT_HBM_SOLVER_HPP

#include <optional>
#include <vector>

#include "hbcert/ode_model.hpp"

namespace hbcert {

enum class Symmetry { none, cos_only, even_cos };

// Unknown layout: index 0 is the mean value r_0, indices 1..N the cosine
// coefficients r_m, indices N+1..2N the sine coefficients s_m. A pinned
// unknown is frozen at zero together with its residual projection, so the
// reduced system stays square.
struct GalerkinSystem {
  int order = 0;
  std::vector<char> pinned;  // size 2*order+1

  static GalerkinSystem make(int order, Symmetry sym = Symmetry::none);
  std::vector<int> free_indices() const;
  int dim() const;
  int layout_size() const { return 2 * order + 1; }
};

TrigPoly point_to_poly(const GalerkinSystem& sys, const std::vector<Rational>& point);
std::vector<Rational> poly_to_point(const GalerkinSystem& sys, const TrigPoly& f);

// Fourier projections of F(y) at the free indices; exact. point has full
// layout size with pinned entries zero.
std::vector<Rational> galerkin_residual(const OdeSpec& ode, const GalerkinSystem& sys,
                                        const std::vector<Rational>& point);

// Exact partial derivatives d proj_i / d u_j (free rows x free columns):
// column j is the projection of phi_j' - dX/dx(y, t) phi_j.
std::vector<std::vector<Rational>> galerkin_jacobian(const OdeSpec& ode,
                                                     const GalerkinSystem& sys,
                                                     const std::vector<Rational>& point);

struct SolveOptions {
  double tol = 1e-12;
  int max_iter = 80;
  double min_step = 1.0 / (1 << 20);
  double cond_limit = 1e12;
  int snap_digits = 12;
};

// Damped Newton (Armijo halving) from a full-layout seed. Coefficients of
// the returned solution are snapped to 12-significant-digit rationals.
// Throws NoConvergence or SingularJacobian.
ApproxSolution solve(const OdeSpec& ode, const GalerkinSystem& sys,
                     const std::vector<double>& seed, const SolveOptions& opts = {});

// All real roots of the constant-ansatz mean equation, ascending. Exact
// Sturm isolation on the rational polynomial, then bisection.
std::vector<double> solve_order1(const OdeSpec& ode);

struct LadderStep {
  int order = 0;
  ApproxSolution sol;
  Accuracy acc;
  bool used_shooting_seed = false;
};

struct LadderOptions {
  SolveOptions solve;
  double domain_lo = -1e308, domain_hi = 1e308;  // admissible constant roots
  int shooting_steps = 4096;
};

// Constant ansatz first, then order 1..n_max (orders adding no free unknowns
// under the symmetry mask are skipped); each order seeds the next, falling
// back to a shooting-extracted seed when Newton fails.
std::vector<LadderStep> continuation_ladder(const OdeSpec& ode, int n_max,
                                            Symmetry sym = Symmetry::none,
                                            const LadderOptions& opts = {});

}  // namespace hbcert

#endif
