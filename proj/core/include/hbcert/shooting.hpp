// Non-rigorous numerical cross-checks: RK4 integration over one period,
// fixed points of the period map, Fourier extraction from trajectories.
#ifndef HBCERT_SHOOTING_HPP
#define HBCERT_SHOOTING_HPP

#include <string>
#include <vector>

#include "hbcert/ode_model.hpp"

namespace hbcert {

struct Trajectory {
  std::vector<double> t;  // 0, h, ..., 2*pi
  std::vector<double> x;
  double step_h = 0.0;
};

// Classic RK4 with a power-of-two step count (>= 64). blowup_bound <= 0
// selects the default 10 * (1 + |x0|); exceeding it throws Blowup.
Trajectory integrate(const OdeSpec& ode, double x0, int steps, double blowup_bound = 0.0);

// Secant iteration on P(x) - x where P is the time-2*pi map. When the
// forward map is expanding (or blows up near the guess), the equation is
// integrated in reversed time instead: u(tau) = x(2*pi - tau) has the same
// periodic states and the reciprocal multiplier.
double period_map_fixed_point(const OdeSpec& ode, double guess, double tol = 1e-12,
                              int steps = 4096);

// Trapezoid-rule Fourier coefficients through harmonic n from the closed
// trajectory (node 2*pi excluded; exact for band-limited samples).
TrigPoly fourier_extract(const Trajectory& traj, int n);

// One "t,x" line per node, 17 significant digits.
std::string to_csv(const Trajectory& traj);

}  // namespace hbcert

#endif
