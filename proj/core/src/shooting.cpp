#include "hbcert/shooting.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "hbcert/errors.hpp"

namespace hbcert {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

Trajectory integrate(const OdeSpec& ode, double x0, int steps, double blowup_bound) {
  if (!is_pow2(steps) || steps < 64)
    throw std::invalid_argument("integrate: steps must be a power of two >= 64");
  const double bound = blowup_bound > 0.0 ? blowup_bound : 10.0 * (1.0 + std::fabs(x0));
  const double h = kTwoPi / steps;

  Trajectory traj;
  traj.step_h = h;
  traj.t.reserve(steps + 1);
  traj.x.reserve(steps + 1);
  traj.t.push_back(0.0);
  traj.x.push_back(x0);

  double x = x0;
  for (int j = 0; j < steps; ++j) {
    const double t = j * h;
    const double k1 = ode.eval_X(x, t);
    const double k2 = ode.eval_X(x + 0.5 * h * k1, t + 0.5 * h);
    const double k3 = ode.eval_X(x + 0.5 * h * k2, t + 0.5 * h);
    const double k4 = ode.eval_X(x + h * k3, t + h);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const double tn = (j + 1 == steps) ? kTwoPi : (j + 1) * h;
    if (!std::isfinite(x) || std::fabs(x) > bound)
      throw Blowup("trajectory escaped |x| <= " + std::to_string(bound), tn);
    traj.t.push_back(tn);
    traj.x.push_back(x);
  }
  return traj;
}

double period_map_fixed_point(const OdeSpec& ode, double guess, double tol, int steps) {
  auto run = [steps](const OdeSpec& o, double x0) {
    return integrate(o, x0, steps).x.back();
  };

  // Probe the forward map; an expanding or escaping map is replaced by the
  // reversed-time equation, which contracts onto the same fixed point.
  const OdeSpec* eq = &ode;
  OdeSpec reversed;
  bool use_reversed = false;
  try {
    const double delta = 1e-6 * (1.0 + std::fabs(guess));
    const double p0 = run(ode, guess);
    const double p1 = run(ode, guess + delta);
    if (std::fabs((p1 - p0) / delta) > 1.0) use_reversed = true;
  } catch (const Blowup&) {
    use_reversed = true;
  }
  if (use_reversed) {
    reversed = time_reversed(ode);
    eq = &reversed;
  }

  auto f = [&](double x) { return run(*eq, x) - x; };

  double x0 = guess;
  double x1 = guess + 1e-3 * (1.0 + std::fabs(guess));
  double f0 = f(x0);
  double f1 = f(x1);
  for (int it = 0; it < 50; ++it) {
    if (std::fabs(f1) <= tol) return x1;
    const double denom = f1 - f0;
    if (denom == 0.0) break;
    double x2 = x1 - f1 * (x1 - x0) / denom;
    // A wild secant step may leave the basin; pull it back toward x1.
    double f2 = 0.0;
    bool ok = false;
    for (int shrink = 0; shrink < 8; ++shrink) {
      try {
        f2 = f(x2);
        ok = true;
        break;
      } catch (const Blowup&) {
        x2 = 0.5 * (x1 + x2);
      }
    }
    if (!ok) throw NoConvergence("period map blows up near every secant trial");
    x0 = x1;
    f0 = f1;
    x1 = x2;
    f1 = f2;
    if (std::fabs(x1 - x0) <= tol * (1.0 + std::fabs(x1)) && std::fabs(f1) <= 1e3 * tol)
      return x1;
  }
  if (std::fabs(f1) <= tol) return x1;
  throw NoConvergence("period-map secant iteration did not reach tolerance");
}

TrigPoly fourier_extract(const Trajectory& traj, int n) {
  if (n < 0) throw std::invalid_argument("fourier_extract: negative harmonic count");
  const int nodes = static_cast<int>(traj.x.size()) - 1;  // last sample repeats t = 0
  if (nodes < 2 * (n + 1))
    throw std::invalid_argument("fourier_extract: trajectory too coarse for requested order");

  const double h = kTwoPi / nodes;
  Rational a0;
  std::vector<Rational> cs(n), sn(n);
  {
    double sum = 0.0;
    for (int j = 0; j < nodes; ++j) sum += traj.x[j];
    a0 = exact_from_double(2.0 * sum / nodes);
  }
  for (int m = 1; m <= n; ++m) {
    double ca = 0.0, sa = 0.0;
    for (int j = 0; j < nodes; ++j) {
      ca += traj.x[j] * std::cos(m * j * h);
      sa += traj.x[j] * std::sin(m * j * h);
    }
    cs[m - 1] = exact_from_double(2.0 * ca / nodes);
    sn[m - 1] = exact_from_double(2.0 * sa / nodes);
  }
  return TrigPoly::from_coeffs(a0, cs, sn);
}

std::string to_csv(const Trajectory& traj) {
  std::string out;
  out.reserve(traj.t.size() * 48);
  char line[96];
  for (std::size_t j = 0; j < traj.t.size(); ++j) {
    std::snprintf(line, sizeof line, "%.17g,%.17g\n", traj.t[j], traj.x[j]);
    out += line;
  }
  return out;
}

}  // namespace hbcert
