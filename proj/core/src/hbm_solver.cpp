#include "hbcert/hbm_solver.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <utility>

#include "hbcert/errors.hpp"
#include "hbcert/shooting.hpp"

namespace hbcert {

GalerkinSystem GalerkinSystem::make(int order, Symmetry sym) {
  if (order < 0) throw std::invalid_argument("GalerkinSystem: negative order");
  GalerkinSystem sys;
  sys.order = order;
  sys.pinned.assign(2 * order + 1, 0);
  for (int m = 1; m <= order; ++m) {
    const bool pin_cos = (sym == Symmetry::even_cos) && (m % 2 == 1);
    const bool pin_sin = (sym != Symmetry::none);
    sys.pinned[m] = pin_cos ? 1 : 0;
    sys.pinned[order + m] = pin_sin ? 1 : 0;
  }
  return sys;
}

std::vector<int> GalerkinSystem::free_indices() const {
  std::vector<int> idx;
  idx.reserve(pinned.size());
  for (int i = 0; i < static_cast<int>(pinned.size()); ++i)
    if (!pinned[i]) idx.push_back(i);
  return idx;
}

int GalerkinSystem::dim() const { return static_cast<int>(free_indices().size()); }

TrigPoly point_to_poly(const GalerkinSystem& sys, const std::vector<Rational>& point) {
  if (static_cast<int>(point.size()) != sys.layout_size())
    throw std::invalid_argument("point_to_poly: layout size mismatch");
  std::vector<Rational> cs(point.begin() + 1, point.begin() + 1 + sys.order);
  std::vector<Rational> sn(point.begin() + 1 + sys.order, point.end());
  return TrigPoly::from_coeffs(2 * point[0], std::move(cs), std::move(sn));
}

std::vector<Rational> poly_to_point(const GalerkinSystem& sys, const TrigPoly& f) {
  if (f.degree() > sys.order)
    throw std::invalid_argument("poly_to_point: polynomial degree exceeds system order");
  std::vector<Rational> point(sys.layout_size());
  point[0] = f.mean();
  for (int m = 1; m <= sys.order; ++m) {
    point[m] = f.cos_coeff(m);
    point[sys.order + m] = f.sin_coeff(m);
  }
  return point;
}

namespace {

Rational project(const TrigPoly& f, const GalerkinSystem& sys, int idx) {
  if (idx == 0) return f.mean();
  if (idx <= sys.order) return f.cos_coeff(idx);
  return f.sin_coeff(idx - sys.order);
}

TrigPoly basis(const GalerkinSystem& sys, int idx) {
  if (idx == 0) return TrigPoly(Rational(1));
  if (idx <= sys.order) return TrigPoly::harmonic_cos(idx, Rational(1));
  return TrigPoly::harmonic_sin(idx - sys.order, Rational(1));
}

}  // namespace

std::vector<Rational> galerkin_residual(const OdeSpec& ode, const GalerkinSystem& sys,
                                        const std::vector<Rational>& point) {
  const TrigPoly y = point_to_poly(sys, point);
  const TrigPoly f = residual(ode, y);
  std::vector<Rational> out;
  for (int idx : sys.free_indices()) out.push_back(project(f, sys, idx));
  return out;
}

std::vector<std::vector<Rational>> galerkin_jacobian(const OdeSpec& ode,
                                                     const GalerkinSystem& sys,
                                                     const std::vector<Rational>& point) {
  const TrigPoly y = point_to_poly(sys, point);
  const TrigPoly a = dX_dx_along(ode, y);
  const std::vector<int> free = sys.free_indices();
  const int n = static_cast<int>(free.size());
  std::vector<std::vector<Rational>> jac(n, std::vector<Rational>(n));
  for (int col = 0; col < n; ++col) {
    const TrigPoly phi = basis(sys, free[col]);
    const TrigPoly dcol = phi.derivative() - a * phi;
    for (int row = 0; row < n; ++row) jac[row][col] = project(dcol, sys, free[row]);
  }
  return jac;
}

namespace {

std::vector<Rational> lift(const GalerkinSystem& sys, const std::vector<int>& free,
                           const Eigen::VectorXd& u) {
  std::vector<Rational> point(sys.layout_size(), Rational(0));
  for (int j = 0; j < static_cast<int>(free.size()); ++j)
    point[free[j]] = exact_from_double(u(j));
  return point;
}

Eigen::VectorXd residual_vec(const OdeSpec& ode, const GalerkinSystem& sys,
                             const std::vector<int>& free, const Eigen::VectorXd& u) {
  const std::vector<Rational> r = galerkin_residual(ode, sys, lift(sys, free, u));
  Eigen::VectorXd out(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) out(static_cast<int>(i)) = to_double(r[i]);
  return out;
}

}  // namespace

ApproxSolution solve(const OdeSpec& ode, const GalerkinSystem& sys,
                     const std::vector<double>& seed, const SolveOptions& opts) {
  ode.validate();
  if (static_cast<int>(seed.size()) != sys.layout_size())
    throw std::invalid_argument("solve: seed layout size mismatch");
  const std::vector<int> free = sys.free_indices();
  const int n = static_cast<int>(free.size());

  Eigen::VectorXd u(n);
  for (int j = 0; j < n; ++j) u(j) = seed[free[j]];  // pinned seed entries ignored
  const double seed_scale = std::max(1.0, u.norm());

  Eigen::VectorXd r = residual_vec(ode, sys, free, u);
  double nr = r.norm();
  for (int it = 0; it < opts.max_iter && nr > opts.tol; ++it) {
    const auto jac = galerkin_jacobian(ode, sys, lift(sys, free, u));
    Eigen::MatrixXd J(n, n);
    for (int row = 0; row < n; ++row)
      for (int col = 0; col < n; ++col) J(row, col) = to_double(jac[row][col]);

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(J, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double smax = svd.singularValues()(0);
    const double smin = svd.singularValues()(n - 1);
    if (!(smin > 0.0) || smax / smin > opts.cond_limit)
      throw SingularJacobian("Galerkin Jacobian condition number exceeds " +
                             std::to_string(opts.cond_limit) + " at iteration " +
                             std::to_string(it));
    const Eigen::VectorXd delta = svd.solve(-r);

    bool accepted = false;
    for (double step = 1.0; step >= opts.min_step; step *= 0.5) {
      const Eigen::VectorXd u_try = u + step * delta;
      const Eigen::VectorXd r_try = residual_vec(ode, sys, free, u_try);
      if (r_try.norm() <= (1.0 - 0.5 * step) * nr) {
        u = u_try;
        r = r_try;
        nr = r.norm();
        accepted = true;
        break;
      }
    }
    if (!accepted)
      throw NoConvergence("Newton line search stalled at ||F|| = " + std::to_string(nr));
    if (u.norm() > 1e3 * seed_scale)
      throw NoConvergence("Newton iterates diverged from the seed");
  }
  if (nr > opts.tol)
    throw NoConvergence("residual " + std::to_string(nr) + " above tolerance after " +
                        std::to_string(opts.max_iter) + " iterations");

  std::vector<Rational> point(sys.layout_size(), Rational(0));
  for (int j = 0; j < n; ++j) point[free[j]] = snap_to_decimal(u(j), opts.snap_digits);
  ApproxSolution sol;
  sol.xbar = point_to_poly(sys, point);
  sol.provenance = {Provenance::hbm, sys.order};
  return sol;
}

// ---------------------------------------------------------------------------
// Constant ansatz: exact Sturm isolation of the mean equation's roots.

namespace {

using Poly = std::vector<Rational>;  // ascending coefficients, trimmed

void ptrim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

Poly pderiv(const Poly& p) {
  Poly d;
  for (std::size_t k = 1; k < p.size(); ++k) d.push_back(Rational(static_cast<long>(k)) * p[k]);
  ptrim(d);
  return d;
}

Rational peval(const Poly& p, const Rational& x) {
  Rational acc(0);
  for (std::size_t k = p.size(); k-- > 0;) acc = acc * x + p[k];
  return acc;
}

// Remainder of a mod b over the rationals; b nonzero.
Poly prem(Poly a, const Poly& b) {
  ptrim(a);
  while (a.size() >= b.size() && !a.empty()) {
    const Rational q = a.back() / b.back();
    const std::size_t shift = a.size() - b.size();
    for (std::size_t k = 0; k < b.size(); ++k) a[shift + k] -= q * b[k];
    a.pop_back();
    ptrim(a);
  }
  return a;
}

Poly pquo(Poly a, const Poly& b) {
  ptrim(a);
  Poly q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, Rational(0));
  while (a.size() >= b.size() && !a.empty()) {
    const Rational c = a.back() / b.back();
    const std::size_t shift = a.size() - b.size();
    q[shift] = c;
    for (std::size_t k = 0; k < b.size(); ++k) a[shift + k] -= c * b[k];
    a.pop_back();
    ptrim(a);
  }
  return q;
}

// Positive-scale normalization (divide by |leading|): keeps Sturm signs.
void pnormalize(Poly& p) {
  if (p.empty()) return;
  const Rational lc = abs(p.back());
  for (auto& c : p) c /= lc;
}

std::vector<Poly> sturm_chain(const Poly& p) {
  std::vector<Poly> chain;
  chain.push_back(p);
  Poly d = pderiv(p);
  if (d.empty()) return chain;
  chain.push_back(d);
  while (true) {
    Poly r = prem(chain[chain.size() - 2], chain.back());
    if (r.empty()) break;
    for (auto& c : r) c = -c;
    pnormalize(r);
    chain.push_back(std::move(r));
  }
  return chain;
}

int variations(const std::vector<Poly>& chain, const Rational& x) {
  int v = 0, prev = 0;
  for (const auto& p : chain) {
    const int s = sgn(peval(p, x));
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++v;
    prev = s;
  }
  return v;
}

// Exactly one root in (a, b]; bisect (exact signs) to below double resolution.
double refine_root(const std::vector<Poly>& chain, const Poly& p, Rational a, Rational b) {
  if (peval(p, b) == 0) return to_double(b);
  const int va = variations(chain, a);
  for (int it = 0; it < 80; ++it) {
    const Rational mid = (a + b) / 2;
    if (peval(p, mid) == 0) return to_double(mid);
    if (va - variations(chain, mid) == 1)
      b = mid;
    else
      a = mid;
    if (to_double(b - a) < 1e-16 * (1.0 + std::fabs(to_double(mid)))) break;
  }
  return to_double((a + b) / 2);
}

void isolate(const std::vector<Poly>& chain, const Poly& p, const Rational& a,
             const Rational& b, int va, int vb, std::vector<double>& roots) {
  const int count = va - vb;
  if (count == 0) return;
  if (count == 1) {
    roots.push_back(refine_root(chain, p, a, b));
    return;
  }
  const Rational mid = (a + b) / 2;
  const int vm = variations(chain, mid);
  isolate(chain, p, a, mid, va, vm, roots);
  isolate(chain, p, mid, b, vm, vb, roots);
}

std::vector<double> real_roots(Poly p) {
  ptrim(p);
  std::vector<double> roots;
  if (p.empty()) throw SemanticError("mean equation vanishes identically");
  // Deflate the root at zero so the first bisection midpoint can't be a root
  // of odd multiplicity... it still can, but peval(mid) == 0 is handled by
  // refine_root once intervals shrink to a single root.
  bool zero_root = false;
  while (p.size() > 1 && p[0] == 0) {
    zero_root = true;
    p.erase(p.begin());
  }
  if (p.size() == 1) {
    if (zero_root) roots.push_back(0.0);
    return roots;
  }
  // Square-free part: p / gcd(p, p').
  {
    Poly a = p, b = pderiv(p);
    while (!b.empty()) {
      Poly r = prem(a, b);
      pnormalize(r);
      a = b;
      b = std::move(r);
    }
    if (a.size() > 1) p = pquo(p, a);
  }
  pnormalize(p);
  Rational bound(1);
  for (std::size_t k = 0; k + 1 < p.size(); ++k) {
    const Rational m = abs(p[k]) / abs(p.back());
    if (m > bound - 1) bound = m + 1;
  }
  const auto chain = sturm_chain(p);
  isolate(chain, p, -bound, bound, variations(chain, -bound), variations(chain, bound), roots);
  if (zero_root) roots.push_back(0.0);
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace

std::vector<double> solve_order1(const OdeSpec& ode) {
  ode.validate();
  Poly mean_eq;
  for (const auto& c : ode.coeffs) mean_eq.push_back(c.mean());
  return real_roots(std::move(mean_eq));
}

std::vector<LadderStep> continuation_ladder(const OdeSpec& ode, int n_max, Symmetry sym,
                                            const LadderOptions& opts) {
  ode.validate();
  if (n_max < 0) throw std::invalid_argument("continuation_ladder: negative order");

  std::vector<double> admissible;
  for (double r : solve_order1(ode))
    if (r > opts.domain_lo && r < opts.domain_hi) admissible.push_back(r);
  if (admissible.empty())
    throw NoConvergence("no constant-ansatz root inside the domain");

  // Smallest exact residual wins; ties go to the larger root.
  TrigPoly best;
  Accuracy best_acc;
  bool have = false;
  for (double r : admissible) {
    TrigPoly cand(snap_to_decimal(r, 12));
    Accuracy acc = accuracy(ode, cand);
    if (!have || acc.exact_sq <= best_acc.exact_sq) {
      best = cand;
      best_acc = acc;
      have = true;
    }
  }

  std::vector<LadderStep> steps;
  steps.push_back({0, {best, {Provenance::hbm, 0}}, best_acc, false});

  TrigPoly prev = best;
  int prev_dim = 1;
  for (int h = 1; h <= n_max; ++h) {
    const GalerkinSystem sys = GalerkinSystem::make(h, sym);
    if (sys.dim() == prev_dim) continue;

    std::vector<double> seed(sys.layout_size(), 0.0);
    {
      const auto pt = poly_to_point(sys, prev);
      for (int i = 0; i < sys.layout_size(); ++i) seed[i] = to_double(pt[i]);
    }

    LadderStep step;
    step.order = h;
    try {
      step.sol = solve(ode, sys, seed, opts.solve);
    } catch (const Error& first) {
      // Re-seed from a shooting approximation of the cycle.
      try {
        const double x0 = period_map_fixed_point(ode, prev.eval(0.0), 1e-10,
                                                 opts.shooting_steps);
        const Trajectory traj = integrate(ode, x0, opts.shooting_steps);
        const auto pt = poly_to_point(sys, fourier_extract(traj, h));
        for (int i = 0; i < sys.layout_size(); ++i) seed[i] = to_double(pt[i]);
        step.sol = solve(ode, sys, seed, opts.solve);
        step.used_shooting_seed = true;
      } catch (const Error& second) {
        throw NoConvergence("order " + std::to_string(h) + ": " + first.what() +
                            "; shooting re-seed: " + second.what());
      }
    }
    step.acc = accuracy(ode, step.sol.xbar);
    steps.push_back(step);
    prev = step.sol.xbar;
    prev_dim = sys.dim();
  }
  return steps;
}

}  // namespace hbcert
