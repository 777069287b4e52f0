#include "hbcert/certificate.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>
#include <limits>
#include <numbers>
#include <random>

#include "hbcert/errors.hpp"
#include "hbcert/version.hpp"

namespace hbcert {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double up(double x) { return std::nextafter(x, std::numeric_limits<double>::infinity()); }

}  // namespace

Certificate certify(const OdeSpec& ode, const ApproxSolution& sol,
                    const DomainInterval& domain, const CertifyOptions& opts) {
  ode.validate();
  Certificate c;
  c.problem = ode.name;
  c.xbar = sol.xbar;
  c.provenance = sol.provenance;
  c.domain = domain;

  const Accuracy acc = accuracy(ode, sol.xbar);
  c.accuracy_sq = acc.exact_sq;
  c.accuracy = acc.value;
  if (opts.stilde) {
    if (sgn(*opts.stilde) < 0 || *opts.stilde * *opts.stilde < acc.exact_sq)
      throw SemanticError("declared accuracy round-up " + to_string(*opts.stilde) +
                          " is below the exact residual norm");
    c.accuracy_round_up = opts.stilde;
    c.accuracy_used = to_double_round_up(*opts.stilde);
  } else {
    c.accuracy_used = acc.value;
  }

  const SecularFn A = dX_dx_along(ode, sol.xbar).antiderivative();
  c.a2pi = A.a2pi();
  // m_bound_* would also raise Critical; checking here gives the caller the
  // verdict-relevant quantity before any expensive work.
  if (std::fabs(c.a2pi) < 1e-9)
    throw Critical("|A(2pi)| = " + std::to_string(std::fabs(c.a2pi)) +
                   " is below the noncriticality tolerance 1e-9");
  c.noncritical = true;

  if (opts.pieces || opts.margin) {
    const int pieces = opts.pieces.value_or(16);
    const Rational margin = opts.margin.value_or(Rational(1, 16));
    LowerBound lb = build_lower_bound(A, pieces, to_double(margin));
    c.deformation = m_bound_cota(A, lb);  // NotAdequate propagates
    c.deformation.margin = margin;        // report the margin as declared
    c.m_overridden = true;
  } else {
    c.deformation = m_bound_auto(A);
  }
  const double m = c.deformation.m_bound;

  c.radius = up(2.0 * m * c.accuracy_used);
  const auto range = sol.xbar.range_bounds(std::max(4096, 8 * (sol.xbar.degree() + 1)));
  c.strip_lo = range.lo - c.radius;
  c.strip_hi = range.hi + c.radius;
  c.k_bound = d2X_dx2_bound(ode, c.strip_lo, c.strip_hi);
  c.contraction = up(2.0 * m * m * c.k_bound * c.accuracy_used);
  c.strip_in_domain = domain.contains_closed(c.strip_lo, c.strip_hi);
  c.exists_unique = c.noncritical && c.strip_in_domain && c.contraction < 1.0;

  const HyperbolicityMargin hm = hyperbolicity_margin(A, m);
  c.hyperbolicity_lhs = hm.lhs;
  c.hyperbolicity_rhs = hm.rhs;
  c.hyperbolic = c.exists_unique && hm.pass;
  c.stability = c.hyperbolic ? (c.a2pi < 0 ? Stability::stable : Stability::unstable)
                             : Stability::none;
  return c;
}

HyperbolicityMargin hyperbolicity_margin(const SecularFn& A, double m_bound) {
  if (!(m_bound > 0.0))
    throw std::invalid_argument("hyperbolicity_margin: M must be positive");
  HyperbolicityMargin h;
  h.lhs = std::fabs(A.a2pi());
  h.rhs = kTwoPi / m_bound;
  if (A.slope() == 0)
    h.pass = false;  // critical case fails for every M, even M = inf
  else if (std::isinf(m_bound))
    h.pass = true;
  else
    // |A(2pi)| > 2pi/M  <=>  |slope| * M > 1, testable exactly.
    h.pass = abs(A.slope()) * exact_from_double(m_bound) > 1;
  return h;
}

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string provenance_str(const Provenance& p) {
  switch (p.kind) {
    case Provenance::hbm:
      return "hbm(" + std::to_string(p.order) + ")";
    case Provenance::rationalized:
      return "rationalized(" + std::to_string(p.order) + ")";
    case Provenance::shooting:
      return "shooting";
    default:
      return "user";
  }
}

void append_poly_notes(std::string& out, const TrigPoly& f) {
  out += "# xbar: const " + to_string(f.mean()) + "\n";
  for (int m = 1; m <= f.degree(); ++m) {
    if (f.cos_coeff(m) != 0)
      out += "# xbar: cos " + std::to_string(m) + " " + to_string(f.cos_coeff(m)) + "\n";
    if (f.sin_coeff(m) != 0)
      out += "# xbar: sin " + std::to_string(m) + " " + to_string(f.sin_coeff(m)) + "\n";
  }
}

}  // namespace

std::string render_certificate(const Certificate& c) {
  std::string out;
  auto kv = [&out](const std::string& k, const std::string& v) {
    out += k + " = " + v + "\n";
  };
  auto kb = [&kv](const std::string& k, bool v) { kv(k, v ? "true" : "false"); };

  kv("tool", std::string(kToolName) + " " + kVersion);
  kv("problem", c.problem);
  kv("xbar_provenance", provenance_str(c.provenance));
  kv("xbar_degree", std::to_string(c.xbar.degree()));
  kv("accuracy_sq", to_string(c.accuracy_sq));
  kv("accuracy", fmt(c.accuracy));
  kv("accuracy_round_up", c.accuracy_round_up ? to_string(*c.accuracy_round_up) : "none");
  kv("accuracy_used", fmt(c.accuracy_used));
  kv("a_2pi", fmt(c.a2pi));
  kb("noncritical", c.noncritical);
  kv("m_method", c.deformation.method == MMethod::cota ? "cota" : "quadrature");
  kv("m_pieces", std::to_string(c.deformation.pieces));
  kv("m_margin", to_string(c.deformation.margin));
  kv("m_bound", fmt(c.deformation.m_bound));
  kv("lambda", fmt(c.deformation.lambda));
  kv("strip_lo", fmt(c.strip_lo));
  kv("strip_hi", fmt(c.strip_hi));
  kv("domain", c.domain.to_string());
  kb("strip_in_domain", c.strip_in_domain);
  kv("k_bound", fmt(c.k_bound));
  kv("radius", fmt(c.radius));
  kv("contraction", fmt(c.contraction));
  kb("exists_unique", c.exists_unique);
  kv("hyperbolicity_lhs", fmt(c.hyperbolicity_lhs));
  kv("hyperbolicity_rhs", fmt(c.hyperbolicity_rhs));
  kb("hyperbolic", c.hyperbolic);
  kv("stability", c.stability == Stability::stable
                      ? "stable"
                      : c.stability == Stability::unstable ? "unstable" : "none");

  out += "# psi tail: the second partial sum starts at the current piece index m;\n";
  out += "#   starting it one piece earlier double-counts that piece's integral\n";
  out += "#   and is undefined on the first piece.\n";
  out += "# deformation: P = " + std::to_string(c.deformation.pieces) +
         ", margin = " + to_string(c.deformation.margin) +
         (c.m_overridden ? " (explicit)" : " (auto search)") + "\n";
  append_poly_notes(out, c.xbar);

  char stamp[40];
  std::time_t now = std::time(nullptr);
  std::tm tm_utc;
  gmtime_r(&now, &tm_utc);
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  kv("generated_utc", stamp);
  return out;
}

SampledFunction picard_refine(const OdeSpec& ode, const TrigPoly& xbar,
                              const Certificate& cert, int iters, int half_panels) {
  if (!cert.exists_unique)
    throw NotCertified("picard_refine requires a certificate with exists_unique");
  if (iters < 0 || half_panels < 32)
    throw std::invalid_argument("picard_refine: bad iteration/grid parameters");

  const TrigPoly a = dX_dx_along(ode, xbar);
  const TrigPoly s = residual(ode, xbar);
  const SecularFn A = a.antiderivative();

  const int n = 2 * half_panels;
  const double h = kTwoPi / n;
  std::vector<double> tj(n + 1), xb(n + 1), aj(n + 1), sj(n + 1);
  for (int j = 0; j <= n; ++j) {
    tj[j] = (j == n) ? kTwoPi : j * h;
    xb[j] = xbar.eval(tj[j]);
    aj[j] = a.eval(tj[j]);
    sj[j] = s.eval(tj[j]);
  }

  SampledFunction z;
  z.t = tj;
  z.x.assign(n + 1, 0.0);
  double prev_diff = -1.0;
  for (int it = 0; it < iters; ++it) {
    std::vector<double> b(n + 1);
    for (int j = 0; j <= n; ++j) {
      // b = R(z, t) - s with R the Taylor remainder of X at xbar.
      const double rz =
          ode.eval_X(xb[j] + z.x[j], tj[j]) - ode.eval_X(xb[j], tj[j]) - aj[j] * z.x[j];
      b[j] = rz - sj[j];
    }
    auto bf = [&](double t) { return b[static_cast<int>(std::lround(t / h))]; };
    SampledFunction next = solve_linear_periodic(A, bf, half_panels);
    double diff = 0.0;
    for (int j = 0; j <= n; ++j) diff = std::max(diff, std::fabs(next.x[j] - z.x[j]));
    // Successive iterates must contract at the certified rate (small slack
    // for grid/rounding noise); a violation means the certificate is wrong.
    if (prev_diff >= 0.0 && diff > cert.contraction * prev_diff * 1.05 + 1e-12)
      throw NotCertified("Picard iterates contract slower than the certificate's rate");
    prev_diff = diff;
    z = std::move(next);
  }
  return z;
}

bool check_R_bounds(const OdeSpec& ode, const TrigPoly& xbar, double k_bound,
                    double halfwidth, int samples, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ut(0.0, kTwoPi);
  std::uniform_real_distribution<double> uz(-halfwidth, halfwidth);

  auto remainder = [&](double z, double t) {
    const double x = xbar.eval(t);
    return ode.eval_X(x + z, t) - ode.eval_X(x, t) - ode.eval_dX_dx(x, t) * z;
  };

  for (int i = 0; i < samples; ++i) {
    const double t = ut(rng);
    const double z = uz(rng);
    const double zb = uz(rng);
    const double r1 = remainder(z, t);
    const double slack = 1e-9 * (1.0 + k_bound * halfwidth * halfwidth);
    if (std::fabs(r1) > 0.5 * k_bound * z * z + slack) return false;
    const double r2 = remainder(zb, t);
    const double lip = k_bound * std::max(std::fabs(z), std::fabs(zb)) * std::fabs(z - zb);
    if (std::fabs(r1 - r2) > lip + slack) return false;
  }
  return true;
}

}  // namespace hbcert
