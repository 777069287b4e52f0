// Existence/uniqueness certification for a candidate periodic solution:
// with S the residual norm, M the deformation constant of the variational
// linearization, and K a second-derivative bound on the strip
// [min xbar - 2MS, max xbar + 2MS], the contraction condition 2 M^2 K S < 1
// yields a unique true periodic solution within sup-distance 2MS of xbar;
// |A(2pi)| > 2pi/M additionally certifies hyperbolicity.
#ifndef HBCERT_CERTIFICATE_HPP
#define HBCERT_CERTIFICATE_HPP

#include <optional>
#include <string>

#include "hbcert/deformation.hpp"
#include "hbcert/ode_model.hpp"

namespace hbcert {

enum class Stability { stable, unstable, none };

struct Certificate {
  std::string problem;
  TrigPoly xbar;
  Provenance provenance;

  Rational accuracy_sq;                  // exact ||residual||_2^2
  double accuracy = 0;                   // sqrt, rounded up
  std::optional<Rational> accuracy_round_up;  // user-declared S-tilde
  double accuracy_used = 0;              // the S fed into the inequalities

  double a2pi = 0;
  bool noncritical = false;

  DeformationResult deformation;
  bool m_overridden = false;

  double strip_lo = 0, strip_hi = 0;     // I = [min xbar - 2MS, max xbar + 2MS]
  DomainInterval domain;
  bool strip_in_domain = false;

  double k_bound = 0;
  double radius = 0;                     // 2 M S
  double contraction = 0;                // 2 M^2 K S

  bool exists_unique = false;
  double hyperbolicity_lhs = 0;          // |A(2pi)|
  double hyperbolicity_rhs = 0;          // 2pi / M
  bool hyperbolic = false;
  Stability stability = Stability::none;
};

struct CertifyOptions {
  // Declared accuracy bound; must dominate the exact residual norm.
  std::optional<Rational> stilde;
  // Explicit deformation parameters; otherwise m_bound_auto searches.
  std::optional<int> pieces;
  std::optional<Rational> margin;
};

// Runs the full pipeline. Throws Critical when |A(2pi)| < 1e-9 and
// NotAdequate when an explicitly requested minorant fails; a failed verdict
// (contraction >= 1 or strip escaping the domain) is reported in the
// certificate, not thrown.
Certificate certify(const OdeSpec& ode, const ApproxSolution& sol,
                    const DomainInterval& domain, const CertifyOptions& opts = {});

// The hyperbolicity test |A(2pi)| > 2pi/M in isolation. The comparison is
// carried out exactly as |slope(A)| * M > 1, so the reported lhs/rhs doubles
// are display values only. Throws std::invalid_argument unless M > 0.
struct HyperbolicityMargin {
  double lhs = 0;  // |A(2pi)|
  double rhs = 0;  // 2pi / M
  bool pass = false;
};
HyperbolicityMargin hyperbolicity_margin(const SecularFn& A, double m_bound);

// Flat key = value rendering, fixed key order, followed by '#' note lines.
// generated_utc comes last so the volatile line is easy to strip.
std::string render_certificate(const Certificate& cert);

// Picard iteration for the correction z = x - xbar: z' = a(t) z + b(z, t)
// with b(z, t) = s(t) + R(z, t), solved through the periodic linear kernel
// on a uniform grid with 2K+1 nodes. Returns the sampled iterate after
// `iters` steps. Throws NotCertified unless cert.exists_unique.
SampledFunction picard_refine(const OdeSpec& ode, const TrigPoly& xbar,
                              const Certificate& cert, int iters, int half_panels = 512);

// Monte Carlo check of the Taylor-remainder bounds
//   |R(z, t)| <= (K/2) z^2,  |R(z, t) - R(zb, t)| <= K max(|z|, |zb|) |z - zb|
// for R(z, t) = X(xbar + z, t) - X(xbar, t) - dX/dx(xbar, t) z on
// |z| <= halfwidth. Returns false on the first violation.
bool check_R_bounds(const OdeSpec& ode, const TrigPoly& xbar, double k_bound,
                    double halfwidth, int samples, unsigned seed);

}  // namespace hbcert

#endif
