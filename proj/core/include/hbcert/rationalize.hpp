// Coefficient simplification: replace each Fourier coefficient by a small
// continued-fraction convergent while keeping the exact residual norm within
// a budgeted multiple of the input's.
#ifndef HBCERT_RATIONALIZE_HPP
#define HBCERT_RATIONALIZE_HPP

#include <vector>

#include "hbcert/ode_model.hpp"

namespace hbcert {

struct CFExpansion {
  Rational value;                      // exact expanded value
  std::vector<Integer> quotients;      // partial quotients of |value|
  std::vector<Rational> convergents;   // signed, lowest denominator first
};

// Exact continued fraction of a rational (finite; Euclid on |p|/q).
CFExpansion cf_expand(const Rational& x, int max_terms = 64);
// Doubles are snapped to a 12-significant-digit decimal first.
CFExpansion cf_expand(double x, int max_terms = 64);

// Replace every nonzero coefficient of in.xbar by its lowest-denominator
// convergent within a per-coefficient allocation S/(2N+1) of the input
// accuracy S, then repair: while the exact accuracy exceeds budget_ratio * S
// (exact comparison of squares), advance the worst offender (largest weighted
// error; Parseval weights, ties to the lowest harmonic) one convergent.
// Throws BudgetUnreachable when every coefficient is already exact and the
// gate still fails (impossible for budget_ratio >= 1).
ApproxSolution simplify_solution(const OdeSpec& ode, const ApproxSolution& in,
                                 const Rational& budget_ratio);

}  // namespace hbcert

#endif
