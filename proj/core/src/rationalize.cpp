#include "hbcert/rationalize.hpp"

#include <cstdlib>

#include "hbcert/errors.hpp"

namespace hbcert {

CFExpansion cf_expand(const Rational& x, int max_terms) {
  if (max_terms < 1) throw std::invalid_argument("cf_expand: max_terms < 1");
  CFExpansion cf;
  cf.value = x;
  const int sign = sgn(x) < 0 ? -1 : 1;

  Integer p = abs(x.get_num());
  Integer q = x.get_den();
  Integer h_prev(1), h_prev2(0), k_prev(0), k_prev2(1);
  for (int i = 0; i < max_terms && q != 0; ++i) {
    Integer a = p / q;  // floor: both nonnegative
    Integer r = p % q;
    cf.quotients.push_back(a);
    Integer h = a * h_prev + h_prev2;
    Integer k = a * k_prev + k_prev2;
    h_prev2 = h_prev;
    h_prev = h;
    k_prev2 = k_prev;
    k_prev = k;
    cf.convergents.emplace_back(sign * h, k);
    cf.convergents.back().canonicalize();
    p = q;
    q = r;
  }
  return cf;
}

CFExpansion cf_expand(double x, int max_terms) {
  return cf_expand(snap_to_decimal(x), max_terms);
}

namespace {

struct Slot {
  int layout;        // 0 = mean, 1..N = cos m, N+1..2N = sin m
  int harmonic;      // 0 for the mean
  Rational target;   // coefficient being approximated
  CFExpansion cf;
  std::size_t idx;   // current convergent
  const Rational& current() const { return cf.convergents[idx]; }
  bool exact() const { return idx + 1 == cf.convergents.size(); }
  // Parseval weight^2: the mean enters the norm with weight 1, each
  // harmonic coefficient with weight 1/sqrt(2).
  Rational weighted_err_sq() const {
    Rational e = current() - target;
    Rational w2 = layout == 0 ? Rational(1) : Rational(1, 2);
    return w2 * e * e;
  }
};

TrigPoly assemble(int n, const std::vector<Slot>& slots) {
  Rational a0(0);
  std::vector<Rational> cs(n), sn(n);
  for (const auto& s : slots) {
    if (s.layout == 0)
      a0 = 2 * s.current();
    else if (s.layout <= n)
      cs[s.layout - 1] = s.current();
    else
      sn[s.layout - n - 1] = s.current();
  }
  return TrigPoly::from_coeffs(a0, cs, sn);
}

}  // namespace

ApproxSolution simplify_solution(const OdeSpec& ode, const ApproxSolution& in,
                                 const Rational& budget_ratio) {
  ode.validate();
  if (sgn(budget_ratio) <= 0) throw std::invalid_argument("simplify_solution: budget_ratio <= 0");

  const Accuracy acc_in = accuracy(ode, in.xbar);
  const Rational gate = budget_ratio * budget_ratio * acc_in.exact_sq;
  const int n = in.xbar.degree();
  const double alloc = acc_in.value / (2 * n + 1);
  const Rational alloc_q = exact_from_double(alloc);

  std::vector<Slot> slots;
  auto add_slot = [&](int layout, int harmonic, Rational target) {
    if (target == 0) return;  // zero coefficients stay zero
    Slot s;
    s.layout = layout;
    s.harmonic = harmonic;
    s.cf = cf_expand(target);
    s.idx = 0;
    while (s.idx + 1 < s.cf.convergents.size() &&
           abs(s.cf.convergents[s.idx] - target) > alloc_q)
      ++s.idx;
    s.target = std::move(target);
    slots.push_back(std::move(s));
  };
  add_slot(0, 0, in.xbar.mean());
  for (int m = 1; m <= n; ++m) {
    add_slot(m, m, in.xbar.cos_coeff(m));
    add_slot(n + m, m, in.xbar.sin_coeff(m));
  }

  while (true) {
    const TrigPoly cand = assemble(n, slots);
    if (accuracy(ode, cand).exact_sq <= gate) {
      ApproxSolution out;
      out.xbar = cand;
      out.provenance = {Provenance::rationalized, in.provenance.order};
      return out;
    }
    Slot* worst = nullptr;
    for (auto& s : slots) {
      if (s.exact()) continue;
      if (!worst || s.weighted_err_sq() > worst->weighted_err_sq() ||
          (s.weighted_err_sq() == worst->weighted_err_sq() && s.harmonic < worst->harmonic))
        worst = &s;
    }
    if (!worst)
      throw BudgetUnreachable("all coefficients exact yet accuracy exceeds the budget gate");
    ++worst->idx;
  }
}

}  // namespace hbcert
