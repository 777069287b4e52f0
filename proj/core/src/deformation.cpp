#include "hbcert/deformation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "hbcert/errors.hpp"

namespace hbcert {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kCriticalTol = 1e-9;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// (e^x - 1)/x, positive and stable everywhere; series below 1e-6 where the
// direct quotient loses digits.
double phi(double x) {
  double ax = std::fabs(x);
  if (ax < 1e-6) return 1.0 + x / 2.0 + x * x / 6.0 + x * x * x / 24.0;
  return std::expm1(x) / x;
}

// log |e^x - 1|, stable across magnitudes.
double log_abs_expm1(double x) {
  if (x > 1.0) return x + std::log1p(-std::exp(-x));
  if (x < -1.0) return std::log1p(-std::exp(x));
  return std::log(std::fabs(std::expm1(x)));
}

// log(1 + e^x)
double softplus(double x) {
  if (x > 0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

double logsumexp(const std::vector<double>& v) {
  double mx = kNegInf;
  for (double x : v) mx = std::max(mx, x);
  if (mx == kNegInf) return kNegInf;
  double s = 0;
  for (double x : v) s += std::exp(x - mx);
  return mx + std::log(s);
}

// log int_{u}^{v} e^{alpha s + beta} ds for v > u.
double log_segment_integral(double alpha, double beta, double u, double v) {
  double w = v - u;
  if (w <= 0) return kNegInf;
  return beta + alpha * u + std::log(w * phi(alpha * w));
}

struct LogPsiParts {
  // Log-space ingredients reused across one piece: prefix/suffix J sums are
  // handled through per-piece cumulative arrays built once per LowerBound.
  const LowerBound* L;
  double a2pi;
  std::vector<double> logJ;  // per piece
};

LogPsiParts make_parts(const LowerBound& L, double a2pi) {
  LogPsiParts p{&L, a2pi, {}};
  p.logJ.resize(L.pieces);
  for (int i = 0; i < L.pieces; ++i)
    p.logJ[i] = log_segment_integral(L.alpha[i], L.beta[i], L.knot_t[i], L.knot_t[i + 1]);
  return p;
}

// log Psi_m(t) as a log-sum-exp of the all-positive split
//   sum_{i<m} J_i + W_m(t) + lambda^2 (sum_{i>m} J_i + V_m(t)).
double log_psi(const LogPsiParts& p, int m, double t) {
  const LowerBound& L = *p.L;
  std::vector<double> terms;
  terms.reserve(L.pieces + 2);
  for (int i = 0; i < m; ++i) terms.push_back(p.logJ[i]);
  terms.push_back(log_segment_integral(L.alpha[m], L.beta[m], L.knot_t[m], t));
  double twolog = 2.0 * p.a2pi;
  for (int i = m + 1; i < L.pieces; ++i) terms.push_back(twolog + p.logJ[i]);
  terms.push_back(twolog + log_segment_integral(L.alpha[m], L.beta[m], t, L.knot_t[m + 1]));
  return logsumexp(terms);
}

}  // namespace

LowerBound build_lower_bound(const SecularFn& A, int pieces, double margin) {
  if (pieces < 1) throw std::invalid_argument("pieces must be >= 1");
  if (!(margin > 0)) throw std::invalid_argument("margin must be positive");
  LowerBound L;
  L.pieces = pieces;
  L.margin = margin;
  L.piece_h = kTwoPi / pieces;
  L.knot_t.resize(pieces + 1);
  L.knot_v.resize(pieces + 1);
  for (int i = 0; i <= pieces; ++i) {
    L.knot_t[i] = kTwoPi * i / pieces;
    L.knot_v[i] = A.eval(L.knot_t[i]) - margin;
  }
  L.knot_t[pieces] = kTwoPi;
  L.alpha.resize(pieces);
  L.beta.resize(pieces);
  for (int i = 0; i < pieces; ++i) {
    double slope = (L.knot_v[i + 1] - L.knot_v[i]) / (L.knot_t[i + 1] - L.knot_t[i]);
    // L_i(t) = slope (t - t_i) + v_i = -(alpha t + beta)/2
    L.alpha[i] = -2.0 * slope;
    L.beta[i] = -2.0 * (L.knot_v[i] - slope * L.knot_t[i]);
  }
  return L;
}

bool certify_adequate(LowerBound& L, const SecularFn& A) {
  double lip_a = A.deriv_sup_bound();
  for (int i = 0; i < L.pieces; ++i) {
    double lip = lip_a + std::fabs(L.alpha[i]) / 2.0;
    int grid = 64;
    bool piece_ok = false;
    for (int attempt = 0; attempt < 12; ++attempt) {
      double h = (L.knot_t[i + 1] - L.knot_t[i]) / grid;
      double m = std::numeric_limits<double>::infinity();
      for (int j = 0; j <= grid; ++j) {
        double t = L.knot_t[i] + j * h;
        m = std::min(m, A.eval(t) - L.eval(i, t));
      }
      double widen = 0.5 * h * lip;
      if (m - widen > 0) {
        piece_ok = true;
        break;
      }
      // Refinement cannot help once the node minimum itself is nonpositive.
      if (m <= 0) break;
      grid *= 2;
    }
    if (!piece_ok) {
      L.adequacy_certified = false;
      return false;
    }
  }
  L.adequacy_certified = true;
  return true;
}

double psi(const LowerBound& L, double lambda, int m, double t) {
  if (m < 0 || m >= L.pieces) throw std::invalid_argument("psi: piece index out of range");
  if (t < L.knot_t[m] - 1e-12 || t > L.knot_t[m + 1] + 1e-12)
    throw std::invalid_argument("psi: t outside piece");
  auto seg = [&](double u, double v) {
    double w = v - u;
    if (w <= 0) return 0.0;
    return std::exp(L.beta[m] + L.alpha[m] * u) * w * phi(L.alpha[m] * w);
  };
  double sum_lo = 0, sum_hi = 0;
  for (int i = 0; i < m; ++i)
    sum_lo += std::exp(log_segment_integral(L.alpha[i], L.beta[i], L.knot_t[i], L.knot_t[i + 1]));
  for (int i = m + 1; i < L.pieces; ++i)
    sum_hi += std::exp(log_segment_integral(L.alpha[i], L.beta[i], L.knot_t[i], L.knot_t[i + 1]));
  return sum_lo + seg(L.knot_t[m], t) + lambda * lambda * (sum_hi + seg(t, L.knot_t[m + 1]));
}

DeformationResult m_bound_cota(const SecularFn& A, const LowerBound& Lin) {
  double a2pi = A.a2pi();
  if (std::fabs(a2pi) < kCriticalTol)
    throw Critical("noncriticality fails: |A(2pi)| < 1e-9");
  LowerBound L = Lin;
  if (!L.adequacy_certified && !certify_adequate(L, A))
    throw NotAdequate("lower bound is not certifiably below A");

  LogPsiParts parts = make_parts(L, a2pi);
  double log_one_minus_lambda = log_abs_expm1(a2pi);
  double log_abs_one_minus_lambda_sq = log_one_minus_lambda + softplus(a2pi);
  double lip_a = A.deriv_sup_bound();

  double fmax = kNegInf;
  for (int m = 0; m < L.pieces; ++m) {
    // Psi is monotone on the piece, so its min sits at an endpoint.
    double lpsi_lo = log_psi(parts, m, L.knot_t[m]);
    double lpsi_hi = log_psi(parts, m, L.knot_t[m + 1]);
    double lpsi_min = std::min(lpsi_lo, lpsi_hi);
    // |dPsi/dt| = |1 - lambda^2| e^{-2 L_m(t)}, maximized at an endpoint.
    double neg2L_max = std::max(L.alpha[m] * L.knot_t[m], L.alpha[m] * L.knot_t[m + 1]) + L.beta[m];
    double log_dpsi = log_abs_one_minus_lambda_sq + neg2L_max;
    double lip_ratio = (log_dpsi - lpsi_min > 700) ? std::numeric_limits<double>::infinity()
                                                   : 0.5 * std::exp(log_dpsi - lpsi_min);
    double lip_f = lip_a + lip_ratio;

    int grid = 64;
    for (int attempt = 0;; ++attempt) {
      double h = (L.knot_t[m + 1] - L.knot_t[m]) / grid;
      double node_max = kNegInf;
      for (int j = 0; j <= grid; ++j) {
        double t = std::min(L.knot_t[m] + j * h, L.knot_t[m + 1]);
        node_max = std::max(node_max, A.eval(t) + 0.5 * log_psi(parts, m, t));
      }
      double widen = 0.5 * h * lip_f;
      if (widen <= 5e-4 || attempt >= 10) {
        fmax = std::max(fmax, node_max + widen);
        break;
      }
      grid *= 2;
    }
  }

  double log_m = 0.5 * std::log(kTwoPi) - log_one_minus_lambda + fmax;
  double m_bound = std::exp(log_m + 1e-12);
  m_bound = std::nextafter(m_bound, std::numeric_limits<double>::infinity());

  DeformationResult r;
  r.m_bound = m_bound;
  r.method = MMethod::cota;
  r.a2pi = a2pi;
  r.lambda = std::exp(a2pi);
  r.pieces = L.pieces;
  r.margin = exact_from_double(L.margin);
  return r;
}

DeformationResult m_bound_auto(const SecularFn& A) {
  if (std::fabs(A.a2pi()) < kCriticalTol)
    throw Critical("noncriticality fails: |A(2pi)| < 1e-9");
  const int pieces_ladder[] = {8, 16, 32, 64, 128};
  bool found = false;
  DeformationResult best;
  for (int P : pieces_ladder) {
    for (int den = 8; den <= 256; den *= 2) {
      double margin = 1.0 / den;
      LowerBound L = build_lower_bound(A, P, margin);
      if (!certify_adequate(L, A)) continue;
      DeformationResult r = m_bound_cota(A, L);
      r.margin = Rational(1, den);
      if (!found || r.m_bound < best.m_bound) {
        best = r;
        found = true;
      }
    }
  }
  if (!found) throw NotAdequate("no adequate lower bound in the parameter ladder");
  return best;
}

DeformationResult m_oracle_quadrature(const SecularFn& A, int grid_n) {
  double a2pi = A.a2pi();
  if (std::fabs(a2pi) < kCriticalTol)
    throw Critical("noncriticality fails: |A(2pi)| < 1e-9");
  int K = std::max(grid_n, 64);
  int n = 2 * K;  // Simpson nodes 0..n
  double h = kTwoPi / n;
  std::vector<double> q(n + 1), Av(n + 1);
  for (int j = 0; j <= n; ++j) {
    Av[j] = A.eval(j * h);
    q[j] = std::exp(-2.0 * Av[j]);
  }
  // prefix[j] = int_0^{t_{2j}} e^{-2A} and suffix[j] = int_{t_{2j}}^{2pi} e^{-2A},
  // composite Simpson per panel pair. The suffix is accumulated backward rather
  // than taken as total - prefix: near t = 2pi the tail can be ~1e-11 while the
  // prefix is O(1), and the subtraction would drown it in quadrature noise.
  std::vector<double> prefix(K + 1), suffix(K + 1);
  prefix[0] = 0;
  for (int j = 0; j < K; ++j)
    prefix[j + 1] = prefix[j] + (h / 3.0) * (q[2 * j] + 4.0 * q[2 * j + 1] + q[2 * j + 2]);
  suffix[K] = 0;
  for (int j = K; j-- > 0;)
    suffix[j] = suffix[j + 1] + (h / 3.0) * (q[2 * j] + 4.0 * q[2 * j + 1] + q[2 * j + 2]);
  double inv_1m = -1.0 / std::expm1(a2pi);        // 1/(1-lambda)
  double lam_1m = 1.0 / std::expm1(-a2pi);        // lambda/(1-lambda)
  // max_t e^{A(t)} sqrt(G(t)) / |1-lambda| with G = prefix + lambda^2 suffix,
  // evaluated through the stable ratios above so lambda never overflows.
  double best = 0;
  for (int j = 0; j <= K; ++j) {
    double eA = std::exp(Av[2 * j]);
    double term = prefix[j] * inv_1m * inv_1m + suffix[j] * lam_1m * lam_1m;
    best = std::max(best, eA * std::sqrt(term));
  }
  DeformationResult r;
  r.m_bound = std::sqrt(kTwoPi) * best;
  r.method = MMethod::quadrature_oracle;
  r.a2pi = a2pi;
  r.lambda = std::exp(a2pi);
  r.pieces = 0;
  r.margin = Rational(0);
  return r;
}

double SampledFunction::sup_norm() const {
  double m = 0;
  for (double v : x) m = std::max(m, std::fabs(v));
  return m;
}

SampledFunction solve_linear_periodic(const SecularFn& A,
                                      const std::function<double(double)>& b, int half_panels) {
  int K = std::max(half_panels, 32);
  int n = 2 * K;
  double h = kTwoPi / n;
  double a2pi = A.a2pi();
  if (std::fabs(a2pi) < kCriticalTol)
    throw Critical("noncriticality fails: |A(2pi)| < 1e-9");

  std::vector<double> Av(n + 1), g(n + 1);
  for (int j = 0; j <= n; ++j) {
    double t = j * h;
    Av[j] = A.eval(t);
    g[j] = std::exp(-Av[j]) * b(t);
  }
  // Prefix/suffix integrals of g at every node: Simpson on even nodes,
  // half-panel Newton-Cotes (5,8,-1)/12 for the odd ones; O(h^4) throughout.
  // The suffix is accumulated backward instead of total - I so that a tiny
  // tail integral is not lost to cancellation against an O(1) total.
  std::vector<double> I(n + 1), S(n + 1);
  I[0] = 0;
  for (int j = 0; j + 2 <= n; j += 2) {
    I[j + 1] = I[j] + (h / 12.0) * (5.0 * g[j] + 8.0 * g[j + 1] - g[j + 2]);
    I[j + 2] = I[j] + (h / 3.0) * (g[j] + 4.0 * g[j + 1] + g[j + 2]);
  }
  S[n] = 0;
  for (int j = n; j - 2 >= 0; j -= 2) {
    S[j - 1] = S[j] + (h / 12.0) * (5.0 * g[j] + 8.0 * g[j - 1] - g[j - 2]);
    S[j - 2] = S[j] + (h / 3.0) * (g[j - 2] + 4.0 * g[j - 1] + g[j]);
  }
  double inv_1m = -1.0 / std::expm1(a2pi);  // 1/(1-lambda)
  double lam_1m = 1.0 / std::expm1(-a2pi);  // lambda/(1-lambda)

  SampledFunction out;
  out.t.resize(n + 1);
  out.x.resize(n + 1);
  for (int j = 0; j <= n; ++j) {
    out.t[j] = j * h;
    out.x[j] = std::exp(Av[j]) * (I[j] * inv_1m + S[j] * lam_1m);
  }
  return out;
}

SampledFunction periodic_solution_kernel(const SecularFn& A, const TrigPoly& b, int grid_n) {
  int K = (grid_n + 1) / 2;
  return solve_linear_periodic(A, [&](double t) { return b.eval(t); }, K);
}

}  // namespace hbcert
