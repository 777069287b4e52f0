#include "hbcert/rational.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>

#include "hbcert/errors.hpp"

namespace hbcert {

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw ParseError("empty rational literal");
  // mpq set_str accepts whitespace and bases we do not want; validate shape first.
  auto valid = [](const std::string& s) {
    std::size_t i = 0;
    if (s[i] == '-') ++i;  // no explicit '+': mpq set_str would reject it anyway
    if (i == s.size() || !std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    bool seen_slash = false;
    for (; i < s.size(); ++i) {
      if (s[i] == '/') {
        if (seen_slash || i + 1 == s.size()) return false;
        seen_slash = true;
        continue;
      }
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    }
    return true;
  };
  if (!valid(text)) throw ParseError("malformed rational literal '" + text + "'");
  Rational q;
  if (q.set_str(text, 10) != 0) throw ParseError("malformed rational literal '" + text + "'");
  if (q.get_den() == 0) throw ParseError("zero denominator in '" + text + "'");
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) {
  return q.get_str();
}

double to_double(const Rational& q) {
  return q.get_d();
}

double to_double_round_up(const Rational& q) {
  double d = q.get_d();  // truncated toward zero, off by < 1 ulp
  while (Rational(d) < q) d = std::nextafter(d, std::numeric_limits<double>::infinity());
  return d;
}

double sqrt_round_up(const Rational& q) {
  if (sgn(q) == 0) return 0.0;
  double d = std::sqrt(to_double_round_up(q));
  // sqrt of an upper bound can still round below the true root; verify exactly.
  while (Rational(d) * Rational(d) < q)
    d = std::nextafter(d, std::numeric_limits<double>::infinity());
  return d;
}

Rational exact_from_double(double x) {
  Rational q;
  mpq_set_d(q.get_mpq_t(), x);
  return q;
}

Rational snap_to_decimal(double x, int digits) {
  if (x == 0.0) return Rational(0);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*e", digits - 1, x);
  // buf looks like -7.44045658100e-01; rebuild as integer * 10^exponent.
  char* epos = std::strchr(buf, 'e');
  int exp10 = std::atoi(epos + 1);
  std::string mantissa(buf, epos - buf);
  std::string digits_only;
  bool negative = false;
  int point_shift = 0;
  bool past_point = false;
  for (char c : mantissa) {
    if (c == '-') negative = true;
    else if (c == '+') continue;
    else if (c == '.') past_point = true;
    else {
      digits_only += c;
      if (past_point) ++point_shift;
    }
  }
  Integer num(digits_only, 10);
  if (negative) num = -num;
  int e = exp10 - point_shift;
  Rational q(num);
  Integer p10;
  mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(e < 0 ? -e : e));
  if (e >= 0) q *= Rational(p10);
  else q /= Rational(p10);
  q.canonicalize();
  return q;
}

Rational pow(const Rational& base, unsigned e) {
  Rational r(1);
  Rational b = base;
  while (e) {
    if (e & 1u) r *= b;
    b *= b;
    e >>= 1u;
  }
  return r;
}

}  // namespace hbcert
