// Line-oriented problem files (.hbp) and bare trig-polynomial files (.trig).
//
//   name: rigid_cubic
//   omega: -inf inf
//   degree: 3
//   coeff 1
//   const 1/10
//   coeff 3
//   const -1/2
//   cos 2 -1/2
//   hbm_order: 3
//
// Header lines come in the order name/omega/degree; "coeff k" opens a block
// of term lines (const r | cos m r | sin m r, values exact rationals); the
// optional overrides hbm_order/symmetry/pieces/margin/stilde/budget follow.
// Unknown keys, duplicate blocks or terms, and out-of-range indices are
// ParseErrors carrying the line number. Serialization is canonical, so
// parse -> serialize is byte-identical on canonical files.
#ifndef HBCERT_PROBLEM_IO_HPP
#define HBCERT_PROBLEM_IO_HPP

#include <iosfwd>
#include <optional>
#include <string>

#include "hbcert/hbm_solver.hpp"
#include "hbcert/ode_model.hpp"

namespace hbcert {

struct ProblemFile {
  std::string name;
  DomainInterval omega;
  int degree = 0;
  std::vector<TrigPoly> coeffs;  // size degree+1

  std::optional<int> hbm_order;
  Symmetry symmetry = Symmetry::none;
  std::optional<int> pieces;
  std::optional<Rational> margin;
  std::optional<Rational> stilde;
  std::optional<Rational> budget;

  OdeSpec to_ode() const;
};

ProblemFile parse_problem(std::istream& in);
ProblemFile load_problem(const std::string& path);
std::string serialize_problem(const ProblemFile& pf);

TrigPoly parse_trigpoly(std::istream& in);
TrigPoly load_trigpoly(const std::string& path);
// Canonical term lines: const (when nonzero), then cos/sin per harmonic.
std::string serialize_trigpoly(const TrigPoly& f);

}  // namespace hbcert

#endif
