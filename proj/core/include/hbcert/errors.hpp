// Error taxonomy shared by all hbcert modules.
#ifndef HBCERT_ERRORS_HPP
#define HBCERT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hbcert {

// Base class: every failure raised by the library derives from this and
// carries a stable machine-readable kind() used by the CLI error block.
class Error : public std::runtime_error {
public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

private:
  std::string kind_;
};

struct ParseError : Error {
  ParseError(const std::string& what, int line = 0, int column = 0)
      : Error("ParseError", what), line(line), column(column) {}
  int line, column;
};

struct SemanticError : Error {
  explicit SemanticError(const std::string& what) : Error("SemanticError", what) {}
};

struct NoConvergence : Error {
  explicit NoConvergence(const std::string& what) : Error("NoConvergence", what) {}
};

struct SingularJacobian : Error {
  explicit SingularJacobian(const std::string& what) : Error("SingularJacobian", what) {}
};

// Piecewise-linear minorant fails L(t) < A(t) somewhere.
struct NotAdequate : Error {
  explicit NotAdequate(const std::string& what) : Error("NotAdequate", what) {}
};

// |A(2pi)| below the noncriticality tolerance: the periodic kernel is singular.
struct Critical : Error {
  explicit Critical(const std::string& what) : Error("Critical", what) {}
};

struct Blowup : Error {
  Blowup(const std::string& what, double t) : Error("Blowup", what), where(t) {}
  double where;
};

struct NotCertified : Error {
  explicit NotCertified(const std::string& what) : Error("NotCertified", what) {}
};

struct BudgetUnreachable : Error {
  explicit BudgetUnreachable(const std::string& what) : Error("BudgetUnreachable", what) {}
};

}  // namespace hbcert

#endif
