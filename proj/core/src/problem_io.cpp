#include "hbcert/problem_io.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "hbcert/errors.hpp"

namespace hbcert {

namespace {

struct Token {
  std::string text;
  int column;  // 1-based
};

std::vector<Token> tokenize(const std::string& line) {
  std::vector<Token> toks;
  std::size_t i = 0;
  while (i < line.size()) {
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    toks.push_back({line.substr(i, j - i), static_cast<int>(i) + 1});
    i = j;
  }
  return toks;
}

int parse_int(const Token& tok, int line_no, const std::string& what) {
  try {
    std::size_t used = 0;
    int v = std::stoi(tok.text, &used);
    if (used != tok.text.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw ParseError("expected an integer " + what + ", got '" + tok.text + "'", line_no,
                     tok.column);
  }
}

Rational parse_value(const Token& tok, int line_no) {
  try {
    return parse_rational(tok.text);
  } catch (const Error& e) {
    throw ParseError(std::string(e.what()), line_no, tok.column);
  }
}

std::optional<Rational> parse_endpoint(const Token& tok, int line_no, int sign) {
  if ((sign < 0 && tok.text == "-inf") || (sign > 0 && tok.text == "inf")) return std::nullopt;
  return parse_value(tok, line_no);
}

// Accumulates one coefficient block with duplicate detection.
struct BlockBuilder {
  int line_opened = 0;
  std::optional<Rational> mean;
  std::map<int, Rational> cs, sn;

  void add(const std::vector<Token>& toks, int line_no) {
    const std::string& kind = toks[0].text;
    if (kind == "const") {
      if (toks.size() != 2) throw ParseError("const takes one value", line_no, toks[0].column);
      if (mean) throw ParseError("duplicate const term", line_no, toks[0].column);
      mean = parse_value(toks[1], line_no);
      return;
    }
    if (toks.size() != 3)
      throw ParseError(kind + " takes a harmonic index and a value", line_no, toks[0].column);
    const int m = parse_int(toks[1], line_no, "harmonic index");
    if (m < 1) throw ParseError("harmonic index must be >= 1", line_no, toks[1].column);
    auto& dst = (kind == "cos") ? cs : sn;
    if (dst.count(m))
      throw ParseError("duplicate " + kind + " " + std::to_string(m) + " term", line_no,
                       toks[0].column);
    dst[m] = parse_value(toks[2], line_no);
  }

  TrigPoly poly() const {
    int deg = 0;
    if (!cs.empty()) deg = std::max(deg, cs.rbegin()->first);
    if (!sn.empty()) deg = std::max(deg, sn.rbegin()->first);
    std::vector<Rational> c(deg), s(deg);
    for (const auto& [m, v] : cs) c[m - 1] = v;
    for (const auto& [m, v] : sn) s[m - 1] = v;
    return TrigPoly::from_coeffs(mean ? 2 * *mean : Rational(0), std::move(c), std::move(s));
  }
};

}  // namespace

OdeSpec ProblemFile::to_ode() const {
  OdeSpec ode;
  ode.name = name;
  ode.coeffs = coeffs;
  ode.validate();
  return ode;
}

ProblemFile parse_problem(std::istream& in) {
  ProblemFile pf;
  bool have_name = false, have_omega = false, have_degree = false;
  std::map<int, BlockBuilder> blocks;
  int open_block = -1;
  std::map<std::string, int> override_seen;

  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto pos = raw.find('#'); pos != std::string::npos) raw.erase(pos);
    const auto toks = tokenize(raw);
    if (toks.empty()) continue;
    const std::string& key = toks[0].text;

    if (key == "name:") {
      if (have_name) throw ParseError("duplicate name header", line_no, toks[0].column);
      if (toks.size() != 2) throw ParseError("name: takes one token", line_no, toks[0].column);
      pf.name = toks[1].text;
      have_name = true;
      continue;
    }
    if (!have_name) throw ParseError("file must start with a name: header", line_no, toks[0].column);

    if (key == "omega:") {
      if (have_omega) throw ParseError("duplicate omega header", line_no, toks[0].column);
      if (toks.size() != 3)
        throw ParseError("omega: takes two endpoints", line_no, toks[0].column);
      pf.omega.lo = parse_endpoint(toks[1], line_no, -1);
      pf.omega.hi = parse_endpoint(toks[2], line_no, +1);
      if (pf.omega.lo && pf.omega.hi && !(*pf.omega.lo < *pf.omega.hi))
        throw SemanticError("omega endpoints out of order");
      have_omega = true;
      continue;
    }
    if (key == "degree:") {
      if (!have_omega) throw ParseError("degree: must follow omega:", line_no, toks[0].column);
      if (have_degree) throw ParseError("duplicate degree header", line_no, toks[0].column);
      if (toks.size() != 2) throw ParseError("degree: takes one integer", line_no, toks[0].column);
      pf.degree = parse_int(toks[1], line_no, "degree");
      if (pf.degree < 1) throw ParseError("degree must be >= 1", line_no, toks[1].column);
      have_degree = true;
      continue;
    }
    if (!have_degree)
      throw ParseError("headers name:/omega:/degree: must precede '" + key + "'", line_no,
                       toks[0].column);

    if (key == "coeff") {
      if (toks.size() != 2) throw ParseError("coeff takes one index", line_no, toks[0].column);
      const int k = parse_int(toks[1], line_no, "coefficient index");
      if (k < 0 || k > pf.degree)
        throw ParseError("coefficient index " + std::to_string(k) + " outside 0.." +
                             std::to_string(pf.degree),
                         line_no, toks[1].column);
      if (blocks.count(k))
        throw ParseError("duplicate coeff " + std::to_string(k) + " block", line_no,
                         toks[0].column);
      blocks[k].line_opened = line_no;
      open_block = k;
      continue;
    }
    if (key == "const" || key == "cos" || key == "sin") {
      if (open_block < 0)
        throw ParseError("term line outside any coeff block", line_no, toks[0].column);
      blocks[open_block].add(toks, line_no);
      continue;
    }

    // Override keys close any open block.
    open_block = -1;
    auto once = [&](const char* name) {
      if (override_seen[name]++)
        throw ParseError(std::string("duplicate ") + name + " override", line_no, toks[0].column);
      if (toks.size() != 2)
        throw ParseError(std::string(name) + " takes one value", line_no, toks[0].column);
    };
    if (key == "hbm_order:") {
      once("hbm_order:");
      pf.hbm_order = parse_int(toks[1], line_no, "order");
      if (*pf.hbm_order < 0) throw ParseError("hbm_order must be >= 0", line_no, toks[1].column);
    } else if (key == "symmetry:") {
      once("symmetry:");
      const std::string& v = toks[1].text;
      if (v == "none")
        pf.symmetry = Symmetry::none;
      else if (v == "cos_only")
        pf.symmetry = Symmetry::cos_only;
      else if (v == "even_cos")
        pf.symmetry = Symmetry::even_cos;
      else
        throw ParseError("symmetry must be none|cos_only|even_cos", line_no, toks[1].column);
    } else if (key == "pieces:") {
      once("pieces:");
      pf.pieces = parse_int(toks[1], line_no, "piece count");
      if (*pf.pieces < 1) throw ParseError("pieces must be >= 1", line_no, toks[1].column);
    } else if (key == "margin:") {
      once("margin:");
      pf.margin = parse_value(toks[1], line_no);
      if (sgn(*pf.margin) <= 0) throw ParseError("margin must be positive", line_no, toks[1].column);
    } else if (key == "stilde:") {
      once("stilde:");
      pf.stilde = parse_value(toks[1], line_no);
    } else if (key == "budget:") {
      once("budget:");
      pf.budget = parse_value(toks[1], line_no);
    } else {
      throw ParseError("unknown key '" + key + "'", line_no, toks[0].column);
    }
  }

  if (!have_name || !have_omega || !have_degree)
    throw ParseError("missing name:/omega:/degree: header", line_no + 1);
  pf.coeffs.assign(pf.degree + 1, TrigPoly());
  for (const auto& [k, b] : blocks) pf.coeffs[k] = b.poly();
  pf.to_ode();  // validates the leading coefficient
  return pf;
}

ProblemFile load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open problem file " + path);
  return parse_problem(in);
}

namespace {

void append_terms(std::string& out, const TrigPoly& f) {
  if (f.mean() != 0) out += "const " + to_string(f.mean()) + "\n";
  for (int m = 1; m <= f.degree(); ++m) {
    if (f.cos_coeff(m) != 0)
      out += "cos " + std::to_string(m) + " " + to_string(f.cos_coeff(m)) + "\n";
    if (f.sin_coeff(m) != 0)
      out += "sin " + std::to_string(m) + " " + to_string(f.sin_coeff(m)) + "\n";
  }
}

}  // namespace

std::string serialize_problem(const ProblemFile& pf) {
  std::string out = "name: " + pf.name + "\n";
  out += "omega: " + (pf.omega.lo ? to_string(*pf.omega.lo) : std::string("-inf"));
  out += " " + (pf.omega.hi ? to_string(*pf.omega.hi) : std::string("inf")) + "\n";
  out += "degree: " + std::to_string(pf.degree) + "\n";
  for (int k = 0; k <= pf.degree && k < static_cast<int>(pf.coeffs.size()); ++k) {
    if (pf.coeffs[k].is_zero()) continue;
    out += "coeff " + std::to_string(k) + "\n";
    append_terms(out, pf.coeffs[k]);
  }
  if (pf.hbm_order) out += "hbm_order: " + std::to_string(*pf.hbm_order) + "\n";
  if (pf.symmetry != Symmetry::none)
    out += std::string("symmetry: ") +
           (pf.symmetry == Symmetry::cos_only ? "cos_only" : "even_cos") + "\n";
  if (pf.pieces) out += "pieces: " + std::to_string(*pf.pieces) + "\n";
  if (pf.margin) out += "margin: " + to_string(*pf.margin) + "\n";
  if (pf.stilde) out += "stilde: " + to_string(*pf.stilde) + "\n";
  if (pf.budget) out += "budget: " + to_string(*pf.budget) + "\n";
  return out;
}

TrigPoly parse_trigpoly(std::istream& in) {
  BlockBuilder b;
  std::string raw;
  int line_no = 0;
  bool any = false;
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto pos = raw.find('#'); pos != std::string::npos) raw.erase(pos);
    const auto toks = tokenize(raw);
    if (toks.empty()) continue;
    const std::string& key = toks[0].text;
    if (key != "const" && key != "cos" && key != "sin")
      throw ParseError("unknown key '" + key + "'", line_no, toks[0].column);
    b.add(toks, line_no);
    any = true;
  }
  if (!any) throw ParseError("empty trig polynomial file", line_no + 1);
  return b.poly();
}

TrigPoly load_trigpoly(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open trig polynomial file " + path);
  return parse_trigpoly(in);
}

std::string serialize_trigpoly(const TrigPoly& f) {
  std::string out;
  append_terms(out, f);
  if (out.empty()) out = "const 0\n";
  return out;
}

}  // namespace hbcert
