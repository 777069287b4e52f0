// hbcert command line: solve / rationalize / certify / shoot / all over a
// problem file. Exit status: 0 on success (for certify/all: the certificate
// establishes existence and uniqueness), 1 on a failed verdict, 2 on errors.
#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "hbcert/certificate.hpp"
#include "hbcert/errors.hpp"
#include "hbcert/hbm_solver.hpp"
#include "hbcert/problem_io.hpp"
#include "hbcert/rationalize.hpp"
#include "hbcert/shooting.hpp"
#include "hbcert/version.hpp"

namespace {

int log_level() {
  static const int level = [] {
    const char* env = std::getenv("HB_LOG");
    if (!env) return 1;
    const std::string v = env;
    if (v == "off") return 0;
    if (v == "debug") return 2;
    return 1;  // info, and any unrecognized value
  }();
  return level;
}

void log_info(const std::string& msg) {
  if (log_level() >= 1) std::cerr << "[hbcert] " << msg << "\n";
}

void log_debug(const std::string& msg) {
  if (log_level() >= 2) std::cerr << "[hbcert:debug] " << msg << "\n";
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct Flags {
  std::string problem_path;
  std::optional<int> order;
  std::optional<std::string> budget, margin, stilde;
  std::optional<int> pieces;
  int steps = 4096;
  int harmonics = 8;
  unsigned seed = 0;
  std::optional<std::string> xbar_path, out_path;
};

hbcert::Rational parse_flag_rational(const std::string& text, const char* flag) {
  try {
    return hbcert::parse_rational(text);
  } catch (const hbcert::Error& e) {
    throw hbcert::SemanticError(std::string(flag) + ": " + e.what());
  }
}

void print_solution_terms(std::ostream& os, const hbcert::TrigPoly& f) {
  std::istringstream lines(hbcert::serialize_trigpoly(f));
  std::string line;
  while (std::getline(lines, line)) os << "  " << line << "\n";
}

void write_out(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw hbcert::SemanticError("cannot write output file " + path);
  out << content;
}

// Shared pipeline pieces ----------------------------------------------------

std::vector<hbcert::LadderStep> run_ladder(const hbcert::ProblemFile& pf,
                                           const hbcert::OdeSpec& ode, const Flags& flags,
                                           std::ostream* os) {
  const int order = flags.order ? *flags.order : pf.hbm_order.value_or(5);
  hbcert::LadderOptions lopts;
  lopts.domain_lo = pf.omega.lo_double();
  lopts.domain_hi = pf.omega.hi_double();
  log_debug("ladder to order " + std::to_string(order));
  auto steps = hbcert::continuation_ladder(ode, order, pf.symmetry, lopts);
  for (const auto& st : steps) {
    if (os) {
      *os << "order = " << st.order << (st.used_shooting_seed ? "  (shooting seed)" : "")
          << "\n";
      print_solution_terms(*os, st.sol.xbar);
      *os << "  accuracy = " << fmt(st.acc.value) << "\n";
    }
    log_debug("order " + std::to_string(st.order) + " accuracy " + fmt(st.acc.value));
  }
  return steps;
}

hbcert::ApproxSolution rationalize_step(const hbcert::ProblemFile& pf,
                                        const hbcert::OdeSpec& ode,
                                        const hbcert::ApproxSolution& in, const Flags& flags,
                                        std::ostream* os) {
  hbcert::Rational budget(21, 20);
  if (flags.budget)
    budget = parse_flag_rational(*flags.budget, "--budget");
  else if (pf.budget)
    budget = *pf.budget;
  auto out = hbcert::simplify_solution(ode, in, budget);
  if (os) {
    *os << "rationalized (budget " << hbcert::to_string(budget) << ")\n";
    print_solution_terms(*os, out.xbar);
    *os << "  accuracy = " << fmt(hbcert::accuracy(ode, out.xbar).value) << "\n";
  }
  return out;
}

hbcert::ApproxSolution make_candidate(const hbcert::ProblemFile& pf,
                                      const hbcert::OdeSpec& ode, const Flags& flags,
                                      std::ostream* os) {
  if (flags.xbar_path) {
    hbcert::ApproxSolution sol;
    sol.xbar = hbcert::load_trigpoly(*flags.xbar_path);
    sol.provenance = {hbcert::Provenance::user, 0};
    return sol;
  }
  auto steps = run_ladder(pf, ode, flags, os);
  return rationalize_step(pf, ode, steps.back().sol, flags, os);
}

int run_certify(const hbcert::ProblemFile& pf, const hbcert::OdeSpec& ode, const Flags& flags,
                bool verbose_pipeline) {
  const auto sol = make_candidate(pf, ode, flags, verbose_pipeline ? &std::cout : nullptr);

  hbcert::CertifyOptions copts;
  if (flags.stilde)
    copts.stilde = parse_flag_rational(*flags.stilde, "--stilde");
  else if (pf.stilde)
    copts.stilde = pf.stilde;
  if (flags.pieces)
    copts.pieces = flags.pieces;
  else if (pf.pieces)
    copts.pieces = pf.pieces;
  if (flags.margin)
    copts.margin = parse_flag_rational(*flags.margin, "--margin");
  else if (pf.margin)
    copts.margin = pf.margin;

  const auto cert = hbcert::certify(ode, sol, pf.omega, copts);
  const std::string rendered = hbcert::render_certificate(cert);
  std::cout << rendered;
  const std::string path = flags.out_path.value_or(pf.name + ".cert");
  write_out(path, rendered);
  log_info("certificate written to " + path);
  log_info(std::string("verdict: exists_unique = ") + (cert.exists_unique ? "true" : "false"));
  return cert.exists_unique ? 0 : 1;
}

int run_shoot(const hbcert::ProblemFile& pf, const hbcert::OdeSpec& ode, const Flags& flags) {
  hbcert::LadderOptions lopts;
  lopts.domain_lo = pf.omega.lo_double();
  lopts.domain_hi = pf.omega.hi_double();
  const auto base = hbcert::continuation_ladder(ode, 0, hbcert::Symmetry::none, lopts);
  const double guess = hbcert::to_double(base.front().sol.xbar.mean());
  log_debug("period-map guess " + fmt(guess));

  const double x0 = hbcert::period_map_fixed_point(ode, guess, 1e-10, flags.steps);
  const auto traj = hbcert::integrate(ode, x0, flags.steps);
  const auto poly = hbcert::fourier_extract(traj, flags.harmonics);

  std::cout << "x0 = " << fmt(x0) << "\n";
  std::cout << "const " << fmt(hbcert::to_double(poly.mean())) << "\n";
  for (int m = 1; m <= poly.degree(); ++m) {
    std::cout << "cos " << m << " " << fmt(hbcert::to_double(poly.cos_coeff(m))) << "\n";
    std::cout << "sin " << m << " " << fmt(hbcert::to_double(poly.sin_coeff(m))) << "\n";
  }
  if (flags.out_path) {
    write_out(*flags.out_path, hbcert::to_csv(traj));
    log_info("trajectory written to " + *flags.out_path);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(hbcert::kToolName) + " " + hbcert::kVersion +
               " -- harmonic balance with certified periodic-orbit existence"};
  app.require_subcommand(1);

  Flags flags;
  std::string mode;
  for (const char* name : {"solve", "rationalize", "certify", "shoot", "all"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("problem", flags.problem_path, "problem file (.hbp)")->required();
    sub->add_option("--order", flags.order, "harmonic balance order");
    sub->add_option("--budget", flags.budget, "CF budget ratio (rational)");
    sub->add_option("--steps", flags.steps, "RK4 steps per period (power of two)");
    sub->add_option("--harmonics", flags.harmonics, "harmonics extracted from trajectories");
    sub->add_option("--pieces", flags.pieces, "deformation minorant pieces");
    sub->add_option("--margin", flags.margin, "deformation minorant margin (rational)");
    sub->add_option("--stilde", flags.stilde, "declared accuracy round-up (rational)");
    sub->add_option("--seed", flags.seed, "seed for randomized diagnostics");
    sub->add_option("--xbar", flags.xbar_path, "candidate solution file (.trig)");
    sub->add_option("--out", flags.out_path, "output path");
    sub->callback([&mode, name] { mode = name; });
  }

  CLI11_PARSE(app, argc, argv);

  try {
    const hbcert::ProblemFile pf = hbcert::load_problem(flags.problem_path);
    const hbcert::OdeSpec ode = pf.to_ode();
    log_info("loaded problem '" + pf.name + "' (degree " + std::to_string(pf.degree) + ")");

    if (mode == "solve") {
      const auto steps = run_ladder(pf, ode, flags, &std::cout);
      if (flags.out_path)
        write_out(*flags.out_path, hbcert::serialize_trigpoly(steps.back().sol.xbar));
      return 0;
    }
    if (mode == "rationalize") {
      hbcert::ApproxSolution in;
      if (flags.xbar_path) {
        in.xbar = hbcert::load_trigpoly(*flags.xbar_path);
        in.provenance = {hbcert::Provenance::user, 0};
      } else {
        in = run_ladder(pf, ode, flags, &std::cout).back().sol;
      }
      const auto out = rationalize_step(pf, ode, in, flags, &std::cout);
      if (flags.out_path) write_out(*flags.out_path, hbcert::serialize_trigpoly(out.xbar));
      return 0;
    }
    if (mode == "certify") return run_certify(pf, ode, flags, false);
    if (mode == "shoot") return run_shoot(pf, ode, flags);
    return run_certify(pf, ode, flags, true);  // all
  } catch (const hbcert::ParseError& e) {
    std::cout << "error = ParseError\nmessage = " << e.what() << "\nline = " << e.line
              << "\ncolumn = " << e.column << "\n";
    return 2;
  } catch (const hbcert::Blowup& e) {
    std::cout << "error = Blowup\nmessage = " << e.what() << "\nwhere = " << fmt(e.where)
              << "\n";
    return 2;
  } catch (const hbcert::Error& e) {
    std::cout << "error = " << e.kind() << "\nmessage = " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cout << "error = InvalidArgument\nmessage = " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cout << "error = InternalError\nmessage = " << e.what() << "\n";
    return 2;
  }
}
