// freeconv: command-line front end for the type B convolution library.

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "checks.hpp"
#include "freeconv/errors.hpp"
#include "freeconv/fock.hpp"
#include "freeconv/laws.hpp"
#include "freeconv/nc.hpp"
#include "freeconv/typeb.hpp"
#include "law_spec.hpp"
#include "table.hpp"

using namespace freeconv;
using namespace freeconv::cli;

namespace {

constexpr double kPi = std::numbers::pi;

struct RunConfig {
  SolverConfig solver;
  std::string grid = "-3:3:121";
  std::string output = "csv";
  std::string plot;
  std::string out;
};

struct Grid {
  double start, stop;
  int count;
  std::vector<double> points() const {
    std::vector<double> p;
    for (int i = 0; i < count; ++i) p.push_back(start + (stop - start) * i / (count - 1));
    return p;
  }
};

Grid parse_grid(const std::string& s) {
  Grid g{};
  char c1 = 0, c2 = 0;
  std::istringstream in(s);
  if (!(in >> g.start >> c1 >> g.stop >> c2 >> g.count) || c1 != ':' || c2 != ':' || !in.eof())
    throw Error(ErrorKind::ParseError, "grid must look like a:b:n, got '" + s + "'");
  if (g.count < 2 || !(g.start < g.stop)) throw Error(ErrorKind::ParseError, "grid needs start < stop and n >= 2");
  return g;
}

void add_common(CLI::App* app, RunConfig& rc, bool with_grid = true) {
  app->add_option("--tol", rc.solver.tol, "fixed point tolerance")->check(CLI::PositiveNumber);
  app->add_option("--max-iter", rc.solver.max_iter, "fixed point iteration cap")->check(CLI::PositiveNumber);
  app->add_option("--eps-im", rc.solver.eps_im, "imaginary offset for boundary values")->check(CLI::PositiveNumber);
  if (with_grid) app->add_option("--grid", rc.grid, "real grid a:b:n");
  app->add_option("--output", rc.output, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app->add_option("--plot", rc.plot, "write an SVG plot to this file");
  app->add_option("--out", rc.out, "write the table to this file instead of stdout");
}

void emit(const Table& t, const RunConfig& rc, const std::vector<std::string>& series, const std::string& caption) {
  std::ofstream file;
  if (!rc.out.empty()) {
    file.open(rc.out);
    if (!file) throw Error(ErrorKind::DomainError, "cannot write '" + rc.out + "'");
  }
  std::ostream& out = rc.out.empty() ? std::cout : file;
  if (rc.output == "json") write_json(t, out);
  else write_csv(t, out);
  if (!rc.plot.empty()) write_svg(t, series, caption, rc.plot);
}

std::string eps_caption(const RunConfig& rc) {
  return "boundary values at Im z = " + format_number(rc.solver.eps_im);
}

Cplx parse_complex(const std::string& s) {
  std::istringstream in(s);
  double re = 0, im = 0;
  char comma = 0;
  if (!(in >> re)) throw Error(ErrorKind::ParseError, "expected RE or RE,IM, got '" + s + "'");
  if (in >> comma) {
    if (comma != ',' || !(in >> im)) throw Error(ErrorKind::ParseError, "expected RE,IM, got '" + s + "'");
  }
  return {re, im};
}

Rational parse_rational(const nlohmann::json& v) {
  if (v.is_number_integer()) return Rational(v.get<long long>());
  if (v.is_string()) {
    try {
      return Rational(v.get<std::string>());
    } catch (const std::exception&) {
      throw Error(ErrorKind::ParseError, "bad rational '" + v.get<std::string>() + "'");
    }
  }
  throw Error(ErrorKind::ParseError, "exact mode takes integers or \"p/q\" strings");
}

// [[re, inf], ...] or [x, ...] (inf part 0)
template <class S, class F>
std::vector<S> parse_dual_list(const std::string& text, F scalar) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("bad sequence: ") + e.what());
  }
  if (!j.is_array()) throw Error(ErrorKind::ParseError, "sequence must be a JSON array");
  std::vector<S> out;
  for (const auto& e : j) {
    if (e.is_array()) {
      if (e.size() != 2) throw Error(ErrorKind::ParseError, "dual entries are [re, inf]");
      out.push_back(S(scalar(e[0]), scalar(e[1])));
    } else {
      out.push_back(S(scalar(e), scalar(nlohmann::json(0))));
    }
  }
  return out;
}

std::string rational_text(const Rational& r) { return r.str(); }

template <class S>
void sequence_table(Table& t, const std::vector<S>& seq, bool exact) {
  t.columns = exact ? std::vector<std::string>{"n", "re", "inf", "re_exact", "inf_exact"}
                    : std::vector<std::string>{"n", "re", "inf"};
  for (std::size_t n = 0; n < seq.size(); ++n) {
    if constexpr (std::is_same_v<S, DualRational>) {
      t.add({static_cast<long long>(n + 1), static_cast<double>(seq[n].re), static_cast<double>(seq[n].inf),
             rational_text(seq[n].re), rational_text(seq[n].inf)});
    } else {
      t.add({static_cast<long long>(n + 1), seq[n].re.real(), seq[n].inf.real()});
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Type B free convolutions through subordination over dual numbers"};
  app.require_subcommand(1);
  RunConfig rc;

  std::string a, a2, b, b2, ra, rb, domain = "disc", suite = "all", kappa, moments_text, b_text = "1,0", steps = "2e-3,1e-3";
  double t = 2.0, q = 1.0, y = 0.5, alpha = 2.0;
  int order = 10, n_fock = 2, k_fock = 1, m_max = 6, stable_case = 3;
  bool exact = false;

  auto* boxplus = app.add_subcommand("boxplus", "free additive convolution of two measures");
  boxplus->add_option("--a", a, "first measure (JSON or file)")->required();
  boxplus->add_option("--b", b, "second measure")->required();
  add_common(boxplus, rc);

  auto* boxplus_bc = app.add_subcommand("boxplus-b", "type B additive convolution");
  boxplus_bc->add_option("--a", a, "first measure")->required();
  boxplus_bc->add_option("--a2", a2, "second coordinate of the first law")->required();
  boxplus_bc->add_option("--b", b, "second measure")->required();
  boxplus_bc->add_option("--b2", b2, "second coordinate of the second law")->required();
  add_common(boxplus_bc, rc);

  auto* boxtimes = app.add_subcommand("boxtimes-b", "type B multiplicative convolution, z = x + iy");
  boxtimes->add_option("--a", a, "first measure")->required();
  boxtimes->add_option("--a2", a2, "second coordinate of the first law (zero, rotating, or additive)")->required();
  boxtimes->add_option("--b", b, "second measure")->required();
  boxtimes->add_option("--b2", b2, "second coordinate of the second law")->required();
  boxtimes->add_option("--domain", domain, "disc or slit")->check(CLI::IsMember({"disc", "slit"}));
  boxtimes->add_option("--y", y, "imaginary part of the evaluation points");
  add_common(boxtimes, rc);

  auto* cfree = app.add_subcommand("cfree", "conditionally free convolution of (mu, rho) pairs");
  cfree->add_option("--a", a, "first mu")->required();
  cfree->add_option("--ra", ra, "first rho")->required();
  cfree->add_option("--b", b, "second mu")->required();
  cfree->add_option("--rb", rb, "second rho")->required();
  add_common(cfree, rc);

  auto* ns = app.add_subcommand("ns-power", "type B convolution power t >= 1");
  ns->add_option("--a", a, "measure")->required();
  ns->add_option("--a2", a2, "second coordinate")->required();
  ns->add_option("--t", t, "power")->required();
  add_common(ns, rc);

  auto* mom = app.add_subcommand("moments", "dual moments from dual free cumulants");
  mom->add_option("--kappa", kappa, "JSON array of cumulants, entries x or [re, inf]")->required();
  mom->add_option("--order", order, "number of moments");
  mom->add_flag("--exact", exact, "rational arithmetic (integers or \"p/q\" strings)");
  add_common(mom, rc, false);

  auto* cum = app.add_subcommand("cumulants", "dual free cumulants from dual moments");
  cum->add_option("--moments", moments_text, "JSON array of moments, entries x or [re, inf]")->required();
  cum->add_option("--order", order, "number of cumulants");
  cum->add_flag("--exact", exact, "rational arithmetic");
  add_common(cum, rc, false);

  auto* dens = app.add_subcommand("density", "densities -Im G/pi and -Im g/pi at Im z = eps");
  dens->add_option("--a", a, "measure")->required();
  dens->add_option("--a2", a2, "optional second coordinate");
  add_common(dens, rc);

  auto* stab = app.add_subcommand("stable", "free stable law: Cauchy transform and second coordinate");
  stab->add_option("--case", stable_case, "1..5")->check(CLI::Range(1, 5));
  stab->add_option("--alpha", alpha, "index for cases 3 and 4");
  stab->add_option("--b", b_text, "coefficient RE,IM");
  stab->add_option("--q", q, "convolution power of the law")->check(CLI::PositiveNumber);
  add_common(stab, rc);

  auto* burg = app.add_subcommand("burgers", "residuals of the type B heat system");
  burg->add_option("--a", a, "initial measure")->required();
  burg->add_option("--a2", a2, "initial second coordinate")->required();
  burg->add_option("--t", t, "time")->required();
  burg->add_option("--steps", steps, "comma-separated difference steps");
  burg->add_option("--y", y, "imaginary part of the residual points");
  add_common(burg, rc);

  auto* fm = app.add_subcommand("fock-moments", "vacuum moments of X_N in the truncated Fock model");
  fm->add_option("--n", n_fock, "matrix size N")->check(CLI::PositiveNumber);
  fm->add_option("--k", k_fock, "number of matrices K")->check(CLI::PositiveNumber);
  fm->add_option("--m-max", m_max, "largest moment")->check(CLI::PositiveNumber);
  fm->add_flag("--exact", exact, "rational arithmetic");
  add_common(fm, rc, false);

  auto* chk = app.add_subcommand("check", "run invariant suites and print pass/fail with residuals");
  chk->add_option("--suite", suite, "suite name")->check(CLI::IsMember(suite_names()));
  add_common(chk, rc, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  Table table;
  table.command = name;
  try {
    const SolverConfig& cfg = rc.solver;
    auto xs = [&] { return parse_grid(rc.grid).points(); };
    const double eps = cfg.eps_im;

    if (name == "boxplus") {
      MeasureRepr m1 = parse_measure(load_spec(a)), m2 = parse_measure(load_spec(b));
      auto grid = xs();
      table.columns = {"x", "re_G", "im_G", "density", "re_omega1", "im_omega1", "re_omega2", "im_omega2"};
      for (double x : grid) {
        auto r = additive_omega(m1, m2, DualComplex(Cplx(x, eps), 0.0), cfg);
        table.add({x, r.G3.re.real(), r.G3.re.imag(), -r.G3.re.imag() / kPi, r.omega1.re.real(), r.omega1.re.imag(),
                   r.omega2.re.real(), r.omega2.re.imag()});
      }
      emit(table, rc, {"density"}, eps_caption(rc));
    } else if (name == "boxplus-b") {
      TypeBLaw p1{parse_measure(load_spec(a)), parse_second(load_spec(a2))};
      TypeBLaw p2{parse_measure(load_spec(b)), parse_second(load_spec(b2))};
      auto grid = xs();
      auto out = boxplus_b(p1, p2, cfg);
      table.columns = {"x", "re_G3", "im_G3", "re_g3", "im_g3", "density", "second_density"};
      for (double x : grid) {
        Cplx z(x, eps);
        Cplx G = out.G3(DualComplex(z, 0.0)).re, g = out.g3(z);
        table.add({x, G.real(), G.imag(), g.real(), g.imag(), -G.imag() / kPi, -g.imag() / kPi});
      }
      emit(table, rc, {"density", "second_density"}, eps_caption(rc));
    } else if (name == "boxtimes-b") {
      MeasureRepr m1 = parse_measure(load_spec(a)), m2 = parse_measure(load_spec(b));
      MultTypeBLaw p1{m1, parse_psi_second(load_spec(a2), m1)}, p2{m2, parse_psi_second(load_spec(b2), m2)};
      auto grid = xs();
      auto out = boxtimes_b(p1, p2, domain == "disc" ? MultDomain::Disc : MultDomain::SlitPlane, cfg);
      table.columns = {"x", "y", "re_psi3", "im_psi3", "re_psi_nu3", "im_psi_nu3"};
      for (double x : grid) {
        Cplx z(x, y);
        Cplx p = out.psi3(z), pn = out.psi_nu3(z);
        table.add({x, y, p.real(), p.imag(), pn.real(), pn.imag()});
      }
      emit(table, rc, {"re_psi3", "re_psi_nu3"}, "z = x + " + format_number(y) + "i");
    } else if (name == "cfree") {
      MeasureRepr m1 = parse_measure(load_spec(a)), r1 = parse_measure(load_spec(ra));
      MeasureRepr m2 = parse_measure(load_spec(b)), r2 = parse_measure(load_spec(rb));
      auto grid = xs();
      auto F = cfree_boxplus(m1, r1, m2, r2, cfg);
      table.columns = {"x", "re_F", "im_F", "re_dF", "im_dF", "density"};
      for (double x : grid) {
        DualComplex v = F(DualComplex(Cplx(x, eps), 1.0));
        table.add({x, v.re.real(), v.re.imag(), v.inf.real(), v.inf.imag(), -(1.0 / v.re).imag() / kPi});
      }
      emit(table, rc, {"density"}, eps_caption(rc));
    } else if (name == "ns-power") {
      TypeBLaw p{parse_measure(load_spec(a)), parse_second(load_spec(a2))};
      auto grid = xs();
      table.columns = {"x", "re_G", "im_G", "re_g", "im_g", "density", "second_density"};
      for (double x : grid) {
        SemigroupValue v = ns_semigroup_b(p, t, DualComplex(Cplx(x, eps), 0.0), cfg);
        table.add({x, v.G.re.real(), v.G.re.imag(), v.g.real(), v.g.imag(), -v.G.re.imag() / kPi, -v.g.imag() / kPi});
      }
      emit(table, rc, {"density", "second_density"}, eps_caption(rc));
    } else if (name == "moments" || name == "cumulants") {
      const std::string& text = name == "moments" ? kappa : moments_text;
      if (exact) {
        auto in = parse_dual_list<DualRational>(text, parse_rational);
        auto out = name == "moments" ? moments_from_cumulants<DualRational>(in, order)
                                     : cumulants_from_moments<DualRational>(in, order);
        sequence_table(table, out, true);
      } else {
        auto in = parse_dual_list<DualComplex>(text, [](const nlohmann::json& v) {
          if (!v.is_number()) throw Error(ErrorKind::ParseError, "float mode takes numbers");
          return Cplx(v.get<double>());
        });
        auto out = name == "moments" ? moments_from_cumulants<DualComplex>(in, order)
                                     : cumulants_from_moments<DualComplex>(in, order);
        sequence_table(table, out, false);
      }
      emit(table, rc, {"re", "inf"}, name);
    } else if (name == "density") {
      MeasureRepr mu = parse_measure(load_spec(a));
      std::optional<SecondCoordRepr> nu;
      if (!a2.empty()) nu = parse_second(load_spec(a2));
      auto grid = xs();
      table.columns = {"x", "density"};
      if (nu) table.columns.push_back("second_density");
      for (double x : grid) {
        Cplx z(x, eps);
        std::vector<Cell> row{x, -cauchy_triple(mu, z).g.imag() / kPi};
        if (nu) row.push_back(-g_with_derivative(*nu, z).first.imag() / kPi);
        table.add(row);
      }
      std::vector<std::string> series{"density"};
      if (nu) series.push_back("second_density");
      emit(table, rc, series, eps_caption(rc));
    } else if (name == "stable") {
      StableSpec s{stable_case, 0.0, parse_complex(b_text), alpha};
      validate(s);
      auto grid = xs();
      table.columns = {"x", "re_G", "im_G", "density", "re_g", "im_g"};
      for (double x : grid) {
        Cplx z(x, eps);
        CauchyTriple G = stable_cauchy(s, q, z);
        Cplx g = stable_second(s, z);
        table.add({x, G.g.real(), G.g.imag(), -G.g.imag() / kPi, g.real(), g.imag()});
      }
      emit(table, rc, {"density"}, eps_caption(rc) + "; g is the q-derivative at q = 1");
    } else if (name == "burgers") {
      TypeBLaw p{parse_measure(load_spec(a)), parse_second(load_spec(a2))};
      std::vector<Cplx> pts;
      for (double x : xs()) pts.emplace_back(x, y);
      std::vector<double> hs;
      std::stringstream ss(steps);
      for (std::string item; std::getline(ss, item, ',');) {
        try {
          hs.push_back(std::stod(item));
        } catch (const std::exception&) {
          throw Error(ErrorKind::ParseError, "bad step '" + item + "'");
        }
      }
      if (hs.empty()) throw Error(ErrorKind::ParseError, "no steps given");
      table.columns = {"h", "residual_G", "residual_g", "ratio_G", "ratio_g"};
      double prev1 = NAN, prev2 = NAN;
      for (double h : hs) {
        auto [r1, r2] = burgers_residual(p, t, pts, h, h, cfg);
        table.add({h, r1, r2, prev1 / r1, prev2 / r2});
        prev1 = r1;
        prev2 = r2;
      }
      emit(table, rc, {"residual_G", "residual_g"}, "t = " + format_number(t));
    } else if (name == "fock-moments") {
      table.columns = {"N", "m", "psi", "predicted", "difference"};
      if (exact) table.columns.push_back("psi_exact");
      for (int m = 1; m <= m_max; ++m) {
        FockBasis basis = build_fock(n_fock, k_fock, (m + 1) / 2);
        FockMoment v = psi_N_moment(matrix_XN(basis, n_fock, 0), m, exact);
        Rational pred = 0;
        if (m % 2 == 0) {
          pred = catalan(m / 2);
          for (int i = 0; i < m / 2; ++i) pred *= Rational(n_fock + 1, n_fock);
        }
        double diff = exact ? static_cast<double>(v.exact - pred) : v.value - static_cast<double>(pred);
        std::vector<Cell> row{static_cast<long long>(n_fock), static_cast<long long>(m), v.value,
                              static_cast<double>(pred), diff};
        if (exact) row.push_back(rational_text(v.exact));
        table.add(row);
      }
      emit(table, rc, {"psi", "predicted"}, "N = " + std::to_string(n_fock));
    } else if (name == "check") {
      auto results = run_suite(suite, cfg);
      table.columns = {"suite", "check", "residual", "threshold", "status"};
      bool ok = true;
      for (const auto& r : results) {
        table.add({r.suite, r.name, r.residual, r.threshold, std::string(r.pass() ? "PASS" : "FAIL")});
        ok = ok && r.pass();
      }
      emit(table, rc, {}, "");
      return ok ? 0 : 1;
    }
  } catch (const Error& e) {
    std::cerr << name << ": " << e.what() << '\n';
    if (e.kind() == ErrorKind::ParseError) {
      std::cerr << '\n' << sub->help();
      return 2;
    }
    return 1;
  } catch (const std::exception& e) {
    std::cerr << name << ": " << e.what() << '\n';
    return 1;
  }
  return 0;
}
