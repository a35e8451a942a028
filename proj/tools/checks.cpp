#include "checks.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <map>

#include "freeconv/errors.hpp"
#include "freeconv/fock.hpp"
#include "freeconv/laws.hpp"
#include "freeconv/nc.hpp"
#include "freeconv/typeb.hpp"

namespace freeconv::cli {

namespace {

std::vector<Cplx> probe_grid() {
  std::vector<Cplx> g;
  for (double x : {-2.5, -1.0, 0.0, 0.7, 2.2})
    for (double y : {0.05, 0.5, 2.0}) g.emplace_back(x, y);
  return g;
}

std::vector<CheckResult> combinatorics(const SolverConfig&) {
  double worst = 0;
  for (int n = 1; n <= 6; ++n) {
    BPairingCount c = count_b_pairings(n);
    worst = std::max(worst, std::abs(double(c.total - (n + 1) * catalan(n))));
    worst = std::max(worst, std::abs(double(c.with_zero_block - n * catalan(n))));
  }
  return {{"combinatorics", "type B pairings = (n+1)C_n, zero block nC_n, n <= 6", worst, 0}};
}

std::vector<CheckResult> moments(const SolverConfig&) {
  std::vector<DualRational> kappa{DualRational(0), DualRational(Rational(1), Rational(1))};
  auto m = moments_from_cumulants<DualRational>(kappa, 12);
  double worst = 0;
  for (int k = 1; k <= 6; ++k) {
    worst = std::max(worst, std::abs(static_cast<double>(m[2 * k - 1].re - catalan(k))));
    worst = std::max(worst, std::abs(static_cast<double>(m[2 * k - 1].inf - k * catalan(k))));
  }
  DualSequence kc{{0.3, -0.2}, {1.1, 0.4}, {-0.5, 0.7}, {0.25, 0.1}};
  return {{"moments", "semicircle kappa_2 = 1 + h gives C_k + kC_k h", worst, 0},
          {"moments", "M = R(Z(1 + M)) through degree 10", check_functional_equation(kc, 10), 1e-12}};
}

std::vector<CheckResult> subordination(const SolverConfig& cfg) {
  Atomic bern{{-1, 1}, {0.5, 0.5}};
  std::vector<std::pair<MeasureRepr, MeasureRepr>> pairs{
      {bern, bern}, {Semicircle{0, 1}, Semicircle{0.5, 2}}, {Atomic{{-2, 0, 1}, {0.2, 0.5, 0.3}}, Arcsine{0, 2}},
      {FreePoisson{1.5, 1}, Semicircle{0, 1}}, {CauchyLaw{0, 1}, bern}};
  double worst = 0;
  for (auto& [a, b] : pairs)
    for (Cplx z : probe_grid()) {
      SubordinationResult r = additive_omega(a, b, DualComplex(z, 1.0), cfg);
      worst = std::max({worst, r.residual_sub, r.residual_sum});
    }
  double dens = 0;
  const double eps = 1e-6;
  for (double x = -1.9; x <= 1.9; x += 0.1) {
    SubordinationResult r = additive_omega(bern, bern, DualComplex(Cplx(x, eps), 0.0), cfg);
    dens = std::max(dens, std::abs(-r.G3.re.imag() / M_PI - 1.0 / (M_PI * std::sqrt(4 - x * x))));
  }
  return {{"subordination", "|G1(w1) - G3|, |w1 + w2 - z - F3| on probe grid", worst, 1e-10},
          {"subordination", "Bernoulli boxplus Bernoulli density = arcsine", dens, 1e-5}};
}

std::vector<CheckResult> semicircle(const SolverConfig& cfg) {
  const double s = 0.7, t = 1.6;
  auto out = boxplus_b({Semicircle{0, s}, SemicircleBDerivative{s}}, {Semicircle{0, t}, SemicircleBDerivative{t}}, cfg);
  double worst = 0;
  for (Cplx z : probe_grid()) {
    const double v = s + t;
    Cplx r = std::sqrt(z - 2 * std::sqrt(v)) * std::sqrt(z + 2 * std::sqrt(v));
    Cplx G = 2.0 / (z + r);
    Cplx closed = (1.0 / v) * (1.0 / r - G);
    worst = std::max(worst, std::abs(out.g3(z) - 2.0 * closed));
  }
  return {{"semicircle", "boxplus_B of SBD{s}, SBD{t} = 2 SBD{s+t}", worst, 1e-8}};
}

std::vector<CheckResult> inf(const SolverConfig& cfg) {
  auto bern = make_measure(Atomic{{-1, 1}, {0.5, 0.5}});
  auto arc = make_measure(Arcsine{0, 1});
  double worst = 0;
  for (double t0 : {0.2, 0.5}) {
    worst = std::max(worst, infinitesimal_boxplus_check(linear_mixture_path(bern, arc),
                                                        semicircle_variance_path(0.3, 1), t0, Cplx(0.4, 0.6), 1e-4, cfg));
  }
  return {{"inf", "d/dt of gamma1(t) boxplus gamma2(t) = boxplus_B second coordinate", worst, 1e-6}};
}

std::vector<CheckResult> ans(const SolverConfig& cfg) {
  Atomic bern{{-1, 1}, {0.5, 0.5}};
  double worst = 0, trip = 0;
  struct Pair {
    MeasureRepr mu1, rho1, mu2, rho2;
  };
  std::vector<Pair> pairs{{bern, bern, bern, bern},
                          {Semicircle{0, 1}, Semicircle{0, 1}, Semicircle{0, 1}, Semicircle{0, 2}},
                          {Semicircle{0.5, 1}, Arcsine{0, 1}, Atomic{{0, 2}, {0.3, 0.7}}, Atomic{{-1, 0.5}, {1.0 / 3, 2.0 / 3}}}};
  for (const Pair& p : pairs) {
    worst = std::max(worst, check_theorem_ans(p.mu1, p.rho1, p.mu2, p.rho2, probe_grid(), cfg));
    trip = std::max({trip, rho_sigma_round_trip(p.rho1, probe_grid()), rho_sigma_round_trip(p.rho2, probe_grid())});
  }
  return {{"ans", "|h'_rho3 - g_sigma3| over builtin pairs", worst, 1e-8},
          {"ans", "rho -> sigma -> rho round trip", trip, 1e-6}};
}

std::vector<CheckResult> fock(const SolverConfig&) {
  double worst = 0;
  for (int N : {1, 2, 3})
    for (int n = 1; n <= 3; ++n) {
      Rational want = catalan(n);
      for (int i = 0; i < n; ++i) want *= Rational(N + 1, N);
      worst = std::max(worst, std::abs(static_cast<double>(fock_moment_exact(N, 2 * n) - want)));
    }
  double rel = check_L_relations(build_fock(2, 2, 3), 2, 2);
  return {{"fock", "psi_N(X_N^2n) = C_n (1 + 1/N)^n exactly, N <= 3, n <= 3", worst, 0},
          {"fock", "L_N relations on the safe subspace", rel, 0}};
}

std::vector<CheckResult> multiplicative(const SolverConfig& cfg) {
  double disc = 0, slit = 0;
  UnitCircleAtomic a{{0.2, 1.3}, {0.5, 0.5}}, b{{-0.4, 0.9, 2.0}, {0.3, 0.3, 0.4}};
  for (Cplx z : {Cplx(0.3, 0), Cplx(-0.2, 0.5), Cplx(0.6, -0.1)}) {
    auto r = multiplicative_omega(a, b, DualComplex(z, 1.0), MultDomain::Disc, cfg);
    disc = std::max({disc, r.residual_sub, r.residual_sum});
  }
  for (Cplx z : {Cplx(-1, 0.5), Cplx(-2, 0), Cplx(3, 1)}) {
    auto r = multiplicative_omega(Atomic{{1, 2}, {0.5, 0.5}}, FreePoisson{1.5, 1}, DualComplex(z, 1.0),
                                  MultDomain::SlitPlane, cfg);
    slit = std::max({slit, r.residual_sub, r.residual_sum});
  }
  double fd = 0;
  for (Cplx z : {Cplx(0.3, 0), Cplx(-0.2, 0.5)})
    fd = std::max(fd, rotating_boxtimes_check(a, {1.0, -0.5}, b, {0.3, 0.8, -1.0}, 0.4, z, 1e-4, cfg));
  return {{"multiplicative", "subordination residual on the disc", disc, 1e-10},
          {"multiplicative", "subordination residual on the slit plane", slit, 1e-10},
          {"multiplicative", "rotating families: psi_nu3 = d/dt psi", fd, 1e-6}};
}

std::vector<CheckResult> burgers(const SolverConfig& cfg) {
  std::vector<Cplx> grid{Cplx(0.2, 0.5), Cplx(-1, 1), Cplx(1.5, 0.8), Cplx(0, 2)};
  TypeBLaw atoms{Atomic{{-1, 1}, {0.5, 0.5}}, zero_second()};
  auto [c1, c2] = burgers_residual(atoms, 0.5, grid, 2e-3, 2e-3, cfg);
  auto [f1, f2] = burgers_residual(atoms, 0.5, grid, 1e-3, 1e-3, cfg);
  auto off = [](double r) { return std::max(0.0, std::abs(r - 4.0) - 0.5); };
  return {{"burgers", "G residual halving ratio in [3.5, 4.5]", off(c1 / f1), 0},
          {"burgers", "g residual halving ratio in [3.5, 4.5]", off(c2 / f2), 0}};
}

std::string format_alpha(double a) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%g", a);
  return buf;
}

std::vector<CheckResult> stable(const SolverConfig&) {
  std::vector<std::pair<StableSpec, double>> specs{
      {{3, 0, 1, 2}, 1e-6}, {{3, 0, std::polar(1.0, -M_PI / 4), 1.5}, 1e-6},
      {{4, 0, std::polar(1.0, 1.35 * M_PI), 0.7}, 1e-6}, {{2, 0, -1}, 1e-6}, {{5, 0, -1}, 1e-5}};
  std::vector<CheckResult> out;
  for (auto& [s, tol] : specs) {
    double worst = 0;
    for (Cplx z : {Cplx(0.5, 1), Cplx(-1, 0.5), Cplx(2, 2)}) worst = std::max(worst, stable_second_fd_check(s, z, 1e-4));
    std::string label = "case " + std::to_string(s.kase);
    if (s.kase == 3 || s.kase == 4) label += " alpha " + format_alpha(s.alpha);
    out.push_back({"stable", label + ": second coordinate vs q-difference", worst, tol});
  }
  return out;
}

std::vector<CheckResult> poisson(const SolverConfig&) {
  const double h = 1e-5;
  auto ref = poisson_moments_b(DualComplex(0.7, 0.3), DualComplex(1.2, -0.4), 6);
  auto u = poisson_b_family(1.2, -0.4, 0.7, 0.3, h, 6), d = poisson_b_family(1.2, -0.4, 0.7, 0.3, -h, 6);
  double worst = 0;
  for (int n = 0; n < 6; ++n) worst = std::max(worst, std::abs((u[n] - d[n]) / (2 * h) - ref[n].inf.real()));
  return {{"poisson", "d/dt of Poisson family moments = type B Poisson inf parts", worst, 1e-6}};
}

const std::map<std::string, std::function<std::vector<CheckResult>(const SolverConfig&)>>& suites() {
  static const std::map<std::string, std::function<std::vector<CheckResult>(const SolverConfig&)>> s{
      {"combinatorics", combinatorics}, {"moments", moments},   {"subordination", subordination},
      {"semicircle", semicircle},       {"inf", inf},           {"ans", ans},
      {"fock", fock},                   {"multiplicative", multiplicative}, {"burgers", burgers},
      {"stable", stable},               {"poisson", poisson}};
  return s;
}

}  // namespace

std::vector<std::string> suite_names() {
  std::vector<std::string> names{"all"};
  for (const auto& [k, v] : suites()) names.push_back(k);
  return names;
}

std::vector<CheckResult> run_suite(const std::string& suite, const SolverConfig& cfg) {
  if (suite == "all") {
    std::vector<CheckResult> all;
    for (const auto& [k, f] : suites()) {
      auto r = f(cfg);
      all.insert(all.end(), r.begin(), r.end());
    }
    return all;
  }
  auto it = suites().find(suite);
  if (it == suites().end()) throw Error(ErrorKind::ParseError, "unknown suite '" + suite + "'");
  return it->second(cfg);
}

}  // namespace freeconv::cli
