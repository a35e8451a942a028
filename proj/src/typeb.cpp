#include "freeconv/typeb.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "freeconv/errors.hpp"
#include "freeconv/fixed_point.hpp"
#include "freeconv/nc.hpp"

namespace freeconv {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

const Cplx kI(0.0, 1.0);

// Merge equal points and sort.
std::pair<std::vector<double>, std::vector<double>> merged_atoms(const std::vector<double>& pts,
                                                                 const std::vector<double>& wts) {
  std::map<double, double> acc;
  for (std::size_t k = 0; k < pts.size(); ++k) acc[pts[k]] += wts[k];
  std::vector<double> x, w;
  for (auto [p, q] : acc) {
    if (q == 0.0) continue;
    x.push_back(p);
    w.push_back(q);
  }
  return {x, w};
}

// Root of an increasing function on (a, b) with f(a+) < 0 < f(b-).
template <class F>
double bisect(F f, double a, double b) {
  for (int it = 0; it < 400; ++it) {
    double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;
    (f(m) < 0 ? a : b) = m;
  }
  return 0.5 * (a + b);
}

std::pair<double, double> second_hull(const SecondCoordRepr& nu) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return std::visit(
      Overloaded{
          [](const SignedAtomic& s) {
            if (s.points.empty()) return std::pair{0.0, 0.0};
            auto [lo, hi] = std::minmax_element(s.points.begin(), s.points.end());
            return std::pair{*lo, *hi};
          },
          [](const DerivativeOfMeasure& d) { return support_hull(*d.base); },
          [](const DifferenceOfMeasures& d) {
            auto a = support_hull(*d.plus);
            auto b = support_hull(*d.minus);
            return std::pair{std::min(a.first, b.first), std::max(a.second, b.second)};
          },
          [](const SemicircleBDerivative& s) {
            double r = 2.0 * std::sqrt(s.variance);
            return std::pair{-r, r};
          },
          [](const CauchyBDerivative&) { return std::pair{-inf, inf}; },
          [](const ScaledSecond& s) { return second_hull(*s.base); },
          [](const SecondEvaluator&) { return std::pair{-inf, inf}; },
      },
      nu.v);
}

double hull_radius(std::pair<double, double> h) { return std::max(std::abs(h.first), std::abs(h.second)); }

// Coefficients c_n of f(z) = sum_{n>=0} c_n z^{-n-1}, n = 1..order, by the trapezoid rule on |z| = R.
std::vector<Cplx> contour_coefficients(const std::function<Cplx(Cplx)>& f, double R, int order, int N = 128) {
  std::vector<Cplx> c(order, Cplx(0));
  for (int k = 0; k < N; ++k) {
    Cplx z = std::polar(R, 2.0 * std::numbers::pi * (k + 0.5) / N);
    Cplx v = f(z) * z;
    for (int n = 1; n <= order; ++n) {
      v *= z;
      c[n - 1] += v;
    }
  }
  for (auto& x : c) x /= double(N);
  return c;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

DualComplex ConvolutionOutput::dual_cauchy(const DualComplex& Z) const {
  DualComplex G = G3(Z);
  return {G.re, G.inf + g3(Z.re)};
}

std::string describe(const MeasureRepr& mu) {
  return std::visit(
      Overloaded{
          [](const Atomic& a) { return "atomic(" + std::to_string(a.points.size()) + " atoms)"; },
          [](const Semicircle& s) { return "semicircle(" + fmt(s.mean) + "," + fmt(s.variance) + ")"; },
          [](const Arcsine& a) { return "arcsine(" + fmt(a.center) + "," + fmt(a.radius) + ")"; },
          [](const CauchyLaw& c) { return "cauchy(" + fmt(c.location) + "," + fmt(c.scale) + ")"; },
          [](const FreePoisson& p) { return "free_poisson(" + fmt(p.rate) + "," + fmt(p.jump) + ")"; },
          [](const UnitCircleAtomic& u) { return "circle_atomic(" + std::to_string(u.angles.size()) + " atoms)"; },
          [](const GridDensity& g) { return "grid(" + std::to_string(g.x.size()) + " knots)"; },
          [](const Mixture& m) { return "mixture(" + std::to_string(m.components.size()) + ")"; },
          [](const AnalyticMeasure& a) { return a.name; },
      },
      mu.v);
}

std::string describe(const SecondCoordRepr& nu) {
  return std::visit(
      Overloaded{
          [](const SignedAtomic& s) { return "signed_atomic(" + std::to_string(s.points.size()) + " atoms)"; },
          [](const DerivativeOfMeasure& d) { return "deriv(" + describe(*d.base) + "," + fmt(d.mass) + ")"; },
          [](const DifferenceOfMeasures& d) { return "diff(" + describe(*d.plus) + "," + describe(*d.minus) + ")"; },
          [](const SemicircleBDerivative& s) { return "semicircle_b(" + fmt(s.variance) + ")"; },
          [](const CauchyBDerivative& c) { return "cauchy_b(" + fmt(c.scale) + ")"; },
          [](const ScaledSecond& s) { return fmt(s.factor) + "*" + describe(*s.base); },
          [](const SecondEvaluator& e) { return e.name; },
      },
      nu.v);
}

ConvolutionOutput boxplus_b(const TypeBLaw& p1, const TypeBLaw& p2, const SolverConfig& cfg) {
  ConvolutionOutput out;
  auto a = std::make_shared<const TypeBLaw>(p1);
  auto b = std::make_shared<const TypeBLaw>(p2);
  out.G3 = [a, b, cfg](const DualComplex& Z) { return additive_omega(a->first, b->first, Z, cfg).G3; };
  out.g3 = [a, b, cfg](Cplx z) {
    SubordinationResult s = additive_omega(a->first, b->first, DualComplex(z, 1.0), cfg);
    Cplx g1 = g_with_derivative(a->second, s.omega1.re).first;
    Cplx g2 = g_with_derivative(b->second, s.omega2.re).first;
    return g1 * s.omega1.inf + g2 * s.omega2.inf;
  };
  auto h1 = support_hull(p1.first);
  auto h2 = support_hull(p2.first);
  out.hull = {h1.first + h2.first, h1.second + h2.second};
  out.provenance = {"boxplus_b",
                    {describe(p1.first), describe(p1.second), describe(p2.first), describe(p2.second)},
                    cfg};
  return out;
}

TypeBLaw as_law(const ConvolutionOutput& out) {
  auto G3 = out.G3;
  auto g3 = out.g3;
  AnalyticMeasure mu{"result of " + out.provenance.operation,
                     [G3](Cplx z) {
                       DualComplex v = G3(DualComplex(z, 1.0));
                       const double h = 1e-5 * std::max(1.0, std::abs(z));
                       Cplx d2 = (G3(DualComplex(z + h, 1.0)).inf - G3(DualComplex(z - h, 1.0)).inf) / (2.0 * h);
                       return CauchyTriple{v.re, v.inf, d2};
                     },
                     out.hull.first, out.hull.second};
  SecondEvaluator nu{"second coordinate of " + out.provenance.operation, [g3](Cplx z) {
                       const double h = 1e-5 * std::max(1.0, std::abs(z));
                       return std::pair{g3(z), (g3(z + h) - g3(z - h)) / (2.0 * h)};
                     }};
  return {mu, nu};
}

// ---------------------------------------------------------------------------

PsiSecond zero_psi_second() {
  return {"zero", [](Cplx) { return std::pair{Cplx(0), Cplx(0)}; }};
}

PsiSecond psi_second_from_g(const SecondCoordRepr& nu) {
  auto n = std::make_shared<const SecondCoordRepr>(nu);
  return {"psi of " + describe(nu), [n](Cplx z) {
            if (z == Cplx(0)) return std::pair{Cplx(0), Cplx(0)};
            Cplx u = 1.0 / z;
            auto [g, dg] = g_with_derivative(*n, u);
            return std::pair{g * u, -g * u * u - dg * u * u * u};
          }};
}

UnitCircleAtomic rotating_family(const UnitCircleAtomic& at0, const std::vector<double>& rates, double t) {
  if (rates.size() != at0.angles.size()) throw Error(ErrorKind::InvalidSpec, "one rate per atom required");
  UnitCircleAtomic out = at0;
  for (std::size_t k = 0; k < rates.size(); ++k) out.angles[k] += rates[k] * t;
  return out;
}

PsiSecond rotating_family_derivative(const UnitCircleAtomic& at_t, const std::vector<double>& rates) {
  if (rates.size() != at_t.angles.size()) throw Error(ErrorKind::InvalidSpec, "one rate per atom required");
  return {"rotating family derivative", [at_t, rates](Cplx z) {
            // d/dt of z zeta/(1 - z zeta) with zeta' = i c zeta is i c z zeta/(1 - z zeta)^2.
            Cplx v = 0, dv = 0;
            for (std::size_t k = 0; k < rates.size(); ++k) {
              Cplx zeta = std::polar(1.0, at_t.angles[k]);
              Cplx d = 1.0 - z * zeta;
              Cplx c = at_t.weights[k] * kI * rates[k] * zeta;
              v += c * z / (d * d);
              dv += c * (1.0 + z * zeta) / (d * d * d);
            }
            return std::pair{v, dv};
          }};
}

MultConvolutionOutput boxtimes_b(const MultTypeBLaw& p1, const MultTypeBLaw& p2, MultDomain domain,
                                 const SolverConfig& cfg) {
  auto a = std::make_shared<const MultTypeBLaw>(p1);
  auto b = std::make_shared<const MultTypeBLaw>(p2);
  MultConvolutionOutput out;
  out.psi3 = [a, b, domain, cfg](Cplx z) {
    return multiplicative_omega(a->first, b->first, DualComplex(z, 0.0), domain, cfg).G3.re;
  };
  out.psi_nu3 = [a, b, domain, cfg](Cplx z) {
    SubordinationResult s = multiplicative_omega(a->first, b->first, DualComplex(z, 1.0), domain, cfg);
    auto term = [](const PsiSecond& nu, const DualComplex& om) {
      if (om.re == Cplx(0)) return nu.psi(Cplx(0)).second * om.inf;  // psi_nu(w)/w -> psi_nu'(0)
      return nu.psi(om.re).first / om.re * om.inf;
    };
    return z * (term(a->second, s.omega1) + term(b->second, s.omega2));
  };
  out.provenance = {"boxtimes_b", {describe(p1.first), p1.second.name, describe(p2.first), p2.second.name}, cfg};
  return out;
}

double rotating_boxtimes_check(const UnitCircleAtomic& a0, const std::vector<double>& rates_a,
                               const UnitCircleAtomic& b0, const std::vector<double>& rates_b, double t0, Cplx z,
                               double step, const SolverConfig& cfg) {
  UnitCircleAtomic a = rotating_family(a0, rates_a, t0);
  UnitCircleAtomic b = rotating_family(b0, rates_b, t0);
  MultConvolutionOutput out = boxtimes_b({a, rotating_family_derivative(a, rates_a)},
                                         {b, rotating_family_derivative(b, rates_b)}, MultDomain::Disc, cfg);
  auto psi_at = [&](double t) {
    return multiplicative_omega(rotating_family(a0, rates_a, t), rotating_family(b0, rates_b, t),
                                DualComplex(z, 0.0), MultDomain::Disc, cfg)
        .G3.re;
  };
  Cplx fd = (psi_at(t0 + step) - psi_at(t0 - step)) / (2.0 * step);
  return std::abs(out.psi_nu3(z) - fd);
}

// ---------------------------------------------------------------------------

std::function<DualComplex(const DualComplex&)> cfree_boxplus(const MeasureRepr& mu1, const MeasureRepr& rho1,
                                                              const MeasureRepr& mu2, const MeasureRepr& rho2,
                                                              const SolverConfig& cfg) {
  auto m1 = std::make_shared<const MeasureRepr>(mu1);
  auto m2 = std::make_shared<const MeasureRepr>(mu2);
  auto r1 = std::make_shared<const MeasureRepr>(rho1);
  auto r2 = std::make_shared<const MeasureRepr>(rho2);
  return [=](const DualComplex& Z) {
    SubordinationResult s = additive_omega(*m1, *m2, DualComplex(Z.re, 1.0), cfg);
    DualComplex O1{s.omega1.re, Z.inf * s.omega1.inf};
    DualComplex O2{s.omega2.re, Z.inf * s.omega2.inf};
    return Z + reciprocal_and_h(*r1, O1).h + reciprocal_and_h(*r2, O2).h;
  };
}

MeasureRepr rho_from_sigma(const MeasureRepr& base, double mass) {
  validate(base);
  if (mass < 0) throw Error(ErrorKind::InvalidSpec, "sigma must be a positive measure");
  if (mass == 0) return dirac(0.0);
  if (const auto* s = std::get_if<Semicircle>(&base.v); s && s->mean == 0.0 && s->variance == mass)
    return Semicircle{0.0, mass};  // z - t G_t = F_t for the semicircle of variance t
  if (const auto* a = std::get_if<Atomic>(&base.v)) {
    auto [x, w] = merged_atoms(a->points, a->weights);
    auto F = [&](double t) {
      double s = t;
      for (std::size_t k = 0; k < x.size(); ++k) s -= mass * w[k] / (t - x[k]);
      return s;
    };
    auto dF = [&](double t) {
      double s = 1.0;
      for (std::size_t k = 0; k < x.size(); ++k) s += mass * w[k] / ((t - x[k]) * (t - x[k]));
      return s;
    };
    const double pad = std::sqrt(mass) + 1.0;
    std::vector<double> ends{std::min(x.front(), 0.0) - pad};
    ends.insert(ends.end(), x.begin(), x.end());
    ends.push_back(std::max(x.back(), 0.0) + pad);
    Atomic out;
    for (std::size_t k = 0; k + 1 < ends.size(); ++k) {
      double r = bisect(F, ends[k], ends[k + 1]);
      out.points.push_back(r);
      out.weights.push_back(1.0 / dF(r));
    }
    return out;
  }
  auto b = std::make_shared<const MeasureRepr>(base);
  auto hull = support_hull(base);
  AnalyticMeasure rho{"rho of " + describe(base) + " mass " + fmt(mass),
                      [b, mass](Cplx z) {
                        CauchyTriple t = cauchy_triple(*b, z);
                        Cplx F = z - mass * t.g;
                        Cplx dF = 1.0 - mass * t.dg;
                        Cplx d2F = -mass * t.d2g;
                        return CauchyTriple{1.0 / F, -dF / (F * F), (2.0 * dF * dF - F * d2F) / (F * F * F)};
                      },
                      std::min(hull.first, 0.0) - std::sqrt(mass), std::max(hull.second, 0.0) + std::sqrt(mass)};
  return rho;
}

DerivativeOfMeasure sigma_from_rho(const MeasureRepr& rho) {
  validate(rho);
  if (const auto* s = std::get_if<Semicircle>(&rho.v)) {
    if (s->mean != 0.0) throw Error(ErrorKind::NonCentered, "rho must have mean zero");
    return {make_measure(Semicircle{0.0, s->variance}), s->variance};
  }
  if (const auto* a = std::get_if<Atomic>(&rho.v)) {
    auto [x, w] = merged_atoms(a->points, a->weights);
    double m1 = 0, m2 = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      m1 += w[k] * x[k];
      m2 += w[k] * x[k] * x[k];
    }
    if (std::abs(m1) > 1e-12 * std::max(1.0, std::sqrt(m2)))
      throw Error(ErrorKind::NonCentered, "rho must have mean zero");
    if (x.size() == 1) return {make_measure(dirac(0.0)), 0.0};
    // Zeros of G_rho, one between consecutive atoms; mass -1/G_rho' there.
    auto G = [&](double t) {
      double s = 0;
      for (std::size_t k = 0; k < x.size(); ++k) s += w[k] / (t - x[k]);
      return -s;  // increasing, for bisect
    };
    Atomic base;
    double total = 0;
    for (std::size_t k = 0; k + 1 < x.size(); ++k) {
      double y = bisect(G, x[k], x[k + 1]);
      double dG = 0;
      for (std::size_t j = 0; j < x.size(); ++j) dG -= w[j] / ((y - x[j]) * (y - x[j]));
      base.points.push_back(y);
      base.weights.push_back(-1.0 / dG);
      total += -1.0 / dG;
    }
    for (auto& v : base.weights) v /= total;
    return {make_measure(std::move(base)), total};
  }
  auto r = std::make_shared<const MeasureRepr>(rho);
  auto G = [r](Cplx z) { return cauchy_triple(*r, z).g; };
  auto m1 = moments_from_cauchy(G, 1);
  auto m2 = moments_from_cauchy(G, 2);
  if (!m1 || !m2) throw Error(ErrorKind::InfiniteVariance, "rho has no finite second moment");
  if (std::abs(*m1) > 1e-6 * std::max(1.0, std::sqrt(*m2)))
    throw Error(ErrorKind::NonCentered, "rho must have mean zero");
  const double m = *m2;
  if (m <= 0) return {make_measure(dirac(0.0)), 0.0};
  auto hull = support_hull(rho);
  AnalyticMeasure base{"sigma of " + describe(rho),
                       [r, m](Cplx z) {
                         // G_base = -h_rho/m with h = 1/G - z
                         CauchyTriple t = cauchy_triple(*r, z);
                         Cplx h = 1.0 / t.g - z;
                         Cplx dh = -t.dg / (t.g * t.g) - 1.0;
                         Cplx d2h = (2.0 * t.dg * t.dg - t.g * t.d2g) / (t.g * t.g * t.g);
                         return CauchyTriple{-h / m, -dh / m, -d2h / m};
                       },
                       hull.first, hull.second};
  return {make_measure(std::move(base)), m};
}

double check_theorem_ans(const MeasureRepr& mu1, const MeasureRepr& rho1, const MeasureRepr& mu2,
                         const MeasureRepr& rho2, const std::vector<Cplx>& grid, const SolverConfig& cfg) {
  auto F3 = cfree_boxplus(mu1, rho1, mu2, rho2, cfg);
  ConvolutionOutput out = boxplus_b({mu1, sigma_from_rho(rho1)}, {mu2, sigma_from_rho(rho2)}, cfg);
  double worst = 0;
  for (Cplx z : grid) {
    Cplx dh = F3(DualComplex(z, 1.0)).inf - 1.0;
    worst = std::max(worst, std::abs(dh - out.g3(z)));
  }
  return worst;
}

double rho_sigma_round_trip(const MeasureRepr& rho, const std::vector<Cplx>& grid) {
  DerivativeOfMeasure s = sigma_from_rho(rho);
  MeasureRepr back = rho_from_sigma(*s.base, s.mass);
  double worst = 0;
  for (Cplx z : grid) worst = std::max(worst, std::abs(cauchy_triple(rho, z).g - cauchy_triple(back, z).g));
  return worst;
}

// ---------------------------------------------------------------------------

SemigroupValue ns_semigroup_b(const TypeBLaw& p, double t, const DualComplex& Z, const SolverConfig& cfg) {
  if (!(t >= 1.0)) throw Error(ErrorKind::DomainError, "semigroup power needs t >= 1");
  if (Z.re.imag() < 0) {
    SemigroupValue v = ns_semigroup_b(p, t, conj(Z), cfg);
    return {conj(v.G), std::conj(v.g), conj(v.omega)};
  }
  const Cplx z(Z.re.real(), std::max(Z.re.imag(), cfg.eps_im));
  const double c = 1.0 - 1.0 / t;
  Cplx w = z;
  if (t > 1.0) {
    auto solve = [&](Cplx zz, Cplx w0) {
      auto map = [&](Cplx u, Cplx& Tu, Cplx& dT) {
        CauchyTriple g = cauchy_triple(p.first, u);
        Tu = zz / t + c / g.g;
        dT = -c * g.dg / (g.g * g.g);
      };
      auto admissible = [](Cplx u) { return u.imag() > 0; };
      return detail::solve_fixed_point(map, admissible, w0, cfg.tol, cfg.max_iter, "semigroup subordination").w;
    };
    w = Cplx(z.real(), 2.0 * std::max(1.0, z.imag()));
    if (z.imag() >= 0.5) {
      w = solve(z, w);
    } else {
      for (double y = 1.0;; y = std::max(z.imag(), 0.25 * y)) {
        w = solve(Cplx(z.real(), y), w);
        if (y <= z.imag()) break;
      }
    }
  }
  CauchyTriple g = cauchy_triple(p.first, w);
  Cplx dF = -g.dg / (g.g * g.g);
  Cplx dw = (1.0 / t) / (1.0 - c * dF);
  SemigroupValue out;
  out.omega = {w, Z.inf * dw};
  out.G = {g.g, Z.inf * g.dg * dw};
  out.g = t * g_with_derivative(p.second, w).first * dw;
  return out;
}

LawPath linear_mixture_path(MeasurePtr mu, MeasurePtr nu) {
  return {[mu, nu](double t) { return MeasureRepr(Mixture{{mu, nu}, {1.0 - t, t}}); },
          [mu, nu](double) { return SecondCoordRepr(DifferenceOfMeasures{nu, mu}); }};
}

LawPath semicircle_variance_path(double mean, double v0) {
  return {[mean, v0](double t) { return MeasureRepr(Semicircle{mean, v0 + t}); },
          [mean, v0](double t) {
            SecondCoordRepr d = SemicircleBDerivative{v0 + t};
            if (mean == 0.0) return d;
            return SecondCoordRepr(SecondEvaluator{
                "shifted semicircle_b(" + fmt(v0 + t) + ")", [d, mean](Cplx z) { return g_with_derivative(d, z - mean); }});
          }};
}

LawPath constant_path(MeasurePtr mu) {
  return {[mu](double) { return *mu; }, [](double) { return zero_second(); }};
}

double infinitesimal_boxplus_check(const LawPath& p1, const LawPath& p2, double t0, Cplx z, double step,
                                   const SolverConfig& cfg) {
  ConvolutionOutput out = boxplus_b({p1.at(t0), p1.derivative(t0)}, {p2.at(t0), p2.derivative(t0)}, cfg);
  auto G_at = [&](double t) { return additive_omega(p1.at(t), p2.at(t), DualComplex(z, 0.0), cfg).G3.re; };
  Cplx fd = (G_at(t0 + step) - G_at(t0 - step)) / (2.0 * step);
  return std::abs(out.g3(z) - fd);
}

std::vector<DualComplex> dual_moments(const TypeBLaw& p, int order) {
  double r = std::max(hull_radius(support_hull(p.first)), hull_radius(second_hull(p.second)));
  if (!std::isfinite(r)) throw Error(ErrorKind::UnsupportedRepr, "dual moments need compact support");
  const double R = 1.5 * r + 0.5;
  auto m = contour_coefficients([&](Cplx z) { return cauchy_triple(p.first, z).g; }, R, order);
  auto n = contour_coefficients([&](Cplx z) { return g_with_derivative(p.second, z).first; }, R, order);
  std::vector<DualComplex> out;
  for (int k = 0; k < order; ++k) out.emplace_back(m[k], n[k]);
  return out;
}

double moment_consistency_check(const TypeBLaw& p1, const TypeBLaw& p2, int order, const SolverConfig& cfg) {
  auto m1 = dual_moments(p1, order);
  auto m2 = dual_moments(p2, order);
  auto k1 = cumulants_from_moments<DualComplex>(m1, order);
  auto k2 = cumulants_from_moments<DualComplex>(m2, order);
  std::vector<DualComplex> k3;
  for (int k = 0; k < order; ++k) k3.push_back(k1[k] + k2[k]);
  auto expected = moments_from_cumulants<DualComplex>(k3, order);

  ConvolutionOutput out = boxplus_b(p1, p2, cfg);
  double r = std::max(hull_radius(out.hull),
                      hull_radius(second_hull(p1.second)) + hull_radius(second_hull(p2.second)));
  if (!std::isfinite(r)) throw Error(ErrorKind::UnsupportedRepr, "dual moments need compact support");
  const double R = 1.5 * r + 0.5;
  auto G = contour_coefficients([&](Cplx z) { return out.G3(DualComplex(z, 0.0)).re; }, R, order);
  auto g = contour_coefficients(out.g3, R, order);
  double worst = 0;
  for (int k = 0; k < order; ++k) {
    double scale = std::max(1.0, abs_max(expected[k]));
    worst = std::max(worst, std::abs(G[k] - expected[k].re) / scale);
    worst = std::max(worst, std::abs(g[k] - expected[k].inf) / scale);
  }
  return worst;
}

}  // namespace freeconv
