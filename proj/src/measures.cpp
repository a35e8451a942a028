#include "freeconv/measures.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>
#include <numeric>

namespace freeconv {

namespace {

constexpr double kPi = 3.14159265358979323846;
const Cplx kI(0.0, 1.0);

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

bool finite(Cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

CauchyTriple conj(const CauchyTriple& t) { return {std::conj(t.g), std::conj(t.dg), std::conj(t.d2g)}; }

CauchyTriple& operator+=(CauchyTriple& a, const CauchyTriple& b) {
  a.g += b.g;
  a.dg += b.dg;
  a.d2g += b.d2g;
  return a;
}

CauchyTriple operator*(double s, const CauchyTriple& t) { return {s * t.g, s * t.dg, s * t.d2g}; }

CauchyTriple atoms_triple(const std::vector<Cplx>& points, const std::vector<double>& weights, Cplx z) {
  CauchyTriple out;
  for (std::size_t k = 0; k < points.size(); ++k) {
    Cplx d = z - points[k];
    if (d == Cplx(0)) throw Error(ErrorKind::DomainError, "Cauchy transform evaluated at an atom");
    Cplx r = 1.0 / d;
    out.g += weights[k] * r;
    out.dg -= weights[k] * r * r;
    out.d2g += 2.0 * weights[k] * r * r * r;
  }
  return out;
}

// sqrt(u - a) sqrt(u + a): analytic off [-a, a] and ~ u at infinity.
Cplx two_sided_root(Cplx u, double a) { return std::sqrt(u - a) * std::sqrt(u + a); }

CauchyTriple semicircle_triple(const Semicircle& s, Cplx z) {
  const double t = s.variance;
  Cplx u = z - s.mean;
  Cplx r = two_sided_root(u, 2.0 * std::sqrt(t));
  // 2/(u + r) = (u - r)/(2t) without the cancellation at large |u|
  Cplx G = 2.0 / (u + r);
  return {G, -G / r, 2.0 / (r * r * r)};
}

CauchyTriple arcsine_triple(const Arcsine& a, Cplx z) {
  Cplx u = z - a.center;
  Cplx r = two_sided_root(u, a.radius);
  Cplx r3 = r * r * r;
  return {1.0 / r, -u / r3, (3.0 * u * u - r * r) / (r3 * r * r)};
}

CauchyTriple free_poisson_triple(const FreePoisson& p, Cplx z) {
  const double lam = p.rate;
  const double al = p.jump;
  const double A = al * std::pow(1.0 - std::sqrt(lam), 2);
  const double B = al * std::pow(1.0 + std::sqrt(lam), 2);
  Cplx s = std::sqrt(z - A) * std::sqrt(z - B);
  Cplx ds = (2.0 * z - (A + B)) / (2.0 * s);
  Cplx d2s = (1.0 - ds * ds) / s;
  // G = (z + c - s)/(2 al z) = 2/(z + c + s) with c = al (1 - lam)
  Cplx D = z + al * (1.0 - lam) + s;
  Cplx dD = 1.0 + ds;
  Cplx G = 2.0 / D;
  return {G, -G * dD / D, (-2.0 * d2s + 2.0 * G * dD * dD) / (D * D)};
}

// log(1 + q) and (1 + q) log(1 + q) - q, by series when q is small to avoid cancellation.
std::pair<Cplx, Cplx> log1p_parts(Cplx q) {
  if (std::abs(q) > 0.1) {
    Cplx L = std::log(1.0 + q);
    return {L, (1.0 + q) * L - q};
  }
  Cplx L = 0, M = 0, p = q;
  for (int n = 1; n <= 24; ++n) {
    double sign = n % 2 ? 1.0 : -1.0;
    L += sign * p / double(n);
    if (n >= 2) M -= sign * p / double(n * (n - 1));
    p *= q;
  }
  return {L, M};
}

// Exact integral of a piecewise linear density against 1/(z - x).
CauchyTriple grid_triple(const GridDensity& d, Cplx z) {
  CauchyTriple out;
  for (std::size_t i = 0; i + 1 < d.x.size(); ++i) {
    const double a = d.x[i];
    const double b = d.x[i + 1];
    const double k = (d.density[i + 1] - d.density[i]) / (b - a);
    const double rho = d.density[i];
    Cplx za = z - a;
    Cplx zb = z - b;
    Cplx q = (b - a) / zb;  // (z - a)/(z - b) = 1 + q
    Cplx L, M;
    if (std::abs(q) < 0.5) {
      std::tie(L, M) = log1p_parts(q);
    } else {
      L = std::log(za) - std::log(zb);  // keeps the branch cut on [a, b]
      M = za / zb * L - q;
    }
    Cplx ra = 1.0 / za;
    Cplx rb = 1.0 / zb;
    out.g += rho * L + k * zb * M;
    out.dg += -rho * (b - a) * ra * rb + k * (L - q);
    Cplx pz = rho + k * za;
    out.d2g += 2.0 * k * (ra - rb) + pz * (-ra * ra + rb * rb);
  }
  return out;
}

double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) total += 0.5 * (y[i] + y[i + 1]) * (x[i + 1] - x[i]);
  return total;
}

std::vector<Cplx> circle_points(const UnitCircleAtomic& u) {
  std::vector<Cplx> pts;
  for (double theta : u.angles) pts.push_back(std::polar(1.0, theta));
  return pts;
}

void check_weights(const std::vector<double>& points, const std::vector<double>& weights, const char* what) {
  if (points.size() != weights.size() || points.empty())
    throw Error(ErrorKind::InvalidSpec, std::string(what) + ": points and weights must be non-empty and match");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw Error(ErrorKind::InvalidSpec, std::string(what) + ": negative weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-10) throw Error(ErrorKind::InvalidSpec, std::string(what) + ": weights must sum to 1");
}

}  // namespace

Atomic dirac(double a) { return Atomic{{a}, {1.0}}; }

void validate(const MeasureRepr& mu) {
  std::visit(Overloaded{
                 [](const Atomic& a) { check_weights(a.points, a.weights, "atomic"); },
                 [](const Semicircle& s) {
                   if (!(s.variance > 0)) throw Error(ErrorKind::InvalidSpec, "semicircle variance must be positive");
                 },
                 [](const Arcsine& a) {
                   if (!(a.radius > 0)) throw Error(ErrorKind::InvalidSpec, "arcsine radius must be positive");
                 },
                 [](const CauchyLaw& c) {
                   if (!(c.scale > 0)) throw Error(ErrorKind::InvalidSpec, "Cauchy scale must be positive");
                 },
                 [](const FreePoisson& p) {
                   if (!(p.rate > 0) || !(p.jump > 0))
                     throw Error(ErrorKind::InvalidSpec, "free Poisson rate and jump must be positive");
                 },
                 [](const UnitCircleAtomic& u) { check_weights(u.angles, u.weights, "unit circle atomic"); },
                 [](const GridDensity& d) {
                   if (d.x.size() < 2 || d.x.size() != d.density.size())
                     throw Error(ErrorKind::InvalidSpec, "grid density needs matching x and density arrays");
                   for (std::size_t i = 0; i + 1 < d.x.size(); ++i)
                     if (!(d.x[i] < d.x[i + 1])) throw Error(ErrorKind::InvalidSpec, "grid must be increasing");
                   for (double v : d.density)
                     if (!(v >= 0)) throw Error(ErrorKind::InvalidSpec, "density must be nonnegative");
                   if (std::abs(trapezoid(d.x, d.density) - 1.0) > 1e-8)
                     throw Error(ErrorKind::InvalidSpec, "grid density must integrate to 1");
                 },
                 [](const Mixture& m) {
                   if (m.components.size() != m.weights.size() || m.components.empty())
                     throw Error(ErrorKind::InvalidSpec, "mixture components and weights must match");
                   double total = std::accumulate(m.weights.begin(), m.weights.end(), 0.0);
                   if (std::abs(total - 1.0) > 1e-10 ||
                       std::any_of(m.weights.begin(), m.weights.end(), [](double w) { return w < 0; }))
                     throw Error(ErrorKind::InvalidSpec, "mixture weights must be a probability vector");
                   for (const auto& c : m.components) validate(*c);
                 },
                 [](const AnalyticMeasure& a) {
                   if (!a.cauchy) throw Error(ErrorKind::InvalidSpec, "analytic measure without evaluator");
                 },
             },
             mu.v);
}

std::pair<double, double> support_hull(const MeasureRepr& mu) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return std::visit(
      Overloaded{
          [](const Atomic& a) {
            auto [lo, hi] = std::minmax_element(a.points.begin(), a.points.end());
            return std::pair{*lo, *hi};
          },
          [](const Semicircle& s) {
            double r = 2.0 * std::sqrt(s.variance);
            return std::pair{s.mean - r, s.mean + r};
          },
          [](const Arcsine& a) { return std::pair{a.center - a.radius, a.center + a.radius}; },
          [inf](const CauchyLaw&) { return std::pair{-inf, inf}; },
          [](const FreePoisson& p) {
            double lo = p.rate < 1.0 ? 0.0 : p.jump * std::pow(1.0 - std::sqrt(p.rate), 2);
            return std::pair{lo, p.jump * std::pow(1.0 + std::sqrt(p.rate), 2)};
          },
          [](const UnitCircleAtomic&) { return std::pair{-1.0, 1.0}; },
          [](const GridDensity& d) { return std::pair{d.x.front(), d.x.back()}; },
          [inf](const Mixture& m) {
            std::pair<double, double> out{inf, -inf};
            for (const auto& c : m.components) {
              auto [lo, hi] = support_hull(*c);
              out.first = std::min(out.first, lo);
              out.second = std::max(out.second, hi);
            }
            return out;
          },
          [](const AnalyticMeasure& a) { return std::pair{a.support_lo, a.support_hi}; },
      },
      mu.v);
}

CauchyTriple cauchy_triple(const MeasureRepr& mu, Cplx z) {
  if (z.imag() == 0.0 && !std::holds_alternative<UnitCircleAtomic>(mu.v)) {
    auto [lo, hi] = support_hull(mu);
    if (z.real() >= lo && z.real() <= hi)
      throw Error(ErrorKind::DomainError, "Cauchy transform evaluated on the support");
  }
  CauchyTriple out = std::visit(
      Overloaded{
          [&](const Atomic& a) {
            std::vector<Cplx> pts(a.points.begin(), a.points.end());
            return atoms_triple(pts, a.weights, z);
          },
          [&](const Semicircle& s) { return semicircle_triple(s, z); },
          [&](const Arcsine& a) { return arcsine_triple(a, z); },
          [&](const CauchyLaw& c) {
            Cplx shift = z.imag() > 0 ? kI * c.scale : -kI * c.scale;
            Cplx g = 1.0 / (z - c.location + shift);
            return CauchyTriple{g, -g * g, 2.0 * g * g * g};
          },
          [&](const FreePoisson& p) {
            if (z == Cplx(0)) throw Error(ErrorKind::DomainError, "free Poisson transform at 0");
            return free_poisson_triple(p, z);
          },
          [&](const UnitCircleAtomic& u) { return atoms_triple(circle_points(u), u.weights, z); },
          [&](const GridDensity& d) { return grid_triple(d, z); },
          [&](const Mixture& m) {
            CauchyTriple acc;
            for (std::size_t i = 0; i < m.components.size(); ++i) acc += m.weights[i] * cauchy_triple(*m.components[i], z);
            return acc;
          },
          [&](const AnalyticMeasure& a) { return z.imag() < 0 ? conj(a.cauchy(std::conj(z))) : a.cauchy(z); },
      },
      mu.v);
  if (!finite(out.g) || !finite(out.dg)) throw Error(ErrorKind::DomainError, "Cauchy transform is not finite here");
  return out;
}

DualComplex cauchy_transform(const MeasureRepr& mu, const DualComplex& z) {
  CauchyTriple t = cauchy_triple(mu, z.re);
  return {t.g, z.inf * t.dg};
}

ReciprocalH reciprocal_and_h(const MeasureRepr& mu, const DualComplex& z) {
  DualComplex G = cauchy_transform(mu, z);
  if (G.re == Cplx(0)) throw Error(ErrorKind::DegenerateValue, "Cauchy transform vanishes");
  DualComplex F = dual_inverse(G);
  return {F, F - z};
}

Cplx first_moment(const MeasureRepr& mu) {
  return std::visit(
      Overloaded{
          [](const Atomic& a) {
            double m = 0;
            for (std::size_t i = 0; i < a.points.size(); ++i) m += a.points[i] * a.weights[i];
            return Cplx(m);
          },
          [](const Semicircle& s) { return Cplx(s.mean); },
          [](const Arcsine& a) { return Cplx(a.center); },
          [](const CauchyLaw&) -> Cplx { throw Error(ErrorKind::UnsupportedRepr, "Cauchy law has no mean"); },
          [](const FreePoisson& p) { return Cplx(p.rate * p.jump); },
          [](const UnitCircleAtomic& u) {
            Cplx m = 0;
            for (std::size_t i = 0; i < u.angles.size(); ++i) m += u.weights[i] * std::polar(1.0, u.angles[i]);
            return m;
          },
          [](const GridDensity& d) {
            // exact for linear interpolation: int x p(x) over each piece
            double m = 0;
            for (std::size_t i = 0; i + 1 < d.x.size(); ++i) {
              double a = d.x[i], b = d.x[i + 1], pa = d.density[i], pb = d.density[i + 1];
              m += (b - a) * (pa * (2 * a + b) + pb * (a + 2 * b)) / 6.0;
            }
            return Cplx(m);
          },
          [](const Mixture& m) {
            Cplx acc = 0;
            for (std::size_t i = 0; i < m.components.size(); ++i) acc += m.weights[i] * first_moment(*m.components[i]);
            return acc;
          },
          [&](const AnalyticMeasure& a) {
            auto m = moments_from_cauchy([&](Cplx z) { return cauchy_triple(mu, z).g; }, 1);
            if (!m) throw Error(ErrorKind::UnsupportedRepr, "analytic measure " + a.name + " has no finite mean");
            return Cplx(*m);
          },
      },
      mu.v);
}

std::pair<Cplx, Cplx> psi_with_derivative(const MeasureRepr& mu, Cplx z) {
  auto direct = [&](const std::vector<Cplx>& pts, const std::vector<double>& w) {
    Cplx psi = 0, dpsi = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      Cplx d = 1.0 - z * pts[i];
      if (d == Cplx(0)) throw Error(ErrorKind::DomainError, "psi evaluated at a pole");
      psi += w[i] * z * pts[i] / d;
      dpsi += w[i] * pts[i] / (d * d);
    }
    return std::pair{psi, dpsi};
  };
  if (const auto* a = std::get_if<Atomic>(&mu.v)) return direct({a->points.begin(), a->points.end()}, a->weights);
  if (const auto* u = std::get_if<UnitCircleAtomic>(&mu.v)) return direct(circle_points(*u), u->weights);
  if (std::holds_alternative<CauchyLaw>(mu.v))
    throw Error(ErrorKind::UnsupportedRepr, "psi is only available for laws on the unit circle or the half-line");
  if (const auto* m = std::get_if<Mixture>(&mu.v)) {
    Cplx psi = 0, dpsi = 0;
    for (std::size_t i = 0; i < m->components.size(); ++i) {
      auto [p, dp] = psi_with_derivative(*m->components[i], z);
      psi += m->weights[i] * p;
      dpsi += m->weights[i] * dp;
    }
    return {psi, dpsi};
  }
  auto [lo, hi] = support_hull(mu);
  if (lo < 0.0) throw Error(ErrorKind::UnsupportedRepr, "psi needs a law on the unit circle or on [0, inf)");
  if (z == Cplx(0)) return {Cplx(0), first_moment(mu)};
  CauchyTriple t = cauchy_triple(mu, 1.0 / z);
  return {t.g / z - 1.0, -t.g / (z * z) - t.dg / (z * z * z)};
}

Cplx psi_transform(const MeasureRepr& mu, Cplx z) { return psi_with_derivative(mu, z).first; }

Cplx voiculescu_phi(const MeasureRepr& mu, Cplx z, int max_iter) {
  auto F_and_dF = [&](Cplx w) {
    CauchyTriple t = cauchy_triple(mu, w);
    return std::pair{1.0 / t.g, -t.dg / (t.g * t.g)};
  };
  Cplx w = z;
  auto [F, dF] = F_and_dF(w);
  double res = std::abs(F - z);
  for (int it = 0; it < max_iter; ++it) {
    if (res <= 1e-14 * std::max(1.0, std::abs(z))) return w - z;
    Cplx step = (F - z) / dF;
    double damp = 1.0;
    bool moved = false;
    for (int k = 0; k < 40; ++k, damp *= 0.5) {
      Cplx trial = w - damp * step;
      if (trial.imag() <= 0.0) continue;
      auto [Ft, dFt] = F_and_dF(trial);
      double rt = std::abs(Ft - z);
      if (rt < res || k == 39) {
        w = trial;
        F = Ft;
        dF = dFt;
        res = rt;
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  if (res <= 1e-11 * std::max(1.0, std::abs(z))) return w - z;
  throw Error(ErrorKind::NoConvergence, "Voiculescu transform inversion did not converge");
}

GridDensity stieltjes_invert(const std::function<Cplx(Cplx)>& G, const std::vector<double>& grid, double eps,
                             bool richardson) {
  if (!(eps > 0)) throw Error(ErrorKind::DomainError, "Stieltjes inversion needs eps > 0");
  GridDensity out;
  out.x = grid;
  out.density.reserve(grid.size());
  for (double x : grid) {
    double d = -G(Cplx(x, eps)).imag() / kPi;
    if (richardson) d = 2.0 * (-G(Cplx(x, eps / 2)).imag() / kPi) - d;
    out.density.push_back(d);
  }
  return out;
}

std::optional<double> moments_from_cauchy(const std::function<Cplx(Cplx)>& G, int order) {
  if (order != 1 && order != 2) throw Error(ErrorKind::DomainError, "moment order must be 1 or 2");
  double m1 = 0.0;
  if (order == 2) {
    auto first = moments_from_cauchy(G, 1);
    if (!first) return std::nullopt;
    m1 = *first;
  }
  // Along z = iy the error terms alternate between imaginary (odd powers of 1/y)
  // and real (even powers); the real part is extrapolated in 1/y^2, while the
  // imaginary part must decay when the next moment exists.
  auto probe = [&](double y) {
    Cplx z(0.0, y);
    Cplx g = G(z);
    return order == 1 ? z * (z * g - 1.0) : z * (z * z * g - z - m1);
  };
  const double ys[3] = {1e3, 2e3, 4e3};
  Cplx f[3];
  for (int i = 0; i < 3; ++i) {
    f[i] = probe(ys[i]);
    if (!finite(f[i])) return std::nullopt;
  }
  double e1 = (4.0 * f[1].real() - f[0].real()) / 3.0;
  double e2 = (4.0 * f[2].real() - f[1].real()) / 3.0;
  if (std::abs(e1 - e2) > 1e-4 * std::max(1.0, std::abs(e2))) return std::nullopt;
  if (std::abs(f[2].imag()) > 0.5 * std::abs(f[0].imag()) + 1e-6) return std::nullopt;
  return e2;
}

// ---------------------------------------------------------------------------

void validate(const SecondCoordRepr& nu) {
  std::visit(Overloaded{
                 [](const SignedAtomic& s) {
                   if (s.points.size() != s.weights.size())
                     throw Error(ErrorKind::InvalidSpec, "signed atomic points and weights must match");
                   double total = 0, scale = 0;
                   for (double w : s.weights) {
                     total += w;
                     scale += std::abs(w);
                   }
                   if (std::abs(total) > 1e-12 * std::max(1.0, scale))
                     throw Error(ErrorKind::InvalidSpec, "signed atomic weights must sum to 0");
                 },
                 [](const DerivativeOfMeasure& d) {
                   if (!d.base || !(d.mass >= 0)) throw Error(ErrorKind::InvalidSpec, "derivative needs a base and mass >= 0");
                   validate(*d.base);
                 },
                 [](const DifferenceOfMeasures& d) {
                   if (!d.plus || !d.minus) throw Error(ErrorKind::InvalidSpec, "difference needs two measures");
                   validate(*d.plus);
                   validate(*d.minus);
                 },
                 [](const SemicircleBDerivative& s) {
                   if (!(s.variance > 0)) throw Error(ErrorKind::InvalidSpec, "variance must be positive");
                 },
                 [](const CauchyBDerivative& c) {
                   if (!(c.scale > 0)) throw Error(ErrorKind::InvalidSpec, "scale must be positive");
                 },
                 [](const ScaledSecond& s) {
                   if (!s.base) throw Error(ErrorKind::InvalidSpec, "scaled second coordinate without base");
                   validate(*s.base);
                 },
                 [](const SecondEvaluator& e) {
                   if (!e.eval) throw Error(ErrorKind::InvalidSpec, "second coordinate evaluator missing");
                 },
             },
             nu.v);
}

std::pair<Cplx, Cplx> g_with_derivative(const SecondCoordRepr& nu, Cplx z) {
  return std::visit(
      Overloaded{
          [&](const SignedAtomic& s) {
            Cplx g = 0, dg = 0;
            for (std::size_t i = 0; i < s.points.size(); ++i) {
              Cplx d = z - s.points[i];
              if (d == Cplx(0)) throw Error(ErrorKind::DomainError, "second coordinate evaluated at an atom");
              g += s.weights[i] / d;
              dg -= s.weights[i] / (d * d);
            }
            return std::pair{g, dg};
          },
          [&](const DerivativeOfMeasure& d) {
            CauchyTriple t = cauchy_triple(*d.base, z);
            return std::pair{-d.mass * t.dg, -d.mass * t.d2g};
          },
          [&](const DifferenceOfMeasures& d) {
            CauchyTriple p = cauchy_triple(*d.plus, z);
            CauchyTriple m = cauchy_triple(*d.minus, z);
            return std::pair{p.g - m.g, p.dg - m.dg};
          },
          [&](const SemicircleBDerivative& s) {
            const double t = s.variance;
            if (z.imag() == 0.0 && std::abs(z.real()) <= 2.0 * std::sqrt(t))
              throw Error(ErrorKind::DomainError, "second coordinate evaluated on the support");
            Cplx r = two_sided_root(z, 2.0 * std::sqrt(t));
            CauchyTriple gam = semicircle_triple(Semicircle{0.0, t}, z);
            return std::pair{(1.0 / r - gam.g) / t, (-z / (r * r * r) - gam.dg) / t};
          },
          [&](const CauchyBDerivative& c) {
            if (z.imag() == 0.0) throw Error(ErrorKind::DomainError, "Cauchy second coordinate on the real line");
            const double t = c.scale;
            Cplx it = z.imag() > 0 ? kI * t : -kI * t;
            Cplx d = z + it;
            return std::pair{-it / (d * d), 2.0 * it / (d * d * d)};
          },
          [&](const ScaledSecond& s) {
            auto [g, dg] = g_with_derivative(*s.base, z);
            return std::pair{s.factor * g, s.factor * dg};
          },
          [&](const SecondEvaluator& e) {
            if (z.imag() < 0) {
              auto [g, dg] = e.eval(std::conj(z));
              return std::pair{std::conj(g), std::conj(dg)};
            }
            return e.eval(z);
          },
      },
      nu.v);
}

DualComplex g_second(const SecondCoordRepr& nu, const DualComplex& z) {
  auto [g, dg] = g_with_derivative(nu, z.re);
  return {g, z.inf * dg};
}

DualComplex dual_cauchy(const TypeBLaw& law, const DualComplex& z) {
  CauchyTriple t = cauchy_triple(law.first, z.re);
  Cplx g = g_with_derivative(law.second, z.re).first;
  return {t.g, z.inf * t.dg + g};
}

}  // namespace freeconv
