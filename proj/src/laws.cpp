#include "freeconv/laws.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "freeconv/errors.hpp"

namespace freeconv {

namespace {

constexpr double kPi = std::numbers::pi;

struct PhiValue {
  Cplx v, d1, d2;
};

PhiValue phi_all(const StableSpec& s, Cplx z) {
  switch (s.kase) {
    case 1:
      return {Cplx(s.a), 0.0, 0.0};
    case 2:
      return {s.a + Cplx(0, 1) * s.b, 0.0, 0.0};
    case 3:
    case 4: {
      const double e = 1.0 - s.alpha;
      Cplx p = std::pow(z, e);
      return {s.a + s.b * p, s.b * e * p / z, s.b * e * (e - 1.0) * p / (z * z)};
    }
    case 5:
      return {s.a + s.b * std::log(z), s.b / z, -s.b / (z * z)};
    default:
      throw Error(ErrorKind::InvalidSpec, "stable case must be 1..5");
  }
}

double binom(int n, int k) {
  double r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double spec_alpha(const StableSpec& s) { return (s.kase == 3 || s.kase == 4) ? s.alpha : 1.0; }

}  // namespace

void validate(const StableSpec& s) {
  const double eps = 1e-12;
  if (s.kase < 1 || s.kase > 5) throw Error(ErrorKind::InvalidSpec, "stable case must be 1..5");
  if (s.a != 0.0) throw Error(ErrorKind::InvalidSpec, "only a = 0 is supported; translate instead");
  switch (s.kase) {
    case 2:
    case 5:
      if (s.b.imag() != 0.0 || !(s.b.real() < 0))
        throw Error(ErrorKind::InvalidSpec, "cases 2 and 5 need real b < 0");
      break;
    case 3: {
      if (!(s.alpha > 1.0 && s.alpha <= 2.0)) throw Error(ErrorKind::InvalidSpec, "case 3 needs alpha in (1, 2]");
      double arg = std::arg(s.b);
      if (s.b == Cplx(0) || arg < (s.alpha - 2.0) * kPi - eps || arg > eps)
        throw Error(ErrorKind::InvalidSpec, "case 3 needs arg b in [(alpha - 2) pi, 0]");
      break;
    }
    case 4: {
      if (!(s.alpha > 0.0 && s.alpha < 1.0)) throw Error(ErrorKind::InvalidSpec, "case 4 needs alpha in (0, 1)");
      double arg = std::arg(s.b);
      if (arg < -eps) arg += 2.0 * kPi;
      if (s.b == Cplx(0) || arg < kPi - eps || arg > (1.0 + s.alpha) * kPi + eps)
        throw Error(ErrorKind::InvalidSpec, "case 4 needs arg b in [pi, (1 + alpha) pi]");
      break;
    }
    default:
      break;
  }
}

Cplx stable_phi(const StableSpec& s, Cplx z) {
  validate(s);
  return phi_all(s, z).v;
}

std::pair<double, double> stable_scaling(const StableSpec& s, double t) {
  validate(s);
  if (!(t > 0)) throw Error(ErrorKind::DomainError, "scaling needs t > 0");
  switch (s.kase) {
    case 3:
    case 4:
      return {std::pow(t, -1.0 / s.alpha), s.a * (1.0 - std::pow(t, 1.0 - 1.0 / s.alpha))};
    case 5:
      // b log(s z) = b log z - b log t, so the shift is -b log t
      return {1.0 / t, -s.b.real() * std::log(t)};
    default:
      return {1.0 / t, 0.0};
  }
}

CauchyTriple stable_cauchy(const StableSpec& s, double q, Cplx z) {
  validate(s);
  if (!(q > 0)) throw Error(ErrorKind::DomainError, "stable power needs q > 0");
  if (z.imag() == 0.0) throw Error(ErrorKind::DomainError, "stable Cauchy transform needs Im z != 0");
  if (z.imag() < 0) {
    CauchyTriple t = stable_cauchy(s, q, std::conj(z));
    return {std::conj(t.g), std::conj(t.dg), std::conj(t.d2g)};
  }
  // F(z) = w solves w + q phi(w) = z.
  auto newton = [&](Cplx zz, Cplx w) {
    for (int it = 0; it < 200; ++it) {
      PhiValue p = phi_all(s, w);
      Cplx f = w + q * p.v - zz;
      if (std::abs(f) < 1e-14 * std::max(1.0, std::abs(zz))) return w;
      Cplx step = f / (1.0 + q * p.d1);
      double lam = 1.0;
      Cplx next = w - step;
      // stay in the upper half-plane and decrease |f|
      for (int k = 0; k < 40; ++k) {
        if (next.imag() > 0) {
          PhiValue pn = phi_all(s, next);
          if (std::abs(next + q * pn.v - zz) < std::abs(f)) break;
        }
        lam *= 0.5;
        next = w - lam * step;
      }
      w = next;
    }
    PhiValue p = phi_all(s, w);
    if (std::abs(w + q * p.v - zz) > 1e-11 * std::max(1.0, std::abs(zz)))
      throw Error(ErrorKind::NoConvergence, "stable inversion did not converge");
    return w;
  };
  const double top = std::max(z.imag(), 10.0 * (1.0 + std::abs(q * s.b)));
  Cplx w = newton(Cplx(z.real(), top), Cplx(z.real(), top));
  for (double y = top; y > z.imag();) {
    y = std::max(z.imag(), 0.5 * y);
    w = newton(Cplx(z.real(), y), w);
  }
  PhiValue p = phi_all(s, w);
  Cplx dF = 1.0 / (1.0 + q * p.d1);
  Cplx d2F = -q * p.d2 * dF * dF * dF;
  return {1.0 / w, -dF / (w * w), (2.0 * dF * dF - w * d2F) / (w * w * w)};
}

MeasureRepr stable_measure(const StableSpec& s, double q) {
  validate(s);
  if (s.kase == 1) return dirac(q * s.a);
  if (s.kase == 2) return CauchyLaw{q * s.a, -q * s.b.real()};
  if (s.kase == 3 && s.alpha == 2.0 && s.b.imag() == 0.0) return Semicircle{0.0, q * s.b.real()};
  return AnalyticMeasure{"stable case " + std::to_string(s.kase), [s, q](Cplx z) { return stable_cauchy(s, q, z); }};
}

namespace {

std::pair<Cplx, Cplx> stable_second_pair(const StableSpec& s, Cplx z) {
  CauchyTriple t = stable_cauchy(s, 1.0, z);
  Cplx g = -(t.g + z * t.dg);
  Cplx dg = -(2.0 * t.dg + z * t.d2g);
  if (s.kase == 5) return {g - s.b * t.dg, dg - s.b * t.d2g};
  const double a = spec_alpha(s);
  return {g / a, dg / a};
}

}  // namespace

Cplx stable_second(const StableSpec& s, Cplx z) { return stable_second_pair(s, z).first; }

SecondCoordRepr stable_b_derivative(const StableSpec& s) {
  validate(s);
  return SecondEvaluator{"stable_b case " + std::to_string(s.kase),
                         [s](Cplx z) { return stable_second_pair(s, z); }};
}

double stable_second_fd_check(const StableSpec& s, Cplx z, double h) {
  if (h < 1e-5 || h > 1e-3) throw Error(ErrorKind::DomainError, "step must lie in [1e-5, 1e-3]");
  Cplx fd = (stable_cauchy(s, 1.0 + h, z).g - stable_cauchy(s, 1.0 - h, z).g) / (2.0 * h);
  return std::abs(stable_second(s, z) - fd);
}

std::vector<double> poisson_b_family(double alpha1, double alpha2, double lambda1, double lambda2, double t, int L) {
  if (!(alpha1 > 0)) throw Error(ErrorKind::InvalidSpec, "alpha1 must be positive");
  const double jump = alpha1 * std::exp(t * alpha2 / alpha1);
  const double rate = lambda1 + t * lambda2;
  // m_n = jump^n sum_k N(n, k) rate^k with Narayana numbers N(n, k) = C(n, k) C(n, k - 1)/n.
  std::vector<double> m;
  for (int n = 1; n <= L; ++n) {
    double sum = 0;
    for (int k = 1; k <= n; ++k) {
      double nar = binom(n, k) * binom(n, k - 1) / n;
      sum += nar * std::pow(rate, k);
    }
    m.push_back(std::pow(jump, n) * sum);
  }
  return m;
}

TypeBLaw type_b_semicircle(double t) {
  if (!(t > 0)) throw Error(ErrorKind::InvalidSpec, "variance must be positive");
  return {Semicircle{0.0, t}, ScaledSecond{make_second(SemicircleBDerivative{t}), t}};
}

ConvolutionOutput heat_flow(const TypeBLaw& p, double t, const SolverConfig& cfg) {
  if (!(t > 0)) throw Error(ErrorKind::DomainError, "heat flow needs t > 0");
  return boxplus_b(p, {Semicircle{0.0, t}, SemicircleBDerivative{t}}, cfg);
}

std::pair<double, double> burgers_residual(const TypeBLaw& p, double t, const std::vector<Cplx>& grid, double h_t,
                                           double h_z, const SolverConfig& cfg) {
  if (!(h_t < t)) throw Error(ErrorKind::DomainError, "time step must be smaller than t");
  ConvolutionOutput now = heat_flow(p, t, cfg);
  ConvolutionOutput up = heat_flow(p, t + h_t, cfg);
  ConvolutionOutput down = heat_flow(p, t - h_t, cfg);
  double r1 = 0, r2 = 0;
  for (Cplx z : grid) {
    DualComplex G = now.G3(DualComplex(z, 1.0));
    Cplx Gt = (up.G3(DualComplex(z, 0.0)).re - down.G3(DualComplex(z, 0.0)).re) / (2.0 * h_t);
    r1 = std::max(r1, std::abs(Gt + G.re * G.inf));
    Cplx g = now.g3(z);
    Cplx gt = (up.g3(z) - down.g3(z)) / (2.0 * h_t);
    Cplx gz = (now.g3(z + h_z) - now.g3(z - h_z)) / (2.0 * h_z);
    r2 = std::max(r2, std::abs(gt + G.inf * g + G.re * gz));
  }
  return {r1, r2};
}

double conservation_identity_check(const TypeBLaw& p, double t, const std::vector<double>& P, Cplx z, double h_t,
                                   const SolverConfig& cfg) {
  if (!(h_t < t)) throw Error(ErrorKind::DomainError, "time step must be smaller than t");
  auto poly = [&](Cplx x) {
    Cplx v = 0;
    for (auto it = P.rbegin(); it != P.rend(); ++it) v = v * x + *it;
    return v;
  };
  auto a_of = [&](const ConvolutionOutput& o, Cplx zz) {
    Cplx G = o.G3(DualComplex(zz, 0.0)).re;
    return o.g3(zz) * poly(G);
  };
  auto b_of = [&](const ConvolutionOutput& o, Cplx zz) {
    Cplx G = o.G3(DualComplex(zz, 0.0)).re;
    return o.g3(zz) * G * poly(G);
  };
  ConvolutionOutput now = heat_flow(p, t, cfg);
  ConvolutionOutput up = heat_flow(p, t + h_t, cfg);
  ConvolutionOutput down = heat_flow(p, t - h_t, cfg);
  Cplx dt = (a_of(up, z) - a_of(down, z)) / (2.0 * h_t);
  Cplx dz = (b_of(now, z + h_t) - b_of(now, z - h_t)) / (2.0 * h_t);
  return std::abs(dt + dz);
}

}  // namespace freeconv
