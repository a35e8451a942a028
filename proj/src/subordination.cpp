#include "freeconv/subordination.hpp"

#include "freeconv/fixed_point.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace freeconv {

namespace {

DualComplex conj_dual(const DualComplex& a) { return {std::conj(a.re), std::conj(a.inf)}; }

// h = F - id and h' at a point of the upper half-plane.
struct HValue {
  Cplx h;
  Cplx dh;
  Cplx G;
  Cplx dG;
};

HValue h_of(const MeasureRepr& mu, Cplx w) {
  CauchyTriple t = cauchy_triple(mu, w);
  if (t.g == Cplx(0)) throw Error(ErrorKind::DegenerateValue, "Cauchy transform vanishes inside the solver");
  Cplx F = 1.0 / t.g;
  return {F - w, -t.dg / (t.g * t.g) - 1.0, t.g, t.dg};
}

// Fixed point of T(w) = z + h2(z + h1(w)), a self-map of the upper half-plane.
Cplx solve_additive(const MeasureRepr& mu1, const MeasureRepr& mu2, Cplx z, Cplx w0, const SolverConfig& cfg,
                    int& total_iter) {
  auto map = [&](Cplx w, Cplx& Tw, Cplx& dT) {
    HValue a = h_of(mu1, w);
    Cplx w2 = z + a.h;
    if (!(w2.imag() > 0)) throw Error(ErrorKind::DomainError, "subordination iterate left the upper half-plane");
    HValue b = h_of(mu2, w2);
    Tw = z + b.h;
    dT = b.dh * a.dh;
  };
  auto admissible = [&](Cplx w) { return w.imag() > 0 && w.imag() >= z.imag() * (1.0 - 1e-12); };
  auto fp = detail::solve_fixed_point(map, admissible, w0, cfg.tol, cfg.max_iter, "additive subordination");
  total_iter += fp.iterations;
  return fp.w;
}

}  // namespace

SubordinationResult additive_omega(const MeasureRepr& mu1, const MeasureRepr& mu2, const DualComplex& z,
                                   const SolverConfig& cfg) {
  if (z.re.imag() < 0) {
    SubordinationResult r = additive_omega(mu1, mu2, conj_dual(z), cfg);
    r.omega1 = conj_dual(r.omega1);
    r.omega2 = conj_dual(r.omega2);
    r.G3 = conj_dual(r.G3);
    return r;
  }
  Cplx zz(z.re.real(), std::max(z.re.imag(), cfg.eps_im));
  int total = 0;
  Cplx w = Cplx(zz.real(), 2.0 * std::max(1.0, zz.imag()));
  if (zz.imag() >= 0.5) {
    w = solve_additive(mu1, mu2, zz, w, cfg, total);
  } else {
    // Walk down from Im z = 1 so that every solve starts next to its fixed point.
    double y = 1.0;
    while (true) {
      w = solve_additive(mu1, mu2, Cplx(zz.real(), y), w, cfg, total);
      if (y <= zz.imag()) break;
      y = std::max(zz.imag(), y * 0.25);
      w = Cplx(w.real(), std::max(w.imag(), y));
    }
  }

  HValue a = h_of(mu1, w);
  Cplx w2 = zz + a.h;
  HValue b = h_of(mu2, w2);
  Cplx denom = 1.0 - b.dh * a.dh;
  if (denom == Cplx(0)) throw Error(ErrorKind::CriticalPoint, "degenerate subordination derivative");
  Cplx d1 = (1.0 + b.dh) / denom;
  Cplx d2 = 1.0 + a.dh * d1;

  SubordinationResult r;
  r.omega1 = {w, z.inf * d1};
  r.omega2 = {w2, z.inf * d2};
  r.G3 = {a.G, a.dG * r.omega1.inf};
  r.iterations = total;
  r.residual_sub = std::abs(a.G - b.G);
  r.residual_sum = std::abs(w + w2 - zz - 1.0 / a.G);
  const double slack = 1e-9 * std::max(1.0, zz.imag());
  if (w.imag() < zz.imag() - slack || w2.imag() < zz.imag() - slack)
    throw Error(ErrorKind::DomainError, "subordination function below Im z");
  return r;
}

namespace {

// eta = psi/(1 + psi), k(w) = eta(w)/w with k(0) = psi'(0), and k'.
struct KValue {
  Cplx k;
  Cplx dk;
  Cplx psi;
  Cplx dpsi;
};

KValue k_of(const MeasureRepr& mu, Cplx w) {
  auto [psi, dpsi] = psi_with_derivative(mu, w);
  if (psi == Cplx(-1)) throw Error(ErrorKind::DomainError, "psi = -1 inside the multiplicative solver");
  Cplx eta = psi / (1.0 + psi);
  Cplx deta = dpsi / ((1.0 + psi) * (1.0 + psi));
  if (std::abs(w) < 1e-7) {
    // k is analytic at 0; use a symmetric difference of eta'(w) around 0 for k'.
    const double h = 1e-4;
    auto eta_at = [&](Cplx u) {
      auto p = psi_with_derivative(mu, u);
      return p.second / ((1.0 + p.first) * (1.0 + p.first));
    };
    Cplx k0 = deta;
    Cplx dk0 = (eta_at(Cplx(h)) - eta_at(Cplx(-h))) / (4.0 * h);
    return {k0 + dk0 * w, dk0, psi, dpsi};
  }
  return {eta / w, (deta * w - eta) / (w * w), psi, dpsi};
}

}  // namespace

SubordinationResult multiplicative_omega(const MeasureRepr& mu1, const MeasureRepr& mu2, const DualComplex& zd,
                                         MultDomain domain, const SolverConfig& cfg) {
  const Cplx z = zd.re;
  if (domain == MultDomain::Disc && !(std::abs(z) < 1.0 && z != Cplx(0)))
    throw Error(ErrorKind::DomainError, "disc subordination needs 0 < |z| < 1");
  if (domain == MultDomain::SlitPlane && z.imag() == 0.0 && z.real() >= 0.0)
    throw Error(ErrorKind::DomainError, "slit-plane subordination needs z outside [0, inf)");
  for (const MeasureRepr* mu : {&mu1, &mu2}) {
    Cplx m1 = psi_with_derivative(*mu, Cplx(0)).second;
    if (std::abs(m1) < 1e-14) throw Error(ErrorKind::DegenerateMeasure, "measure with vanishing first moment");
  }

  auto map = [&](Cplx w, Cplx& Tw, Cplx& dT) {
    KValue a = k_of(mu1, w);
    KValue b = k_of(mu2, z * a.k);
    Tw = z * b.k;
    dT = z * b.dk * z * a.dk;
  };
  auto admissible = [&](Cplx w) {
    if (domain == MultDomain::Disc) return std::abs(w) <= std::abs(z) * (1.0 + 1e-12);
    return !(w.imag() == 0.0 && w.real() >= 0.0);
  };
  auto fp = detail::solve_fixed_point(map, admissible, z, cfg.tol, cfg.max_iter, "multiplicative subordination");
  const Cplx w = fp.w;
  const int it = fp.iterations;

  KValue a = k_of(mu1, w);
  Cplx w2 = z * a.k;
  KValue b = k_of(mu2, w2);
  Cplx denom = 1.0 - z * z * b.dk * a.dk;
  if (denom == Cplx(0)) throw Error(ErrorKind::CriticalPoint, "degenerate subordination derivative");
  Cplx d1 = (b.k + z * b.dk * a.k) / denom;
  Cplx d2 = a.k + z * a.dk * d1;

  SubordinationResult r;
  r.omega1 = {w, zd.inf * d1};
  r.omega2 = {w2, zd.inf * d2};
  r.G3 = {a.psi, a.dpsi * r.omega1.inf};
  r.iterations = it;
  r.residual_sub = std::abs(a.psi - b.psi);
  r.residual_sum = std::abs(z * a.psi / (1.0 + a.psi) - w * w2);
  return r;
}

double dual_subordination_check(const TypeBLaw& p1, const TypeBLaw& p2,
                                const std::function<DualComplex(const DualComplex&)>& dual_cauchy3,
                                const DualComplex& z, const SolverConfig& cfg) {
  SubordinationResult s = additive_omega(p1.first, p2.first, DualComplex(z.re, 1.0), cfg);
  const Cplx d1 = s.omega1.inf;
  const Cplx d2 = s.omega2.inf;
  DualComplex G3 = dual_cauchy3(DualComplex(z.re, 1.0));
  const Cplx dG3 = G3.inf - dual_cauchy3(DualComplex(z.re, 0.0)).inf;  // w = 1 minus w = 0
  const Cplx g3 = dual_cauchy3(DualComplex(z.re, 0.0)).inf;
  if (dG3 == Cplx(0)) throw Error(ErrorKind::CriticalPoint, "G3' vanishes");
  Cplx g1 = g_with_derivative(p1.second, s.omega1.re).first;
  Cplx g2 = g_with_derivative(p2.second, s.omega2.re).first;
  DualComplex Om1{s.omega1.re, z.inf * d1 + (g3 * (d1 - 1.0) + g2 * d2) / dG3};
  DualComplex Om2{s.omega2.re, z.inf * d2 + (g3 * (d2 - 1.0) + g1 * d1) / dG3};

  DualComplex GZ = dual_cauchy3(z);
  DualComplex FZ = dual_inverse(GZ);
  double worst = abs_max(Om1 + Om2 - z - FZ);
  worst = std::max(worst, abs_max(dual_cauchy(p1, Om1) - GZ));
  worst = std::max(worst, abs_max(dual_cauchy(p2, Om2) - GZ));
  return worst;
}

}  // namespace freeconv
