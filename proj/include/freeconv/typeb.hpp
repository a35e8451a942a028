#pragma once

// Type B convolutions: additive and multiplicative, the conditionally free
// h-transform, the rho <-> sigma correspondence, the Nica-Speicher powers and
// the infinitesimal (derivative) checks.

#include <functional>
#include <string>
#include <vector>

#include "freeconv/measures.hpp"
#include "freeconv/subordination.hpp"

namespace freeconv {

struct Provenance {
  std::string operation;
  std::vector<std::string> inputs;
  SolverConfig config;
};

/// Lazy result of a type B convolution.
struct ConvolutionOutput {
  std::function<DualComplex(const DualComplex&)> G3;  // (G3(z), w G3'(z))
  std::function<Cplx(Cplx)> g3;
  std::pair<double, double> hull;  // support hull of the first coordinate
  Provenance provenance;

  /// (G3(z), w G3'(z) + g3(z)).
  DualComplex dual_cauchy(const DualComplex& Z) const;
};

/// Short description used in provenance records.
std::string describe(const MeasureRepr& mu);
std::string describe(const SecondCoordRepr& nu);

ConvolutionOutput boxplus_b(const TypeBLaw& p1, const TypeBLaw& p2, const SolverConfig& cfg = {});

/// Materializes a convolution output as a TypeBLaw so it can be convolved again.
/// G'' and g' of the result are central differences of the exact G' and g.
TypeBLaw as_law(const ConvolutionOutput& out);

// ---------------------------------------------------------------------------
// Multiplicative.

/// Second coordinate carried through psi_nu(z) = nu[zt/(1 - zt)] and its derivative.
struct PsiSecond {
  std::string name;
  std::function<std::pair<Cplx, Cplx>(Cplx)> psi;
};

struct MultTypeBLaw {
  MeasureRepr first;
  PsiSecond second;
};

PsiSecond zero_psi_second();

/// For nu on [0, inf): psi_nu(z) = g_nu(1/z)/z, using nu(1) = 0.
PsiSecond psi_second_from_g(const SecondCoordRepr& nu);

/// d/dt at t of the unit-circle family sum_k w_k delta(exp(i(theta_k + c_k t))).
PsiSecond rotating_family_derivative(const UnitCircleAtomic& at_t, const std::vector<double>& rates);

/// Unit-circle family above evaluated at time t.
UnitCircleAtomic rotating_family(const UnitCircleAtomic& at0, const std::vector<double>& rates, double t);

struct MultConvolutionOutput {
  std::function<Cplx(Cplx)> psi3;      // psi of mu1 boxtimes mu2
  std::function<Cplx(Cplx)> psi_nu3;   // psi of the second coordinate
  Provenance provenance;
};

MultConvolutionOutput boxtimes_b(const MultTypeBLaw& p1, const MultTypeBLaw& p2, MultDomain domain,
                                 const SolverConfig& cfg = {});

/// |psi_nu3(z) - d/dt psi of gamma_1(t) boxtimes gamma_2(t)| for rotating unit-circle families,
/// the t-derivative taken by a central difference with the given step.
double rotating_boxtimes_check(const UnitCircleAtomic& a0, const std::vector<double>& rates_a,
                               const UnitCircleAtomic& b0, const std::vector<double>& rates_b, double t0, Cplx z,
                               double step = 1e-4, const SolverConfig& cfg = {});

// ---------------------------------------------------------------------------
// Conditionally free convolution and the rho <-> sigma correspondence.

/// Returns Z = (z, w) -> (F_rho3(z), w F_rho3'(z)) with h_rho3 = h_rho1(omega1) + h_rho2(omega2).
std::function<DualComplex(const DualComplex&)> cfree_boxplus(const MeasureRepr& mu1, const MeasureRepr& rho1,
                                                              const MeasureRepr& mu2, const MeasureRepr& rho2,
                                                              const SolverConfig& cfg = {});

/// rho with F_rho(z) = z - mass * G_base(z). Atomic bases give atomic rho.
MeasureRepr rho_from_sigma(const MeasureRepr& base, double mass);

/// sigma with -mass * G_base' = h_rho', returned as DerivativeOfMeasure.
/// Throws NonCentered / InfiniteVariance when rho has no centered finite second moment.
DerivativeOfMeasure sigma_from_rho(const MeasureRepr& rho);

/// max over the grid of |h_rho3'(z) - g_sigma3(z)|.
double check_theorem_ans(const MeasureRepr& mu1, const MeasureRepr& rho1, const MeasureRepr& mu2,
                         const MeasureRepr& rho2, const std::vector<Cplx>& grid, const SolverConfig& cfg = {});

/// max over the grid of |G_rho(z) - G_rho'(z)| for rho' = rho_from_sigma(sigma_from_rho(rho)).
double rho_sigma_round_trip(const MeasureRepr& rho, const std::vector<Cplx>& grid);

// ---------------------------------------------------------------------------
// Semigroup and derivative checks.

struct SemigroupValue {
  DualComplex G;      // (G_t(z), w G_t'(z))
  Cplx g;             // g_{sigma_t}(z)
  DualComplex omega;  // (omega_t(z), w omega_t'(z))
};

/// (mu, sigma)^{boxplus_B t} at z, t >= 1, through the subordination omega_t = z/t + (1 - 1/t) F_mu(omega_t).
SemigroupValue ns_semigroup_b(const TypeBLaw& p, double t, const DualComplex& z, const SolverConfig& cfg = {});

/// A differentiable path of laws with its derivative as a second coordinate.
struct LawPath {
  std::function<MeasureRepr(double)> at;
  std::function<SecondCoordRepr(double)> derivative;
};

/// (1 - t) mu + t nu with derivative nu - mu.
LawPath linear_mixture_path(MeasurePtr mu, MeasurePtr nu);
/// Semicircle{mean, v0 + t} with derivative SemicircleBDerivative{v0 + t}.
LawPath semicircle_variance_path(double mean, double v0);
LawPath constant_path(MeasurePtr mu);

/// |g3(z) - central difference in t of G_{gamma1(t) boxplus gamma2(t)}(z)| at t0.
double infinitesimal_boxplus_check(const LawPath& p1, const LawPath& p2, double t0, Cplx z, double step = 1e-4,
                                   const SolverConfig& cfg = {});

/// Compares the first `order` dual moments read off (G3, g3) by contour integration with the
/// moments obtained from summed dual free cumulants. Inputs must be compactly supported.
double moment_consistency_check(const TypeBLaw& p1, const TypeBLaw& p2, int order, const SolverConfig& cfg = {});

/// Dual moments (int t^n dmu, nu(t^n)) of a compactly supported law, n = 1..order.
std::vector<DualComplex> dual_moments(const TypeBLaw& p, int order);

}  // namespace freeconv
