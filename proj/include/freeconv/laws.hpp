#pragma once

// Free stable laws and their type B second coordinates, the type B free Poisson
// family, and residual checks for the type B heat (Burgers) system.

#include <utility>
#include <vector>

#include "freeconv/measures.hpp"
#include "freeconv/typeb.hpp"

namespace freeconv {

/// phi(z) by case: 1: a; 2: a + ib (b < 0); 3, 4: a + b z^{1-alpha}; 5: a + b log z (b < 0).
/// Only a = 0 is supported; the other values are translations.
struct StableSpec {
  int kase = 3;
  double a = 0.0;
  Cplx b{1.0, 0.0};
  double alpha = 2.0;  // used by cases 3 and 4
};

/// Throws InvalidSpec for parameters outside the stable ranges.
void validate(const StableSpec& s);

Cplx stable_phi(const StableSpec& s, Cplx z);

/// (s(t), b(t)) with t phi(z) = (phi(s z) - b)/s. Case 5 gives b(t) = -b log t.
std::pair<double, double> stable_scaling(const StableSpec& s, double t);

/// Cauchy transform of mu^{boxplus q}, whose Voiculescu transform is q phi, with G' and G''.
/// Newton inversion of w + q phi(w) = z, continued down from large Im z.
CauchyTriple stable_cauchy(const StableSpec& s, double q, Cplx z);

/// The stable law itself (q = 1) as a measure.
MeasureRepr stable_measure(const StableSpec& s, double q = 1.0);

/// d/dq of G_{mu^{boxplus q}} at q = 1: -(G + zG')/alpha for cases 1-4 (alpha = 1 in cases 1, 2)
/// and -(G + zG') - bG' for case 5.
Cplx stable_second(const StableSpec& s, Cplx z);

/// stable_second as a second coordinate, with its z-derivative.
SecondCoordRepr stable_b_derivative(const StableSpec& s);

/// |stable_second - central q-difference of G_{mu^{boxplus q}}| at q = 1.
double stable_second_fd_check(const StableSpec& s, Cplx z, double h);

/// Moments m_1..m_L of the free Poisson law with rate lambda1 + t lambda2 and jump
/// alpha1 exp(t alpha2 / alpha1).
std::vector<double> poisson_b_family(double alpha1, double alpha2, double lambda1, double lambda2, double t, int L);

/// Type B free central limit law of variance t: (gamma_t, t d/dt gamma_t).
TypeBLaw type_b_semicircle(double t);

/// (G, g) of (gamma_t, d/dt gamma_t) boxplus_B p, the solution of the type B heat system.
ConvolutionOutput heat_flow(const TypeBLaw& p, double t, const SolverConfig& cfg = {});

/// Max over the grid of the residuals of dG/dt + G dG/dz = 0 and dg/dt + d/dz(G g) = 0,
/// t-derivatives and d/dz g by central differences, dG/dz exact.
std::pair<double, double> burgers_residual(const TypeBLaw& p, double t, const std::vector<Cplx>& grid, double h_t,
                                           double h_z, const SolverConfig& cfg = {});

/// |d/dt[g P(G)] + d/dz[g G P(G)]| at z for the polynomial P with coefficients P[0] + P[1] x + ...
double conservation_identity_check(const TypeBLaw& p, double t, const std::vector<double>& P, Cplx z, double h_t,
                                   const SolverConfig& cfg = {});

}  // namespace freeconv
