#pragma once

// Subordination functions for free additive (upper half-plane) and free
// multiplicative (disc, slit plane) convolution.

#include <functional>

#include "freeconv/measures.hpp"

namespace freeconv {

struct SolverConfig {
  double tol = 1e-13;
  int max_iter = 500;
  double eps_im = 1e-7;  // additive solver clamps Im z from below
};

/// For Z = (z, w) the inf parts are w * omega_j'(z) and w * G3'(z).
/// Multiplicative runs store psi3 = psi_1(omega_1) in G3.
struct SubordinationResult {
  DualComplex omega1;
  DualComplex omega2;
  DualComplex G3;
  int iterations = 0;
  double residual_sub = 0.0;  // |G1(w1) - G2(w2)|, or |psi1(w1) - psi2(w2)|
  double residual_sum = 0.0;  // |w1 + w2 - z - F3|, or |z psi3/(1 + psi3) - w1 w2|
};

SubordinationResult additive_omega(const MeasureRepr& mu1, const MeasureRepr& mu2, const DualComplex& z,
                                   const SolverConfig& cfg = {});

enum class MultDomain { Disc, SlitPlane };

SubordinationResult multiplicative_omega(const MeasureRepr& mu1, const MeasureRepr& mu2, const DualComplex& z,
                                         MultDomain domain, const SolverConfig& cfg = {});

/// Rebuilds Omega_j = (omega_j, w omega_j' + o_j) from the second coordinates and checks
/// Omega_1 + Omega_2 = Z + F_B(Z) and G_{B,j}(Omega_j) = G_{B,3}(Z).
/// dual_cauchy3 returns (G3(z), w G3'(z) + g3(z)). Returns the largest residual.
double dual_subordination_check(const TypeBLaw& p1, const TypeBLaw& p2,
                                const std::function<DualComplex(const DualComplex&)>& dual_cauchy3,
                                const DualComplex& z, const SolverConfig& cfg = {});

}  // namespace freeconv
