#pragma once

// First-coordinate probability measures and second-coordinate functionals,
// each represented through evaluable analytic transforms.

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "freeconv/dual.hpp"

namespace freeconv {

namespace detail {
template <class T, class V>
struct is_alternative;
template <class T, class... Ts>
struct is_alternative<T, std::variant<Ts...>> : std::bool_constant<(std::is_same_v<T, Ts> || ...)> {};
template <class T, class V>
inline constexpr bool is_alternative_v = is_alternative<T, V>::value;
}  // namespace detail

/// G, G' and G'' at one point.
struct CauchyTriple {
  Cplx g{};
  Cplx dg{};
  Cplx d2g{};
};

struct MeasureRepr;
using MeasurePtr = std::shared_ptr<const MeasureRepr>;

struct Atomic {
  std::vector<double> points;
  std::vector<double> weights;
};
struct Semicircle {
  double mean = 0.0;
  double variance = 1.0;
};
/// Arcsine law on [center - radius, center + radius]; {0, 2} has G = 1/sqrt(z^2 - 4).
struct Arcsine {
  double center = 0.0;
  double radius = 2.0;
};
struct CauchyLaw {
  double location = 0.0;
  double scale = 1.0;
};
/// Free Poisson law with free cumulants rate * jump^n.
struct FreePoisson {
  double rate = 1.0;
  double jump = 1.0;
};
struct UnitCircleAtomic {
  std::vector<double> angles;
  std::vector<double> weights;
};
/// Piecewise linear density through (x[i], density[i]).
struct GridDensity {
  std::vector<double> x;
  std::vector<double> density;
};
struct Mixture {
  std::vector<MeasurePtr> components;
  std::vector<double> weights;
};
/// A law known only through its Cauchy transform (and two derivatives).
struct AnalyticMeasure {
  std::string name;
  std::function<CauchyTriple(Cplx)> cauchy;
  double support_lo = -std::numeric_limits<double>::infinity();
  double support_hi = std::numeric_limits<double>::infinity();
};

struct MeasureRepr {
  using Variant = std::variant<Atomic, Semicircle, Arcsine, CauchyLaw, FreePoisson, UnitCircleAtomic,
                               GridDensity, Mixture, AnalyticMeasure>;
  Variant v;

  template <class T>
    requires detail::is_alternative_v<std::decay_t<T>, Variant>
  MeasureRepr(T value) : v(std::move(value)) {}  // NOLINT: implicit from each variant
};

template <class T>
MeasurePtr make_measure(T value) {
  return std::make_shared<const MeasureRepr>(std::move(value));
}

Atomic dirac(double a);

/// Throws InvalidSpec for malformed parameters (negative weights, bad normalization, ...).
void validate(const MeasureRepr& mu);

/// Closed convex hull of the support on the real line; infinite ends for unbounded laws.
/// Unit-circle measures report [-1, 1].
std::pair<double, double> support_hull(const MeasureRepr& mu);

CauchyTriple cauchy_triple(const MeasureRepr& mu, Cplx z);

/// (G(z), w G'(z)) for Z = (z, w).
DualComplex cauchy_transform(const MeasureRepr& mu, const DualComplex& z);

struct ReciprocalH {
  DualComplex F;
  DualComplex h;
};
ReciprocalH reciprocal_and_h(const MeasureRepr& mu, const DualComplex& z);

/// psi(z) = int zt/(1 - zt) dmu(t) and its derivative.
std::pair<Cplx, Cplx> psi_with_derivative(const MeasureRepr& mu, Cplx z);
Cplx psi_transform(const MeasureRepr& mu, Cplx z);

/// First moment int t dmu(t) for laws where psi is available (psi'(0)).
Cplx first_moment(const MeasureRepr& mu);

/// phi(z) = F^{-1}(z) - z by damped Newton from w = z.
Cplx voiculescu_phi(const MeasureRepr& mu, Cplx z, int max_iter = 200);

/// -Im G(x + i eps)/pi on the grid; with richardson the eps and eps/2 samples are combined.
GridDensity stieltjes_invert(const std::function<Cplx(Cplx)>& G, const std::vector<double>& grid,
                             double eps, bool richardson = false);

/// First or second moment from the behaviour of G along the imaginary axis.
/// Empty when the probe values do not settle (heavy tails).
std::optional<double> moments_from_cauchy(const std::function<Cplx(Cplx)>& G, int order);

// ---------------------------------------------------------------------------
// Second coordinates.

struct SecondCoordRepr;
using SecondPtr = std::shared_ptr<const SecondCoordRepr>;

/// Signed point masses; weights sum to zero.
struct SignedAtomic {
  std::vector<double> points;
  std::vector<double> weights;
};
/// The functional f -> mass * int f' d(base): g = -mass * G_base'.
struct DerivativeOfMeasure {
  MeasurePtr base;
  double mass = 1.0;
};
struct DifferenceOfMeasures {
  MeasurePtr plus;
  MeasurePtr minus;
};
/// Variance derivative of the semicircle family: g = (1/t)(1/sqrt(z^2 - 4t) - G_{gamma_t}).
struct SemicircleBDerivative {
  double variance = 1.0;
};
/// Scale derivative of the Cauchy family: g = -it/(z + it)^2 on the upper half-plane.
struct CauchyBDerivative {
  double scale = 1.0;
};
struct ScaledSecond {
  SecondPtr base;
  double factor = 1.0;
};
/// Opaque g with its derivative.
struct SecondEvaluator {
  std::string name;
  std::function<std::pair<Cplx, Cplx>(Cplx)> eval;
};

struct SecondCoordRepr {
  using Variant = std::variant<SignedAtomic, DerivativeOfMeasure, DifferenceOfMeasures, SemicircleBDerivative,
                               CauchyBDerivative, ScaledSecond, SecondEvaluator>;
  Variant v;

  template <class T>
    requires detail::is_alternative_v<std::decay_t<T>, Variant>
  SecondCoordRepr(T value) : v(std::move(value)) {}  // NOLINT
};

template <class T>
SecondPtr make_second(T value) {
  return std::make_shared<const SecondCoordRepr>(std::move(value));
}

inline SecondCoordRepr zero_second() { return SignedAtomic{}; }

void validate(const SecondCoordRepr& nu);

/// (g(z), g'(z)).
std::pair<Cplx, Cplx> g_with_derivative(const SecondCoordRepr& nu, Cplx z);

/// (g(z), w g'(z)) for Z = (z, w).
DualComplex g_second(const SecondCoordRepr& nu, const DualComplex& z);

struct TypeBLaw {
  MeasureRepr first;
  SecondCoordRepr second;
};

/// (G(z), w G'(z) + g(z)).
DualComplex dual_cauchy(const TypeBLaw& law, const DualComplex& z);

}  // namespace freeconv
