#include <doctest.h>

#include <cmath>
#include <complex>

#include "freeconv/errors.hpp"
#include "freeconv/typeb.hpp"

using namespace freeconv;
using C = std::complex<double>;

namespace {
const C I(0, 1);

std::vector<C> grid() {
  std::vector<C> out;
  for (double x : {-2.5, -1.0, 0.0, 0.4, 1.7})
    for (double y : {0.2, 1.0, 3.0}) out.emplace_back(x, y);
  return out;
}

// (1/t)(1/sqrt(z^2 - 4t) - G_t), written out independently of the library.
C semicircle_b_closed(double t, C z) {
  C r = std::sqrt(z - 2 * std::sqrt(t)) * std::sqrt(z + 2 * std::sqrt(t));
  return (1.0 / r - (z - r) / (2 * t)) / t;
}
}  // namespace

TEST_CASE("boxplus_b: translations and zero second coordinates") {
  TypeBLaw p{Semicircle{0, 1}, SignedAtomic{{-1, 1}, {0.3, -0.3}}};
  auto out = boxplus_b(p, {dirac(0.8), zero_second()});
  for (C z : grid()) CHECK(std::abs(out.g3(z) - g_with_derivative(p.second, z - 0.8).first) < 1e-10);

  auto zero = boxplus_b({Semicircle{0, 1}, zero_second()}, {Atomic{{0, 2}, {0.5, 0.5}}, zero_second()});
  for (C z : grid()) CHECK(std::abs(zero.g3(z)) == 0.0);
  CHECK(zero.provenance.operation == "boxplus_b");
}

TEST_CASE("boxplus_b: type B semicircles") {
  for (auto [s, t] : {std::pair{1.0, 1.0}, std::pair{0.5, 2.0}}) {
    // scale-path derivatives t d/dt gamma_t add up to (s + t) d/du gamma_u at u = s + t
    TypeBLaw a{Semicircle{0, s}, ScaledSecond{make_second(SemicircleBDerivative{s}), s}};
    TypeBLaw b{Semicircle{0, t}, ScaledSecond{make_second(SemicircleBDerivative{t}), t}};
    auto out = boxplus_b(a, b);
    for (C z : grid()) CHECK(std::abs(out.g3(z) / (s + t) - semicircle_b_closed(s + t, z)) < 1e-8);
  }
}

TEST_CASE("boxplus_b: commutativity, translation covariance, associativity") {
  TypeBLaw p{Atomic{{-1, 0.5, 2}, {0.2, 0.5, 0.3}}, SignedAtomic{{-1, 2}, {0.4, -0.4}}};
  TypeBLaw q{Semicircle{0.3, 0.7}, DerivativeOfMeasure{make_measure(Atomic{{0, 1}, {0.5, 0.5}}), 0.6}};
  auto pq = boxplus_b(p, q), qp = boxplus_b(q, p);
  for (C z : grid()) {
    CHECK(std::abs(pq.g3(z) - qp.g3(z)) < 1e-10);
    CHECK(std::abs(pq.G3(DualComplex(z, 0)).re - qp.G3(DualComplex(z, 0)).re) < 1e-10);
  }
  // translate both inputs
  const double b = 0.4, c = -1.1;
  TypeBLaw pt{Atomic{{-1 + b, 0.5 + b, 2 + b}, {0.2, 0.5, 0.3}}, SignedAtomic{{-1 + b, 2 + b}, {0.4, -0.4}}};
  TypeBLaw qt{Semicircle{0.3 + c, 0.7},
              DerivativeOfMeasure{make_measure(Atomic{{c, 1 + c}, {0.5, 0.5}}), 0.6}};
  auto tr = boxplus_b(pt, qt);
  for (C z : grid()) CHECK(std::abs(tr.g3(z + b + c) - pq.g3(z)) < 1e-10);

  TypeBLaw r{Atomic{{0, 1}, {0.6, 0.4}}, SignedAtomic{{0, 1}, {-0.2, 0.2}}};
  auto left = boxplus_b(as_law(boxplus_b(p, r)), r);
  auto right = boxplus_b(p, as_law(boxplus_b(r, r)));
  for (C z : {C(0.3, 1.0), C(-1, 2), C(2, 0.5)}) {
    CHECK(std::abs(left.G3(DualComplex(z, 0)).re - right.G3(DualComplex(z, 0)).re) < 1e-8);
    CHECK(std::abs(left.g3(z) - right.g3(z)) < 1e-8);
  }
}

TEST_CASE("dual subordination residual") {
  TypeBLaw sc{Semicircle{0, 1}, SemicircleBDerivative{1}};
  auto out = boxplus_b(sc, sc);
  auto f = [&](const DualComplex& Z) { return out.dual_cauchy(Z); };
  CHECK(dual_subordination_check(sc, sc, f, DualComplex(2.0 * I, 1)) < 1e-9);
  TypeBLaw p{Atomic{{-1, 0.5, 2}, {0.2, 0.5, 0.3}}, SignedAtomic{{-1, 2}, {0.4, -0.4}}};
  TypeBLaw zero{dirac(0), zero_second()};
  auto o2 = boxplus_b(p, zero);
  auto f2 = [&](const DualComplex& Z) { return o2.dual_cauchy(Z); };
  CHECK(dual_subordination_check(p, zero, f2, DualComplex(C(0.3, 0.8), 1)) < 1e-12);
  auto o3 = boxplus_b(p, sc);
  auto f3 = [&](const DualComplex& Z) { return o3.dual_cauchy(Z); };
  for (C z : grid()) CHECK(dual_subordination_check(p, sc, f3, DualComplex(z, C(0.5, -1))) < 1e-8);
}

TEST_CASE("moment consistency with summed dual cumulants") {
  TypeBLaw p{Atomic{{-1, 0.5, 2}, {0.2, 0.5, 0.3}}, SignedAtomic{{-1, 2}, {0.4, -0.4}}};
  TypeBLaw q{Atomic{{0, 1}, {0.6, 0.4}}, SignedAtomic{{0, 1, 3}, {-0.2, 0.5, -0.3}}};
  CHECK(moment_consistency_check(p, q, 6) < 1e-8);
  auto m = dual_moments(p, 2);
  CHECK(std::abs(m[0].re - (-0.2 + 0.25 + 0.6)) < 1e-12);
  CHECK(std::abs(m[0].inf - (-0.4 - 0.8)) < 1e-12);
}

TEST_CASE("conditionally free convolution") {
  Semicircle mu{0, 1};
  Atomic bern{{-1, 1}, {0.5, 0.5}};
  auto F0 = cfree_boxplus(mu, dirac(0), bern, dirac(0));
  for (C z : grid()) CHECK(std::abs(F0(DualComplex(z, 0)).re - z) < 1e-12);
  auto Fsame = cfree_boxplus(mu, mu, bern, bern);
  for (C z : grid()) {
    C F3 = 1.0 / additive_omega(mu, bern, DualComplex(z, 0)).G3.re;
    CHECK(std::abs(Fsame(DualComplex(z, 0)).re - F3) < 1e-10);
  }
  auto Fmix = cfree_boxplus(mu, bern, mu, bern);
  for (C z : grid()) CHECK(Fmix(DualComplex(z, 0)).re.imag() >= z.imag() - 1e-12);
}

TEST_CASE("rho and sigma correspondence") {
  auto rho = rho_from_sigma(dirac(0), 1.0);
  const auto& at = std::get<Atomic>(rho.v);
  REQUIRE(at.points.size() == 2);
  CHECK(std::abs(at.points[0] + 1) < 1e-12);
  CHECK(std::abs(at.points[1] - 1) < 1e-12);
  CHECK(std::abs(at.weights[0] - 0.5) < 1e-12);
  auto rho4 = std::get<Atomic>(rho_from_sigma(dirac(0), 4.0).v);
  CHECK(std::abs(rho4.points[1] - 2) < 1e-12);
  CHECK(std::get<Atomic>(rho_from_sigma(dirac(0), 0.0).v).points == std::vector<double>{0.0});

  auto s = sigma_from_rho(Atomic{{-1, 1}, {0.5, 0.5}});
  CHECK(std::abs(s.mass - 1) < 1e-12);
  CHECK(std::abs(std::get<Atomic>(s.base->v).points[0]) < 1e-12);
  auto sc = sigma_from_rho(Semicircle{0, 1});
  CHECK(sc.mass == 1.0);
  CHECK(sigma_from_rho(dirac(0)).mass == 0.0);
  CHECK_THROWS_AS(sigma_from_rho(Atomic{{0, 1}, {0.5, 0.5}}), Error);
  CHECK_THROWS_AS(sigma_from_rho(CauchyLaw{0, 1}), Error);

  // general path through an analytic sigma: arcsine is centered with variance r^2/2
  auto sa = sigma_from_rho(Arcsine{0, 2});
  CHECK(std::abs(sa.mass - 2) < 1e-6);
  for (const MeasureRepr& r : {MeasureRepr(Atomic{{-2, 0, 3}, {0.3, 0.5, 0.2}}), MeasureRepr(Arcsine{0, 2}),
                               MeasureRepr(Semicircle{0, 2}), MeasureRepr(GridDensity{{-1, 0, 1}, {0, 1, 0}})}) {
    try {
      CHECK(rho_sigma_round_trip(r, grid()) < 1e-6);
    } catch (const Error& e) {
      FAIL(e.what());
    }
  }
}

TEST_CASE("theorem on h' of the c-free convolution") {
  Atomic bern{{-1, 1}, {0.5, 0.5}};
  CHECK(check_theorem_ans(bern, dirac(0), bern, dirac(0), grid()) < 1e-12);
  CHECK(check_theorem_ans(bern, bern, bern, bern, grid()) < 1e-8);
  CHECK(check_theorem_ans(Semicircle{0, 1}, Semicircle{0, 1}, Semicircle{0, 1}, Semicircle{0, 1}, grid()) < 1e-8);
  CHECK(check_theorem_ans(Semicircle{0.5, 1}, Arcsine{0, 1}, Atomic{{0, 2}, {0.3, 0.7}},
                          Atomic{{-1, 0.5}, {1.0 / 3, 2.0 / 3}}, grid()) < 1e-8);
}

TEST_CASE("Nica-Speicher semigroup") {
  TypeBLaw p{Atomic{{-1, 0.5, 2}, {0.2, 0.5, 0.3}}, SignedAtomic{{-1, 2}, {0.4, -0.4}}};
  auto one = ns_semigroup_b(p, 1.0, DualComplex(C(0.3, 0.5), 1));
  CHECK(std::abs(one.omega.re - C(0.3, 0.5)) < 1e-15);
  CHECK(std::abs(one.g - g_with_derivative(p.second, C(0.3, 0.5)).first) < 1e-15);
  auto two = boxplus_b(p, p);
  for (C z : grid()) {
    auto v = ns_semigroup_b(p, 2.0, DualComplex(z, 1));
    CHECK(std::abs(v.g - two.g3(z)) < 1e-8);
    CHECK(std::abs(v.G.re - two.G3(DualComplex(z, 0)).re) < 1e-10);
  }
  // semicircle: (gamma_1, lambda)^{t} has G = G_{gamma_t} and, for lambda = d/du gamma_u at u = 1,
  // g_t = t d/du gamma_u at u = t.
  TypeBLaw sc{Semicircle{0, 1}, SemicircleBDerivative{1}};
  for (C z : grid()) {
    auto v = ns_semigroup_b(sc, 2.0, DualComplex(z, 0));
    CHECK(std::abs(v.G.re - cauchy_triple(Semicircle{0, 2}, z).g) < 1e-10);
    CHECK(std::abs(v.g - 2.0 * semicircle_b_closed(2, z)) < 1e-8);
  }
  CHECK_THROWS_AS(ns_semigroup_b(sc, 0.5, DualComplex(I, 0)), Error);
}

TEST_CASE("infinitesimal derivative of convolution paths") {
  auto bern = make_measure(Atomic{{-1, 1}, {0.5, 0.5}});
  auto d0 = make_measure(dirac(0));
  CHECK(infinitesimal_boxplus_check(constant_path(bern), constant_path(d0), 0.3, 2.0 * I) < 1e-10);
  CHECK(infinitesimal_boxplus_check(linear_mixture_path(bern, d0), linear_mixture_path(bern, d0), 0.3, 2.0 * I) <
        1e-6);
  CHECK(infinitesimal_boxplus_check(semicircle_variance_path(0, 1), semicircle_variance_path(0.5, 1), 0.2,
                                    C(0.5, 0.7)) < 1e-6);
}

TEST_CASE("boxtimes_b") {
  UnitCircleAtomic a{{0.2, 1.3}, {0.5, 0.5}};
  auto rates = std::vector<double>{1.0, -0.5};
  MultTypeBLaw p{a, rotating_family_derivative(a, rates)};
  auto id = boxtimes_b(p, {UnitCircleAtomic{{0}, {1}}, zero_psi_second()}, MultDomain::Disc);
  for (C z : {C(0.3, 0), C(0.1, 0.4)}) {
    CHECK(std::abs(id.psi3(z) - psi_transform(a, z)) < 1e-12);
    CHECK(std::abs(id.psi_nu3(z) - p.second.psi(z).first) < 1e-12);
  }
  auto zero = boxtimes_b({a, zero_psi_second()}, {a, zero_psi_second()}, MultDomain::Disc);
  CHECK(std::abs(zero.psi_nu3(C(0.3, 0.1))) == 0.0);

  // psi derivative of the rotating family against a difference quotient
  const double h = 1e-6;
  C z(0.4, 0.2);
  C fd = (psi_transform(rotating_family(a, rates, h), z) - psi_transform(rotating_family(a, rates, -h), z)) / (2 * h);
  CHECK(std::abs(p.second.psi(z).first - fd) < 1e-8);

  UnitCircleAtomic b{{-0.4, 0.9, 2.0}, {0.3, 0.3, 0.4}};
  for (C zz : {C(0.3, 0), C(-0.2, 0.5), C(0.6, -0.1)})
    CHECK(rotating_boxtimes_check(a, rates, b, {0.3, 0.8, -1.0}, 0.4, zz) < 1e-6);

  // positive half-line, second coordinate from a signed atomic functional
  SignedAtomic nu{{1, 2}, {0.5, -0.5}};
  auto pos = boxtimes_b({Atomic{{1, 2}, {0.5, 0.5}}, psi_second_from_g(nu)},
                        {Atomic{{1}, {1}}, zero_psi_second()}, MultDomain::SlitPlane);
  C w(-1, 0.5);
  C direct = 0.5 * w * 1.0 / (1.0 - w) - 0.5 * w * 2.0 / (1.0 - 2.0 * w);
  CHECK(std::abs(pos.psi_nu3(w) - direct) < 1e-12);
}
