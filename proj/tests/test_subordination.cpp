#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "freeconv/errors.hpp"
#include "freeconv/subordination.hpp"

using namespace freeconv;
using C = std::complex<double>;

namespace {
const C I(0, 1);
bool near(C a, C b, double tol) { return std::abs(a - b) <= tol; }

std::vector<C> probe_grid() {
  std::vector<C> out;
  for (double x : {-3.0, -1.5, -0.2, 0.0, 0.9, 2.0, 3.0})
    for (double y : {0.1, 0.5, 1.0, 4.0, 10.0}) out.emplace_back(x, y);
  return out;
}
}  // namespace

TEST_CASE("additive subordination: translation case") {
  Semicircle mu{0.2, 1.5};
  for (C z : probe_grid()) {
    auto r = additive_omega(mu, dirac(0.7), DualComplex(z, 0));
    CHECK(near(r.omega1.re, z - 0.7, 1e-10));
    C F = 1.0 / cauchy_triple(mu, z - 0.7).g;
    CHECK(near(r.omega2.re, 0.7 + F, 1e-10));
  }
}

TEST_CASE("additive subordination: closed forms") {
  Atomic bern{{-1, 1}, {0.5, 0.5}};
  auto r = additive_omega(bern, bern, DualComplex(3.0 * I, 0));
  CHECK(near(r.G3.re, C(0, -1 / std::sqrt(13.0)), 1e-12));
  for (C z : probe_grid()) {
    auto s = additive_omega(Semicircle{0, 1}, Semicircle{0, 1}, DualComplex(z, 0));
    CHECK(near(s.G3.re, cauchy_triple(Semicircle{0, 2}, z).g, 1e-10));
    auto b = additive_omega(bern, bern, DualComplex(z, 0));
    CHECK(near(b.G3.re, cauchy_triple(Arcsine{0, 2}, z).g, 1e-10));
  }
}

TEST_CASE("additive subordination: identities, symmetry and derivatives") {
  std::vector<std::pair<MeasureRepr, MeasureRepr>> pairs{
      {Atomic{{-1, 0, 2}, {0.3, 0.3, 0.4}}, Atomic{{0, 1}, {0.5, 0.5}}},
      {Semicircle{1, 0.5}, Atomic{{-1, 1}, {0.2, 0.8}}},
      {CauchyLaw{0, 1}, Semicircle{0, 1}},
      {FreePoisson{1.5, 1}, Arcsine{0, 1}},
  };
  const double h = 1e-5;
  for (auto& [m1, m2] : pairs)
    for (C z : probe_grid()) {
      auto r = additive_omega(m1, m2, DualComplex(z, 1));
      CHECK(r.residual_sub < 1e-10);
      CHECK(r.residual_sum < 1e-10);
      CHECK(r.omega1.re.imag() >= z.imag() - 1e-9);
      CHECK(r.omega2.re.imag() >= z.imag() - 1e-9);
      auto c = additive_omega(m1, m2, DualComplex(std::conj(z), 1));
      CHECK(near(c.omega1.re, std::conj(r.omega1.re), 1e-12));
      C fd = (additive_omega(m1, m2, DualComplex(z + h, 0)).omega1.re -
              additive_omega(m1, m2, DualComplex(z - h, 0)).omega1.re) /
             (2 * h);
      CHECK(std::abs(r.omega1.inf - fd) < 1e-6 * std::max(1.0, std::abs(fd)));
    }
  // normalization at infinity
  auto r = additive_omega(Semicircle{0, 1}, Atomic{{0, 1}, {0.5, 0.5}}, DualComplex(C(0, 1e6), 0));
  CHECK(std::abs(r.omega1.re / C(0, 1e6) - 1.0) < 1e-5);
}

TEST_CASE("multiplicative subordination") {
  UnitCircleAtomic a{{0, 1.0}, {0.5, 0.5}};
  auto id = multiplicative_omega(a, UnitCircleAtomic{{0}, {1}}, DualComplex(0.3, 0), MultDomain::Disc);
  CHECK(near(id.omega1.re, 0.3, 1e-12));
  CHECK(near(id.G3.re, psi_transform(a, 0.3), 1e-12));

  for (C z : {C(0.3, 0), C(0.2, 0.5), C(-0.6, 0.1), C(0, -0.7)}) {
    auto r = multiplicative_omega(a, a, DualComplex(z, 0), MultDomain::Disc);
    CHECK(r.residual_sum < 1e-10);
    CHECK(r.residual_sub < 1e-10);
    CHECK(std::abs(r.omega1.re) <= std::abs(z) + 1e-12);
    CHECK(std::abs(r.omega2.re) <= std::abs(z) + 1e-12);
  }
  Atomic pos{{1, 2}, {0.5, 0.5}};
  const double h = 1e-5;
  for (C z : {C(-1, 0), C(-3, 2), C(0.5, 1), C(2, -0.3)}) {
    auto r = multiplicative_omega(pos, FreePoisson{2, 1}, DualComplex(z, 1), MultDomain::SlitPlane);
    CHECK(r.residual_sum < 1e-10);
    CHECK(r.residual_sub < 1e-10);
    C fd = (multiplicative_omega(pos, FreePoisson{2, 1}, DualComplex(z + h, 0), MultDomain::SlitPlane).omega1.re -
            multiplicative_omega(pos, FreePoisson{2, 1}, DualComplex(z - h, 0), MultDomain::SlitPlane).omega1.re) /
           (2 * h);
    CHECK(std::abs(r.omega1.inf - fd) < 1e-6);
  }
  auto same = multiplicative_omega(pos, pos, DualComplex(-1.0, 0), MultDomain::SlitPlane);
  CHECK(same.residual_sum < 1e-10);
  CHECK_THROWS_AS(multiplicative_omega(UnitCircleAtomic{{0, M_PI}, {0.5, 0.5}}, a, DualComplex(0.3, 0),
                                       MultDomain::Disc),
                  Error);
  CHECK_THROWS_AS(multiplicative_omega(a, a, DualComplex(1.5, 0), MultDomain::Disc), Error);
}
