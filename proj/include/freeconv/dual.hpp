#pragma once

// Arithmetic over the commutative algebra C + hbar*C with hbar^2 = 0.
//
// An element z + w*hbar is the 2x2 upper triangular Toeplitz matrix
// [[z, w], [0, z]]. Multiplication is the product rule, so the `inf`
// component carries first derivatives through any computation.

#include <cmath>
#include <complex>
#include <functional>
#include <ostream>

#include "freeconv/errors.hpp"

namespace freeconv {

using Cplx = std::complex<double>;

template <class T>
struct Dual {
  T re{};
  T inf{};

  constexpr Dual() = default;
  constexpr Dual(T value) : re(value), inf() {}  // NOLINT: scalars embed
  constexpr Dual(T value, T infinitesimal) : re(value), inf(infinitesimal) {}

  static constexpr Dual hbar() { return Dual(T(0), T(1)); }

  Dual& operator+=(const Dual& o) {
    re += o.re;
    inf += o.inf;
    return *this;
  }
  Dual& operator-=(const Dual& o) {
    re -= o.re;
    inf -= o.inf;
    return *this;
  }
  Dual& operator*=(const Dual& o) {
    inf = re * o.inf + inf * o.re;
    re *= o.re;
    return *this;
  }
  Dual& operator/=(const Dual& o);

  friend Dual operator+(Dual a, const Dual& b) { return a += b; }
  friend Dual operator-(Dual a, const Dual& b) { return a -= b; }
  friend Dual operator*(Dual a, const Dual& b) { return a *= b; }
  friend Dual operator/(Dual a, const Dual& b) { return a /= b; }
  friend Dual operator-(const Dual& a) { return Dual(-a.re, -a.inf); }

  friend Dual operator*(const Dual& a, const T& s) { return Dual(a.re * s, a.inf * s); }
  friend Dual operator*(const T& s, const Dual& a) { return Dual(a.re * s, a.inf * s); }
  friend Dual operator+(const Dual& a, const T& s) { return Dual(a.re + s, a.inf); }
  friend Dual operator+(const T& s, const Dual& a) { return Dual(a.re + s, a.inf); }
  friend Dual operator-(const Dual& a, const T& s) { return Dual(a.re - s, a.inf); }
  friend Dual operator-(const T& s, const Dual& a) { return Dual(s - a.re, -a.inf); }

  friend bool operator==(const Dual& a, const Dual& b) { return a.re == b.re && a.inf == b.inf; }
  friend bool operator!=(const Dual& a, const Dual& b) { return !(a == b); }

  friend std::ostream& operator<<(std::ostream& os, const Dual& a) {
    return os << "(" << a.re << " + " << a.inf << " hbar)";
  }
};

using DualComplex = Dual<Cplx>;

namespace detail {
template <class T>
bool is_zero(const T& v) {
  return v == T(0);
}
}  // namespace detail

/// Multiplicative inverse (z, w)^{-1} = (1/z, -w/z^2).
template <class T>
Dual<T> dual_inverse(const Dual<T>& a) {
  if (detail::is_zero(a.re)) throw Error(ErrorKind::NonInvertible, "dual with zero real part");
  T r = T(1) / a.re;
  return Dual<T>(r, -a.inf * r * r);
}

template <class T>
Dual<T>& Dual<T>::operator/=(const Dual<T>& o) {
  return *this *= dual_inverse(o);
}

template <class T>
Dual<T> dual_mul(const Dual<T>& a, const Dual<T>& b) {
  return a * b;
}

/// (z, w)^n = (z^n, n z^{n-1} w); negative n requires z != 0.
template <class T>
Dual<T> dual_pow(const Dual<T>& a, int n) {
  if (n < 0) return dual_pow(dual_inverse(a), -n);
  Dual<T> result(T(1));
  Dual<T> base = a;
  while (n > 0) {
    if (n & 1) result *= base;
    base *= base;
    n >>= 1;
  }
  return result;
}

/// Lifts an analytic scalar function: f(z + w hbar) = f(z) + w f'(z) hbar.
inline DualComplex lift_analytic(const std::function<Cplx(Cplx)>& f,
                                 const std::function<Cplx(Cplx)>& fprime, const DualComplex& a) {
  Cplx value = f(a.re);
  if (!std::isfinite(value.real()) || !std::isfinite(value.imag()))
    throw Error(ErrorKind::DomainError, "lifted function undefined at the base point");
  if (a.inf == Cplx(0)) return {value, Cplx(0)};
  return {value, a.inf * fprime(a.re)};
}

/// Second coordinate of the composition inverse of f = (f1, w f1' + g):
/// given z = f1^{-1}(zeta) and the values g(z), f1'(z), returns (z, (v - g)/f1').
inline DualComplex compose_inverse_step(Cplx f1_inverse_value, Cplx g_value, Cplx f1_prime_value,
                                        const DualComplex& target) {
  if (f1_prime_value == Cplx(0))
    throw Error(ErrorKind::CriticalPoint, "f1' vanishes at the preimage");
  return {f1_inverse_value, (target.inf - g_value) / f1_prime_value};
}

// Principal-branch elementary functions on the slit plane C \ (-inf, 0].

inline DualComplex sqrt(const DualComplex& a) {
  Cplx s = std::sqrt(a.re);
  if (s == Cplx(0)) {
    if (a.inf == Cplx(0)) return {};
    throw Error(ErrorKind::DomainError, "sqrt is not differentiable at 0");
  }
  return {s, a.inf / (2.0 * s)};
}

inline DualComplex exp(const DualComplex& a) {
  Cplx e = std::exp(a.re);
  return {e, a.inf * e};
}

inline DualComplex log(const DualComplex& a) {
  if (a.re == Cplx(0)) throw Error(ErrorKind::DomainError, "log at 0");
  return {std::log(a.re), a.inf / a.re};
}

/// a^p for complex exponent p on the principal branch.
inline DualComplex pow(const DualComplex& a, Cplx p) {
  if (a.re == Cplx(0)) throw Error(ErrorKind::DomainError, "complex power at 0");
  Cplx v = std::pow(a.re, p);
  return {v, a.inf * p * v / a.re};
}

inline double abs_max(const DualComplex& a) { return std::max(std::abs(a.re), std::abs(a.inf)); }

inline DualComplex conj(const DualComplex& a) { return {std::conj(a.re), std::conj(a.inf)}; }

}  // namespace freeconv
