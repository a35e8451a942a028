#pragma once

// Non-crossing partitions of types A and B, the moment/cumulant transforms
// over the dual algebra, and colored pairing counts.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "freeconv/dual.hpp"

namespace freeconv {

using Rational = boost::multiprecision::cpp_rational;
using DualRational = Dual<Rational>;

/// Terms indexed from 1: element [0] holds the first moment / cumulant.
using DualSequence = std::vector<DualComplex>;

struct NCPartitionA {
  int n = 0;
  std::vector<std::vector<int>> blocks;  // each sorted, elements in 1..n
};

/// True when no a<b<c<d has a,c in one block and b,d in another.
/// Elements are compared as given, so callers encode circular orders as positions.
bool is_noncrossing(const std::vector<std::vector<int>>& blocks);

std::vector<NCPartitionA> enumerate_nc(int n);

/// Non-crossing pairings of {1..m}; empty for odd m.
std::vector<NCPartitionA> enumerate_nc_pairings(int m);

/// Inversion-symmetric pairing of {+-1..+-n} with an optional zero block {i,j,-i,-j}.
struct NCPairingB {
  int n = 0;
  std::vector<std::pair<int, int>> pairs;
  std::optional<std::array<int, 4>> zero_block;

  /// Absolute value: the type A pairing obtained by forgetting signs.
  NCPartitionA abs() const;
  /// Checks symmetry, the zero block shape and non-crossing on the circle 1..n,-1..-n.
  bool is_valid() const;
};

/// Position of a signed point on the circle 1 < ... < n < -1 < ... < -n.
int circular_position(int signed_point, int n);

/// The unique type B pairing with Abs = base and zero block {+-K} (none when K is empty).
NCPairingB lift_pairing_b(const NCPartitionA& base, std::optional<std::pair<int, int>> zero_pair);

struct BPairingCount {
  std::int64_t total = 0;
  std::int64_t with_zero_block = 0;
};

/// Type B pairings of size 2n by enumeration through lift_pairing_b.
BPairingCount count_b_pairings(int n);

std::int64_t catalan(int n);

/// Number of non-crossing pairings of {1..k} that only pair equal colors.
std::int64_t colored_pairing_count(std::span<const int> colors);

/// Type B pairings whose absolute value is color preserving and whose zero block contains j.
std::int64_t colored_pairing_count_b(std::span<const int> colors, int j);

// ---------------------------------------------------------------------------
// Moment-cumulant machinery, generic over the coefficient algebra.

namespace detail {
constexpr int kMaxSeriesOrder = 12;

template <class S>
S zero_like() {
  return S();
}
template <class S>
S one_like() {
  return S(typename std::remove_cvref_t<decltype(S().re)>(1));
}

/// power_sums[s][r] = sum over s-tuples (i_1..i_s) >= 0 with sum r of m_{i_1}...m_{i_s}, m_0 = 1.
template <class S>
std::vector<std::vector<S>> composition_products(std::span<const S> moments, int L) {
  std::vector<S> m(L + 1, zero_like<S>());
  m[0] = one_like<S>();
  for (int i = 1; i <= L && i <= static_cast<int>(moments.size()); ++i) m[i] = moments[i - 1];
  std::vector<std::vector<S>> table(L + 1, std::vector<S>(L + 1, zero_like<S>()));
  table[0][0] = one_like<S>();
  for (int s = 1; s <= L; ++s)
    for (int r = 0; r <= L; ++r) {
      S acc = zero_like<S>();
      for (int i = 0; i <= r; ++i) acc += m[i] * table[s - 1][r - i];
      table[s][r] = acc;
    }
  return table;
}
}  // namespace detail

void check_series_order(int L);

/// m_n = sum over pi in NC(n) of prod over blocks kappa_|F|, computed through the
/// first-block decomposition m_n = sum_s kappa_s * sum_{i_1+..+i_s = n-s} m_{i_1}..m_{i_s}.
template <class S>
std::vector<S> moments_from_cumulants(std::span<const S> kappa, int L) {
  check_series_order(L);
  std::vector<S> m(L, detail::zero_like<S>());
  auto cum = [&](int s) { return s <= static_cast<int>(kappa.size()) ? kappa[s - 1] : detail::zero_like<S>(); };
  for (int n = 1; n <= L; ++n) {
    auto table = detail::composition_products<S>(std::span<const S>(m.data(), n - 1), n);
    S acc = detail::zero_like<S>();
    for (int s = 1; s <= n; ++s) acc += cum(s) * table[s][n - s];
    m[n - 1] = acc;
  }
  return m;
}

/// Inverts moments_from_cumulants by triangular recursion on the order.
template <class S>
std::vector<S> cumulants_from_moments(std::span<const S> moments, int L) {
  check_series_order(L);
  std::vector<S> kappa(L, detail::zero_like<S>());
  auto table = detail::composition_products<S>(moments, L);
  for (int n = 1; n <= L; ++n) {
    S lower = detail::zero_like<S>();
    for (int s = 1; s < n; ++s) lower += kappa[s - 1] * table[s][n - s];
    S mn = n <= static_cast<int>(moments.size()) ? moments[n - 1] : detail::zero_like<S>();
    kappa[n - 1] = mn - lower;
  }
  return kappa;
}

/// Coefficientwise mismatch M - R(Z(1+M)) through degree L, truncated power series
/// with coefficients in the dual algebra. Entry [k] is the coefficient of Z^k.
template <class S>
std::vector<S> functional_equation_mismatch(std::span<const S> kappa, int L) {
  auto m = moments_from_cumulants(kappa, L);
  using Poly = std::vector<S>;
  auto mul = [L](const Poly& a, const Poly& b) {
    Poly c(L + 1, detail::zero_like<S>());
    for (int i = 0; i <= L; ++i)
      for (int j = 0; i + j <= L; ++j) c[i + j] += a[i] * b[j];
    return c;
  };
  // inner(Z) = Z (1 + M(Z))
  Poly inner(L + 1, detail::zero_like<S>());
  inner[1] = detail::one_like<S>();
  for (int k = 2; k <= L; ++k) inner[k] = m[k - 2];
  Poly composed(L + 1, detail::zero_like<S>());
  Poly power(L + 1, detail::zero_like<S>());
  power[0] = detail::one_like<S>();
  for (int n = 1; n <= L; ++n) {
    power = mul(power, inner);
    if (n > static_cast<int>(kappa.size())) continue;
    for (int k = 0; k <= L; ++k) composed[k] += kappa[n - 1] * power[k];
  }
  Poly mismatch(L + 1, detail::zero_like<S>());
  for (int k = 1; k <= L; ++k) mismatch[k] = m[k - 1] - composed[k];
  return mismatch;
}

/// Largest coefficient mismatch of M = R(Z(1+M)) through degree L.
double check_functional_equation(const DualSequence& kappa, int L);

/// Mixed moment of a word in free generators (one generator per family) whose
/// single-variable dual moment sequences are given; mixed cumulants vanish.
template <class S>
S free_mixed_moment(std::span<const std::vector<S>> family_moments, std::span<const int> word);

DualComplex infinitesimal_free_mixed_moment(const DualSequence& law_a, const DualSequence& law_b,
                                            std::span<const int> word);

/// Lambda * A^n in dual arithmetic.
DualComplex bernoulli_moments_b(const DualComplex& lambda, const DualComplex& a, int n);

/// Moments of the type B free Poisson law with cumulants kappa_n = Lambda A^n.
DualSequence poisson_moments_b(const DualComplex& lambda, const DualComplex& a, int L);

}  // namespace freeconv
