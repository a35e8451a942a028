#include <doctest.h>

#include <map>
#include <random>
#include <set>

#include "freeconv/nc.hpp"
#include "oracles.hpp"

using namespace freeconv;

namespace {

std::set<oracle::Blocks> as_set(const std::vector<NCPartitionA>& ps) {
  std::set<oracle::Blocks> out;
  for (auto p : ps) {
    for (auto& b : p.blocks) std::sort(b.begin(), b.end());
    std::sort(p.blocks.begin(), p.blocks.end());
    out.insert(p.blocks);
  }
  return out;
}

oracle::BPairing to_positions(const NCPairingB& p) {
  oracle::BPairing out;
  for (auto [a, b] : p.pairs) {
    std::vector<int> blk{circular_position(a, p.n), circular_position(b, p.n)};
    std::sort(blk.begin(), blk.end());
    out.blocks.push_back(blk);
  }
  if (p.zero_block) {
    std::vector<int> blk;
    for (int x : *p.zero_block) blk.push_back(circular_position(x, p.n));
    std::sort(blk.begin(), blk.end());
    out.blocks.push_back(blk);
    out.has_zero = true;
  }
  std::sort(out.blocks.begin(), out.blocks.end());
  return out;
}

DualSequence dual_seq(std::initializer_list<std::pair<double, double>> v) {
  DualSequence out;
  for (auto [a, b] : v) out.emplace_back(a, b);
  return out;
}

// Moments straight from the partition sum over the brute-force NC list.
template <class S>
std::vector<S> moments_by_partition_sum(const std::vector<S>& kappa, int L) {
  std::vector<S> m;
  for (int n = 1; n <= L; ++n) {
    S total{};
    for (const auto& p : oracle::nc_by_filter(n)) {
      S term = detail::one_like<S>();
      for (const auto& b : p) term *= b.size() <= kappa.size() ? kappa[b.size() - 1] : S{};
      total += term;
    }
    m.push_back(total);
  }
  return m;
}

}  // namespace

TEST_CASE("non-crossing partitions match the brute-force filter") {
  for (int n = 1; n <= 8; ++n) {
    auto got = enumerate_nc(n);
    CHECK(got.size() == static_cast<std::size_t>(oracle::catalan(n)));
    auto expected = oracle::nc_by_filter(n);
    CHECK(as_set(got) == std::set<oracle::Blocks>(expected.begin(), expected.end()));
  }
  CHECK(enumerate_nc(1)[0].blocks == std::vector<std::vector<int>>{{1}});
  CHECK(enumerate_nc(12).size() == 208012u);
  CHECK_THROWS_AS(enumerate_nc(13), Error);
  CHECK_THROWS_AS(enumerate_nc(0), Error);
}

TEST_CASE("non-crossing pairings") {
  CHECK(enumerate_nc_pairings(2).size() == 1);
  CHECK(enumerate_nc_pairings(6).size() == 5);
  CHECK(enumerate_nc_pairings(3).empty());
  for (int k = 1; k <= 8; ++k) CHECK(enumerate_nc_pairings(2 * k).size() == static_cast<std::size_t>(catalan(k)));
  CHECK_THROWS_AS(enumerate_nc_pairings(18), Error);
}

TEST_CASE("is_noncrossing") {
  CHECK(is_noncrossing({{1, 3}, {2, 4}}) == false);
  CHECK(is_noncrossing({{1, 4}, {2, 3}}));
  CHECK(is_noncrossing({{1, 2, 5}, {3, 4}}));
}

TEST_CASE("lifting type A pairings to type B") {
  NCPartitionA one{2, {{1, 2}}};
  auto plain = lift_pairing_b(one, std::nullopt);
  CHECK(!plain.zero_block);
  CHECK(plain.pairs == std::vector<std::pair<int, int>>{{1, 2}, {-1, -2}});
  CHECK(plain.is_valid());

  auto zero = lift_pairing_b(one, std::pair{1, 2});
  REQUIRE(zero.zero_block);
  CHECK(*zero.zero_block == std::array<int, 4>{1, 2, -1, -2});
  CHECK(zero.pairs.empty());

  NCPartitionA nested{4, {{1, 4}, {2, 3}}};
  auto lifted = lift_pairing_b(nested, std::pair{1, 4});
  CHECK(*lifted.zero_block == std::array<int, 4>{1, 4, -1, -4});
  CHECK(lifted.pairs == std::vector<std::pair<int, int>>{{2, 3}, {-2, -3}});
  CHECK(lifted.is_valid());

  auto inner = lift_pairing_b(nested, std::pair{2, 3});
  CHECK(inner.is_valid());
  CHECK(inner.pairs == std::vector<std::pair<int, int>>{{1, -4}, {-1, 4}});

  CHECK_THROWS_AS(lift_pairing_b(nested, std::pair{1, 2}), Error);
}

TEST_CASE("lifts are valid, injective, with the right Abs, and cover every type B pairing") {
  for (int n = 1; n <= 5; ++n) {
    std::set<oracle::BPairing> lifted;
    int zero_count = 0;
    for (const auto& base : enumerate_nc_pairings(2 * n)) {
      std::vector<std::optional<std::pair<int, int>>> choices{std::nullopt};
      for (const auto& b : base.blocks) choices.push_back(std::pair{b[0], b[1]});
      for (const auto& K : choices) {
        auto p = lift_pairing_b(base, K);
        CHECK(p.is_valid());
        auto abs = p.abs();
        auto expected = base;
        std::sort(expected.blocks.begin(), expected.blocks.end());
        CHECK(abs.blocks == expected.blocks);
        lifted.insert(to_positions(p));
        if (p.zero_block) ++zero_count;
      }
    }
    auto direct = oracle::b_pairings_direct(2 * n);
    std::set<oracle::BPairing> direct_set(direct.begin(), direct.end());
    CHECK(direct_set.size() == direct.size());
    // Every zero-block pairing is a lift; without a zero block the direct search also
    // finds the pairings that cross the origin, binom(2n, n) of them in total.
    std::set<oracle::BPairing> direct_zero, lifted_zero;
    for (const auto& p : direct_set)
      if (p.has_zero) direct_zero.insert(p);
    for (const auto& p : lifted)
      if (p.has_zero) lifted_zero.insert(p);
    CHECK(lifted_zero == direct_zero);
    CHECK(std::includes(direct_set.begin(), direct_set.end(), lifted.begin(), lifted.end()));
    CHECK(static_cast<std::int64_t>(direct_set.size() - direct_zero.size()) == oracle::binomial(2 * n, n));
    CHECK(zero_count == n * catalan(n));
    auto counts = count_b_pairings(n);
    CHECK(counts.total == (n + 1) * catalan(n));
    CHECK(counts.with_zero_block == n * catalan(n));
  }
  CHECK(count_b_pairings(1).total == 2);
  CHECK(count_b_pairings(1).with_zero_block == 1);
  CHECK(count_b_pairings(2).total == 6);
  CHECK(count_b_pairings(3).with_zero_block == 15);
}

TEST_CASE("moments from cumulants") {
  // semicircle
  auto m = moments_from_cumulants<DualComplex>(dual_seq({{0, 0}, {1, 0}}), 12);
  for (int n = 1; n <= 12; ++n)
    CHECK(m[n - 1] == (n % 2 ? DualComplex() : DualComplex(double(catalan(n / 2)))));
  // type B semicircle
  auto mb = moments_from_cumulants<DualComplex>(dual_seq({{0, 0}, {1, 1}}), 12);
  for (int k = 1; k <= 6; ++k) CHECK(mb[2 * k - 1] == DualComplex(double(catalan(k)), double(k * catalan(k))));
  // point mass
  auto md = moments_from_cumulants<DualComplex>(dual_seq({{1.5, 0}}), 8);
  for (int n = 1; n <= 8; ++n) CHECK(std::abs(md[n - 1].re - std::pow(1.5, n)) < 1e-12);
  CHECK_THROWS_AS(moments_from_cumulants<DualComplex>(dual_seq({{1, 0}}), 13), Error);
}

TEST_CASE("moments from cumulants agree with the brute-force partition sum") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> d(-5, 5);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<DualRational> kappa;
    for (int i = 0; i < 8; ++i) kappa.emplace_back(Rational(d(rng), 3), Rational(d(rng), 7));
    auto fast = moments_from_cumulants<DualRational>(kappa, 8);
    auto slow = moments_by_partition_sum(kappa, 8);
    CHECK(fast == slow);
  }
}

TEST_CASE("cumulant round trip is exact in rational mode") {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> d(-20, 20);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<DualRational> kappa;
    for (int i = 0; i < 10; ++i) kappa.emplace_back(Rational(d(rng), 1 + std::abs(d(rng))), Rational(d(rng), 5));
    auto m = moments_from_cumulants<DualRational>(kappa, 10);
    CHECK(cumulants_from_moments<DualRational>(m, 10) == kappa);
    CHECK(moments_from_cumulants<DualRational>(cumulants_from_moments<DualRational>(m, 10), 10) == m);
  }
  // semicircle moments invert to kappa_2 = 1
  std::vector<DualRational> sc;
  for (int n = 1; n <= 10; ++n) sc.emplace_back(Rational(n % 2 ? 0 : catalan(n / 2)), Rational(n % 2 ? 0 : n / 2 * catalan(n / 2)));
  auto k = cumulants_from_moments<DualRational>(sc, 10);
  for (int n = 1; n <= 10; ++n) CHECK(k[n - 1] == (n == 2 ? DualRational(1, 1) : DualRational()));
  std::vector<DualRational> powers;
  for (int n = 1; n <= 6; ++n) powers.emplace_back(Rational(boost::multiprecision::pow(boost::multiprecision::cpp_int(3), n)));
  auto kp = cumulants_from_moments<DualRational>(powers, 6);
  CHECK(kp[0] == DualRational(3));
  for (int n = 2; n <= 6; ++n) CHECK(kp[n - 1] == DualRational());
}

TEST_CASE("moment-cumulant functional equation") {
  CHECK(check_functional_equation(dual_seq({{0, 0}, {1, 0}}), 6) == 0.0);
  CHECK(check_functional_equation(DualSequence(4), 6) == 0.0);
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 10; ++trial) {
    DualSequence kappa;
    for (int i = 0; i < 8; ++i) kappa.emplace_back(Cplx(u(rng), u(rng)), Cplx(u(rng), u(rng)));
    CHECK(check_functional_equation(kappa, 8) < 1e-12);
  }
  std::vector<DualRational> kr;
  for (int i = 1; i <= 10; ++i) kr.emplace_back(Rational(i, 7), Rational(-i, 3));
  for (const auto& c : functional_equation_mismatch<DualRational>(kr, 10)) CHECK(c == DualRational());
}

TEST_CASE("colored pairing counts") {
  std::vector<int> a{1, 1}, b{1, 2, 2, 1}, c{1, 2, 1, 2}, d{1, 1, 2, 2};
  CHECK(colored_pairing_count(a) == 1);
  CHECK(colored_pairing_count(b) == 1);
  CHECK(colored_pairing_count(c) == 0);
  CHECK(colored_pairing_count(d) == 1);
  CHECK(colored_pairing_count_b(a, 1) == 1);
  CHECK(colored_pairing_count_b(c, 2) == 0);
  CHECK(colored_pairing_count_b(d, 3) == 1);

  // brute force: filter all pairings of {1..k} by color and the crossing definition
  auto brute = [](const std::vector<int>& colors) {
    std::int64_t count = 0;
    for (const auto& p : oracle::nc_by_filter(static_cast<int>(colors.size()))) {
      bool ok = true;
      for (const auto& blk : p)
        if (blk.size() != 2 || colors[blk[0] - 1] != colors[blk[1] - 1]) ok = false;
      if (ok) ++count;
    }
    return count;
  };
  // exhaustive over words of length <= 8 in three colors (first letter fixed to 0 by symmetry)
  for (int len = 2; len <= 8; len += 2) {
    int total = 1;
    for (int i = 1; i < len; ++i) total *= 3;
    for (int code = 0; code < total; ++code) {
      std::vector<int> colors{0};
      int c2 = code;
      for (int i = 1; i < len; ++i) {
        colors.push_back(c2 % 3);
        c2 /= 3;
      }
      auto C = colored_pairing_count(colors);
      if (len <= 6) CHECK(C == brute(colors));
      for (int j = 1; j <= len; ++j) CHECK(colored_pairing_count_b(colors, j) == C);
    }
  }
}

TEST_CASE("infinitesimal free mixed moments") {
  DualSequence a = dual_seq({{0.5, 0.1}, {1.0, -0.2}, {0.3, 0.4}, {2.0, 0.0}});
  DualSequence b = dual_seq({{-1.0, 0.3}, {2.0, 0.5}, {0.0, 0.1}, {5.0, 1.0}});
  std::vector<int> w{0, 1};
  auto v = infinitesimal_free_mixed_moment(a, b, w);
  auto expected = a[0] * b[0];
  CHECK(std::abs(v.re - expected.re) < 1e-14);
  CHECK(std::abs(v.inf - (a[0].inf * b[0].re + a[0].re * b[0].inf)) < 1e-14);

  // tau(t1 t2 t1 t2) for free variables: m2(a) m1(b)^2 + m1(a)^2 m2(b) - m1(a)^2 m1(b)^2,
  // differentiated by the product rule for the infinitesimal part.
  std::vector<int> alt{0, 1, 0, 1};
  auto f = infinitesimal_free_mixed_moment(a, b, alt);
  auto a1 = a[0], a2 = a[1], b1 = b[0], b2 = b[1];
  auto formula = a2 * b1 * b1 + a1 * a1 * b2 - a1 * a1 * b1 * b1;
  CHECK(std::abs(f.re - formula.re) < 1e-13);
  CHECK(std::abs(f.inf - formula.inf) < 1e-13);

  DualSequence zero(4);
  CHECK(abs_max(infinitesimal_free_mixed_moment(a, zero, alt)) == 0.0);

  // two type B semicircles: alternating word vanishes, t1 t1 t2 t2 gives (1+hbar)^2
  DualSequence sc = moments_from_cumulants<DualComplex>(dual_seq({{0, 0}, {1, 1}}), 6);
  CHECK(abs_max(infinitesimal_free_mixed_moment(sc, sc, alt)) < 1e-14);
  std::vector<int> grouped{0, 0, 1, 1};
  auto g = infinitesimal_free_mixed_moment(sc, sc, grouped);
  CHECK(std::abs(g.re - 1.0) < 1e-14);
  CHECK(std::abs(g.inf - 2.0) < 1e-14);

  // zero infinitesimal parts reduce to type A
  DualSequence ar, br;
  for (auto x : a) ar.emplace_back(x.re);
  for (auto x : b) br.emplace_back(x.re);
  std::vector<int> word{0, 1, 1, 0};
  auto ta = infinitesimal_free_mixed_moment(ar, br, word);
  CHECK(ta.inf == Cplx(0));
  // tau(a b b a) = tau(a^2) tau(b^2) for free a, b
  CHECK(std::abs(ta.re - ar[1].re * br[1].re) < 1e-13);
}

TEST_CASE("Bernoulli and Poisson type B moments") {
  CHECK(bernoulli_moments_b({1.0, 0.0}, {1.0, 1.0}, 3) == DualComplex(1.0, 3.0));
  CHECK(bernoulli_moments_b({2.0, 0.0}, {3.0, 0.0}, 2) == DualComplex(18.0, 0.0));
  CHECK(bernoulli_moments_b({1.0, 1.0}, {2.0, 0.0}, 2) == DualComplex(4.0, 4.0));
  auto p = poisson_moments_b({1.0, 0.0}, {1.0, 0.0}, 4);
  CHECK(p[0].re == Cplx(1));
  CHECK(p[1].re == Cplx(2));
  CHECK(p[2].re == Cplx(5));
  CHECK(p[3].re == Cplx(14));
  for (auto v : poisson_moments_b({0.0, 0.0}, {1.0, 0.5}, 6)) CHECK(v == DualComplex());
  auto q = poisson_moments_b({1.0, 0.0}, {1.0, 1.0}, 2);
  CHECK(q[0] == DualComplex(1.0, 1.0));
  // kappa_1^2 = (1 + hbar)^2 contributes 2 hbar
  CHECK(q[1] == DualComplex(2.0, 4.0));
}
