#include "freeconv/nc.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>
#include <string>

namespace freeconv {

namespace {

using Blocks = std::vector<std::vector<int>>;

std::vector<Blocks> product(const std::vector<Blocks>& left, const std::vector<Blocks>& right) {
  std::vector<Blocks> out;
  out.reserve(left.size() * right.size());
  for (const auto& a : left)
    for (const auto& b : right) {
      Blocks c = a;
      c.insert(c.end(), b.begin(), b.end());
      out.push_back(std::move(c));
    }
  return out;
}

// Non-crossing partitions of an ordered run of elements: the block of the first
// element splits the rest into independent intervals.
std::vector<Blocks> nc_partitions_of(std::span<const int> elems) {
  if (elems.empty()) return {Blocks{}};
  std::vector<Blocks> result;
  const std::size_t size = elems.size();

  auto recurse = [&](auto&& self, std::size_t last, std::vector<int> block,
                     std::vector<Blocks> partial) -> void {
    for (std::size_t j = last + 1; j < size; ++j) {
      auto inner = nc_partitions_of(elems.subspan(last + 1, j - last - 1));
      auto next_block = block;
      next_block.push_back(elems[j]);
      self(self, j, std::move(next_block), product(partial, inner));
    }
    auto tail = nc_partitions_of(elems.subspan(last + 1));
    for (auto& p : product(partial, tail)) {
      p.insert(p.begin(), block);
      result.push_back(std::move(p));
    }
  };
  recurse(recurse, 0, std::vector<int>{elems[0]}, std::vector<Blocks>{Blocks{}});
  return result;
}

std::vector<Blocks> nc_pairings_of(std::span<const int> elems) {
  if (elems.empty()) return {Blocks{}};
  if (elems.size() % 2 != 0) return {};
  std::vector<Blocks> result;
  for (std::size_t j = 1; j < elems.size(); j += 2) {
    auto inner = nc_pairings_of(elems.subspan(1, j - 1));
    auto outer = nc_pairings_of(elems.subspan(j + 1));
    for (auto& p : product(inner, outer)) {
      p.insert(p.begin(), std::vector<int>{elems[0], elems[j]});
      result.push_back(std::move(p));
    }
  }
  return result;
}

bool blocks_cross(const std::vector<int>& a, const std::vector<int>& b) {
  // Merge the two sorted blocks and count label alternations; ABAB means crossing.
  std::vector<std::pair<int, int>> merged;
  for (int x : a) merged.emplace_back(x, 0);
  for (int x : b) merged.emplace_back(x, 1);
  std::sort(merged.begin(), merged.end());
  int runs = 0;
  int prev = -1;
  for (const auto& [pos, label] : merged) {
    if (label != prev) {
      ++runs;
      prev = label;
    }
  }
  return runs >= 4;
}

std::pair<int, int> ordered(int a, int b) { return a < b ? std::pair{a, b} : std::pair{b, a}; }

std::int64_t count_colored(std::span<const int> colors) {
  if (colors.empty()) return 1;
  if (colors.size() % 2 != 0) return 0;
  std::int64_t total = 0;
  for (std::size_t j = 1; j < colors.size(); j += 2) {
    if (colors[j] != colors[0]) continue;
    std::int64_t inner = count_colored(colors.subspan(1, j - 1));
    if (inner == 0) continue;
    total += inner * count_colored(colors.subspan(j + 1));
  }
  return total;
}

}  // namespace

bool is_noncrossing(const std::vector<std::vector<int>>& blocks) {
  std::vector<std::vector<int>> sorted = blocks;
  for (auto& b : sorted) std::sort(b.begin(), b.end());
  for (std::size_t i = 0; i < sorted.size(); ++i)
    for (std::size_t j = i + 1; j < sorted.size(); ++j)
      if (blocks_cross(sorted[i], sorted[j])) return false;
  return true;
}

std::vector<NCPartitionA> enumerate_nc(int n) {
  if (n < 1 || n > 12) throw Error(ErrorKind::SizeLimit, "enumerate_nc supports 1 <= n <= 12");
  std::vector<int> elems(n);
  for (int i = 0; i < n; ++i) elems[i] = i + 1;
  std::vector<NCPartitionA> out;
  for (auto& blocks : nc_partitions_of(elems)) out.push_back({n, std::move(blocks)});
  return out;
}

std::vector<NCPartitionA> enumerate_nc_pairings(int m) {
  if (m > 16 || m < 0) throw Error(ErrorKind::SizeLimit, "enumerate_nc_pairings supports m <= 16");
  if (m % 2 != 0 || m == 0) return {};
  std::vector<int> elems(m);
  for (int i = 0; i < m; ++i) elems[i] = i + 1;
  std::vector<NCPartitionA> out;
  for (auto& blocks : nc_pairings_of(elems)) out.push_back({m, std::move(blocks)});
  return out;
}

int circular_position(int signed_point, int n) {
  return signed_point > 0 ? signed_point - 1 : n - signed_point - 1;
}

NCPartitionA NCPairingB::abs() const {
  std::set<std::vector<int>> seen;
  for (const auto& [a, b] : pairs) {
    std::vector<int> block{std::abs(a), std::abs(b)};
    std::sort(block.begin(), block.end());
    seen.insert(block);
  }
  if (zero_block) {
    std::vector<int> block;
    for (int x : *zero_block)
      if (x > 0) block.push_back(x);
    std::sort(block.begin(), block.end());
    seen.insert(block);
  }
  NCPartitionA out{n, {seen.begin(), seen.end()}};
  std::sort(out.blocks.begin(), out.blocks.end());
  return out;
}

bool NCPairingB::is_valid() const {
  std::vector<int> hits(2 * n, 0);
  auto mark = [&](int p) {
    if (p == 0 || std::abs(p) > n) return false;
    ++hits[circular_position(p, n)];
    return true;
  };
  std::set<std::pair<int, int>> pair_set;
  for (auto [a, b] : pairs) {
    if (a == -b) return false;
    if (!mark(a) || !mark(b)) return false;
    pair_set.insert(ordered(a, b));
  }
  for (auto [a, b] : pairs)
    if (!pair_set.count(ordered(-a, -b))) return false;
  std::vector<std::vector<int>> blocks;
  for (auto [a, b] : pairs) blocks.push_back({circular_position(a, n), circular_position(b, n)});
  if (zero_block) {
    const auto& z = *zero_block;
    std::multiset<int> values(z.begin(), z.end());
    for (int x : z) {
      if (!mark(x)) return false;
      if (values.count(-x) != 1) return false;
    }
    std::set<int> absolute;
    for (int x : z) absolute.insert(std::abs(x));
    if (absolute.size() != 2) return false;
    std::vector<int> positions;
    for (int x : z) positions.push_back(circular_position(x, n));
    blocks.push_back(positions);
  }
  if (std::any_of(hits.begin(), hits.end(), [](int h) { return h != 1; })) return false;
  return is_noncrossing(blocks);
}

NCPairingB lift_pairing_b(const NCPartitionA& base, std::optional<std::pair<int, int>> zero_pair) {
  for (const auto& block : base.blocks)
    if (block.size() != 2) throw Error(ErrorKind::InvalidBlock, "base is not a pairing");
  NCPairingB out;
  out.n = base.n;
  int i = 0;
  int j = 0;
  if (zero_pair) {
    std::tie(i, j) = ordered(zero_pair->first, zero_pair->second);
    bool found = std::any_of(base.blocks.begin(), base.blocks.end(), [&](const auto& b) {
      return ordered(b[0], b[1]) == std::pair{i, j};
    });
    if (!found) throw Error(ErrorKind::InvalidBlock, "zero pair is not a block of the base pairing");
    out.zero_block = std::array<int, 4>{i, j, -i, -j};
  }
  for (const auto& block : base.blocks) {
    auto [p, q] = ordered(block[0], block[1]);
    if (zero_pair && p == i && q == j) continue;
    // Blocks enclosing the zero pair wrap around the circle through the negatives;
    // every other block keeps its sign pattern.
    bool encloses = zero_pair && p < i && j < q;
    if (encloses) {
      out.pairs.emplace_back(p, -q);
      out.pairs.emplace_back(-p, q);
    } else {
      out.pairs.emplace_back(p, q);
      out.pairs.emplace_back(-p, -q);
    }
  }
  return out;
}

std::int64_t catalan(int n) {
  std::int64_t c = 1;
  for (int k = 0; k < n; ++k) c = c * 2 * (2 * k + 1) / (k + 2);
  return c;
}

BPairingCount count_b_pairings(int n) {
  if (n < 1 || n > 8) throw Error(ErrorKind::SizeLimit, "count_b_pairings supports 1 <= n <= 8");
  BPairingCount count;
  for (const auto& base : enumerate_nc_pairings(2 * n)) {
    lift_pairing_b(base, std::nullopt);
    ++count.total;
    for (const auto& block : base.blocks) {
      lift_pairing_b(base, std::pair{block[0], block[1]});
      ++count.total;
      ++count.with_zero_block;
    }
  }
  return count;
}

std::int64_t colored_pairing_count(std::span<const int> colors) {
  if (colors.size() > 14) throw Error(ErrorKind::SizeLimit, "color words are limited to length 14");
  return count_colored(colors);
}

std::int64_t colored_pairing_count_b(std::span<const int> colors, int j) {
  const int k = static_cast<int>(colors.size());
  if (j < 1 || j > k) throw Error(ErrorKind::DomainError, "position j out of range");
  if (k > 14) throw Error(ErrorKind::SizeLimit, "color words are limited to length 14");
  std::int64_t count = 0;
  for (const auto& base : enumerate_nc_pairings(k)) {
    bool preserving = std::all_of(base.blocks.begin(), base.blocks.end(), [&](const auto& b) {
      return colors[b[0] - 1] == colors[b[1] - 1];
    });
    if (!preserving) continue;
    for (const auto& block : base.blocks) {
      auto lifted = lift_pairing_b(base, std::pair{block[0], block[1]});
      const auto& z = *lifted.zero_block;
      if (std::find(z.begin(), z.end(), j) != z.end()) ++count;
    }
  }
  return count;
}

void check_series_order(int L) {
  if (L < 1 || L > detail::kMaxSeriesOrder)
    throw Error(ErrorKind::SizeLimit, "series order must satisfy 1 <= L <= 12, got " + std::to_string(L));
}

double check_functional_equation(const DualSequence& kappa, int L) {
  auto mismatch = functional_equation_mismatch<DualComplex>(kappa, L);
  double worst = 0.0;
  for (const auto& c : mismatch) worst = std::max(worst, abs_max(c));
  return worst;
}

template <class S>
S free_mixed_moment(std::span<const std::vector<S>> family_moments, std::span<const int> word) {
  const int n = static_cast<int>(word.size());
  if (n == 0) return detail::one_like<S>();
  std::vector<std::vector<S>> cumulants;
  for (const auto& moments : family_moments)
    cumulants.push_back(cumulants_from_moments<S>(moments, n));
  for (int letter : word)
    if (letter < 0 || letter >= static_cast<int>(family_moments.size()))
      throw Error(ErrorKind::DomainError, "word letter outside the family range");
  S total = detail::zero_like<S>();
  for (const auto& partition : enumerate_nc(n)) {
    S term = detail::one_like<S>();
    bool vanishes = false;
    for (const auto& block : partition.blocks) {
      int family = word[block[0] - 1];
      for (int pos : block)
        if (word[pos - 1] != family) vanishes = true;
      if (vanishes) break;
      term *= cumulants[family][block.size() - 1];
    }
    if (!vanishes) total += term;
  }
  return total;
}

template DualComplex free_mixed_moment<DualComplex>(std::span<const std::vector<DualComplex>>,
                                                    std::span<const int>);
template DualRational free_mixed_moment<DualRational>(std::span<const std::vector<DualRational>>,
                                                      std::span<const int>);

DualComplex infinitesimal_free_mixed_moment(const DualSequence& law_a, const DualSequence& law_b,
                                            std::span<const int> word) {
  std::vector<DualSequence> families{law_a, law_b};
  return free_mixed_moment<DualComplex>(families, word);
}

DualComplex bernoulli_moments_b(const DualComplex& lambda, const DualComplex& a, int n) {
  if (n < 1) throw Error(ErrorKind::DomainError, "Bernoulli moments are defined for n >= 1");
  return lambda * dual_pow(a, n);
}

DualSequence poisson_moments_b(const DualComplex& lambda, const DualComplex& a, int L) {
  check_series_order(L);
  DualSequence kappa(L);
  for (int n = 1; n <= L; ++n) kappa[n - 1] = lambda * dual_pow(a, n);
  return moments_from_cumulants<DualComplex>(kappa, L);
}

}  // namespace freeconv
